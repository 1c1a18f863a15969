// Acceptance suite: one pass/fail line per criterion, each with its pinned
// tolerances and wall-clock budget. Exit code 0 iff every criterion passes.

#include "nlgrad/analysis.hpp"
#include "nlgrad/operators.hpp"
#include "nlgrad/profile.hpp"
#include "nlgrad/solver.hpp"
#include "nlgrad/special.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace nlgrad;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

struct Criterion {
    int number;
    const char* label;
    double budget_seconds;
};

void run_criterion(const Criterion& c, const std::function<bool(std::string&)>& body) {
    std::string detail;
    const auto t0 = Clock::now();
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    if (elapsed > c.budget_seconds) {
        ok = false;
        detail += (detail.empty() ? "" : "; ") + std::string("over budget");
    }
    std::printf("[%s] %2d %-22s %6.2fs/%-4.0fs %s\n", ok ? "PASS" : "FAIL", c.number, c.label, elapsed,
                c.budget_seconds, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

Kernel kernel_a(double s, int dim = 1) {
    KernelSpec spec;
    spec.family = KernelFamily::TruncatedFractional;
    spec.s = s;
    spec.dim = dim;
    return Kernel::make(spec);
}

Kernel kernel_b(double s, int kappa) {
    KernelSpec spec;
    spec.family = KernelFamily::LogCorrected;
    spec.s = s;
    spec.kappa = kappa;
    return Kernel::make(spec);
}

Kernel kernel_c_03() {
    KernelSpec spec;
    spec.family = KernelFamily::VariableExponent;
    for (int i = 0; i <= 32; ++i) {
        const double r = i / 32.0;
        spec.s_fn_r.push_back(r);
        spec.s_fn_value.push_back(0.3 + 0.2 * (3.0 * r * r - 2.0 * r * r * r));
    }
    return Kernel::make(spec);
}

Kernel kernel_riesz(double s) {
    KernelSpec spec;
    spec.family = KernelFamily::Riesz;
    spec.s = s;
    return Kernel::make(spec);
}

Energy quadratic_energy(const Grid& g) {
    Energy e;
    e.p = 2.0;
    e.kind = IntegrandKind::PowerNorm;
    e.omega = SupportBox{{2.5, 0.0}, {5.5, g.box_length}};
    e.g = Field::from_function(g, [&](double x, double) {
        return std::sin(2.0 * pi * x / g.box_length) + 0.5 * std::cos(4.0 * pi * x / g.box_length);
    });
    e.record_growth();
    return e;
}

char buf[256];

} // namespace

int main() {
    std::printf("nlgrad acceptance suite\n");

    // 1. Localization rate: quadratic convergence of the smooth-bump sup error.
    run_criterion({1, "localization-rate", 10}, [](std::string& d) {
        const Kernel k = kernel_a(0.5);
        const Grid g{1, 1024, 8.0};
        const std::vector<double> deltas = {0.4, 0.2, 0.1, 0.05};
        const RateReport rep = localization_rate(k, TestFunctionKind::SmoothBump, 0.5, deltas, g,
                                                 std::numeric_limits<double>::infinity());
        const double lip = lipschitz_constant(spectral_derivative(make_smooth_bump(g), 2));
        bool bound_ok = true;
        double worst = 0.0;
        for (std::size_t i = 0; i < deltas.size(); ++i) {
            const double ratio = rep.error[i] / (deltas[i] * deltas[i] * lip);
            worst = std::max(worst, ratio);
            bound_ok = bound_ok && ratio <= 1.05;
        }
        std::snprintf(buf, sizeof buf, "slope=%.3f in [1.8,2.2], max err/(d^2 Lip)=%.3f <= 1.05", rep.slope,
                      worst);
        d = buf;
        return rep.slope >= 1.8 && rep.slope <= 2.2 && bound_ok;
    });

    // 2. Hölder rate: C^{1,1/2} bump converges like delta^{1/2}.
    run_criterion({2, "holder-rate", 10}, [](std::string& d) {
        const Kernel k = kernel_a(0.5);
        const Grid g{1, 1024, 8.0};
        const std::vector<double> deltas = {0.2, 0.12, 0.07, 0.04};
        const RateReport rep = localization_rate(k, TestFunctionKind::HolderBump, 0.5, deltas, g,
                                                 std::numeric_limits<double>::infinity());
        std::snprintf(buf, sizeof buf, "slope=%.3f in [0.35,0.65]", rep.slope);
        d = buf;
        return rep.slope >= 0.35 && rep.slope <= 0.65;
    });

    // 3. Limit exponent: extrapolated s_inf for the kernel families.
    run_criterion({3, "limit-exponent", 5}, [](std::string& d) {
        const std::vector<double> deltas = {1e2, 1e3, 1e4, 1e5, 1e6};
        const double sa = limit_exponent(kernel_a(0.5), deltas).extrapolated;
        const double sc = limit_exponent(kernel_c_03(), deltas).extrapolated;
        const double sbp = limit_exponent(kernel_b(0.5, +1), deltas).extrapolated;
        const double sbm = limit_exponent(kernel_b(0.5, -1), deltas).extrapolated;
        std::snprintf(buf, sizeof buf, "a:%.5f in [0.499,0.501] c:%.4f in [0.29,0.31] b+:%.3f b-:%.3f in [0.47,0.53]",
                      sa, sc, sbp, sbm);
        d = buf;
        return sa >= 0.499 && sa <= 0.501 && sc >= 0.29 && sc <= 0.31 && sbp >= 0.47 && sbp <= 0.53 &&
               sbm >= 0.47 && sbm <= 0.53;
    });

    // 4. Fractionalization: L2 errors against the Riesz gradient decrease; the
    //    Riesz control kernel sits at the discretization floor.
    run_criterion({4, "fractionalization", 30}, [](std::string& d) {
        const Kernel k = kernel_a(0.5);
        const Grid g{1, 1024, 8.0};
        const Field u = make_smooth_bump(g);
        const std::vector<double> deltas = {2, 5, 10, 50, 100};
        const RateReport rep = fractionalization_error(k, u, deltas);
        bool decreasing = true;
        for (std::size_t i = 0; i + 1 < rep.error.size(); ++i)
            if (rep.error[i + 1] > 10.0 * rep.floor && rep.error[i + 1] >= rep.error[i]) decreasing = false;
        const RateReport ctrl = fractionalization_error(kernel_riesz(0.5), u, deltas, 0.5);
        double ctrl_max = 0.0;
        for (double e : ctrl.error) ctrl_max = std::max(ctrl_max, e);
        std::snprintf(buf, sizeof buf, "errors %.2e..%.2e decreasing, riesz control max=%.1e at floor",
                      rep.error.front(), rep.error.back(), ctrl_max);
        d = buf;
        return decreasing && ctrl_max <= 10.0 * std::max(ctrl.floor, 1e-13);
    });

    // 5. Operator oracle equivalence: spectral vs direct singular quadrature.
    run_criterion({5, "oracle-equivalence", 60}, [](std::string& d) {
        const Kernel k = kernel_a(0.5);
        const Grid g{1, 32, 4.0};
        const ScaledKernel sk(k, 0.25, ScalingRegime::Vanishing);
        OperatorHandle op(SymbolTable::scaled(sk, g));
        const Field u = make_smooth_bump(g);
        const VectorField spectral = op.apply_gradient(u);
        QuadParams quad;
        const double rel =
            lp_error(spectral, direct_gradient_oracle(u, sk, quad), 2.0) / lp_norm(spectral, 2.0);
        quad.refine_level = 1;
        const double rel2 =
            lp_error(spectral, direct_gradient_oracle(u, sk, quad), 2.0) / lp_norm(spectral, 2.0);
        std::snprintf(buf, sizeof buf, "rel=%.2e < 5e-3, refined=%.2e (ratio %.2f >= 1.8)", rel, rel2,
                      rel / rel2);
        d = buf;
        return rel < 5e-3 && rel / rel2 >= 1.8;
    });

    // 6. Adjointness and translation identities.
    run_criterion({6, "adjoint-translation", 5}, [](std::string& d) {
        const Kernel k = kernel_a(0.5);
        const Grid g{1, 64, 4.0};
        OperatorHandle op(SymbolTable::scaled(ScaledKernel(k, 0.5, ScalingRegime::Vanishing), g));
        std::mt19937_64 rng(5);
        auto rnd = [&] {
            Field f(g);
            for (auto& v : f.values()) v = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
            return f;
        };
        double dual_resid = 0.0;
        for (int trial = 0; trial < 4; ++trial) {
            const Field u = rnd();
            VectorField psi(g);
            psi.comp(0) = rnd().values();
            const double lhs = inner(op.apply_gradient(u), psi);
            const double rhs = -inner(u, op.apply_divergence(psi));
            dual_resid = std::max(dual_resid, std::abs(lhs - rhs) / (lp_norm(u, 2.0) * lp_norm(psi, 2.0)));
        }
        const Field u = rnd();
        const double comp_err = lp_error(op.apply_gradient(u), classical_gradient(op.apply_Q(u)), 2.0) /
                                lp_norm(op.apply_gradient(u), 2.0);
        const double inv_err = lp_error(op.apply_P(op.apply_Q(u)), u, 2.0) / lp_norm(u, 2.0);
        std::snprintf(buf, sizeof buf, "duality=%.1e < 1e-12, D=grad.Q err=%.1e, PQ=id err=%.1e < 1e-10",
                      dual_resid, comp_err, inv_err);
        d = buf;
        return dual_resid < 1e-12 && comp_err < 1e-10 && inv_err < 1e-10;
    });

    // 7. Uniform Poincare shadow over both horizon regimes.
    run_criterion({7, "poincare-uniformity", 60}, [](std::string& d) {
        const Kernel k = kernel_a(0.5);
        const Grid g{1, 256, 8.0};
        const SupportBox omega{{2.5, 0.0}, {5.5, 8.0}};
        const std::vector<double> dv = {0.05, 0.1, 0.2, 0.5, 1.0};
        const std::vector<double> dd = {2, 5, 10, 50};
        const PoincareReport rv = poincare_scan(k, ScalingRegime::Vanishing, dv, g, omega, 32, 42, 2.0);
        const PoincareReport rd = poincare_scan(k, ScalingRegime::Diverging, dd, g, omega, 32, 42, 2.0);
        auto spread = [](const PoincareReport& r) {
            double lo = 1e300, hi = 0.0;
            for (double x : r.worst_ratio) {
                lo = std::min(lo, x);
                hi = std::max(hi, x);
            }
            return hi / lo;
        };
        const double fv = spread(rv), fd = spread(rd);
        std::snprintf(buf, sizeof buf,
                      "vanishing spread=%.2f sup=%.3f<=0.35; diverging spread=%.2f sup=%.3f<=0.12", fv,
                      rv.sup_ratio, fd, rd.sup_ratio);
        d = buf;
        return fv < 3.0 && fd < 3.0 && rv.sup_ratio <= 0.35 && rd.sup_ratio <= 0.12;
    });

    // 8. Multiplier uniformity with frozen per-delta-bar bounds.
    run_criterion({8, "multiplier-uniformity", 10}, [](std::string& d) {
        const Kernel k = kernel_a(0.5);
        const std::vector<std::pair<double, double>> pairs = {{0.1, 1.0}, {0.25, 1.0}, {0.5, 1.0},
                                                              {1.0, 0.1}, {1.0, 0.25}, {1.0, 0.5},
                                                              {1.0, 0.0}, {0.25, 0.25}};
        const MultiplierReport rep = multiplier_uniformity(k, pairs, 1e3);
        const double frozen[] = {3.5, 2.2, 1.6, 1.0 + 1e-9, 1.0 + 1e-9, 1.0 + 1e-9, 1.0 + 1e-9, 1.0};
        bool ok = rep.all_finite;
        double worst = 0.0;
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            ok = ok && rep.pairs[i].max_ratio <= frozen[i];
            worst = std::max(worst, rep.pairs[i].max_ratio);
        }
        ok = ok && rep.pairs[7].max_ratio == 1.0; // (d,d) exactly one
        std::snprintf(buf, sizeof buf, "all finite, max ratio %.3f, (d,d)=%.1f exactly", worst,
                      rep.pairs[7].max_ratio);
        d = buf;
        return ok;
    });

    // 9. Gamma-convergence sweep, vanishing horizon.
    run_criterion({9, "gamma-sweep-vanishing", 120}, [](std::string& d) {
        const Kernel k = kernel_a(0.5);
        const Grid g{1, 1024, 8.0};
        const Energy e = quadratic_energy(g);
        const std::vector<double> deltas = {0.4, 0.2, 0.1, 0.05};
        const GammaReport rep = gamma_sweep_vanishing(k, e, deltas, g, {});
        bool dist_ok = true, energy_ok = true, conv_ok = true;
        for (std::size_t i = 0; i + 1 < rep.distance.size(); ++i) {
            dist_ok = dist_ok && rep.distance[i + 1] < rep.distance[i];
            energy_ok = energy_ok && std::abs(rep.energy[i + 1] - rep.ref_energy) <
                                         std::abs(rep.energy[i] - rep.ref_energy);
        }
        for (bool c : rep.converged) conv_ok = conv_ok && c;
        const double final_frac = rep.distance.back() / rep.distance.front();
        std::snprintf(buf, sizeof buf, "distances %.3e -> %.3e (final %.1f%% < 25%%), energy gaps shrink",
                      rep.distance.front(), rep.distance.back(), 100.0 * final_frac);
        d = buf;
        return dist_ok && energy_ok && conv_ok && final_frac < 0.25;
    });

    // 10. Gamma-convergence sweep, diverging horizon, with the Riesz control.
    run_criterion({10, "gamma-sweep-diverging", 120}, [](std::string& d) {
        const Kernel k = kernel_a(0.5);
        const Grid g{1, 1024, 8.0};
        const Energy e = quadratic_energy(g);
        const std::vector<double> deltas = {2, 5, 10, 50};
        const GammaReport rep = gamma_sweep_diverging(k, e, deltas, g, {});
        bool dist_ok = true, conv_ok = true;
        for (std::size_t i = 0; i + 1 < rep.distance.size(); ++i)
            dist_ok = dist_ok && rep.distance[i + 1] < rep.distance[i];
        for (bool c : rep.converged) conv_ok = conv_ok && c;
        const double final_frac = rep.distance.back() / rep.distance.front();

        const GammaReport ctrl = gamma_sweep_diverging(kernel_riesz(0.5), e, deltas, g, {});
        double ctrl_max = 0.0;
        for (double dist : ctrl.distance) ctrl_max = std::max(ctrl_max, dist);
        std::snprintf(buf, sizeof buf,
                      "distances %.3e -> %.3e (final %.2f%% < 25%%), riesz control max=%.1e",
                      rep.distance.front(), rep.distance.back(), 100.0 * final_frac, ctrl_max);
        d = buf;
        return dist_ok && conv_ok && final_frac < 0.25 && ctrl_max <= 1e-10;
    });

    // 11. Solver correctness: gradient consistency and exact trivial minima.
    run_criterion({11, "solver-correctness", 30}, [](std::string& d) {
        const Kernel k = kernel_a(0.5);
        const Grid g{1, 128, 8.0};
        const SupportBox omega{{2.5, 0.0}, {5.5, 8.0}};
        double worst_fd = 0.0;
        for (const auto regime : {ScalingRegime::Vanishing, ScalingRegime::Diverging}) {
            OperatorHandle op(SymbolTable::scaled(
                ScaledKernel(k, regime == ScalingRegime::Vanishing ? 0.25 : 5.0, regime), g));
            struct Case {
                IntegrandKind kind;
                double p;
            };
            for (const Case c : {Case{IntegrandKind::PowerNorm, 2.0}, Case{IntegrandKind::PowerNorm, 3.0},
                                 Case{IntegrandKind::AnisotropicQuadratic, 2.0},
                                 Case{IntegrandKind::WeightedPower, 2.0},
                                 Case{IntegrandKind::WeightedPower, 3.0}}) {
                Energy e;
                e.p = c.p;
                e.kind = c.kind;
                e.omega = omega;
                e.g = Field::from_function(g, [&](double x, double) { return std::sin(2.0 * pi * x / 8.0); });
                if (c.kind == IntegrandKind::AnisotropicQuadratic)
                    e.m11 = Field::from_function(
                        g, [&](double x, double) { return 1.0 + 0.3 * std::sin(2.0 * pi * x / 8.0); });
                if (c.kind == IntegrandKind::WeightedPower)
                    e.weight_a = Field::from_function(
                        g, [&](double x, double) { return 0.1 * (1.0 + std::cos(2.0 * pi * x / 8.0)); });
                e.record_growth();
                const Field u = make_masked_noise(g, omega, 16, 3);
                const Field grad = energy_gradient(e, u, op);
                std::mt19937_64 rng(11);
                for (int t = 0; t < 5; ++t) {
                    const Field dir = make_masked_noise(g, omega, 16, 500 + t);
                    const double eps = 1e-6;
                    Field up = u, um = u;
                    for (std::int64_t i = 0; i < u.size(); ++i) {
                        up[i] += eps * dir[i];
                        um[i] -= eps * dir[i];
                    }
                    const double fd = (energy_value(e, up, op) - energy_value(e, um, op)) / (2.0 * eps);
                    const double an = inner(grad, dir);
                    worst_fd = std::max(worst_fd, std::abs(fd - an) / std::max(1.0, std::abs(an)));
                }
            }
        }
        // g = 0: minimizer is exactly zero
        OperatorHandle op(SymbolTable::scaled(ScaledKernel(k, 0.25, ScalingRegime::Vanishing), g));
        Energy e0;
        e0.p = 2.0;
        e0.kind = IntegrandKind::PowerNorm;
        e0.omega = omega;
        e0.g = Field(g);
        e0.record_growth();
        const MinimizeResult r = minimize(e0, op, Field(g));
        std::snprintf(buf, sizeof buf, "worst fd-gradient err=%.2e < 1e-5, g=0 minimum exact (|u|=%g)",
                      worst_fd, lp_norm(r.u_star, 2.0));
        d = buf;
        return worst_fd < 1e-5 && r.converged && lp_norm(r.u_star, 2.0) == 0.0 && r.energy_value == 0.0;
    });

    std::printf("%d/11 criteria passed\n", 11 - failures);
    return failures == 0 ? 0 : 1;
}
