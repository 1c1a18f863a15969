#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nlgrad/analysis.hpp"
#include "nlgrad/solver.hpp"
#include "nlgrad/special.hpp"

#include <cmath>
#include <random>

using namespace nlgrad;

namespace {

Kernel kernel_a(double s, int dim = 1) {
    KernelSpec spec;
    spec.family = KernelFamily::TruncatedFractional;
    spec.s = s;
    spec.dim = dim;
    return Kernel::make(spec);
}

Field smooth_g(const Grid& g, double amp = 1.0) {
    return Field::from_function(g, [&, amp](double x, double) {
        return amp * (std::sin(2.0 * pi * x / g.box_length) + 0.5 * std::cos(4.0 * pi * x / g.box_length));
    });
}

Field random_inner(const Grid& g, const SupportBox& omega, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Field f(g);
    for (std::int64_t i = 0; i < f.size(); ++i)
        f[i] = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
    f.apply_mask(omega);
    return f;
}

Energy make_energy(const Grid& g, IntegrandKind kind, double p, double g_amp = 1.0) {
    Energy e;
    e.p = p;
    e.kind = kind;
    e.omega = SupportBox{{2.5, 0.0}, {5.5, g.box_length}};
    e.g = smooth_g(g, g_amp);
    if (kind == IntegrandKind::AnisotropicQuadratic)
        e.m11 = Field::from_function(
            g, [&](double x, double) { return 1.0 + 0.3 * std::sin(2.0 * pi * x / g.box_length); });
    if (kind == IntegrandKind::WeightedPower) {
        e.weight_a = Field::from_function(
            g, [&](double x, double) { return 0.1 * (1.0 + std::cos(2.0 * pi * x / g.box_length)); });
        e.weight_c = 1.0;
    }
    e.record_growth();
    return e;
}

OperatorHandle vanishing_op(const Kernel& k, const Grid& g, double delta) {
    return OperatorHandle(SymbolTable::scaled(ScaledKernel(k, delta, ScalingRegime::Vanishing), g));
}

} // namespace

TEST_CASE("energy values of trivial configurations") {
    const Grid g{1, 256, 8.0};
    const Kernel k = kernel_a(0.5);
    OperatorHandle op = vanishing_op(k, g, 0.25);

    // g = 0, u = 0, PowerNorm: zero energy
    Energy e = make_energy(g, IntegrandKind::PowerNorm, 2.0, 0.0);
    e.g = Field(g);
    CHECK(energy_value(e, Field(g), op) == 0.0);

    // WeightedPower at zero argument: the energy is exactly int a dx
    Energy ew = make_energy(g, IntegrandKind::WeightedPower, 2.0, 0.0);
    ew.g = Field(g);
    double a_int = 0.0;
    for (double v : ew.weight_a.values()) a_int += v;
    a_int *= g.spacing();
    CHECK(energy_value(ew, Field(g), op) == doctest::Approx(a_int).epsilon(1e-14));

    // p = 2 PowerNorm on a single mode: 1/2 (symbol amplitude)^2 L/2 (Parseval)
    Energy e2 = make_energy(g, IntegrandKind::PowerNorm, 2.0, 0.0);
    e2.g = Field::from_function(g, [&](double x, double) { return std::sin(2.0 * pi * x / g.box_length); });
    e2.omega = SupportBox{{0.0, 0.0}, {8.0, 8.0}};
    const double xi = 1.0 / g.box_length;
    const ScaledKernel sk(k, 0.25, ScalingRegime::Vanishing);
    const double amp = 2.0 * pi * xi * sk.qhat(xi);
    CHECK(energy_value(e2, Field(g), op) ==
          doctest::Approx(0.5 * amp * amp * g.box_length / 2.0).epsilon(1e-12));
}

TEST_CASE("energy gradient matches central finite differences") {
    const Grid g{1, 128, 8.0};
    const Kernel k = kernel_a(0.5);
    struct Case {
        IntegrandKind kind;
        double p;
    };
    const Case cases[] = {{IntegrandKind::PowerNorm, 2.0},
                          {IntegrandKind::PowerNorm, 3.0},
                          {IntegrandKind::AnisotropicQuadratic, 2.0},
                          {IntegrandKind::WeightedPower, 2.0},
                          {IntegrandKind::WeightedPower, 3.0}};
    for (const auto regime : {ScalingRegime::Vanishing, ScalingRegime::Diverging}) {
        OperatorHandle op(SymbolTable::scaled(
            ScaledKernel(k, regime == ScalingRegime::Vanishing ? 0.25 : 5.0, regime), g));
        for (const Case& c : cases) {
            Energy e = make_energy(g, c.kind, c.p);
            const Field u = random_inner(g, e.omega, 7);
            const Field grad = energy_gradient(e, u, op);
            // gradient vanishes outside Omega exactly
            for (std::int64_t i = 0; i < grad.size(); ++i)
                if (!e.omega.contains(grad.x_of(i))) CHECK(grad[i] == 0.0);
            for (std::uint64_t s = 1; s <= 5; ++s) {
                Field dir = random_inner(g, e.omega, 100 + s);
                const double scale = lp_norm(u, 2.0);
                const double eps = 1e-6 * std::max(1.0, scale);
                Field up = u, um = u;
                for (std::int64_t i = 0; i < u.size(); ++i) {
                    up[i] += eps * dir[i];
                    um[i] -= eps * dir[i];
                }
                const double fd = (energy_value(e, up, op) - energy_value(e, um, op)) / (2.0 * eps);
                const double an = inner(grad, dir);
                CHECK(std::abs(fd - an) <= 1e-5 * std::max(1.0, std::abs(an)));
            }
        }
    }
}

TEST_CASE("regularized p < 2 gradient is still consistent") {
    const Grid g{1, 128, 8.0};
    const Kernel k = kernel_a(0.5);
    OperatorHandle op = vanishing_op(k, g, 0.25);
    Energy e = make_energy(g, IntegrandKind::PowerNorm, 1.5);
    const Field u = random_inner(g, e.omega, 17);
    const Field grad = energy_gradient(e, u, op);
    Field dir = random_inner(g, e.omega, 18);
    const double eps = 1e-6;
    Field up = u, um = u;
    for (std::int64_t i = 0; i < u.size(); ++i) {
        up[i] += eps * dir[i];
        um[i] -= eps * dir[i];
    }
    const double fd = (energy_value(e, up, op) - energy_value(e, um, op)) / (2.0 * eps);
    CHECK(std::abs(fd - inner(grad, dir)) <= 1e-4 * std::max(1.0, std::abs(fd)));
}

TEST_CASE("minimize: trivial, strictly convex, and p = 3 instances") {
    const Grid g{1, 256, 8.0};
    const Kernel k = kernel_a(0.5);
    OperatorHandle op = vanishing_op(k, g, 0.25);

    // g = 0: zero is the minimizer of every shipped convex integrand
    for (const auto kind : {IntegrandKind::PowerNorm, IntegrandKind::AnisotropicQuadratic}) {
        Energy e = make_energy(g, kind, 2.0, 0.0);
        e.g = Field(g);
        const MinimizeResult r = minimize(e, op, Field(g));
        CHECK(r.converged);
        CHECK(r.iterations == 0);
        CHECK(r.energy_value == 0.0);
        CHECK(lp_norm(r.u_star, 2.0) == 0.0);
    }

    // strictly convex p = 2 with nonzero datum: two inits agree
    Energy e = make_energy(g, IntegrandKind::PowerNorm, 2.0);
    MinimizeOptions opts;
    opts.max_iter = 2000;
    opts.grad_tol = 1e-6;
    const MinimizeResult a = minimize(e, op, Field(g), opts);
    const Field init_b = make_masked_noise(g, e.omega, g.n_per_axis / 8, 12);
    const double f_init_b = energy_value(e, init_b, op);
    const MinimizeResult b = minimize(e, op, init_b, opts);
    CHECK(a.converged);
    CHECK(b.converged);
    CHECK(b.energy_value < f_init_b); // strict descent from the initial energy
    CHECK(a.grad_norm <= 1e-6);
    CHECK(lp_error(a.u_star, b.u_star, 2.0) < 1e-6 * std::max(1.0, lp_norm(a.u_star, 2.0)));
    // feasibility of the minimizer
    for (std::int64_t i = 0; i < a.u_star.size(); ++i)
        if (!e.omega.contains(a.u_star.x_of(i))) CHECK(a.u_star[i] == 0.0);

    // p = 3
    Energy e3 = make_energy(g, IntegrandKind::PowerNorm, 3.0);
    MinimizeOptions o3;
    o3.max_iter = 1500;
    o3.grad_tol = 1e-6;
    const MinimizeResult r3 = minimize(e3, op, Field(g), o3);
    CHECK(r3.converged);
    CHECK(r3.grad_norm <= 1e-6);
}

TEST_CASE("masked quadratic form has a positive smallest ritz value") {
    const Grid g{1, 128, 8.0};
    const Kernel k = kernel_a(0.5);
    OperatorHandle op = vanishing_op(k, g, 0.25);
    const SupportBox omega{{2.5, 0.0}, {5.5, 8.0}};
    const double lam = smallest_ritz_value(op, omega, 300);
    CHECK(lam > 0.0);
}

TEST_CASE("gamma sweep vanishing: distances and energy gaps shrink") {
    const Grid g{1, 512, 8.0};
    const Kernel k = kernel_a(0.5);
    Energy e = make_energy(g, IntegrandKind::PowerNorm, 2.0);
    const std::vector<double> deltas = {0.4, 0.2, 0.1};
    const GammaReport rep = gamma_sweep_vanishing(k, e, deltas, g, {});
    CHECK(rep.ref_label == "classical");
    for (std::size_t i = 0; i + 1 < rep.distance.size(); ++i) CHECK(rep.distance[i + 1] < rep.distance[i]);
    for (std::size_t i = 0; i + 1 < rep.energy.size(); ++i)
        CHECK(std::abs(rep.energy[i + 1] - rep.ref_energy) < std::abs(rep.energy[i] - rep.ref_energy));
    for (bool c : rep.converged) CHECK(c);

    // g = 0: every minimizer is zero, distances vanish
    Energy e0 = make_energy(g, IntegrandKind::PowerNorm, 2.0, 0.0);
    e0.g = Field(g);
    const GammaReport rep0 = gamma_sweep_vanishing(k, e0, deltas, g, {});
    for (double d : rep0.distance) CHECK(d == 0.0);

    // bit-stability across runs
    const GammaReport rep2 = gamma_sweep_vanishing(k, e, deltas, g, {});
    for (std::size_t i = 0; i < rep.distance.size(); ++i) CHECK(rep.distance[i] == rep2.distance[i]);
}

TEST_CASE("gamma sweep diverging: approach to the fractional minimizer") {
    const Grid g{1, 512, 8.0};
    const Kernel k = kernel_a(0.5);
    Energy e = make_energy(g, IntegrandKind::PowerNorm, 2.0);
    const std::vector<double> deltas = {2, 5, 10};
    const GammaReport rep = gamma_sweep_diverging(k, e, deltas, g, {});
    CHECK(rep.ref_label == "riesz");
    CHECK(rep.s_inf == doctest::Approx(0.5).epsilon(2e-3));
    for (std::size_t i = 0; i + 1 < rep.distance.size(); ++i) CHECK(rep.distance[i + 1] < rep.distance[i]);

    // riesz control kernel: the scaled symbol equals the reference for every delta
    KernelSpec rz;
    rz.family = KernelFamily::Riesz;
    rz.s = 0.5;
    const GammaReport ctrl = gamma_sweep_diverging(Kernel::make(rz), e, deltas, g, {});
    for (double d : ctrl.distance) CHECK(d <= 1e-10);
}

TEST_CASE("two-dimensional sweep smoke") {
    const Grid g{2, 64, 8.0};
    const Kernel k = kernel_a(0.5, 2);
    Energy e;
    e.p = 2.0;
    e.kind = IntegrandKind::PowerNorm;
    e.omega = SupportBox{{2.5, 2.5}, {5.5, 5.5}};
    e.g = Field::from_function(g, [&](double x, double y) {
        return std::sin(2.0 * pi * x / 8.0) * std::cos(2.0 * pi * y / 8.0);
    });
    e.record_growth();
    const std::vector<double> deltas = {0.7, 0.5};
    const GammaReport rep = gamma_sweep_vanishing(k, e, deltas, g, {});
    CHECK(rep.distance[1] < rep.distance[0]);
    for (bool c : rep.converged) CHECK(c);
}
