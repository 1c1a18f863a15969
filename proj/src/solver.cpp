#include "nlgrad/solver.hpp"

#include "nlgrad/errors.hpp"
#include "nlgrad/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace nlgrad {

namespace {

Field masked(Field f, const SupportBox& omega) {
    f.apply_mask(omega);
    return f;
}

Field add(const Field& a, const Field& b) {
    Field out(a.grid());
    for (std::int64_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

void axpy(Field& y, double alpha, const Field& x) {
    for (std::int64_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

// pointwise dual field W = df/dA(x, A)
VectorField stress(const Energy& e, const VectorField& A) {
    const Grid& g = A.grid();
    VectorField w(g);
    const bool regularize = e.p < 2.0;
    const double eps2 = e.eps_reg * e.eps_reg;
    switch (e.kind) {
    case IntegrandKind::PowerNorm:
    case IntegrandKind::WeightedPower: {
        const double c = e.kind == IntegrandKind::PowerNorm ? 1.0 : e.weight_c * e.p;
        parallel_for(g.total(), [&](std::int64_t i) {
            double a2 = 0.0;
            for (int d = 0; d < g.dim; ++d) {
                const double v = A.comp(d)[static_cast<std::size_t>(i)];
                a2 += v * v;
            }
            const double mag2 = regularize ? a2 + eps2 : a2;
            const double fac = mag2 == 0.0 ? 0.0 : c * std::pow(mag2, 0.5 * e.p - 1.0);
            for (int d = 0; d < g.dim; ++d)
                w.comp(d)[static_cast<std::size_t>(i)] = fac * A.comp(d)[static_cast<std::size_t>(i)];
        });
        return w;
    }
    case IntegrandKind::AnisotropicQuadratic: {
        const bool has_m = !e.m11.values().empty();
        parallel_for(g.total(), [&](std::int64_t i) {
            const auto ii = static_cast<std::size_t>(i);
            const double a0 = A.comp(0)[ii];
            if (g.dim == 1) {
                const double m = has_m ? e.m11[i] : 1.0;
                w.comp(0)[ii] = m * a0;
            } else {
                const double a1 = A.comp(1)[ii];
                const double m11 = has_m ? e.m11[i] : 1.0;
                const double m12 = has_m && !e.m12.values().empty() ? e.m12[i] : 0.0;
                const double m22 = has_m ? e.m22[i] : 1.0;
                w.comp(0)[ii] = m11 * a0 + m12 * a1;
                w.comp(1)[ii] = m12 * a0 + m22 * a1;
            }
        });
        return w;
    }
    }
    return w;
}

double integrand_sum(const Energy& e, const VectorField& A) {
    const Grid& g = A.grid();
    const double hn = std::pow(g.spacing(), g.dim);
    const bool regularize = e.p < 2.0;
    const double eps2 = e.eps_reg * e.eps_reg;
    double total = 0.0;
    switch (e.kind) {
    case IntegrandKind::PowerNorm:
    case IntegrandKind::WeightedPower: {
        const double c = e.kind == IntegrandKind::PowerNorm ? 1.0 / e.p : e.weight_c;
        total = parallel_sum(g.total(), [&](std::int64_t i) {
            double a2 = 0.0;
            for (int d = 0; d < g.dim; ++d) {
                const double v = A.comp(d)[static_cast<std::size_t>(i)];
                a2 += v * v;
            }
            const double mag2 = regularize ? a2 + eps2 : a2;
            double val = c * std::pow(mag2, 0.5 * e.p);
            if (e.kind == IntegrandKind::WeightedPower && !e.weight_a.values().empty()) val += e.weight_a[i];
            return val;
        });
        break;
    }
    case IntegrandKind::AnisotropicQuadratic: {
        const bool has_m = !e.m11.values().empty();
        total = parallel_sum(g.total(), [&](std::int64_t i) {
            const auto ii = static_cast<std::size_t>(i);
            const double a0 = A.comp(0)[ii];
            if (g.dim == 1) {
                const double m = has_m ? e.m11[i] : 1.0;
                return 0.5 * m * a0 * a0;
            }
            const double a1 = A.comp(1)[ii];
            const double m11 = has_m ? e.m11[i] : 1.0;
            const double m12 = has_m && !e.m12.values().empty() ? e.m12[i] : 0.0;
            const double m22 = has_m ? e.m22[i] : 1.0;
            return 0.5 * (m11 * a0 * a0 + 2.0 * m12 * a0 * a1 + m22 * a1 * a1);
        });
        break;
    }
    }
    return hn * total;
}

} // namespace

void Energy::record_growth() {
    switch (kind) {
    case IntegrandKind::PowerNorm:
        growth_c = growth_C = 1.0 / p;
        break;
    case IntegrandKind::WeightedPower: {
        double a_max = 0.0;
        for (double v : weight_a.values()) a_max = std::max(a_max, std::abs(v));
        growth_c = weight_c;
        growth_C = std::max(weight_c, a_max);
        break;
    }
    case IntegrandKind::AnisotropicQuadratic: {
        if (m11.values().empty()) {
            growth_c = growth_C = 0.5;
            break;
        }
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (std::int64_t i = 0; i < m11.size(); ++i) {
            const double a = m11[i];
            const double c = m22.values().empty() ? a : m22[i];
            const double b = m12.values().empty() ? 0.0 : m12[i];
            const double tr = 0.5 * (a + c);
            const double det = std::sqrt(std::max(0.0, 0.25 * (a - c) * (a - c) + b * b));
            lo = std::min(lo, tr - det);
            hi = std::max(hi, tr + det);
        }
        growth_c = 0.5 * lo;
        growth_C = 0.5 * hi;
        break;
    }
    }
}

double energy_value(const Energy& e, const Field& u_inner, const OperatorHandle& op) {
    if (!(u_inner.grid() == op.grid()) || !(e.g.grid() == op.grid()))
        fail(ErrorKind::GridMismatch, "energy_value needs matching grids");
    const VectorField A = op.apply_gradient(add(e.g, u_inner));
    return integrand_sum(e, A);
}

Field energy_gradient(const Energy& e, const Field& u_inner, const OperatorHandle& op) {
    const VectorField A = op.apply_gradient(add(e.g, u_inner));
    const VectorField W = stress(e, A);
    Field grad = op.apply_divergence(W);
    for (std::int64_t i = 0; i < grad.size(); ++i) grad[i] = -grad[i];
    grad.apply_mask(e.omega);
    return grad;
}

MinimizeResult minimize(const Energy& e, const OperatorHandle& op, const Field& init,
                        const MinimizeOptions& opts) {
    MinimizeResult res;
    Field x = masked(init, e.omega);
    double fx = energy_value(e, x, op);
    Field grad = energy_gradient(e, x, op);
    double gnorm = lp_norm(grad, 2.0);
    const double tol = opts.grad_tol > 0.0 ? opts.grad_tol : 1e-8 * std::max(1.0, gnorm);

    const int m = std::max(1, opts.memory);
    std::vector<Field> s_hist, y_hist;
    std::vector<double> rho_hist;

    // Seed metric for the two-loop recursion: masked spectral inverse of the
    // operator's Gram symbol. Far better scaled than the identity for these
    // stiff spectral quadratic forms.
    auto apply_h0 = [&](const Field& r) {
        Field pr = op.apply_inverse_gram(r);
        pr.apply_mask(e.omega);
        return pr;
    };

    int iter = 0;
    int stagnant = 0;
    while (gnorm > tol && iter < opts.max_iter && stagnant < 30) {
        // two-loop recursion
        Field q = grad;
        const int hist = static_cast<int>(s_hist.size());
        std::vector<double> alpha(hist);
        for (int i = hist - 1; i >= 0; --i) {
            alpha[i] = rho_hist[i] * inner(s_hist[i], q);
            axpy(q, -alpha[i], y_hist[i]);
        }
        {
            Field pq = apply_h0(q);
            double gamma = 1.0;
            if (hist > 0) {
                const Field py = apply_h0(y_hist[hist - 1]);
                gamma = inner(s_hist[hist - 1], y_hist[hist - 1]) / inner(y_hist[hist - 1], py);
            }
            q = std::move(pq);
            for (std::int64_t i = 0; i < q.size(); ++i) q[i] *= gamma;
        }
        for (int i = 0; i < hist; ++i) {
            const double beta = rho_hist[i] * inner(y_hist[i], q);
            axpy(q, alpha[i] - beta, s_hist[i]);
        }
        Field dir = q;
        for (std::int64_t i = 0; i < dir.size(); ++i) dir[i] = -dir[i];
        double dd = inner(grad, dir);
        if (!(dd < 0.0)) { // not a descent direction; restart from steepest descent
            for (std::int64_t i = 0; i < dir.size(); ++i) dir[i] = -grad[i];
            dd = -gnorm * gnorm;
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
        }

        // Armijo backtracking
        double step = 1.0;
        constexpr double c1 = 1e-4;
        bool accepted = false;
        Field x_new;
        double f_new = 0.0;
        for (int shrink = 0; shrink <= 40; ++shrink) {
            x_new = x;
            axpy(x_new, step, dir);
            x_new.apply_mask(e.omega);
            f_new = energy_value(e, x_new, op);
            if (f_new <= fx + c1 * step * dd) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            ++res.line_search_failures;
            break;
        }

        Field grad_new = energy_gradient(e, x_new, op);
        Field s = x_new;
        axpy(s, -1.0, x);
        Field y = grad_new;
        axpy(y, -1.0, grad);
        const double sy = inner(s, y);
        if (sy > 1e-14 * lp_norm(s, 2.0) * lp_norm(y, 2.0)) {
            if (static_cast<int>(s_hist.size()) == m) {
                s_hist.erase(s_hist.begin());
                y_hist.erase(y_hist.begin());
                rho_hist.erase(rho_hist.begin());
            }
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(y));
            rho_hist.push_back(1.0 / sy);
        }
        stagnant = (fx - f_new <= 1e-15 * (std::abs(fx) + 1e-300)) ? stagnant + 1 : 0;
        x = std::move(x_new);
        fx = f_new;
        grad = std::move(grad_new);
        gnorm = lp_norm(grad, 2.0);
        ++iter;
    }

    res.u_star = std::move(x);
    res.energy_value = fx;
    res.grad_norm = gnorm;
    res.iterations = iter;
    res.converged = gnorm <= tol;
    return res;
}

double smallest_ritz_value(const OperatorHandle& op, const SupportBox& omega, int iters,
                           std::uint64_t seed) {
    const Grid& g = op.grid();
    std::mt19937_64 rng(seed);
    Field v(g);
    for (std::int64_t i = 0; i < v.size(); ++i)
        v[i] = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
    v.apply_mask(omega);

    auto apply_k = [&](const Field& u) { // K u = mask(-div D u) = mask(D^T D u)
        VectorField du = op.apply_gradient(u);
        Field ku = op.apply_divergence(du);
        for (std::int64_t i = 0; i < ku.size(); ++i) ku[i] = -ku[i];
        ku.apply_mask(omega);
        return ku;
    };

    // power iteration for the largest eigenvalue
    double lam_max = 0.0;
    Field w = v;
    for (int it = 0; it < iters; ++it) {
        Field kw = apply_k(w);
        lam_max = inner(w, kw) / inner(w, w);
        const double n = lp_norm(kw, 2.0);
        for (std::int64_t i = 0; i < kw.size(); ++i) kw[i] /= n;
        w = std::move(kw);
    }
    // power iteration on lam_max I - K for the smallest
    Field z = v;
    double mu = 0.0;
    for (int it = 0; it < iters; ++it) {
        Field kz = apply_k(z);
        Field sz(g);
        for (std::int64_t i = 0; i < sz.size(); ++i) sz[i] = lam_max * z[i] - kz[i];
        mu = inner(z, sz) / inner(z, z);
        const double n = lp_norm(sz, 2.0);
        for (std::int64_t i = 0; i < sz.size(); ++i) sz[i] /= n;
        z = std::move(sz);
    }
    return lam_max - mu;
}

namespace {

GammaReport gamma_sweep(const Kernel& k, const Energy& e, std::span<const double> deltas, const Grid& g,
                        const MinimizeOptions& opts_in, ScalingRegime regime) {
    GammaReport rep;
    Field zero(g);

    OperatorHandle ref_op = [&] {
        if (regime == ScalingRegime::Vanishing) {
            rep.ref_label = "classical";
            return OperatorHandle(SymbolTable::classical(g));
        }
        rep.s_inf = k.s_infinity_estimated();
        rep.ref_label = "riesz";
        return OperatorHandle(SymbolTable::riesz(g, rep.s_inf));
    }();

    // One explicit tolerance for the reference and every nonlocal solve, so the
    // distance comparison carries no solver bias. The stiff reference problem
    // sets the reachable scale.
    MinimizeOptions opts = opts_in;
    if (opts.grad_tol <= 0.0) {
        const double g0 = lp_norm(energy_gradient(e, zero, ref_op), 2.0);
        opts.grad_tol = 1e-5 * std::max(1.0, g0);
    }
    if (opts.max_iter < 2000) opts.max_iter = 2000;

    const MinimizeResult ref = minimize(e, ref_op, zero, opts);
    if (!ref.converged) fail(ErrorKind::ExperimentFailure, "reference minimization did not converge");
    rep.ref_energy = ref.energy_value;
    rep.ref_minimizer = ref.u_star;

    for (double d : deltas) {
        if (regime == ScalingRegime::Vanishing && d < 4.0 * g.spacing())
            fail(ErrorKind::UnresolvedHorizon, "delta below 4h in gamma sweep");
        const ScaledKernel sk(k, d, regime);
        OperatorHandle op(SymbolTable::scaled(sk, g));
        const MinimizeResult r = minimize(e, op, zero, opts);
        rep.delta.push_back(d);
        rep.distance.push_back(lp_error(r.u_star, ref.u_star, 2.0));
        rep.energy.push_back(r.energy_value);
        rep.iterations.push_back(r.iterations);
        rep.converged.push_back(r.converged);
        rep.minimizers.push_back(r.u_star);
    }
    return rep;
}

} // namespace

GammaReport gamma_sweep_vanishing(const Kernel& k, const Energy& e, std::span<const double> deltas,
                                  const Grid& g, const MinimizeOptions& opts) {
    return gamma_sweep(k, e, deltas, g, opts, ScalingRegime::Vanishing);
}

GammaReport gamma_sweep_diverging(const Kernel& k, const Energy& e, std::span<const double> deltas,
                                  const Grid& g, const MinimizeOptions& opts) {
    return gamma_sweep(k, e, deltas, g, opts, ScalingRegime::Diverging);
}

} // namespace nlgrad
