#include "nlgrad/profile.hpp"

#include "kernel_impl.hpp"
#include "nlgrad/errors.hpp"
#include "nlgrad/parallel.hpp"
#include "nlgrad/quadrature.hpp"
#include "nlgrad/special.hpp"

#include <algorithm>
#include <cmath>

namespace nlgrad {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

double safe_exp(double x) { return x < -745.0 ? 0.0 : std::exp(x); }

// Exact log Q_bar by adaptive quadrature in t = log u on [log r, log support],
// computed with the integrand shifted by its value at the lower limit so the
// result stays finite even where Q_bar itself overflows a double.
double log_qbar_exact(const KernelImpl& k, double r) {
    if (!(r > 0.0)) return std::numeric_limits<double>::infinity();
    if (r >= k.support) return neg_inf;
    const double t_lo = std::log(r);
    const double t_hi = std::log(k.support);
    const double shift = k.log_rho(t_lo);
    if (shift == neg_inf) {
        // profile vanishes at r (inside a cutoff plateau gap or support edge)
        QuadOptions opts;
        opts.abs_tol = 1e-13;
        opts.rel_tol = 1e-11;
        const double v = integrate([&](double t) { return safe_exp(k.log_rho(t)); }, t_lo, t_hi, opts);
        return v > 0.0 ? std::log(v) : neg_inf;
    }
    QuadOptions opts;
    opts.abs_tol = 1e-13;
    opts.rel_tol = 1e-11;
    const double v =
        integrate([&](double t) { return safe_exp(k.log_rho(t) - shift); }, t_lo, t_hi, opts);
    return v > 0.0 ? shift + std::log(v) : neg_inf;
}

double qbar_exact(const KernelImpl& k, double r) {
    const double lv = log_qbar_exact(k, r);
    return lv == neg_inf ? 0.0 : std::exp(lv);
}

// Iterated Aitken acceleration of a sequence of partial sums.
double aitken(std::vector<double> s) {
    while (s.size() >= 3) {
        std::vector<double> t(s.size() - 2);
        for (std::size_t i = 0; i + 2 < s.size(); ++i) {
            const double d2 = s[i + 2] - 2.0 * s[i + 1] + s[i];
            if (d2 == 0.0)
                t[i] = s[i + 2];
            else
                t[i] = s[i + 2] - (s[i + 2] - s[i + 1]) * (s[i + 2] - s[i + 1]) / d2;
        }
        s = std::move(t);
    }
    return s.back();
}

} // namespace

// ---------------------------------------------------------------------------
// Radial Fourier transform of a profile given in log form
// ---------------------------------------------------------------------------

double radial_fourier(const std::function<double(double)>& log_qbar, double support, int n, double xi) {
    const double w_n = n == 1 ? 2.0 : 2.0 * pi;
    const double two_pi_xi = 2.0 * pi * xi;
    auto osc = [&](double r) { return n == 1 ? std::cos(two_pi_xi * r) : bessel_j0(two_pi_xi * r); };
    auto zero_at = [&](int k) {
        return n == 1 ? (2.0 * k + 1.0) / (4.0 * xi) : bessel_j0_zero(k + 1) / two_pi_xi;
    };
    auto integrand = [&](double r) {
        const double lq = log_qbar(std::log(r));
        if (lq == neg_inf) return 0.0;
        return w_n * safe_exp(lq + (n - 1) * std::log(r)) * osc(r);
    };

    const bool compact = std::isfinite(support);
    const double z0 = zero_at(0);
    const double head_top = std::min(compact ? support : z0, 0.5 * z0);

    QuadOptions opts;
    opts.abs_tol = 1e-13;
    opts.rel_tol = 1e-11;
    auto log_envelope = [&](double t) {
        const double lq = log_qbar(t);
        return lq == neg_inf ? neg_inf : std::log(w_n) + lq + (n - 1) * t;
    };
    auto factor = [&](double t) { return osc(std::exp(t)); };
    double total = integrate_log_radial(log_envelope, factor, std::log(head_top), opts);
    if (compact && head_top >= support) return total;

    const int nodes = xi > 100.0 ? 6 : 12;
    if (compact) {
        double lo = head_top;
        for (int k = 0;; ++k) {
            const double z = zero_at(k);
            if (z <= lo) continue;
            if (z >= support) {
                total += gauss_panel(integrand, lo, support, nodes);
                break;
            }
            total += gauss_panel(integrand, lo, z, nodes);
            lo = z;
        }
        return total;
    }

    // Infinite support: alternating half-wave panels, iterated-Aitken accelerated.
    std::vector<double> partial;
    double running = total;
    double lo = head_top;
    double prev_acc = 0.0;
    bool have_prev = false;
    for (int k = 0; k < 4000; ++k) {
        const double z = zero_at(k);
        if (z <= lo) continue;
        running += gauss_panel(integrand, lo, z, nodes);
        lo = z;
        partial.push_back(running);
        if (partial.size() >= 12 && partial.size() % 4 == 0) {
            const std::size_t keep = std::min<std::size_t>(partial.size(), 40);
            const double acc = aitken(std::vector<double>(partial.end() - keep, partial.end()));
            if (have_prev && std::abs(acc - prev_acc) <= 1e-13 + 1e-12 * std::abs(acc)) return acc;
            prev_acc = acc;
            have_prev = true;
        }
    }
    fail(ErrorKind::QuadratureFailure, "oscillatory tail did not stabilize at xi = " + std::to_string(xi));
}

// ---------------------------------------------------------------------------
// Profile caches
// ---------------------------------------------------------------------------

const Pchip& KernelImpl::ensure_qbar() const {
    std::lock_guard<std::mutex> lock(mtx);
    if (!qbar_cache) {
        const double t_lo = std::log(support * 1e-8);
        const double t_hi = std::log(support) - 1e-9;
        const int per_decade = 400;
        const int count = static_cast<int>((t_hi - t_lo) / std::log(10.0) * per_decade) + 2;
        std::vector<double> t(count), v(count);
        for (int i = 0; i < count; ++i) t[i] = t_lo + (t_hi - t_lo) * i / (count - 1);
        parallel_for(count, [&](std::int64_t i) { v[i] = log_qbar_exact(*this, std::exp(t[i])); }, 2);
        // truncate the vanishing region near the support edge
        int last = count - 1;
        while (last > 1 && v[last] < std::log(1e-280)) --last;
        t.resize(last + 1);
        v.resize(last + 1);
        qbar_cache = std::make_shared<const Pchip>(std::move(t), std::move(v));
    }
    return *qbar_cache;
}

namespace {

// Node ladder for the symbol cache: dense where the symbol bends, coarse in the
// asymptotic power-law tails.
double ladder_next(double t) {
    const double ln10 = std::log(10.0);
    const double step = (t < std::log(1e-2) || t >= std::log(1e2)) ? ln10 / 128.0 : ln10 / 512.0;
    return t + step;
}

} // namespace

std::shared_ptr<const Pchip> KernelImpl::ensure_qhat(double xi) const {
    if (spec.family != KernelFamily::Riesz) ensure_qbar();
    std::unique_lock<std::mutex> lock(mtx);
    const double t_need = std::log(std::min(qhat_cap, std::max(100.0, xi)));
    auto covered = [&](const std::vector<double>& t) {
        return t.size() >= 3 && t[t.size() - 3] >= t_need;
    };
    if (qhat_cache && covered(qhat_cache->nodes())) return qhat_cache;

    std::vector<double> t, v;
    if (qhat_cache) {
        t = qhat_cache->nodes();
        v = qhat_cache->values();
    } else {
        t.push_back(std::log(qhat_lo));
    }
    while (!covered(t)) t.push_back(ladder_next(t.back()));

    const std::size_t old_count = v.size();
    v.resize(t.size());
    const Pchip* qb = qbar_cache.get();
    const double t_edge = qb ? qb->x_max() : 0.0;
    auto log_qbar = [qb, t_edge](double tt) {
        if (tt > t_edge) return neg_inf;
        return (*qb)(tt);
    };
    lock.unlock();
    std::vector<double> fresh(t.size() - old_count);
    parallel_for(
        static_cast<std::int64_t>(fresh.size()),
        [&](std::int64_t j) {
            const double x = std::exp(t[old_count + j]);
            fresh[j] = std::log(radial_fourier(log_qbar, support, n, x));
        },
        2);
    lock.lock();
    if (qhat_cache && covered(qhat_cache->nodes())) return qhat_cache; // raced; another thread built it
    for (std::size_t j = 0; j < fresh.size(); ++j) v[old_count + j] = fresh[j];
    qhat_hi = std::exp(t.back());
    qhat_cache = std::make_shared<const Pchip>(std::move(t), std::move(v));
    return qhat_cache;
}

// ---------------------------------------------------------------------------
// Kernel profile/symbol accessors
// ---------------------------------------------------------------------------

double riesz_qhat_coefficient(int n, double s) {
    return 1.0 / (n + s - 1.0) * std::pow(pi, 0.5 * n - (1.0 - s)) * std::tgamma(0.5 * (1.0 - s)) /
           std::tgamma(0.5 * (n - 1.0 + s));
}

double Kernel::q_bar(double r) const {
    if (!(r > 0.0)) fail(ErrorKind::QuadratureFailure, "q_bar needs r > 0");
    if (spec().family == KernelFamily::Riesz) {
        const double e = impl_->n + spec().s - 1.0;
        return impl_->norm_const * std::pow(r, -e) / e;
    }
    return qbar_exact(*impl_, r);
}

double Kernel::log_q_bar(double log_r) const {
    if (spec().family == KernelFamily::Riesz) {
        const double e = impl_->n + spec().s - 1.0;
        return impl_->log_norm - std::log(e) - e * log_r;
    }
    if (log_r >= std::log(impl_->support)) return neg_inf;
    const Pchip& cache = impl_->ensure_qbar();
    if (log_r > cache.x_max()) return neg_inf;
    return cache(log_r);
}

double Kernel::q_mass() const {
    if (!compact_support()) return std::numeric_limits<double>::infinity();
    std::unique_lock<std::mutex> lock(impl_->mtx);
    if (std::isnan(impl_->q_mass_cache)) {
        lock.unlock();
        const double area = impl_->n == 1 ? 2.0 : 2.0 * pi;
        QuadOptions opts;
        opts.abs_tol = 1e-12;
        opts.rel_tol = 1e-10;
        const double val =
            area * integrate_log_radial(
                       [&](double t) { return log_qbar_exact(*impl_, std::exp(t)) + (impl_->n - 1) * t; },
                       nullptr, std::log(impl_->support), opts);
        lock.lock();
        impl_->q_mass_cache = val;
    }
    return impl_->q_mass_cache;
}

double Kernel::qhat_q2() const {
    std::unique_lock<std::mutex> lock(impl_->mtx);
    if (std::isnan(impl_->qhat_q2_cache)) {
        lock.unlock();
        impl_->ensure_qbar();
        const double coef = impl_->n == 1 ? 4.0 * pi * pi : 2.0 * std::pow(pi, 3);
        QuadOptions opts;
        const Pchip& qb = *impl_->qbar_cache;
        const double val = coef * integrate_log_radial(
                                      [&](double t) {
                                          if (t >= std::log(impl_->support)) return neg_inf;
                                          return qb(t) + (impl_->n + 1 - 1) * t;
                                      },
                                      nullptr, std::log(impl_->support), opts);
        lock.lock();
        impl_->qhat_q2_cache = val;
    }
    return impl_->qhat_q2_cache;
}

double Kernel::qhat(double xi) const {
    xi = std::abs(xi);
    if (spec().family == KernelFamily::Riesz)
        return xi == 0.0 ? std::numeric_limits<double>::infinity()
                         : riesz_qhat_coefficient(impl_->n, spec().s) * std::pow(xi, spec().s - 1.0);
    if (!compact_support()) fail(ErrorKind::SingularSymbol, "symbol cache needs a compactly supported kernel");
    if (xi == 0.0) return 1.0;
    if (xi < KernelImpl::qhat_lo) return 1.0 - qhat_q2() * xi * xi;
    const std::shared_ptr<const Pchip> cache = impl_->ensure_qhat(xi);
    return std::exp((*cache)(std::log(xi)));
}

double Kernel::qhat_direct(double xi) const {
    xi = std::abs(xi);
    if (xi == 0.0) return compact_support() ? 1.0 : std::numeric_limits<double>::infinity();
    if (spec().family == KernelFamily::Riesz) {
        auto log_qbar = [this](double t) { return log_q_bar(t); };
        return radial_fourier(log_qbar, std::numeric_limits<double>::infinity(), impl_->n, xi);
    }
    impl_->ensure_qbar();
    auto log_qbar = [this](double t) { return log_q_bar(t); };
    return radial_fourier(log_qbar, impl_->support, impl_->n, xi);
}

double scaled_log_qbar(const ScaledKernel& sk, double t) {
    const double lq = sk.base().log_q_bar(t - std::log(sk.delta()));
    return lq == neg_inf ? neg_inf : std::log(sk.c_delta()) + lq;
}

// ---------------------------------------------------------------------------
// Symbol tables on grids
// ---------------------------------------------------------------------------

double SymbolTable::freq_mag(std::int64_t idx) const {
    const int n = grid.n_per_axis;
    if (grid.dim == 1) return std::abs(grid.freq(static_cast<int>(idx)));
    const int kx = static_cast<int>(idx % n);
    const int ky = static_cast<int>(idx / n);
    const double fx = grid.freq(kx), fy = grid.freq(ky);
    return std::sqrt(fx * fx + fy * fy);
}

SymbolTable SymbolTable::classical(const Grid& g) {
    g.validate();
    SymbolTable t;
    t.grid = g;
    t.kind = SymbolKind::Classical;
    t.qhat.assign(static_cast<std::size_t>(g.total()), 1.0);
    return t;
}

SymbolTable SymbolTable::riesz(const Grid& g, double s) {
    g.validate();
    SymbolTable t;
    t.grid = g;
    t.kind = SymbolKind::Riesz;
    t.riesz_s = s;
    t.singular_at_zero = true;
    t.qhat.resize(static_cast<std::size_t>(g.total()));
    const double coef = riesz_qhat_coefficient(g.dim, s);
    parallel_for(g.total(), [&](std::int64_t i) {
        const double m = t.freq_mag(i);
        t.qhat[static_cast<std::size_t>(i)] =
            m == 0.0 ? std::numeric_limits<double>::infinity() : coef * std::pow(m, s - 1.0);
    });
    return t;
}

SymbolTable SymbolTable::scaled(const ScaledKernel& sk, const Grid& g) {
    g.validate();
    SymbolTable t;
    t.grid = g;
    t.kind = SymbolKind::Scaled;
    t.delta = sk.delta();
    t.regime = sk.regime();
    t.qhat.resize(static_cast<std::size_t>(g.total()));
    if (sk.base().compact_support()) {
        // warm the cache up to the largest |delta xi| before fanning out
        double max_mag = 0.0;
        for (std::int64_t i = 0; i < g.total(); ++i) max_mag = std::max(max_mag, t.freq_mag(i));
        (void)sk.base().qhat(sk.delta() * max_mag);
    } else {
        t.singular_at_zero = true;
    }
    parallel_for(g.total(), [&](std::int64_t i) {
        const double m = t.freq_mag(i);
        t.qhat[static_cast<std::size_t>(i)] = m == 0.0 ? sk.qhat_zero() : sk.qhat(m);
    });
    return t;
}

// ---------------------------------------------------------------------------
// Multiplier scan
// ---------------------------------------------------------------------------

MultiplierScan multiplier_scan(const Kernel& k, double d1, double d2, std::span<const double> xi_grid) {
    auto m_of = [&](double xi) {
        const double num = d1 == 0.0 ? 1.0 : k.qhat(d1 * xi);
        const double den = d2 == 0.0 ? 1.0 : k.qhat(d2 * xi);
        return num / den;
    };
    MultiplierScan out;
    for (double xi : xi_grid) {
        if (!(xi > 0.0)) continue;
        const double m = m_of(xi);
        if (m > out.max_ratio) {
            out.max_ratio = m;
            out.worst_xi = xi;
        }
        const double h = 1e-3 * xi;
        const double deriv = (m_of(xi + h) - m_of(xi - h)) / (2.0 * h);
        out.max_scaled_derivative = std::max(out.max_scaled_derivative, std::abs(xi * deriv));
    }
    return out;
}

} // namespace nlgrad
