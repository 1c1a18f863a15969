// Serial vs OpenMP timing of the data-parallel kernels, with a bitwise
// equality check between the two paths (the reductions are chunk-ordered, so
// results must not depend on the thread count).

#include "nlgrad/analysis.hpp"
#include "nlgrad/operators.hpp"
#include "nlgrad/parallel.hpp"
#include "nlgrad/solver.hpp"
#include "nlgrad/special.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace nlgrad;
using Clock = std::chrono::steady_clock;

namespace {

double time_of(const std::function<void()>& body, int reps) {
    body(); // warm up
    const auto t0 = Clock::now();
    for (int i = 0; i < reps; ++i) body();
    return std::chrono::duration<double>(Clock::now() - t0).count() / reps;
}

struct Row {
    std::string name;
    double serial = 0.0, parallel = 0.0;
    bool bitwise_equal = true;
};

} // namespace

int main() {
    std::vector<Row> rows;
    KernelSpec spec;
    spec.family = KernelFamily::TruncatedFractional;
    spec.s = 0.5;
    spec.dim = 1;

    // 1. spectral gradient applications, 1-d N=4096
    {
        const Grid g{1, 4096, 8.0};
        const Kernel k = Kernel::make(spec);
        OperatorHandle op(SymbolTable::scaled(ScaledKernel(k, 0.25, ScalingRegime::Vanishing), g));
        const Field u = make_smooth_bump(g);
        Row r{"apply_gradient 1d N=4096"};
        VectorField out_s, out_p;
        set_force_serial(true);
        r.serial = time_of([&] { out_s = op.apply_gradient(u); }, 50);
        set_force_serial(false);
        r.parallel = time_of([&] { out_p = op.apply_gradient(u); }, 50);
        for (std::int64_t i = 0; i < g.total(); ++i)
            if (out_s.comp(0)[static_cast<std::size_t>(i)] != out_p.comp(0)[static_cast<std::size_t>(i)])
                r.bitwise_equal = false;
        rows.push_back(r);
    }

    // 2. 2-d transforms + gradient, N=256^2
    {
        const Grid g{2, 256, 8.0};
        KernelSpec s2 = spec;
        s2.dim = 2;
        const Kernel k = Kernel::make(s2);
        OperatorHandle op(SymbolTable::scaled(ScaledKernel(k, 0.25, ScalingRegime::Vanishing), g));
        const Field u = make_smooth_bump(g);
        Row r{"apply_gradient 2d 256^2"};
        VectorField out_s, out_p;
        set_force_serial(true);
        r.serial = time_of([&] { out_s = op.apply_gradient(u); }, 10);
        set_force_serial(false);
        r.parallel = time_of([&] { out_p = op.apply_gradient(u); }, 10);
        for (int d = 0; d < 2; ++d)
            for (std::size_t i = 0; i < out_s.comp(d).size(); ++i)
                if (out_s.comp(d)[i] != out_p.comp(d)[i]) r.bitwise_equal = false;
        rows.push_back(r);
    }

    // 3. direct singular-quadrature oracle, N=64
    {
        const Grid g{1, 64, 4.0};
        const Kernel k = Kernel::make(spec);
        const ScaledKernel sk(k, 0.25, ScalingRegime::Vanishing);
        const Field u = make_smooth_bump(g);
        QuadParams quad;
        Row r{"gradient oracle 1d N=64"};
        VectorField out_s, out_p;
        set_force_serial(true);
        r.serial = time_of([&] { out_s = direct_gradient_oracle(u, sk, quad); }, 3);
        set_force_serial(false);
        r.parallel = time_of([&] { out_p = direct_gradient_oracle(u, sk, quad); }, 3);
        for (std::size_t i = 0; i < out_s.comp(0).size(); ++i)
            if (out_s.comp(0)[i] != out_p.comp(0)[i]) r.bitwise_equal = false;
        rows.push_back(r);
    }

    // 4. symbol cache build (oscillatory quadrature fan-out)
    {
        Row r{"symbol cache to xi=1e3"};
        double v_s = 0.0, v_p = 0.0;
        set_force_serial(true);
        r.serial = time_of(
            [&] {
                const Kernel k = Kernel::make(spec);
                v_s = k.qhat(1e3);
            },
            1);
        set_force_serial(false);
        r.parallel = time_of(
            [&] {
                const Kernel k = Kernel::make(spec);
                v_p = k.qhat(1e3);
            },
            1);
        r.bitwise_equal = v_s == v_p;
        rows.push_back(r);
    }

    // 5. energy gradient (the minimization inner loop)
    {
        const Grid g{1, 4096, 8.0};
        const Kernel k = Kernel::make(spec);
        OperatorHandle op(SymbolTable::scaled(ScaledKernel(k, 0.25, ScalingRegime::Vanishing), g));
        Energy e;
        e.p = 3.0;
        e.kind = IntegrandKind::PowerNorm;
        e.omega = SupportBox{{2.5, 0.0}, {5.5, 8.0}};
        e.g = make_smooth_bump(g);
        const Field u = make_masked_noise(g, e.omega, 64, 9);
        Row r{"energy_gradient p=3 N=4096"};
        Field out_s, out_p;
        set_force_serial(true);
        r.serial = time_of([&] { out_s = energy_gradient(e, u, op); }, 20);
        set_force_serial(false);
        r.parallel = time_of([&] { out_p = energy_gradient(e, u, op); }, 20);
        for (std::int64_t i = 0; i < g.total(); ++i)
            if (out_s[i] != out_p[i]) r.bitwise_equal = false;
        rows.push_back(r);
    }

    std::printf("threads: %d\n", thread_cap());
    std::printf("%-28s %12s %12s %9s %s\n", "kernel", "serial [ms]", "openmp [ms]", "speedup", "bitwise");
    bool all_equal = true;
    for (const Row& r : rows) {
        std::printf("%-28s %12.3f %12.3f %8.2fx %s\n", r.name.c_str(), 1e3 * r.serial, 1e3 * r.parallel,
                    r.serial / r.parallel, r.bitwise_equal ? "equal" : "DIFFERS");
        all_equal = all_equal && r.bitwise_equal;
    }
    return all_equal ? 0 : 1;
}
