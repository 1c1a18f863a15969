#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

namespace nlgrad {

// Thread count used by the OpenMP kernels. Respects NLGRAD_THREADS when set,
// otherwise the OpenMP default. A cap of 1 gives the serial path.
int thread_cap();
void set_thread_cap(int cap);

// Force the serial reference path regardless of the cap (used by tests and the
// benchmark to compare serial vs parallel execution).
bool force_serial();
void set_force_serial(bool on);

namespace detail {
void run_parallel_blocks(std::int64_t nblocks, void* ctx, void (*body)(void*, std::int64_t));
}

// Parallel loop over [0, n). Iterations must be independent. `min_items` is
// the size below which the loop stays serial; coarse-grained loops (heavy work
// per iteration) should pass a small value.
template <class F>
void parallel_for(std::int64_t n, F&& body, std::int64_t min_items = 8192) {
    if (n <= 0) return;
    if (force_serial() || thread_cap() <= 1 || n < min_items) {
        for (std::int64_t i = 0; i < n; ++i) body(i);
        return;
    }
    struct Ctx { F* f; } ctx{&body};
    detail::run_parallel_blocks(n, &ctx, [](void* c, std::int64_t i) { (*static_cast<Ctx*>(c)->f)(i); });
}

// Deterministic parallel reduction: [0, n) is split into fixed-size chunks,
// each chunk is summed serially, and the chunk partials are combined in chunk
// order. The result is bitwise independent of the thread count.
template <class F>
double parallel_sum(std::int64_t n, F&& term) {
    if (n <= 0) return 0.0;
    constexpr std::int64_t chunk = 2048;
    const std::int64_t nchunks = (n + chunk - 1) / chunk;
    std::vector<double> partial(static_cast<std::size_t>(nchunks));
    struct Ctx {
        F* f;
        double* out;
        std::int64_t n;
    } ctx{&term, partial.data(), n};
    auto body = [](void* c, std::int64_t b) {
        auto* s = static_cast<Ctx*>(c);
        const std::int64_t lo = b * chunk;
        const std::int64_t hi = std::min(lo + chunk, s->n);
        double acc = 0.0;
        for (std::int64_t i = lo; i < hi; ++i) acc += (*s->f)(i);
        s->out[b] = acc;
    };
    if (force_serial() || thread_cap() <= 1 || nchunks == 1) {
        for (std::int64_t b = 0; b < nchunks; ++b) body(&ctx, b);
    } else {
        detail::run_parallel_blocks(nchunks, &ctx, body);
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

} // namespace nlgrad
