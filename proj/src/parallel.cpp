#include "nlgrad/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <omp.h>

namespace nlgrad {

namespace {

int initial_cap() {
    if (const char* env = std::getenv("NLGRAD_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return omp_get_max_threads();
}

std::atomic<int>& cap_storage() {
    static std::atomic<int> cap{initial_cap()};
    return cap;
}

std::atomic<bool>& serial_storage() {
    static std::atomic<bool> serial{false};
    return serial;
}

} // namespace

int thread_cap() { return cap_storage().load(std::memory_order_relaxed); }

void set_thread_cap(int cap) { cap_storage().store(cap < 1 ? 1 : cap, std::memory_order_relaxed); }

bool force_serial() { return serial_storage().load(std::memory_order_relaxed); }

void set_force_serial(bool on) { serial_storage().store(on, std::memory_order_relaxed); }

namespace detail {

void run_parallel_blocks(std::int64_t nblocks, void* ctx, void (*body)(void*, std::int64_t)) {
    const int nthreads = thread_cap();
#pragma omp parallel for schedule(static) num_threads(nthreads)
    for (std::int64_t i = 0; i < nblocks; ++i) body(ctx, i);
}

} // namespace detail

} // namespace nlgrad
