#pragma once

// Tiny parallel-scan layer.  The hot inner loops (coverage scans, comb argmin
// scans) are expressed as index maps / reductions so they can run under
// OpenMP on large instances while keeping a serial reference path that the
// tests (and kernel_bench) compare against.  Reductions use strict total
// orders, so the parallel result is bit-identical to the serial one.

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace chordbench::kernels {

// Inputs below this size are not worth parallelizing.
inline constexpr std::size_t parallel_threshold = 4096;

template <class F>
void for_each_index_serial(std::size_t n, F&& fn) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

template <class F>
void for_each_index_omp(std::size_t n, F&& fn) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
    for (long i = 0; i < static_cast<long>(n); ++i) fn(static_cast<std::size_t>(i));
#else
    for_each_index_serial(n, fn);
#endif
}

template <class F>
void for_each_index(std::size_t n, F&& fn) {
#ifdef _OPENMP
    if (n >= parallel_threshold && omp_get_max_threads() > 1) {
        for_each_index_omp(n, fn);
        return;
    }
#endif
    for_each_index_serial(n, fn);
}

// index of the best element under a strict total order; better(i, j) == true
// means i strictly beats j.  n must be >= 1.
template <class Better>
std::size_t best_index_serial(std::size_t n, Better better) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (better(i, best)) best = i;
    return best;
}

template <class Better>
std::size_t best_index_omp(std::size_t n, Better better) {
#ifdef _OPENMP
    int max_threads = omp_get_max_threads();
    std::vector<std::size_t> local(static_cast<std::size_t>(max_threads), n);
#pragma omp parallel
    {
        int tid = omp_get_thread_num();
        std::size_t mine = n;
#pragma omp for schedule(static) nowait
        for (long i = 0; i < static_cast<long>(n); ++i) {
            auto idx = static_cast<std::size_t>(i);
            if (mine == n || better(idx, mine)) mine = idx;
        }
        local[static_cast<std::size_t>(tid)] = mine;
    }
    std::size_t best = n;
    for (std::size_t cand : local) {
        if (cand == n) continue;
        if (best == n || better(cand, best)) best = cand;
    }
    return best;
#else
    return best_index_serial(n, better);
#endif
}

template <class Better>
std::size_t best_index(std::size_t n, Better better) {
#ifdef _OPENMP
    if (n >= parallel_threshold && omp_get_max_threads() > 1)
        return best_index_omp(n, better);
#endif
    return best_index_serial(n, better);
}

}  // namespace chordbench::kernels
