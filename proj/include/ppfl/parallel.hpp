#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ppfl::par {

// Thread count used by parallel_for. 0 = OpenMP default. Setting 1 gives the
// serial reference path; results are identical for any value because every
// loop body owns its unit of work (no shared mutable state, per-unit RNGs).
int max_threads();
void set_threads(int n);

template <class F>
void parallel_for(std::size_t n, F&& body) {
#ifdef _OPENMP
    if (max_threads() != 1 && n > 1) {
        const long long nn = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(max_threads() > 0 ? max_threads() : omp_get_max_threads())
        for (long long i = 0; i < nn; ++i) {
            body(static_cast<std::size_t>(i));
        }
        return;
    }
#endif
    for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace ppfl::par
