#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace randfield::par {

/// Fixed accumulation block; results must not depend on the thread count,
/// so the block structure (not the scheduler) defines the summation order.
inline constexpr std::size_t kBlock = 2048;

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

/// Serial reference: sum of term(i) for i in [0, n), accumulated block by
/// block in index order. This is the semantics the parallel kernel must
/// reproduce bit-for-bit.
template <typename F>
double block_sum_serial(std::size_t n, F&& term) {
    double total = 0.0;
    for (std::size_t b0 = 0; b0 < n; b0 += kBlock) {
        const std::size_t b1 = b0 + kBlock < n ? b0 + kBlock : n;
        double partial = 0.0;
        for (std::size_t i = b0; i < b1; ++i) partial += term(i);
        total += partial;
    }
    return total;
}

/// OpenMP kernel: per-block partials computed in parallel, then combined
/// serially in block order. Bitwise identical to block_sum_serial for any
/// thread count.
template <typename F>
double block_sum(std::size_t n, F&& term) {
    if (n == 0) return 0.0;
    const std::size_t nblocks = (n + kBlock - 1) / kBlock;
    if (nblocks == 1) return block_sum_serial(n, term);
    std::vector<double> partials(nblocks, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(nblocks); ++b) {
        const std::size_t b0 = static_cast<std::size_t>(b) * kBlock;
        const std::size_t b1 = b0 + kBlock < n ? b0 + kBlock : n;
        double partial = 0.0;
        for (std::size_t i = b0; i < b1; ++i) partial += term(i);
        partials[static_cast<std::size_t>(b)] = partial;
    }
    double total = 0.0;
    for (double p : partials) total += p;
    return total;
}

/// Runs body(i) for i in [0, n); each index must touch only its own slots.
template <typename F>
void parallel_index(std::size_t n, F&& body) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i)
        body(static_cast<std::size_t>(i));
}

template <typename F>
void serial_index(std::size_t n, F&& body) {
    for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace randfield::par
