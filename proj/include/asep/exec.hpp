#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <vector>

#ifdef ASEP_HAVE_OPENMP
#include <omp.h>
#endif

namespace asep {

// Execution policy for the hot kernels.  Exec::parallel uses OpenMP when the
// library was built with it and degrades to serial otherwise.  Both policies
// produce bit-identical results: parallel loops only ever write disjoint
// slots, and reductions always run over the same fixed tree (see
// pairwise_sum below).
enum class Exec { serial, parallel };

inline int worker_count() {
#ifdef ASEP_HAVE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_worker_count(int n) {
#ifdef ASEP_HAVE_OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

// f(i) for i in [0, n).  Callers must write to disjoint state per index.
// An exception thrown by f is captured (one survives if several threads
// throw) and rethrown after the loop; it must not escape an OpenMP region.
template <class F>
void parallel_for(Exec ex, std::int64_t n, F&& f) {
#ifdef ASEP_HAVE_OPENMP
    if (ex == Exec::parallel && n > 1) {
        std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t i = 0; i < n; ++i) {
            try {
                f(i);
            } catch (...) {
#pragma omp critical(asep_parallel_for_err)
                {
                    if (!err) err = std::current_exception();
                }
            }
        }
        if (err) std::rethrow_exception(err);
        return;
    }
#endif
    (void)ex;
    for (std::int64_t i = 0; i < n; ++i) f(i);
}

namespace detail {
inline constexpr std::int64_t kSumLeaf = 64;

// Combine chunk partials over a fixed binary tree so the result does not
// depend on how the leaves were computed.
template <class T>
T pairwise_combine(std::vector<T>& parts, std::int64_t lo, std::int64_t hi) {
    if (hi - lo == 1) return parts[lo];
    const std::int64_t mid = lo + (hi - lo) / 2;
    return pairwise_combine(parts, lo, mid) + pairwise_combine(parts, mid, hi);
}
}  // namespace detail

// Deterministic sum of term(0) + ... + term(n-1): fixed 64-term leaves,
// combined by a fixed pairwise tree.  The execution policy only decides
// whether leaves are evaluated concurrently, so serial and parallel runs are
// bit-identical.  T needs zero(), operator+= for terms and operator+ for
// combination; plain doubles and Eigen vectors both work via the `init`
// prototype argument.
template <class T, class Term>
T pairwise_sum(Exec ex, std::int64_t n, const T& init, Term&& term) {
    if (n <= 0) return init;
    const std::int64_t leaves = (n + detail::kSumLeaf - 1) / detail::kSumLeaf;
    std::vector<T> parts(static_cast<std::size_t>(leaves), init);
    parallel_for(ex, leaves, [&](std::int64_t leaf) {
        const std::int64_t lo = leaf * detail::kSumLeaf;
        const std::int64_t hi = std::min(n, lo + detail::kSumLeaf);
        T acc = init;
        for (std::int64_t i = lo; i < hi; ++i) acc += term(i);
        parts[static_cast<std::size_t>(leaf)] = acc;
    });
    return detail::pairwise_combine(parts, 0, leaves);
}

}  // namespace asep
