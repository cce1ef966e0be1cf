#pragma once

// Internal: ascending-m block loop shared by the energy, force and
// block-assembly paths, with the adaptive stopping rule and an OpenMP
// batch scheme whose results are bitwise independent of scheduling.

#include <cmath>
#include <exception>
#include <utility>
#include <vector>

#include "casmp/coupling.hpp"
#include "casmp/exec.hpp"

namespace casmp::detail {

/// Evaluate make(m) for a contiguous range of m, optionally in parallel.
/// Exceptions from workers are captured and rethrown after the join.
template <class T, class MakeFn>
std::vector<T> eval_batch(int m_lo, int m_hi, Exec exec, MakeFn&& make) {
    std::vector<T> batch(static_cast<std::size_t>(m_hi - m_lo + 1));
    std::exception_ptr err;
#ifdef _OPENMP
    if (exec == Exec::parallel && m_hi > m_lo) {
#pragma omp parallel for schedule(dynamic)
        for (int m = m_lo; m <= m_hi; ++m) {
            try {
                batch[static_cast<std::size_t>(m - m_lo)] = make(m);
            } catch (...) {
#pragma omp critical(casmp_eval_batch_err)
                if (!err) err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
        return batch;
    }
#endif
    (void)exec;
    for (int m = m_lo; m <= m_hi; ++m)
        batch[static_cast<std::size_t>(m - m_lo)] = make(m);
    return batch;
}

/// Run blocks m = 0, 1, ... under the given truncation policy.
///
/// fixed:    all m up to resolved_m_max().
/// adaptive: batches ascending in m; after each batch the results are
///           consumed in order and the loop stops at the first m >= 1 whose
///           |contribution| drops below (tol/10) |accumulated|. Blocks past
///           the stopping m are discarded, so the included set (and every
///           downstream sum) matches the serial reference exactly.
template <class T, class MakeFn, class ContribFn>
std::vector<T> run_blocks(int l_max, const Truncation& truncation, Exec exec,
                          MakeFn&& make, ContribFn&& contrib) {
    truncation.validate();
    if (truncation.m_policy == Truncation::MPolicy::fixed) {
        return eval_batch<T>(0, truncation.resolved_m_max(), exec, make);
    }

    const double threshold = truncation.tol / 10.0;
    const int batch_size = exec == Exec::parallel ? std::max(1, hardware_threads()) : 1;
    std::vector<T> out;
    double accum = 0.0;
    int m = 0;
    while (m <= l_max) {
        const int hi = std::min(l_max, m + batch_size - 1);
        auto batch = eval_batch<T>(m, hi, exec, make);
        bool stopped = false;
        for (int i = 0; i <= hi - m; ++i) {
            const double c = contrib(batch[static_cast<std::size_t>(i)]);
            accum += c;
            out.push_back(std::move(batch[static_cast<std::size_t>(i)]));
            if (m + i >= 1 && std::abs(c) < threshold * std::abs(accum)) {
                stopped = true;
                break;
            }
        }
        if (stopped) break;
        m = hi + 1;
    }
    return out;
}

} // namespace casmp::detail
