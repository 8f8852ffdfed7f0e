#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace ternrep {

/// Worker count used when a caller passes jobs = 0.
inline unsigned default_jobs() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

/// Runs body(worker, begin, end) over contiguous slices of [first, last).
/// Slices are assigned in order, so worker w always sees the w-th slice and
/// callers can merge per-worker results deterministically.
template <class Index, class Body>
void parallel_slices(unsigned jobs, Index first, Index last, Body&& body) {
    if (jobs == 0) jobs = default_jobs();
    const Index span = last - first;
    if (span <= 0) return;
    const auto workers = static_cast<unsigned>(std::min<Index>(static_cast<Index>(jobs), span));
    if (workers <= 1) {
        body(0u, first, last);
        return;
    }
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(workers);
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        Index begin = first + span * w / workers;
        Index end = first + span * (w + 1) / workers;
        threads.emplace_back([&, w, begin, end] {
            try {
                body(w, begin, end);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

/// Number of workers parallel_slices will actually use.
template <class Index>
unsigned slice_count(unsigned jobs, Index first, Index last) {
    if (jobs == 0) jobs = default_jobs();
    const Index span = last - first;
    if (span <= 0) return 0;
    return static_cast<unsigned>(std::min<Index>(static_cast<Index>(jobs), span));
}

}  // namespace ternrep
