#ifndef CODESIGN_COMMON_PARALLEL_HPP
#define CODESIGN_COMMON_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace codesign {

/// Runs body(i) for i in [0, count) on up to `workers` threads. Items are
/// handed out in contiguous blocks; the body must write only to slot i of
/// its outputs so results do not depend on the worker count. The first
/// exception thrown (lowest index) is rethrown on the calling thread.
template <typename Body>
void parallel_for(std::size_t count, std::size_t workers, Body&& body) {
    workers = std::max<std::size_t>(1, std::min(workers, count));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }

    std::mutex mutex;
    std::exception_ptr first_error;
    std::size_t first_index = count;
    const std::size_t block = (count + workers - 1) / workers;

    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * block;
        const std::size_t end = std::min(count, begin + block);
        if (begin >= end) {
            break;
        }
        threads.emplace_back([&, begin, end] {
            for (std::size_t i = begin; i < end; ++i) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(mutex);
                    if (i < first_index) {
                        first_index = i;
                        first_error = std::current_exception();
                    }
                    return;
                }
            }
        });
    }
    threads.clear();
    if (first_error) {
        std::rethrow_exception(first_error);
    }
}

} // namespace codesign

#endif
