#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "tps/errors.hpp"

namespace tps {

struct ParallelOptions {
  int workers = 1;
  // Called with (completed, total) as jobs finish; may be empty.
  std::function<void(size_t, size_t)> progress;
};

// Order-preserving parallel map over pure jobs. Results are written by input
// index, so the output is identical to serial execution for any worker count.
// The first failing job (by input order) is rethrown after all workers join.
template <typename Result>
std::vector<Result> run_parallel(size_t n_jobs, const std::function<Result(size_t)>& job,
                                 const ParallelOptions& opts = {}) {
  if (opts.workers < 1) throw InvalidInput("run_parallel: workers must be >= 1");
  std::vector<Result> results(n_jobs);
  if (n_jobs == 0) return results;

  std::vector<std::exception_ptr> failures(n_jobs);

  if (opts.workers == 1) {
    for (size_t i = 0; i < n_jobs; ++i) {
      try {
        results[i] = job(i);
      } catch (...) {
        failures[i] = std::current_exception();
      }
      if (opts.progress) opts.progress(i + 1, n_jobs);
    }
  } else {
    std::atomic<size_t> next{0};
    std::atomic<size_t> done{0};
    std::mutex progress_mutex;
    auto worker = [&]() {
      for (;;) {
        const size_t i = next.fetch_add(1);
        if (i >= n_jobs) return;
        try {
          results[i] = job(i);
        } catch (...) {
          failures[i] = std::current_exception();
        }
        const size_t completed = done.fetch_add(1) + 1;
        if (opts.progress) {
          std::lock_guard<std::mutex> lock(progress_mutex);
          opts.progress(completed, n_jobs);
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(opts.workers);
    for (int w = 0; w < opts.workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (size_t i = 0; i < n_jobs; ++i) {
    if (failures[i]) std::rethrow_exception(failures[i]);
  }
  return results;
}

}  // namespace tps
