// Copyright 2026 The curvature-lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS-IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Minimal fork-join helpers. Work is handed out in fixed-size chunks through
// an atomic cursor; callers keep per-worker state and combine it with an
// order-independent reduction, so results never depend on the worker count.

#ifndef CURVLAB_PARALLEL_HPP_
#define CURVLAB_PARALLEL_HPP_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace curvlab {

struct Execution {
  unsigned threads = 1;
};

// Runs body(state, i) for i in [0, n); returns one State per worker.
template <class State, class Body>
std::vector<State> parallel_workers(std::size_t n, unsigned threads,
                                    const State& init, Body&& body,
                                    std::size_t chunk = 64) {
  const unsigned workers = std::max(1u, threads);
  std::vector<State> states(workers, init);
  std::atomic<std::size_t> cursor{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto run = [&](unsigned w) {
    try {
      for (;;) {
        const std::size_t begin = cursor.fetch_add(chunk);
        if (begin >= n) break;
        const std::size_t end = std::min(n, begin + chunk);
        for (std::size_t i = begin; i < end; ++i) body(states[w], i);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mu);
      if (!error) error = std::current_exception();
      cursor.store(n);
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return states;
}

// Runs body(i) for i in [0, n). Body must only write to slot i of its output.
template <class Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body,
                  std::size_t chunk = 1) {
  struct Empty {};
  parallel_workers(
      n, threads, Empty{}, [&](Empty&, std::size_t i) { body(i); }, chunk);
}

}  // namespace curvlab

#endif  // CURVLAB_PARALLEL_HPP_
