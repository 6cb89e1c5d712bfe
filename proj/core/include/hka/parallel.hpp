#pragma once

#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace hka {

// Worker cap for parameter sweeps: ASYMP_THREADS if set, hardware concurrency
// otherwise, never less than 1.
inline unsigned sweep_threads() {
  if (const char* env = std::getenv("ASYMP_THREADS")) {
    long n = std::strtol(env, nullptr, 10);
    if (n >= 1) return static_cast<unsigned>(n);
    return 1;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

// Deterministic parallel map: results land by index, so output order never
// depends on scheduling.
template <class In, class Fn>
auto parallel_map(const std::vector<In>& inputs, Fn&& fn, unsigned threads)
    -> std::vector<decltype(fn(inputs.front()))> {
  using Out = decltype(fn(inputs.front()));
  std::vector<Out> out(inputs.size());
  if (threads <= 1 || inputs.size() <= 1) {
    for (std::size_t i = 0; i < inputs.size(); ++i) out[i] = fn(inputs[i]);
    return out;
  }
  threads = std::min<std::size_t>(threads, inputs.size());
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      try {
        for (std::size_t i = t; i < inputs.size(); i += threads) out[i] = fn(inputs[i]);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace hka
