#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace gck::detail {

// Ordered parallel map: results come back in input order whatever the worker count.
template <typename In, typename Fn>
auto parallel_map(const std::vector<In>& input, int workers, Fn fn)
    -> std::vector<decltype(fn(input.front()))> {
  using Out = decltype(fn(input.front()));
  std::vector<Out> out(input.size());
  if (workers <= 1 || input.size() < 64) {
    for (std::size_t i = 0; i < input.size(); ++i) out[i] = fn(input[i]);
    return out;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (input.size() + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    std::size_t begin = w * chunk, end = std::min(input.size(), begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      for (std::size_t i = begin; i < end; ++i) out[i] = fn(input[i]);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace gck::detail
