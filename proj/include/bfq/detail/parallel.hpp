#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace bfq::detail {

/// Runs fn(shard_index, begin, end) over a partition of [0, total) and
/// returns per-shard results in shard order, so reductions that merge in
/// index order are thread-count independent.
template <typename Result, typename Fn>
std::vector<Result> sharded(uint64_t total, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = 1;
  if (total < threads) threads = total ? static_cast<unsigned>(total) : 1;
  std::vector<Result> results(threads);
  if (threads == 1) {
    results[0] = fn(0u, uint64_t{0}, total);
    return results;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  uint64_t chunk = total / threads, extra = total % threads, begin = 0;
  for (unsigned s = 0; s < threads; ++s) {
    uint64_t end = begin + chunk + (s < extra ? 1 : 0);
    pool.emplace_back([&, s, begin, end] { results[s] = fn(s, begin, end); });
    begin = end;
  }
  for (auto& t : pool) t.join();
  return results;
}

}  // namespace bfq::detail
