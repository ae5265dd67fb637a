#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace stasep::parallel {

inline int thread_count() {
  if (const char* env = std::getenv("STASEP_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

// Replica-parallel runner with deterministic results: replicas are split
// into fixed chunks, each chunk accumulates independently (keyed only by
// replica index), and the caller reduces the returned chunk accumulators in
// index order. Thread scheduling cannot change any outcome.
template <typename Acc, typename PerReplica>
std::vector<Acc> run_replicas(long n_replicas, long chunk_size, PerReplica per_replica) {
  const long nchunks = (n_replicas + chunk_size - 1) / chunk_size;
  std::vector<Acc> out(static_cast<std::size_t>(nchunks));
  std::atomic<long> next{0};
  auto worker = [&]() {
    for (;;) {
      const long c = next.fetch_add(1);
      if (c >= nchunks) return;
      Acc acc{};
      const long lo = c * chunk_size;
      const long hi = std::min(n_replicas, lo + chunk_size);
      for (long r = lo; r < hi; ++r) per_replica(r, acc);
      out[static_cast<std::size_t>(c)] = std::move(acc);
    }
  };
  const int threads = static_cast<int>(std::min<long>(thread_count(), nchunks));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return out;
}

}  // namespace stasep::parallel
