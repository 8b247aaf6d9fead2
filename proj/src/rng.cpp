#include "refcover/rng.hpp"

#include <cstdlib>
#include <numeric>
#include <thread>

#include "refcover/common.hpp"

namespace refcover {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw usage_error("Rng::below: n must be positive");
  // reject the low partial block so every value in [0, n) is equally likely
  std::uint64_t rem = (-n) % n;  // 2^64 mod n
  for (;;) {
    std::uint64_t r = next();
    if (r >= rem) return r % n;
  }
}

std::vector<std::size_t> Rng::sample(std::size_t n, std::size_t k) {
  if (k > n) throw usage_error("Rng::sample: k exceeds population");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + static_cast<std::size_t>(below(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return idx;
}

void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  std::size_t nthreads = threads == 0 ? 1 : threads;
  if (nthreads > n) nthreads = n;
  if (nthreads <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  std::size_t chunk = (n + nthreads - 1) / nthreads;
  for (std::size_t t = 0; t < nthreads; ++t) {
    std::size_t begin = t * chunk;
    std::size_t end = begin + chunk < n ? begin + chunk : n;
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& th : pool) th.join();
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("REFCOVER_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    log_warn("ignoring invalid REFCOVER_THREADS value");
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

}  // namespace refcover
