#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace refcover {

// Deterministic random source.  mt19937_64 has a fully specified output
// sequence, and all derived sampling below is hand-rolled, so results are
// identical across platforms and standard libraries.  (std::shuffle and the
// std::*_distribution classes are implementation-defined and must not be
// used anywhere results are persisted.)
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  // uniform in [0, n) without modulo bias
  std::uint64_t below(std::uint64_t n);

  // uniform in [0, 1), 53-bit resolution
  double real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Fisher-Yates
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // k distinct indices out of [0, n), in selection order
  std::vector<std::size_t> sample(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 eng_;
};

// Runs fn(begin, end) over contiguous chunks of [0, n).  Deterministic use
// pattern: each index writes its own output slot; any reduction happens
// sequentially afterwards in index order.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t, std::size_t)>& fn);

// --threads if given, else REFCOVER_THREADS, else hardware concurrency.
unsigned resolve_threads(unsigned requested);

}  // namespace refcover
