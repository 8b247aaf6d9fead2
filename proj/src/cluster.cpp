#include "refcover/cluster.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

#include "refcover/common.hpp"
#include "refcover/io.hpp"
#include "refcover/rng.hpp"

namespace refcover {

namespace {

// squared L2 in double precision, accumulated in index order
double dist2(const float* a, const float* b, std::size_t d) {
  double sum = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    double diff = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    sum += diff * diff;
  }
  return sum;
}

std::uint64_t load_u64le(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

void store_u64le(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<char>(v & 0xff));
    v >>= 8;
  }
}

}  // namespace

Matrix load_matrix(const std::string& path) {
  std::string bytes = read_file(path);
  if (bytes.size() < 16)
    throw data_error(path + ": truncated matrix header");
  const unsigned char* p =
      reinterpret_cast<const unsigned char*>(bytes.data());
  Matrix m;
  m.rows = static_cast<std::size_t>(load_u64le(p));
  m.cols = static_cast<std::size_t>(load_u64le(p + 8));
  if (m.rows == 0 || m.cols == 0)
    throw data_error(path + ": empty matrix");
  std::size_t want = 16 + m.rows * m.cols * 4;
  if (bytes.size() != want)
    throw data_error(path + ": expected " + std::to_string(want) +
                     " bytes for " + std::to_string(m.rows) + "x" +
                     std::to_string(m.cols) + ", got " +
                     std::to_string(bytes.size()));
  m.data.resize(m.rows * m.cols);
  // float32 little-endian; reassemble portably
  const unsigned char* q = p + 16;
  for (std::size_t i = 0; i < m.data.size(); ++i, q += 4) {
    std::uint32_t bits = static_cast<std::uint32_t>(q[0]) |
                         (static_cast<std::uint32_t>(q[1]) << 8) |
                         (static_cast<std::uint32_t>(q[2]) << 16) |
                         (static_cast<std::uint32_t>(q[3]) << 24);
    float f;
    std::memcpy(&f, &bits, 4);
    if (!std::isfinite(f))
      throw data_error(path + ": non-finite value at index " +
                       std::to_string(i));
    m.data[i] = f;
  }
  return m;
}

void save_matrix(const std::string& path, const Matrix& m) {
  if (m.data.size() != m.rows * m.cols)
    throw usage_error("matrix shape does not match its data");
  std::string out;
  out.reserve(16 + m.data.size() * 4);
  store_u64le(out, m.rows);
  store_u64le(out, m.cols);
  for (float f : m.data) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    for (int i = 0; i < 4; ++i) {
      out.push_back(static_cast<char>(bits & 0xff));
      bits >>= 8;
    }
  }
  write_file_atomic(path, out);
}

ClusterModel kmeans(const Matrix& x, int k, int max_iters,
                    std::uint64_t seed, unsigned threads) {
  if (k < 1) throw usage_error("k must be at least 1");
  if (static_cast<std::size_t>(k) > x.rows)
    throw usage_error("k exceeds the number of points");
  if (max_iters < 1) throw usage_error("max_iters must be at least 1");
  for (float f : x.data)
    if (!std::isfinite(f)) throw data_error("non-finite embedding value");

  const std::size_t n = x.rows, d = x.cols;
  const std::size_t kk = static_cast<std::size_t>(k);
  Rng rng(seed);

  ClusterModel model;
  model.seed = seed;
  model.centroids.rows = kk;
  model.centroids.cols = d;
  model.centroids.data.assign(kk * d, 0.0f);

  // k-means++ seeding
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  std::size_t first = static_cast<std::size_t>(rng.below(n));
  std::copy_n(x.row(first), d, model.centroids.row(0));
  for (std::size_t c = 1; c < kk; ++c) {
    const float* prev = model.centroids.row(c - 1);
    parallel_for(n, threads, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        double dd = dist2(x.row(i), prev, d);
        if (dd < d2[i]) d2[i] = dd;
      }
    });
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += d2[i];
    std::size_t pick;
    if (total > 0.0) {
      double r = rng.real() * total;
      double cum = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        cum += d2[i];
        if (cum > r) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<std::size_t>(rng.below(n));  // all points coincide
    }
    std::copy_n(x.row(pick), d, model.centroids.row(c));
  }

  // Lloyd iterations
  std::vector<int> assign(n, -1);
  std::vector<double> adist(n, 0.0);
  for (int iter = 0; iter < max_iters; ++iter) {
    std::atomic<bool> changed{false};
    parallel_for(n, threads, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        int best = 0;
        double bd = dist2(x.row(i), model.centroids.row(0), d);
        for (std::size_t c = 1; c < kk; ++c) {
          double dd = dist2(x.row(i), model.centroids.row(c), d);
          if (dd < bd) {  // strict: ties keep the lower index
            bd = dd;
            best = static_cast<int>(c);
          }
        }
        adist[i] = bd;
        if (assign[i] != best) {
          assign[i] = best;
          changed.store(true, std::memory_order_relaxed);
        }
      }
    });

    // means, accumulated sequentially in point order
    std::vector<double> sums(kk * d, 0.0);
    std::vector<long> counts(kk, 0);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t c = static_cast<std::size_t>(assign[i]);
      const float* row = x.row(i);
      for (std::size_t j = 0; j < d; ++j)
        sums[c * d + j] += static_cast<double>(row[j]);
      counts[c] += 1;
    }
    std::vector<char> claimed(n, 0);
    for (std::size_t c = 0; c < kk; ++c) {
      if (counts[c] > 0) {
        for (std::size_t j = 0; j < d; ++j)
          model.centroids.row(c)[j] =
              static_cast<float>(sums[c * d + j] / counts[c]);
      } else {
        // reseed an emptied cluster to the farthest unclaimed point
        std::size_t far = 0;
        double fd = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (!claimed[i] && adist[i] > fd) {
            fd = adist[i];
            far = i;
          }
        }
        claimed[far] = 1;
        std::copy_n(x.row(far), d, model.centroids.row(c));
      }
    }

    double sse = 0.0;
    parallel_for(n, threads, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i)
        adist[i] = dist2(x.row(i),
                         model.centroids.row(
                             static_cast<std::size_t>(assign[i])),
                         d);
    });
    for (std::size_t i = 0; i < n; ++i) sse += adist[i];
    model.sse.push_back(sse);
    model.iterations_run = iter + 1;
    if (!changed.load(std::memory_order_relaxed)) break;
  }
  return model;
}

std::vector<int> assign_codes(const Matrix& x, const ClusterModel& m,
                              unsigned threads) {
  if (x.cols != m.centroids.cols)
    throw data_error("embedding dimension " + std::to_string(x.cols) +
                     " does not match model dimension " +
                     std::to_string(m.centroids.cols));
  std::vector<int> codes(x.rows, 0);
  parallel_for(x.rows, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      int best = 0;
      double bd = dist2(x.row(i), m.centroids.row(0), x.cols);
      for (std::size_t c = 1; c < m.centroids.rows; ++c) {
        double dd = dist2(x.row(i), m.centroids.row(c), x.cols);
        if (dd < bd) {
          bd = dd;
          best = static_cast<int>(c);
        }
      }
      codes[i] = best;
    }
  });
  return codes;
}

void save_model(const std::string& path, const ClusterModel& m) {
  save_matrix(path, m.centroids);
  nlohmann::json j;
  j["k"] = m.centroids.rows;
  j["dim"] = m.centroids.cols;
  j["seed"] = m.seed;
  j["iterations"] = m.iterations_run;
  if (!m.sse.empty()) j["sse"] = m.sse.back();
  write_file_atomic(path + ".json", j.dump(2) + "\n");
}

ClusterModel load_model(const std::string& path) {
  ClusterModel m;
  m.centroids = load_matrix(path);
  std::ifstream side(path + ".json");
  if (side) {
    nlohmann::json j = nlohmann::json::parse(side, nullptr, false);
    if (!j.is_discarded()) {
      m.seed = j.value("seed", std::uint64_t{0});
      m.iterations_run = j.value("iterations", 0);
    }
  }
  return m;
}

std::string code_token(int code) {
  return "<cl_" + std::to_string(code) + ">";
}

std::vector<std::string> prefix_codes(const std::vector<std::string>& lines,
                                      const std::vector<int>& codes,
                                      int k) {
  if (lines.size() != codes.size())
    throw data_error("have " + std::to_string(lines.size()) +
                     " lines but " + std::to_string(codes.size()) + " codes");
  std::size_t empties = 0;
  std::vector<std::string> out;
  out.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (codes[i] < 0 || (k > 0 && codes[i] >= k))
      throw data_error("code " + std::to_string(codes[i]) + " on line " +
                       std::to_string(i + 1) + " outside [0, " +
                       std::to_string(k) + ")");
    if (lines[i].empty()) ++empties;
    out.push_back(code_token(codes[i]) + " " + lines[i]);
  }
  if (empties > 0)
    log_warn(std::to_string(empties) + " empty lines received a code prefix");
  return out;
}

std::vector<StrippedLine> strip_codes(const std::vector<std::string>& lines) {
  std::vector<StrippedLine> out;
  out.reserve(lines.size());
  for (const auto& line : lines) {
    StrippedLine sl;
    sl.text = line;
    if (line.rfind("<cl_", 0) == 0) {
      std::size_t i = 4;
      std::size_t digits = 0;
      long code = 0;
      while (i < line.size() && line[i] >= '0' && line[i] <= '9') {
        code = code * 10 + (line[i] - '0');
        ++i;
        ++digits;
      }
      if (digits > 0 && i < line.size() && line[i] == '>') {
        ++i;
        if (i < line.size() && line[i] == ' ') ++i;  // one space at most
        sl.text = line.substr(i);
        sl.code = static_cast<int>(code);
      }
    }
    out.push_back(std::move(sl));
  }
  return out;
}

}  // namespace refcover
