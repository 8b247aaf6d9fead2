#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace refcover {

// Dense row-major float32 matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<float> data;

  float* row(std::size_t i) { return data.data() + i * cols; }
  const float* row(std::size_t i) const { return data.data() + i * cols; }
};

// Binary layout: rows and cols as little-endian uint64, then rows*cols
// little-endian float32 values, row-major.  Non-finite values are rejected.
Matrix load_matrix(const std::string& path);
void save_matrix(const std::string& path, const Matrix& m);

struct ClusterModel {
  Matrix centroids;  // k x dim
  std::uint64_t seed = 0;
  int iterations_run = 0;
  std::vector<double> sse;  // total within-cluster SSE after each iteration
};

// k-means++ seeding then Lloyd iterations.  Distance ties go to the lowest
// centroid index; an emptied cluster is reseeded to the point farthest from
// its assigned centroid.  Deterministic for a given seed at any thread
// count.
ClusterModel kmeans(const Matrix& x, int k, int max_iters,
                    std::uint64_t seed, unsigned threads);

// Nearest-centroid codes (ties to the lowest index).
std::vector<int> assign_codes(const Matrix& x, const ClusterModel& m,
                              unsigned threads);

// model.bin holds the centroid matrix; model.bin.json records k, dim, seed
// and iteration count.
void save_model(const std::string& path, const ClusterModel& m);
ClusterModel load_model(const std::string& path);

std::string code_token(int code);  // "<cl_7>"

// Prepend "<cl_N> " to each line.  codes out of [0, k) are an error (k <= 0
// skips the upper check); empty lines are allowed but logged.
std::vector<std::string> prefix_codes(const std::vector<std::string>& lines,
                                      const std::vector<int>& codes, int k);

struct StrippedLine {
  std::string text;
  int code = -1;  // -1 when the line had no cluster prefix
};

// Remove one leading "<cl_N>" and a single following space if present.
std::vector<StrippedLine> strip_codes(const std::vector<std::string>& lines);

}  // namespace refcover
