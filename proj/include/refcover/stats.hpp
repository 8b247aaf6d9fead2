#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "refcover/text.hpp"

namespace refcover {

// system -> segment -> score
using SegmentScores = std::map<std::string, std::map<int, double>>;

// Pearson r; needs n >= 3, equal lengths, nonzero variance on both sides.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

// Survival function P(T >= t) of Student's t with df degrees of freedom,
// via the regularized incomplete beta function.
double student_t_sf(double t, double df);

struct WilliamsResult {
  double t;
  double p;  // one-sided, testing r12 > r13
  int n;
};

// Williams' test for the difference between two correlations r12, r13 that
// share variable 1 (the human scores), with r23 between the two metrics.
WilliamsResult williams_test(double r12, double r13, double r23, int n);

struct RankPair {
  int segment;
  std::string better;
  std::string worse;
};

// Expand segment-level judgments into relative-ranking pairs: every system
// pair on a segment whose absolute score difference is at least min_gap.
std::vector<RankPair> da_to_relative_ranking(const SegmentScores& da,
                                             double min_gap = 25.0);

enum class TiesPolicy { discordant, excluded };

struct TauResult {
  double tau;
  long concordant = 0;
  long discordant = 0;
  long ties = 0;   // tied metric scores (counted per policy)
  long pairs = 0;  // pairs entering the denominator
};

// Kendall's tau over relative-ranking pairs: concordant when the metric
// scores the better system strictly higher.  Ties count as discordant by
// default (excluded drops them).  A missing metric score is an error naming
// the system and segment.
TauResult kendall_tau_rr(const std::vector<RankPair>& pairs,
                         const SegmentScores& metric,
                         TiesPolicy ties = TiesPolicy::discordant);

struct FlipResult {
  long improved = 0;   // baseline discordant, candidate concordant
  long degraded = 0;   // baseline concordant, candidate discordant
  long unchanged = 0;
  long total = 0;
  double improved_pct = 0.0;
  double degraded_pct = 0.0;
};

// Under ties-as-discordant this satisfies
//   tau_candidate - tau_baseline = 2 * (improved - degraded) / total
// exactly (in integer counts).
FlipResult decision_flips(const std::vector<RankPair>& pairs,
                          const SegmentScores& baseline,
                          const SegmentScores& candidate);

// Paired bootstrap over the pair list; p = fraction of resamples where the
// candidate tau is <= the baseline tau.  Iteration i draws from an Rng
// seeded seed + i, so results are identical at any thread count.
double bootstrap_tau_significance(const std::vector<RankPair>& pairs,
                                  const SegmentScores& baseline,
                                  const SegmentScores& candidate,
                                  int iterations, std::uint64_t seed,
                                  unsigned threads,
                                  TiesPolicy ties = TiesPolicy::discordant);

struct CoverageEntry {
  std::string ngram;  // space-joined tokens
  long count;         // segments whose system n-gram set contained it
};

struct CoverageTable {
  int order;
  std::vector<CoverageEntry> rewarded_by_extra;      // absent in original
                                                     // refs, present in the
                                                     // extra ones
  std::vector<CoverageEntry> unrewarded_everywhere;  // absent in both
};

// For each segment take the union of system-output n-grams, then classify
// the ones missing from the original reference(s) by whether any extra
// reference contains them.  Entries sort by count desc, then key.
std::vector<CoverageTable> ngram_coverage(
    const std::vector<std::vector<Tokens>>& orig_refs,
    const std::vector<std::vector<Tokens>>& extra_refs,
    const std::vector<std::vector<Tokens>>& system_outputs,
    const std::vector<int>& orders);

struct CurvePoint {
  std::size_t size;
  double mean_r = 0.0;
  double stddev = 0.0;
  std::vector<double> rs;  // per sample
};

// Correlation as a function of test-set size: sample `samples` random
// segment subsets per size, score each system as its mean metric score on
// the subset, and correlate against the full-set human system scores.
// Sample j of size index s uses an Rng seeded seed + s*samples + j.
std::vector<CurvePoint> subset_correlation_curve(
    const SegmentScores& metric, const std::map<std::string, double>& human,
    const std::vector<int>& segments, const std::vector<std::size_t>& sizes,
    int samples, std::uint64_t seed, unsigned threads);

}  // namespace refcover
