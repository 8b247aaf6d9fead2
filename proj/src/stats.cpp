#include "refcover/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "refcover/common.hpp"
#include "refcover/rng.hpp"

namespace refcover {

namespace {

// Regularized incomplete beta I_x(a, b) via the Lentz continued fraction.
double betacf(double a, double b, double x) {
  const double tiny = 1e-300;
  const double eps = 1e-15;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 300; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) break;
  }
  return h;
}

double betai(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double lbeta = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                 a * std::log(x) + b * std::log(1.0 - x);
  double front = std::exp(lbeta);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

// concordant when the metric agrees with the human better/worse call; a
// tie or disagreement classifies per policy (a tie is never concordant)
struct PairClass {
  long concordant = 0, discordant = 0, ties = 0;
};

double metric_score(const SegmentScores& scores, const std::string& system,
                    int segment) {
  auto sit = scores.find(system);
  if (sit == scores.end())
    throw data_error("no metric scores for system '" + system + "'");
  auto git = sit->second.find(segment);
  if (git == sit->second.end())
    throw data_error("no metric score for system '" + system +
                     "' on segment " + std::to_string(segment));
  return git->second;
}

int classify(const RankPair& pair, const SegmentScores& scores) {
  double b = metric_score(scores, pair.better, pair.segment);
  double w = metric_score(scores, pair.worse, pair.segment);
  if (b > w) return 1;
  if (b < w) return -1;
  return 0;
}

TauResult tau_from_classes(const std::vector<int>& classes,
                           TiesPolicy ties) {
  TauResult r;
  for (int c : classes) {
    if (c > 0) {
      ++r.concordant;
    } else if (c < 0) {
      ++r.discordant;
    } else {
      ++r.ties;
      if (ties == TiesPolicy::discordant) ++r.discordant;
    }
  }
  r.pairs = r.concordant + r.discordant;
  if (r.pairs == 0) throw data_error("no usable pairs for tau");
  r.tau = static_cast<double>(r.concordant - r.discordant) /
          static_cast<double>(r.pairs);
  return r;
}

}  // namespace

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size())
    throw usage_error("pearson: length mismatch");
  if (x.size() < 3) throw data_error("pearson: need at least 3 points");
  double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0)
    throw data_error("pearson: zero variance input");
  return sxy / std::sqrt(sxx * syy);
}

double student_t_sf(double t, double df) {
  if (df <= 0.0) throw usage_error("t distribution needs df > 0");
  if (t == 0.0) return 0.5;
  double x = df / (df + t * t);
  double tail = 0.5 * betai(df / 2.0, 0.5, x);
  return t > 0.0 ? tail : 1.0 - tail;
}

WilliamsResult williams_test(double r12, double r13, double r23, int n) {
  if (n < 4) throw data_error("williams test needs n >= 4");
  for (double r : {r12, r13, r23})
    if (!(r > -1.0 && r < 1.0))
      throw data_error("correlations must lie strictly inside (-1, 1)");
  // grouped so the value is bitwise symmetric under r12 <-> r13, which
  // makes t exactly antisymmetric
  double k = 1.0 - (r12 * r12 + r13 * r13) - r23 * r23 +
             2.0 * (r12 * r13) * r23;
  if (k <= 0.0)
    throw data_error("degenerate correlation matrix (K <= 0)");
  double nn = static_cast<double>(n);
  double mean2 = (r12 + r13) * (r12 + r13) / 4.0;
  double cube = (1.0 - r23) * (1.0 - r23) * (1.0 - r23);
  double denom =
      std::sqrt(2.0 * k * (nn - 1.0) / (nn - 3.0) + mean2 * cube);
  if (!(denom > 0.0)) throw data_error("williams: zero denominator");
  WilliamsResult out;
  out.n = n;
  out.t = (r12 - r13) * std::sqrt((nn - 1.0) * (1.0 + r23)) / denom;
  out.p = student_t_sf(out.t, nn - 3.0);
  return out;
}

std::vector<RankPair> da_to_relative_ranking(const SegmentScores& da,
                                             double min_gap) {
  if (min_gap <= 0.0) throw usage_error("min_gap must be positive");
  // segment -> (system, score), systems in name order via the outer map
  std::map<int, std::vector<std::pair<std::string, double>>> by_segment;
  for (const auto& [system, segs] : da)
    for (const auto& [seg, score] : segs)
      by_segment[seg].emplace_back(system, score);
  std::vector<RankPair> pairs;
  for (const auto& [seg, entries] : by_segment) {
    for (std::size_t i = 0; i < entries.size(); ++i) {
      for (std::size_t j = i + 1; j < entries.size(); ++j) {
        double diff = entries[i].second - entries[j].second;
        if (diff >= min_gap)
          pairs.push_back({seg, entries[i].first, entries[j].first});
        else if (-diff >= min_gap)
          pairs.push_back({seg, entries[j].first, entries[i].first});
      }
    }
  }
  return pairs;
}

TauResult kendall_tau_rr(const std::vector<RankPair>& pairs,
                         const SegmentScores& metric, TiesPolicy ties) {
  if (pairs.empty()) throw data_error("no relative-ranking pairs");
  std::vector<int> classes(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i)
    classes[i] = classify(pairs[i], metric);
  return tau_from_classes(classes, ties);
}

FlipResult decision_flips(const std::vector<RankPair>& pairs,
                          const SegmentScores& baseline,
                          const SegmentScores& candidate) {
  if (pairs.empty()) throw data_error("no relative-ranking pairs");
  FlipResult out;
  out.total = static_cast<long>(pairs.size());
  for (const auto& pair : pairs) {
    bool base_conc = classify(pair, baseline) > 0;
    bool cand_conc = classify(pair, candidate) > 0;
    if (!base_conc && cand_conc)
      ++out.improved;
    else if (base_conc && !cand_conc)
      ++out.degraded;
    else
      ++out.unchanged;
  }
  out.improved_pct =
      100.0 * static_cast<double>(out.improved) / out.total;
  out.degraded_pct =
      100.0 * static_cast<double>(out.degraded) / out.total;
  return out;
}

double bootstrap_tau_significance(const std::vector<RankPair>& pairs,
                                  const SegmentScores& baseline,
                                  const SegmentScores& candidate,
                                  int iterations, std::uint64_t seed,
                                  unsigned threads, TiesPolicy ties) {
  if (pairs.empty()) throw data_error("no relative-ranking pairs");
  if (iterations < 1) throw usage_error("iterations must be positive");
  // classify once; resamples only reshuffle these outcomes
  std::vector<int> base_cls(pairs.size()), cand_cls(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    base_cls[i] = classify(pairs[i], baseline);
    cand_cls[i] = classify(pairs[i], candidate);
  }
  const std::size_t npairs = pairs.size();
  std::vector<char> keep(static_cast<std::size_t>(iterations), 0);
  parallel_for(static_cast<std::size_t>(iterations), threads,
               [&](std::size_t lo, std::size_t hi) {
                 std::vector<int> b(npairs), c(npairs);
                 for (std::size_t it = lo; it < hi; ++it) {
                   Rng rng(seed + it);
                   for (std::size_t i = 0; i < npairs; ++i) {
                     std::size_t pick =
                         static_cast<std::size_t>(rng.below(npairs));
                     b[i] = base_cls[pick];
                     c[i] = cand_cls[pick];
                   }
                   double tb = tau_from_classes(b, ties).tau;
                   double tc = tau_from_classes(c, ties).tau;
                   keep[it] = tc <= tb ? 1 : 0;
                 }
               });
  long hits = 0;
  for (char k : keep) hits += k;
  return static_cast<double>(hits) / static_cast<double>(iterations);
}

std::vector<CoverageTable> ngram_coverage(
    const std::vector<std::vector<Tokens>>& orig_refs,
    const std::vector<std::vector<Tokens>>& extra_refs,
    const std::vector<std::vector<Tokens>>& system_outputs,
    const std::vector<int>& orders) {
  if (orders.empty()) throw usage_error("no n-gram orders requested");
  std::size_t nseg = orig_refs.size();
  if (extra_refs.size() != nseg)
    throw data_error("extra references cover " +
                     std::to_string(extra_refs.size()) + " segments, " +
                     "original " + std::to_string(nseg));
  for (const auto& sys : system_outputs)
    if (sys.size() != nseg)
      throw data_error("system output segment count mismatch");
  int max_order = *std::max_element(orders.begin(), orders.end());

  std::vector<std::unordered_map<std::string, long>> rewarded(orders.size());
  std::vector<std::unordered_map<std::string, long>> unrewarded(
      orders.size());
  for (std::size_t s = 0; s < nseg; ++s) {
    std::unordered_set<std::string> in_orig, in_extra;
    for (const auto& r : orig_refs[s]) {
      NGramMultiset c = extract_ngrams(r, max_order);
      for (int n : orders)
        for (const auto& [key, cnt] : c.at(n)) in_orig.insert(key);
    }
    for (const auto& r : extra_refs[s]) {
      NGramMultiset c = extract_ngrams(r, max_order);
      for (int n : orders)
        for (const auto& [key, cnt] : c.at(n)) in_extra.insert(key);
    }
    for (std::size_t oi = 0; oi < orders.size(); ++oi) {
      std::unordered_set<std::string> seen;  // union over systems
      for (const auto& sys : system_outputs) {
        NGramMultiset c = extract_ngrams(sys[s], max_order);
        for (const auto& [key, cnt] : c.at(orders[oi])) seen.insert(key);
      }
      for (const auto& key : seen) {
        if (in_orig.count(key)) continue;
        if (in_extra.count(key))
          rewarded[oi][key] += 1;
        else
          unrewarded[oi][key] += 1;
      }
    }
  }

  auto to_entries = [](const std::unordered_map<std::string, long>& m) {
    std::vector<CoverageEntry> out;
    out.reserve(m.size());
    for (const auto& [key, cnt] : m)
      out.push_back({join_tokens(NGramMultiset::tokens_of(key)), cnt});
    std::sort(out.begin(), out.end(),
              [](const CoverageEntry& a, const CoverageEntry& b) {
                if (a.count != b.count) return a.count > b.count;
                return a.ngram < b.ngram;
              });
    return out;
  };
  std::vector<CoverageTable> tables;
  tables.reserve(orders.size());
  for (std::size_t oi = 0; oi < orders.size(); ++oi) {
    CoverageTable t;
    t.order = orders[oi];
    t.rewarded_by_extra = to_entries(rewarded[oi]);
    t.unrewarded_everywhere = to_entries(unrewarded[oi]);
    tables.push_back(std::move(t));
  }
  return tables;
}

std::vector<CurvePoint> subset_correlation_curve(
    const SegmentScores& metric, const std::map<std::string, double>& human,
    const std::vector<int>& segments, const std::vector<std::size_t>& sizes,
    int samples, std::uint64_t seed, unsigned threads) {
  if (segments.empty()) throw data_error("no segments for subset curve");
  if (samples < 1) throw usage_error("samples must be positive");
  if (human.size() < 3)
    throw data_error("need at least 3 systems for correlation");
  std::vector<std::string> systems;
  std::vector<double> human_scores;
  for (const auto& [name, score] : human) {
    systems.push_back(name);
    human_scores.push_back(score);
  }
  // dense score table: system x segment, validated up front
  std::vector<std::vector<double>> table(systems.size());
  for (std::size_t s = 0; s < systems.size(); ++s) {
    table[s].resize(segments.size());
    for (std::size_t g = 0; g < segments.size(); ++g)
      table[s][g] = metric_score(metric, systems[s], segments[g]);
  }

  std::vector<CurvePoint> curve(sizes.size());
  for (std::size_t si = 0; si < sizes.size(); ++si) {
    std::size_t size = sizes[si];
    if (size == 0 || size > segments.size())
      throw usage_error("subset size " + std::to_string(size) +
                        " outside 1.." + std::to_string(segments.size()));
    CurvePoint& point = curve[si];
    point.size = size;
    point.rs.assign(static_cast<std::size_t>(samples), 0.0);
    parallel_for(
        static_cast<std::size_t>(samples), threads,
        [&](std::size_t lo, std::size_t hi) {
          for (std::size_t j = lo; j < hi; ++j) {
            Rng rng(seed + si * static_cast<std::size_t>(samples) + j);
            std::vector<std::size_t> subset =
                rng.sample(segments.size(), size);
            // canonical summation order: the subset is a set, and sorting
            // keeps equal subsets bitwise-equal regardless of draw order
            std::sort(subset.begin(), subset.end());
            std::vector<double> sys_scores(systems.size());
            for (std::size_t s = 0; s < systems.size(); ++s) {
              double sum = 0.0;
              for (std::size_t g : subset) sum += table[s][g];
              sys_scores[s] = sum / static_cast<double>(size);
            }
            point.rs[j] = pearson(sys_scores, human_scores);
          }
        });
    double mean = 0.0;
    for (double r : point.rs) mean += r;
    mean /= static_cast<double>(samples);
    double var = 0.0;
    for (double r : point.rs) var += (r - mean) * (r - mean);
    point.mean_r = mean;
    point.stddev = samples > 1
                       ? std::sqrt(var / static_cast<double>(samples - 1))
                       : 0.0;
  }
  return curve;
}

}  // namespace refcover
