#include "refcover/diversity.hpp"

#include <unordered_set>

#include "refcover/common.hpp"
#include "refcover/rng.hpp"

namespace refcover {

BowDelta delta_bow(const Tokens& a, const Tokens& b) {
  if (a.empty() && b.empty())
    throw data_error("delta_bow: both segments empty");
  std::unordered_set<std::string> ua(a.begin(), a.end());
  std::unordered_set<std::string> ub(b.begin(), b.end());
  std::size_t common = 0;
  for (const auto& w : ua)
    if (ub.count(w)) ++common;
  double mean_len = (static_cast<double>(a.size()) + b.size()) / 2.0;
  double ratio = static_cast<double>(common) / mean_len;
  if (ratio > 1.0) return {1.0, true};
  return {ratio, false};
}

double diversity_score(
    std::size_t n,
    const std::function<double(std::size_t, std::size_t)>& delta) {
  if (n < 2) throw usage_error("diversity needs at least two paraphrases");
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) sum += 1.0 - delta(i, j);
  return sum / (static_cast<double>(n) * static_cast<double>(n - 1));
}

double ds_bow(const std::vector<Tokens>& set, std::size_t* clamp_count) {
  return diversity_score(set.size(), [&](std::size_t i, std::size_t j) {
    BowDelta d = delta_bow(set[i], set[j]);
    if (d.clamped && clamp_count) ++*clamp_count;
    return d.value;
  });
}

double ds_tree(const std::vector<ParseTree>& parses,
               const KernelConfig& cfg) {
  return diversity_score(parses.size(), [&](std::size_t i, std::size_t j) {
    return normalized_tree_similarity(parses[i], parses[j], cfg);
  });
}

DiversityReport corpus_diversity(
    const std::vector<std::vector<Tokens>>& sets,
    const std::vector<std::vector<ParseTree>>* parses,
    const KernelConfig& cfg, bool allow_ragged, unsigned threads) {
  if (sets.empty()) throw data_error("no paraphrase sets");
  DiversityReport rep;
  rep.segments = sets.size();
  rep.set_size = sets[0].size();
  for (std::size_t s = 0; s < sets.size(); ++s) {
    if (sets[s].size() < 2)
      throw data_error("segment " + std::to_string(s) +
                       " has fewer than two paraphrases");
    if (sets[s].size() != rep.set_size) rep.ragged = true;
  }
  if (rep.ragged) {
    if (!allow_ragged)
      throw data_error(
          "paraphrase counts differ across segments (pass the ragged flag "
          "to allow)");
    rep.set_size = 0;
  }
  if (parses) {
    if (parses->size() != sets.size())
      throw data_error("parse file covers " +
                       std::to_string(parses->size()) + " segments, text " +
                       std::to_string(sets.size()));
    for (std::size_t s = 0; s < sets.size(); ++s)
      if ((*parses)[s].size() != sets[s].size())
        throw data_error("segment " + std::to_string(s) + " has " +
                         std::to_string(sets[s].size()) + " paraphrases but " +
                         std::to_string((*parses)[s].size()) + " parses");
  }

  rep.bow.assign(sets.size(), 0.0);
  std::vector<std::size_t> clamps(sets.size(), 0);
  if (parses) rep.tree.assign(sets.size(), 0.0);
  parallel_for(sets.size(), threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t s = lo; s < hi; ++s) {
      rep.bow[s] = ds_bow(sets[s], &clamps[s]);
      if (parses) rep.tree[s] = ds_tree((*parses)[s], cfg);
    }
  });
  for (std::size_t s = 0; s < sets.size(); ++s) {
    rep.mean_bow += rep.bow[s];
    rep.bow_clamped += clamps[s];
    if (parses) rep.mean_tree += rep.tree[s];
  }
  rep.mean_bow /= static_cast<double>(sets.size());
  if (parses) rep.mean_tree /= static_cast<double>(sets.size());
  if (rep.bow_clamped > 0)
    log_warn(std::to_string(rep.bow_clamped) +
             " bag-of-words overlap ratios exceeded 1 and were clamped");
  return rep;
}

}  // namespace refcover
