#include "refcover/mining.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "refcover/common.hpp"
#include "refcover/rng.hpp"

namespace refcover {

std::vector<std::string> select_top_half(std::vector<ScoredSystem> systems) {
  if (systems.empty()) throw data_error("select_top_half: no systems");
  std::sort(systems.begin(), systems.end(),
            [](const ScoredSystem& a, const ScoredSystem& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.name < b.name;
            });
  std::size_t keep = (systems.size() + 1) / 2;  // ceil(S/2)
  std::vector<std::string> out;
  out.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) out.push_back(systems[i].name);
  return out;
}

std::vector<VotedNgram> find_unrewarded_ngrams(
    const std::vector<Tokens>& refs, const std::vector<Tokens>& voters,
    const std::vector<int>& orders, double threshold) {
  if (voters.empty()) throw data_error("no voter outputs");
  if (orders.empty()) throw usage_error("no n-gram orders requested");
  if (threshold <= 0.0 || threshold > 1.0)
    throw usage_error("vote threshold must lie in (0, 1]");
  int max_order = *std::max_element(orders.begin(), orders.end());
  if (*std::min_element(orders.begin(), orders.end()) < 1)
    throw usage_error("n-gram orders must be positive");

  std::unordered_set<std::string> in_refs;
  for (const auto& r : refs) {
    NGramMultiset counts = extract_ngrams(r, max_order);
    for (int n : orders)
      for (const auto& [key, cnt] : counts.at(n)) in_refs.insert(key);
  }

  // presence votes: an n-gram counts once per voter regardless of frequency
  std::unordered_map<std::string, std::pair<int, long>> votes;  // key -> (order, votes)
  for (const auto& v : voters) {
    NGramMultiset counts = extract_ngrams(v, max_order);
    for (int n : orders) {
      for (const auto& [key, cnt] : counts.at(n)) {
        auto [it, fresh] = votes.try_emplace(key, std::make_pair(n, 0L));
        it->second.second += 1;
      }
    }
  }

  long nvoters = static_cast<long>(voters.size());
  // integer vote floor; the epsilon keeps exact multiples like 0.75*4 == 3
  // from rounding up
  long min_votes = static_cast<long>(
      std::ceil(threshold * static_cast<double>(nvoters) - 1e-9));
  if (min_votes < 1) min_votes = 1;

  std::vector<VotedNgram> out;
  for (const auto& [key, ov] : votes) {
    if (ov.second < min_votes) continue;
    if (in_refs.count(key)) continue;
    out.push_back({key, ov.first, ov.second,
                   static_cast<double>(ov.second) /
                       static_cast<double>(nvoters)});
  }
  std::sort(out.begin(), out.end(),
            [](const VotedNgram& a, const VotedNgram& b) {
              if (a.order != b.order) return a.order < b.order;
              return a.key < b.key;
            });
  return out;
}

std::vector<VotedNgram> filter_subsequences(std::vector<VotedNgram> grams) {
  std::vector<Tokens> toks(grams.size());
  for (std::size_t i = 0; i < grams.size(); ++i)
    toks[i] = NGramMultiset::tokens_of(grams[i].key);
  auto contains = [](const Tokens& big, const Tokens& small) {
    if (small.size() > big.size()) return false;
    for (std::size_t start = 0; start + small.size() <= big.size(); ++start) {
      bool hit = true;
      for (std::size_t k = 0; k < small.size(); ++k) {
        if (big[start + k] != small[k]) {
          hit = false;
          break;
        }
      }
      if (hit) return true;
    }
    return false;
  };
  std::vector<VotedNgram> out;
  for (std::size_t i = 0; i < grams.size(); ++i) {
    bool subsumed = false;
    for (std::size_t j = 0; j < grams.size(); ++j) {
      if (i == j || toks[j].size() <= toks[i].size()) continue;
      if (contains(toks[j], toks[i])) {
        subsumed = true;
        break;
      }
    }
    if (!subsumed) out.push_back(std::move(grams[i]));
  }
  return out;
}

ConstraintSet build_constraints(
    const std::vector<std::vector<Tokens>>& refs_per_segment,
    const std::map<std::string, std::vector<Tokens>>& systems,
    const std::vector<std::string>& voters, const std::vector<int>& orders,
    double threshold, unsigned threads) {
  if (voters.empty()) throw data_error("no voting systems");
  std::size_t nseg = refs_per_segment.size();
  std::vector<const std::vector<Tokens>*> voter_outputs;
  voter_outputs.reserve(voters.size());
  for (const auto& name : voters) {
    auto it = systems.find(name);
    if (it == systems.end())
      throw data_error("voting system '" + name + "' has no outputs");
    if (it->second.size() != nseg)
      throw data_error("system '" + name + "' has " +
                       std::to_string(it->second.size()) + " segments, refs " +
                       std::to_string(nseg));
    voter_outputs.push_back(&it->second);
  }

  ConstraintSet set;
  set.voters = voters;
  set.orders = orders;
  set.threshold = threshold;
  set.records.resize(nseg);
  parallel_for(nseg, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t s = lo; s < hi; ++s) {
      std::vector<Tokens> seg_votes;
      seg_votes.reserve(voter_outputs.size());
      for (const auto* sys : voter_outputs) seg_votes.push_back((*sys)[s]);
      std::vector<VotedNgram> grams = filter_subsequences(
          find_unrewarded_ngrams(refs_per_segment[s], seg_votes, orders,
                                 threshold));
      std::sort(grams.begin(), grams.end(),
                [](const VotedNgram& a, const VotedNgram& b) {
                  return a.key < b.key;
                });
      ConstraintRecord rec;
      rec.segment = s;
      for (const auto& g : grams) {
        rec.constraints.push_back(join_tokens(NGramMultiset::tokens_of(g.key)));
        rec.votes.push_back(g.fraction);
      }
      set.records[s] = std::move(rec);
    }
  });
  return set;
}

std::string constraints_to_jsonl(const ConstraintSet& set) {
  std::string out;
  for (const auto& rec : set.records) {
    nlohmann::json j;
    j["segment"] = rec.segment;
    j["constraints"] = rec.constraints;
    j["votes"] = rec.votes;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<Split> split_protocol(std::vector<std::string> system_names,
                                  int repeats, std::uint64_t seed) {
  if (system_names.size() < 2)
    throw data_error("split protocol needs at least two systems");
  if (repeats < 1) throw usage_error("repeats must be positive");
  std::sort(system_names.begin(), system_names.end());
  system_names.erase(
      std::unique(system_names.begin(), system_names.end()),
      system_names.end());
  std::vector<Split> out;
  out.reserve(static_cast<std::size_t>(repeats));
  for (int r = 0; r < repeats; ++r) {
    Rng rng(seed + static_cast<std::uint64_t>(r));
    std::vector<std::string> pool = system_names;
    rng.shuffle(pool);
    std::size_t half = (pool.size() + 1) / 2;
    Split split;
    split.mining.assign(pool.begin(), pool.begin() + half);
    split.evaluation.assign(pool.begin() + half, pool.end());
    std::sort(split.mining.begin(), split.mining.end());
    std::sort(split.evaluation.begin(), split.evaluation.end());
    out.push_back(std::move(split));
  }
  return out;
}

}  // namespace refcover
