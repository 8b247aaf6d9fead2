#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "refcover/text.hpp"

namespace refcover {

struct ScoredSystem {
  std::string name;
  double score;  // human judgment, higher is better
};

// Top ceil(S/2) systems by score; ties broken toward the lexicographically
// smaller name.  Returned in rank order.
std::vector<std::string> select_top_half(std::vector<ScoredSystem> systems);

struct VotedNgram {
  std::string key;    // 0x1F-joined tokens
  int order;
  long votes;
  double fraction;    // votes / |voters|
};

// N-grams of the requested orders that appear in at least
// ceil(threshold * |voters|) voter outputs (presence per voter, not
// frequency) and in none of the references.  Sorted by (order, key).
std::vector<VotedNgram> find_unrewarded_ngrams(
    const std::vector<Tokens>& refs, const std::vector<Tokens>& voters,
    const std::vector<int>& orders, double threshold);

// Keep only maximal candidates: drop any n-gram that is a contiguous
// subsequence of another candidate.
std::vector<VotedNgram> filter_subsequences(std::vector<VotedNgram> grams);

struct ConstraintRecord {
  std::size_t segment;
  std::vector<std::string> constraints;  // space-joined tokens, sorted
  std::vector<double> votes;             // aligned voting fractions
};

struct ConstraintSet {
  std::vector<ConstraintRecord> records;  // one per segment
  std::vector<std::string> voters;
  std::vector<int> orders;
  double threshold;
};

// refs_per_segment[s] = that segment's reference(s); systems maps name to
// per-segment outputs; voters selects which systems vote.  All outputs and
// refs must have the same segment count.
ConstraintSet build_constraints(
    const std::vector<std::vector<Tokens>>& refs_per_segment,
    const std::map<std::string, std::vector<Tokens>>& systems,
    const std::vector<std::string>& voters, const std::vector<int>& orders,
    double threshold, unsigned threads);

// One JSON object per line: {"segment": i, "constraints": [...], "votes":
// [...]}.
std::string constraints_to_jsonl(const ConstraintSet& set);

struct Split {
  std::vector<std::string> mining;      // feeds constraint generation
  std::vector<std::string> evaluation;  // feeds correlation
};

// `repeats` independent uniform bisections of the system list; repeat r
// shuffles with an Rng seeded seed + r, the mining half takes ceil(S/2),
// and both halves come back sorted.
std::vector<Split> split_protocol(std::vector<std::string> system_names,
                                  int repeats, std::uint64_t seed);

}  // namespace refcover
