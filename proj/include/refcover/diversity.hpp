#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "refcover/text.hpp"
#include "refcover/tree.hpp"

namespace refcover {

struct BowDelta {
  double value;
  bool clamped;  // raw ratio exceeded 1 and was clamped
};

// |unique words common to both| / mean(token count).  Both segments empty
// is an error.
BowDelta delta_bow(const Tokens& a, const Tokens& b);

// Mean of (1 - delta(i, j)) over ordered pairs i != j; n >= 2 required.
double diversity_score(
    std::size_t n,
    const std::function<double(std::size_t, std::size_t)>& delta);

// DS over a paraphrase set with the bag-of-words delta; clamp_count (if
// given) accumulates how many pairs hit the clamp.
double ds_bow(const std::vector<Tokens>& set,
              std::size_t* clamp_count = nullptr);

// DS with delta = normalized tree kernel similarity between parses.
double ds_tree(const std::vector<ParseTree>& parses,
               const KernelConfig& cfg = {});

struct DiversityReport {
  std::size_t segments = 0;
  std::size_t set_size = 0;  // paraphrases per segment; 0 when ragged
  bool ragged = false;
  std::vector<double> bow;   // per segment
  std::vector<double> tree;  // per segment; empty when no parses given
  double mean_bow = 0.0;
  double mean_tree = 0.0;
  std::size_t bow_clamped = 0;
};

// sets[s] holds segment s's paraphrases.  parses, when given, must align
// one tree per paraphrase (mismatches name the segment).  Unequal set
// sizes are an error unless allow_ragged.
DiversityReport corpus_diversity(
    const std::vector<std::vector<Tokens>>& sets,
    const std::vector<std::vector<ParseTree>>* parses,
    const KernelConfig& cfg, bool allow_ragged, unsigned threads);

}  // namespace refcover
