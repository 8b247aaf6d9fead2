#pragma once

#include <vector>

#include "refcover/text.hpp"

namespace refcover {

enum class Smoothing { none, exponential };
enum class RefLengthPolicy { closest, shortest };

struct BleuConfig {
  int max_order = 4;
  // empty -> uniform 1/max_order; otherwise must have max_order entries
  // summing to 1
  std::vector<double> weights;
  Smoothing smoothing = Smoothing::none;
  RefLengthPolicy ref_length = RefLengthPolicy::closest;
};

struct BleuScore {
  double score = 0.0;              // fraction in [0, 1]
  double bp = 0.0;
  std::vector<double> precisions;  // fractions; smoothed values where applied
  long hyp_len = 0;
  long ref_len = 0;
  std::vector<long> match;         // clipped numerators per order
  std::vector<long> total;         // denominators per order
  bool empty_hypothesis = false;   // sentence-level: hypothesis had no tokens

  double score_x100() const { return score * 100.0; }
};

// 1 if c > r, else exp(1 - r/c); c == 0 is an error.
double brevity_penalty(long c, long r);

// closest: minimal |len - hyp_len|, ties to the shorter reference.
long effective_ref_length(long hyp_len, const std::vector<long>& ref_lens,
                          RefLengthPolicy policy = RefLengthPolicy::closest);

// Corpus BLEU: clipped counts and lengths accumulate over segments before
// any division.  Precisions are never smoothed at corpus level; any zero
// precision makes the score exactly 0.
BleuScore corpus_bleu(const std::vector<Tokens>& hyps,
                      const std::vector<std::vector<Tokens>>& refs,
                      const BleuConfig& cfg = {});

// Sentence BLEU.  With exponential smoothing a zero numerator at order n
// contributes 1/(s * total_n) where s doubles at each smoothed order;
// orders with a zero denominator are dropped and the weights renormalize
// over the rest.  An empty hypothesis scores 0 and sets empty_hypothesis.
BleuScore sentence_bleu(const Tokens& hyp, const std::vector<Tokens>& refs,
                        const BleuConfig& cfg = {4, {},
                                                 Smoothing::exponential,
                                                 RefLengthPolicy::closest});

}  // namespace refcover
