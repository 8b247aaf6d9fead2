#include "refcover/bleu.hpp"

#include <cmath>
#include <cstdlib>

#include "refcover/common.hpp"

namespace refcover {

namespace {

std::vector<double> resolve_weights(const BleuConfig& cfg) {
  if (cfg.max_order < 1) throw usage_error("max_order must be at least 1");
  if (cfg.weights.empty()) {
    return std::vector<double>(static_cast<std::size_t>(cfg.max_order),
                               1.0 / cfg.max_order);
  }
  if (cfg.weights.size() != static_cast<std::size_t>(cfg.max_order))
    throw usage_error("need one weight per n-gram order");
  double sum = 0.0;
  for (double w : cfg.weights) {
    if (w < 0.0) throw usage_error("negative n-gram weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw usage_error("n-gram weights must sum to 1");
  return cfg.weights;
}

// Accumulates one segment's clipped matches, totals and lengths.
void accumulate_segment(const Tokens& hyp, const std::vector<Tokens>& refs,
                        const BleuConfig& cfg, std::vector<long>& match,
                        std::vector<long>& total, long& hyp_len,
                        long& ref_len) {
  if (refs.empty()) throw data_error("segment without references");
  NGramMultiset hyp_counts = extract_ngrams(hyp, cfg.max_order);
  std::vector<NGramMultiset> ref_counts;
  ref_counts.reserve(refs.size());
  std::vector<long> ref_lens;
  ref_lens.reserve(refs.size());
  for (const auto& r : refs) {
    ref_counts.push_back(extract_ngrams(r, cfg.max_order));
    ref_lens.push_back(static_cast<long>(r.size()));
  }
  NGramMultiset clipped = clip_counts(hyp_counts, ref_counts);
  for (int n = 1; n <= cfg.max_order; ++n) {
    match[n - 1] += clipped.total(n);
    long denom = static_cast<long>(hyp.size()) - n + 1;
    if (denom > 0) total[n - 1] += denom;
  }
  hyp_len += static_cast<long>(hyp.size());
  ref_len += effective_ref_length(static_cast<long>(hyp.size()), ref_lens,
                                  cfg.ref_length);
}

// Precision -> score given the accumulated statistics.  `smooth` applies
// exponential smoothing at zero-numerator orders; `effective_order` drops
// zero-denominator orders and renormalizes the weights over the rest.
BleuScore finish(std::vector<long> match, std::vector<long> total,
                 long hyp_len, long ref_len, const BleuConfig& cfg,
                 bool smooth, bool effective_order) {
  const std::vector<double> weights = resolve_weights(cfg);
  BleuScore out;
  out.match = std::move(match);
  out.total = std::move(total);
  out.hyp_len = hyp_len;
  out.ref_len = ref_len;
  out.precisions.assign(static_cast<std::size_t>(cfg.max_order), 0.0);
  out.bp = brevity_penalty(hyp_len, ref_len);

  int eff = cfg.max_order;
  double s = 1.0;
  for (int n = 1; n <= cfg.max_order; ++n) {
    if (out.total[n - 1] == 0) {
      if (effective_order && n - 1 < eff) eff = n - 1;
      continue;
    }
    if (out.match[n - 1] == 0) {
      if (smooth) {
        s *= 2.0;
        out.precisions[n - 1] = 1.0 / (s * out.total[n - 1]);
      }
    } else {
      out.precisions[n - 1] =
          static_cast<double>(out.match[n - 1]) / out.total[n - 1];
    }
  }
  if (!effective_order) eff = cfg.max_order;

  double wsum = 0.0;
  for (int n = 1; n <= eff; ++n) wsum += weights[n - 1];
  if (eff == 0 || wsum <= 0.0) {
    out.score = 0.0;
    return out;
  }
  double logsum = 0.0;
  for (int n = 1; n <= eff; ++n) {
    if (out.precisions[n - 1] <= 0.0) {
      out.score = 0.0;  // a zero precision zeroes the whole product
      return out;
    }
    logsum += weights[n - 1] / wsum * std::log(out.precisions[n - 1]);
  }
  out.score = out.bp * std::exp(logsum);
  return out;
}

}  // namespace

double brevity_penalty(long c, long r) {
  if (c <= 0) throw data_error("brevity penalty needs a non-empty hypothesis");
  if (c > r) return 1.0;
  return std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c));
}

long effective_ref_length(long hyp_len, const std::vector<long>& ref_lens,
                          RefLengthPolicy policy) {
  if (ref_lens.empty())
    throw data_error("effective_ref_length: no references");
  long best = ref_lens[0];
  for (std::size_t i = 1; i < ref_lens.size(); ++i) {
    long len = ref_lens[i];
    if (policy == RefLengthPolicy::shortest) {
      if (len < best) best = len;
    } else {
      long d = std::labs(len - hyp_len);
      long bd = std::labs(best - hyp_len);
      if (d < bd || (d == bd && len < best)) best = len;
    }
  }
  return best;
}

BleuScore corpus_bleu(const std::vector<Tokens>& hyps,
                      const std::vector<std::vector<Tokens>>& refs,
                      const BleuConfig& cfg) {
  if (hyps.empty()) throw data_error("corpus_bleu: empty corpus");
  if (hyps.size() != refs.size())
    throw data_error("corpus_bleu: " + std::to_string(hyps.size()) +
                     " hypotheses vs " + std::to_string(refs.size()) +
                     " reference sets");
  std::vector<long> match(static_cast<std::size_t>(cfg.max_order), 0);
  std::vector<long> total(static_cast<std::size_t>(cfg.max_order), 0);
  long hyp_len = 0, ref_len = 0;
  for (std::size_t i = 0; i < hyps.size(); ++i)
    accumulate_segment(hyps[i], refs[i], cfg, match, total, hyp_len,
                       ref_len);
  if (hyp_len == 0) throw data_error("corpus_bleu: all hypotheses empty");
  return finish(std::move(match), std::move(total), hyp_len, ref_len, cfg,
                /*smooth=*/false, /*effective_order=*/false);
}

BleuScore sentence_bleu(const Tokens& hyp, const std::vector<Tokens>& refs,
                        const BleuConfig& cfg) {
  if (refs.empty()) throw data_error("sentence_bleu: no references");
  std::vector<long> match(static_cast<std::size_t>(cfg.max_order), 0);
  std::vector<long> total(static_cast<std::size_t>(cfg.max_order), 0);
  long hyp_len = 0, ref_len = 0;
  accumulate_segment(hyp, refs, cfg, match, total, hyp_len, ref_len);
  if (hyp_len == 0) {
    BleuScore out;
    out.match = std::move(match);
    out.total = std::move(total);
    out.ref_len = ref_len;
    out.precisions.assign(static_cast<std::size_t>(cfg.max_order), 0.0);
    out.empty_hypothesis = true;
    return out;
  }
  return finish(std::move(match), std::move(total), hyp_len, ref_len, cfg,
                cfg.smoothing == Smoothing::exponential,
                /*effective_order=*/true);
}

}  // namespace refcover
