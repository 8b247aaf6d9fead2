#pragma once

#include <string>
#include <unordered_map>
#include <vector>

namespace refcover {

// A tokenized segment: non-empty tokens, no whitespace inside a token.
using Tokens = std::vector<std::string>;

// v13a tokenization as used by the WMT evaluation pipeline: <skipped>
// removal, entity unescaping, ASCII punctuation padding (apostrophe,
// digit-internal period/comma and non-digit hyphens stay glued), digit-dash
// splitting, then collapsing any Unicode whitespace.  Input is UTF-8; the
// padding rules are pure ASCII so multi-byte sequences pass through intact.
Tokens tokenize_v13a(const std::string& line);

// Split a pre-tokenized line on spaces (empty fields dropped).
Tokens split_tokens(const std::string& line);
std::string join_tokens(const Tokens& tokens);

// N-gram counts for orders 1..max_order.  Keys are tokens joined by 0x1F,
// which no token can contain (it is part of the whitespace set collapsed by
// tokenization), so distinct token tuples never collide.
class NGramMultiset {
 public:
  explicit NGramMultiset(int max_order);

  int max_order() const { return max_order_; }

  // count of the n-gram starting at tokens[begin], length order
  void add(const Tokens& tokens, std::size_t begin, int order, long count = 1);
  long count(int order, const std::string& key) const;
  long total(int order) const;      // sum of counts at this order
  std::size_t distinct(int order) const;

  const std::unordered_map<std::string, long>& at(int order) const;
  std::unordered_map<std::string, long>& at(int order);

  static std::string key_of(const Tokens& tokens, std::size_t begin,
                            int order);
  static Tokens tokens_of(const std::string& key);

 private:
  int max_order_;
  std::vector<std::unordered_map<std::string, long>> orders_;  // [n-1]
};

NGramMultiset extract_ngrams(const Tokens& segment, int max_order);

// Per-key minimum of hypothesis counts and the per-key maximum across the
// reference multisets (standard clipping).  All multisets must share
// max_order; refs must be non-empty.
NGramMultiset clip_counts(const NGramMultiset& hyp,
                          const std::vector<NGramMultiset>& refs);

}  // namespace refcover
