#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "refcover/common.hpp"
#include "refcover/rng.hpp"
#include "refcover/tree.hpp"

TEST_SUITE_BEGIN("tree");

using refcover::KernelConfig;
using refcover::ParseTree;
using refcover::Rng;

namespace {

std::string canon(const std::string& text) {
  return refcover::canonical_form(refcover::parse_ptb(text));
}

void all_nodes(const ParseTree& t, std::vector<const ParseTree*>& out) {
  out.push_back(&t);
  for (const auto& c : t.children) all_nodes(c, out);
}

// Brute-force kernel reference, written against the fragment definition
// rather than the delta recursion.  A fragment rooted at a node is the node
// itself (marked complete, '#'), and if complete, all of its children in
// order, each either a frontier (label only) or recursively complete.  Two
// trees share a fragment when the serialized forms agree, and each shared
// occurrence pair contributes lambda^(number of complete nodes).
std::vector<std::string> fragments_at(const ParseTree& t) {
  if (t.children.empty()) return {t.label + "#"};
  std::vector<std::vector<std::string>> options;
  options.reserve(t.children.size());
  for (const auto& c : t.children) {
    std::vector<std::string> opts{c.label};  // frontier: bare label
    auto sub = fragments_at(c);
    opts.insert(opts.end(), sub.begin(), sub.end());
    options.push_back(std::move(opts));
  }
  std::vector<std::string> out;
  std::vector<std::size_t> idx(options.size(), 0);
  for (;;) {
    std::string s = t.label + "#(";
    for (std::size_t i = 0; i < options.size(); ++i) {
      if (i) s += ',';
      s += options[i][idx[i]];
    }
    s += ')';
    out.push_back(std::move(s));
    std::size_t i = options.size();
    for (;;) {
      if (i == 0) return out;
      --i;
      if (++idx[i] < options[i].size()) break;
      idx[i] = 0;
    }
  }
}

std::map<std::string, double> fragment_counts(const ParseTree& t) {
  std::vector<const ParseTree*> nodes;
  all_nodes(t, nodes);
  std::map<std::string, double> counts;
  for (const ParseTree* n : nodes)
    for (const auto& s : fragments_at(*n)) counts[s] += 1.0;
  return counts;
}

// sigma = 1: every marked fragment counts.
double oracle_sst(const ParseTree& a, const ParseTree& b, double lambda) {
  auto ca = fragment_counts(a);
  auto cb = fragment_counts(b);
  double k = 0.0;
  for (const auto& [serial, na] : ca) {
    auto it = cb.find(serial);
    if (it == cb.end()) continue;
    auto complete =
        static_cast<double>(std::count(serial.begin(), serial.end(), '#'));
    k += na * it->second * std::pow(lambda, complete);
  }
  return k;
}

// sigma = 0: only whole subtrees survive (a frontier anywhere zeroes the
// product), so count identical full subtrees weighted by their size.
double oracle_st(const ParseTree& a, const ParseTree& b, double lambda) {
  auto collect = [](const ParseTree& t) {
    std::vector<const ParseTree*> nodes;
    all_nodes(t, nodes);
    std::map<std::string, std::pair<double, std::size_t>> counts;
    for (const ParseTree* n : nodes) {
      auto& slot = counts[refcover::canonical_form(*n)];
      slot.first += 1.0;
      slot.second = refcover::node_count(*n);
    }
    return counts;
  };
  auto ca = collect(a);
  auto cb = collect(b);
  double k = 0.0;
  for (const auto& [serial, slot] : ca) {
    auto it = cb.find(serial);
    if (it == cb.end()) continue;
    k += slot.first * it->second.first *
         std::pow(lambda, static_cast<double>(slot.second));
  }
  return k;
}

ParseTree random_tree(Rng& rng, int& budget, int depth) {
  ParseTree t;
  t.label = std::string(1, static_cast<char>('A' + rng.below(4)));
  --budget;
  if (depth >= 4 || budget <= 0 || rng.below(3) == 0) return t;
  std::uint64_t arity = 1 + rng.below(3);
  for (std::uint64_t i = 0; i < arity && budget > 0; ++i)
    t.children.push_back(random_tree(rng, budget, depth + 1));
  return t;
}

}  // namespace

TEST_CASE("parse round-trips minimal bracketed form") {
  const std::string text = "(S (NP (DT the) (NN cat)) (VP (VBD sat)))";
  CHECK(canon(text) == text);
  CHECK(canon("( S ( NP x )  ( VP y ) )") == "(S (NP x) (VP y))");
  CHECK(canon("(NP word)") == "(NP word)");
  CHECK(canon("(S (A) (B))") == "(S A B)");  // childless nodes print bare
}

TEST_CASE("parse marks bare words as lexical") {
  ParseTree t = refcover::parse_ptb("(NP (DT the) (NN cat))");
  REQUIRE(t.children.size() == 2);
  CHECK_FALSE(t.lexical);
  CHECK_FALSE(t.children[0].lexical);
  REQUIRE(t.children[0].children.size() == 1);
  CHECK(t.children[0].children[0].lexical);
  CHECK(t.children[0].children[0].label == "the");
  // parenthesized childless nodes are not lexical
  ParseTree u = refcover::parse_ptb("(S (A) b)");
  CHECK_FALSE(u.children[0].lexical);
  CHECK(u.children[1].lexical);
}

TEST_CASE("parse errors carry byte offsets") {
  CHECK_THROWS_WITH_AS(refcover::parse_ptb(""), "empty input at offset 0",
                       refcover::parse_error);
  CHECK_THROWS_WITH_AS(refcover::parse_ptb("   "), "empty input at offset 3",
                       refcover::parse_error);
  CHECK_THROWS_WITH_AS(refcover::parse_ptb("S"),
                       "tree must start with '(' at offset 0",
                       refcover::parse_error);
  CHECK_THROWS_WITH_AS(refcover::parse_ptb("(S (NP"),
                       "unbalanced brackets at offset 6",
                       refcover::parse_error);
  CHECK_THROWS_WITH_AS(refcover::parse_ptb("(S a) b"),
                       "trailing content after tree at offset 6",
                       refcover::parse_error);
  CHECK_THROWS_WITH_AS(refcover::parse_ptb("()"),
                       "empty node label at offset 1",
                       refcover::parse_error);
  try {
    refcover::parse_ptb("(S (NP");
    FAIL("expected parse_error");
  } catch (const refcover::parse_error& e) {
    CHECK(e.offset == 6);
  }
}

TEST_CASE("depth, node count, strip, prune") {
  ParseTree t =
      refcover::parse_ptb("(S (NP (DT the) (NN cat)) (VP (VBD sat)))");
  CHECK(refcover::tree_depth(t) == 4);
  CHECK(refcover::node_count(t) == 9);

  ParseTree stripped = refcover::strip_leaves(t);
  CHECK(refcover::canonical_form(stripped) == "(S (NP DT NN) (VP VBD))");
  CHECK(refcover::tree_depth(stripped) == 3);

  CHECK(refcover::canonical_form(refcover::prune_depth(t, 1, false)) == "S");
  CHECK(refcover::canonical_form(refcover::prune_depth(t, 1, true)) == "S");
  CHECK(refcover::canonical_form(refcover::prune_depth(t, 2, false)) ==
        "(S NP VP)");
  CHECK(refcover::canonical_form(refcover::prune_depth(t, 3, true)) ==
        "(S (NP DT NN) (VP VBD))");
  CHECK(refcover::canonical_form(refcover::prune_depth(t, 4, true)) ==
        refcover::canonical_form(t));
  // pruning deeper than the tree is a no-op
  CHECK(refcover::canonical_form(refcover::prune_depth(t, 99, false)) ==
        refcover::canonical_form(stripped));
  CHECK_THROWS_AS(refcover::prune_depth(t, 0, false), refcover::usage_error);
}

TEST_CASE("distinct tree stats split structure from wording") {
  std::vector<ParseTree> trees = {
      refcover::parse_ptb("(S (NP (DT the) (NN cat)) (VP (VBD sat)))"),
      refcover::parse_ptb("(S (NP (DT a) (NN dog)) (VP (VBD ran)))"),
      refcover::parse_ptb("(S (NP (PRP it)) (VP (VBD ran)))"),
      refcover::parse_ptb("(S (NP (DT the) (NN cat)) (VP (VBD sat)))"),
  };
  auto rows = refcover::distinct_tree_stats(trees, {1, 2, 3, 4});
  REQUIRE(rows.size() == 4);
  for (const auto& row : rows) CHECK(row.total == 4);

  CHECK(rows[0].depth == 1);
  CHECK(rows[0].distinct_no_leaves == 1);    // all roots are S
  CHECK(rows[0].distinct_with_leaves == 1);
  CHECK(rows[1].distinct_no_leaves == 1);    // all (S NP VP)
  CHECK(rows[2].distinct_no_leaves == 2);    // PRP vs DT NN
  CHECK(rows[2].distinct_with_leaves == 2);  // words sit at depth 4
  CHECK(rows[3].distinct_no_leaves == 2);    // leafless depth maxes at 3
  CHECK(rows[3].distinct_with_leaves == 3);  // wording now counts
  CHECK(rows[3].type_token_ratio == doctest::Approx(0.5).epsilon(1e-12));

  CHECK(refcover::distinct_tree_stats({}, {2})[0].total == 0);
  CHECK(refcover::distinct_tree_stats({}, {2})[0].type_token_ratio == 0.0);
}

TEST_CASE("kernel hand values") {
  ParseTree t = refcover::parse_ptb("(S (A) (B))");
  KernelConfig st{0.5, 0.0, false};
  KernelConfig sst{0.5, 1.0, false};

  // pairs (A,A) + (B,B) + (S,S): 0.5 + 0.5 + 0.5*0.5*0.5
  CHECK(refcover::tree_kernel(t, t, st) == doctest::Approx(1.125));
  // (S,S) becomes 0.5 * 1.5 * 1.5
  CHECK(refcover::tree_kernel(t, t, sst) == doctest::Approx(2.125));
  // lambda 1 just counts matches
  CHECK(refcover::tree_kernel(t, t, KernelConfig{1.0, 0.0, false}) ==
        doctest::Approx(3.0));

  // production order matters: only the childless pairs survive
  ParseTree swapped = refcover::parse_ptb("(S (B) (A))");
  CHECK(refcover::tree_kernel(t, swapped, st) == doctest::Approx(1.0));

  // bare words are lexical: stripped by default, kept on request
  ParseTree lex = refcover::parse_ptb("(S A B)");
  CHECK(refcover::tree_kernel(lex, lex, st) == doctest::Approx(0.5));
  CHECK(refcover::tree_kernel(lex, lex, KernelConfig{0.5, 0.0, true}) ==
        doctest::Approx(1.125));

  ParseTree u = refcover::parse_ptb("(S (NP (D) (N)) (VP (V)))");
  ParseTree v = refcover::parse_ptb("(S (NP (D) (N)) (VP (V) (N)))");
  CHECK(refcover::tree_kernel(u, v, st) == doctest::Approx(2.125));
  CHECK(refcover::tree_kernel(u, v, sst) == doctest::Approx(4.1875));
}

TEST_CASE("kernel config validation") {
  ParseTree t = refcover::parse_ptb("(S (A) (B))");
  CHECK_THROWS_AS(refcover::tree_kernel(t, t, KernelConfig{0.0, 0.0, false}),
                  refcover::usage_error);
  CHECK_THROWS_AS(refcover::tree_kernel(t, t, KernelConfig{1.5, 0.0, false}),
                  refcover::usage_error);
  CHECK_THROWS_AS(refcover::tree_kernel(t, t, KernelConfig{0.5, 0.5, false}),
                  refcover::usage_error);
}

TEST_CASE("kernel matches the fragment-enumeration reference") {
  Rng rng(4242);
  for (int iter = 0; iter < 150; ++iter) {
    int budget_a = 10;
    int budget_b = 10;
    ParseTree a = random_tree(rng, budget_a, 1);
    ParseTree b = random_tree(rng, budget_b, 1);
    for (double lambda : {0.5, 0.9}) {
      KernelConfig st{lambda, 0.0, false};
      KernelConfig sst{lambda, 1.0, false};
      CHECK(refcover::tree_kernel(a, b, st) ==
            doctest::Approx(oracle_st(a, b, lambda)).epsilon(1e-9));
      CHECK(refcover::tree_kernel(a, b, sst) ==
            doctest::Approx(oracle_sst(a, b, lambda)).epsilon(1e-9));
    }
  }
}

TEST_CASE("kernel oracle agreement on parsed sentences with leaves") {
  ParseTree a =
      refcover::parse_ptb("(S (NP (DT the) (NN cat)) (VP (VBD sat)))");
  ParseTree b =
      refcover::parse_ptb("(S (NP (DT the) (NN dog)) (VP (VBD sat)))");
  KernelConfig keep{0.5, 1.0, true};
  CHECK(refcover::tree_kernel(a, b, keep) ==
        doctest::Approx(oracle_sst(a, b, 0.5)).epsilon(1e-9));
  KernelConfig strip{0.5, 1.0, false};
  CHECK(refcover::tree_kernel(a, b, strip) ==
        doctest::Approx(oracle_sst(refcover::strip_leaves(a),
                                   refcover::strip_leaves(b), 0.5))
            .epsilon(1e-9));
}

TEST_CASE("normalized similarity is 1 on self and symmetric") {
  Rng rng(515151);
  for (int iter = 0; iter < 40; ++iter) {
    int budget = 10;
    ParseTree a = random_tree(rng, budget, 1);
    int budget2 = 10;
    ParseTree b = random_tree(rng, budget2, 1);
    for (double sigma : {0.0, 1.0}) {
      KernelConfig cfg{0.5, sigma, false};
      CHECK(refcover::normalized_tree_similarity(a, a, cfg) ==
            doctest::Approx(1.0).epsilon(1e-12));
      double ab = refcover::normalized_tree_similarity(a, b, cfg);
      double ba = refcover::normalized_tree_similarity(b, a, cfg);
      CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
      CHECK(ab >= 0.0);
      CHECK(ab <= 1.0 + 1e-12);
    }
  }
}

TEST_SUITE_END();
