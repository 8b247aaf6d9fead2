#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace refcover {

// Constituency tree.  Lexical terminals (bare words in child position) are
// nodes with lexical = true; childless non-lexical nodes can arise from
// leaf stripping and depth pruning.
struct ParseTree {
  std::string label;
  std::vector<ParseTree> children;
  bool lexical = false;

  bool leaf() const { return children.empty(); }
};

// Parses one bracketed tree, e.g. "(S (NP (DT the) (NN cat)) (VP sat))".
// Errors (unbalanced brackets, empty labels, trailing garbage, bare word at
// top level) throw parse_error carrying the byte offset.
ParseTree parse_ptb(const std::string& text);

// Minimal single-space bracketed form used for dedup and display.
std::string canonical_form(const ParseTree& t);

int tree_depth(const ParseTree& t);          // root = depth 1
std::size_t node_count(const ParseTree& t);

ParseTree strip_leaves(const ParseTree& t);  // drop lexical terminals

// Remove all nodes at depth > max_depth (root = 1); with keep_leaves false
// lexical terminals are stripped first.
ParseTree prune_depth(const ParseTree& t, int max_depth, bool keep_leaves);

struct TreeStatsRow {
  int depth;
  std::size_t distinct_no_leaves;
  std::size_t distinct_with_leaves;
  std::size_t total;
  double type_token_ratio;  // distinct_no_leaves / total
};

// Distinct pruned shapes per requested depth, streaming over the input.
std::vector<TreeStatsRow> distinct_tree_stats(
    const std::vector<ParseTree>& trees, const std::vector<int>& depths);

struct KernelConfig {
  double lambda = 0.5;        // decay, in (0, 1]
  double sigma = 0.0;         // 0 = subtree kernel, 1 = subset-tree kernel
  bool include_leaves = false;
};

// Convolution tree kernel via the delta recursion: childless nodes match on
// equal labels (delta = lambda); internal nodes match on equal productions
// (delta = lambda * prod_j (sigma + delta(child_j))).  K sums delta over
// all matching node pairs.  Lexical leaves are stripped first unless
// cfg.include_leaves.
double tree_kernel(const ParseTree& a, const ParseTree& b,
                   const KernelConfig& cfg = {});

// K(a,b) / sqrt(K(a,a) * K(b,b)); zero self-kernel is an error.
double normalized_tree_similarity(const ParseTree& a, const ParseTree& b,
                                  const KernelConfig& cfg = {});

}  // namespace refcover
