#include "refcover/tree.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "refcover/common.hpp"

namespace refcover {

namespace {

inline bool ws(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n';
}

struct Parser {
  const std::string& s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && ws(s[pos])) ++pos;
  }

  std::string atom() {
    std::size_t start = pos;
    while (pos < s.size() && !ws(s[pos]) && s[pos] != '(' && s[pos] != ')')
      ++pos;
    return s.substr(start, pos - start);
  }

  ParseTree tree() {
    if (pos >= s.size() || s[pos] != '(')
      throw parse_error("expected '('", pos);
    ++pos;
    skip_ws();
    ParseTree node;
    node.label = atom();
    if (node.label.empty()) throw parse_error("empty node label", pos);
    for (;;) {
      skip_ws();
      if (pos >= s.size()) throw parse_error("unbalanced brackets", pos);
      if (s[pos] == ')') {
        ++pos;
        return node;
      }
      if (s[pos] == '(') {
        node.children.push_back(tree());
      } else {
        ParseTree leaf;
        leaf.label = atom();
        leaf.lexical = true;
        node.children.push_back(std::move(leaf));
      }
    }
  }
};

void canonical_rec(const ParseTree& t, std::string& out) {
  if (t.children.empty()) {
    out += t.label;
    return;
  }
  out += '(';
  out += t.label;
  for (const auto& c : t.children) {
    out += ' ';
    canonical_rec(c, out);
  }
  out += ')';
}

void prune_rec(const ParseTree& t, int max_depth, int depth,
               ParseTree& out) {
  out.label = t.label;
  out.lexical = t.lexical;
  if (depth >= max_depth) return;
  out.children.reserve(t.children.size());
  for (const auto& c : t.children) {
    out.children.emplace_back();
    prune_rec(c, max_depth, depth + 1, out.children.back());
  }
}

// --- kernel -----------------------------------------------------------

// Nodes flattened for pairwise matching.  A node matches another when the
// production signatures agree: the label alone for childless nodes, the
// label plus the child label sequence otherwise.
struct FlatNode {
  const ParseTree* node;
  std::string signature;
  std::vector<int> children;  // indices into the flat vector
};

int flatten(const ParseTree& t, std::vector<FlatNode>& out) {
  FlatNode fn;
  fn.node = &t;
  std::vector<int> kids;
  kids.reserve(t.children.size());
  for (const auto& c : t.children) kids.push_back(flatten(c, out));
  fn.children = std::move(kids);
  if (t.children.empty()) {
    fn.signature = "=" + t.label;
  } else {
    fn.signature = t.label;
    for (const auto& c : t.children) {
      fn.signature += '\x1f';
      fn.signature += c.label;
      // childless vs parent status of the child is part of the child's own
      // match, not of this production
    }
  }
  out.push_back(std::move(fn));
  return static_cast<int>(out.size()) - 1;
}

struct KernelContext {
  const std::vector<FlatNode>& a;
  const std::vector<FlatNode>& b;
  double lambda;
  double sigma;
  std::unordered_map<std::uint64_t, double> memo;

  double delta(int i, int j) {
    const FlatNode& x = a[static_cast<std::size_t>(i)];
    const FlatNode& y = b[static_cast<std::size_t>(j)];
    if (x.signature != y.signature) return 0.0;
    if (x.children.empty()) return lambda;
    std::uint64_t key = (static_cast<std::uint64_t>(i) << 32) |
                        static_cast<std::uint32_t>(j);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    double prod = lambda;
    for (std::size_t k = 0; k < x.children.size(); ++k)
      prod *= sigma + delta(x.children[k], y.children[k]);
    memo.emplace(key, prod);
    return prod;
  }
};

double kernel_impl(const ParseTree& a, const ParseTree& b,
                   const KernelConfig& cfg) {
  std::vector<FlatNode> fa, fb;
  flatten(a, fa);
  flatten(b, fb);
  // group b's nodes by signature so only plausible pairs are visited
  std::unordered_map<std::string, std::vector<int>> by_sig;
  for (std::size_t j = 0; j < fb.size(); ++j)
    by_sig[fb[j].signature].push_back(static_cast<int>(j));
  KernelContext ctx{fa, fb, cfg.lambda, cfg.sigma, {}};
  double sum = 0.0;
  for (std::size_t i = 0; i < fa.size(); ++i) {
    auto it = by_sig.find(fa[i].signature);
    if (it == by_sig.end()) continue;
    for (int j : it->second) sum += ctx.delta(static_cast<int>(i), j);
  }
  return sum;
}

void check_kernel_config(const KernelConfig& cfg) {
  if (!(cfg.lambda > 0.0) || cfg.lambda > 1.0)
    throw usage_error("kernel lambda must lie in (0, 1]");
  if (cfg.sigma != 0.0 && cfg.sigma != 1.0)
    throw usage_error("kernel sigma must be 0 or 1");
}

}  // namespace

ParseTree parse_ptb(const std::string& text) {
  Parser p{text};
  p.skip_ws();
  if (p.pos >= text.size()) throw parse_error("empty input", p.pos);
  if (text[p.pos] != '(')
    throw parse_error("tree must start with '('", p.pos);
  ParseTree root = p.tree();
  p.skip_ws();
  if (p.pos < text.size())
    throw parse_error("trailing content after tree", p.pos);
  return root;
}

std::string canonical_form(const ParseTree& t) {
  std::string out;
  canonical_rec(t, out);
  return out;
}

int tree_depth(const ParseTree& t) {
  int best = 0;
  for (const auto& c : t.children) best = std::max(best, tree_depth(c));
  return best + 1;
}

std::size_t node_count(const ParseTree& t) {
  std::size_t n = 1;
  for (const auto& c : t.children) n += node_count(c);
  return n;
}

ParseTree strip_leaves(const ParseTree& t) {
  ParseTree out;
  out.label = t.label;
  out.lexical = t.lexical;
  for (const auto& c : t.children) {
    if (c.lexical) continue;
    out.children.push_back(strip_leaves(c));
  }
  return out;
}

ParseTree prune_depth(const ParseTree& t, int max_depth, bool keep_leaves) {
  if (max_depth < 1) throw usage_error("prune depth must be at least 1");
  ParseTree out;
  if (keep_leaves) {
    prune_rec(t, max_depth, 1, out);
  } else {
    ParseTree stripped = strip_leaves(t);
    prune_rec(stripped, max_depth, 1, out);
  }
  return out;
}

std::vector<TreeStatsRow> distinct_tree_stats(
    const std::vector<ParseTree>& trees, const std::vector<int>& depths) {
  std::vector<std::unordered_set<std::string>> no_leaves(depths.size());
  std::vector<std::unordered_set<std::string>> with_leaves(depths.size());
  for (const auto& t : trees) {
    for (std::size_t d = 0; d < depths.size(); ++d) {
      no_leaves[d].insert(canonical_form(prune_depth(t, depths[d], false)));
      with_leaves[d].insert(canonical_form(prune_depth(t, depths[d], true)));
    }
  }
  std::vector<TreeStatsRow> rows;
  rows.reserve(depths.size());
  for (std::size_t d = 0; d < depths.size(); ++d) {
    TreeStatsRow row;
    row.depth = depths[d];
    row.distinct_no_leaves = no_leaves[d].size();
    row.distinct_with_leaves = with_leaves[d].size();
    row.total = trees.size();
    row.type_token_ratio =
        trees.empty() ? 0.0
                      : static_cast<double>(row.distinct_no_leaves) /
                            static_cast<double>(row.total);
    rows.push_back(row);
  }
  return rows;
}

double tree_kernel(const ParseTree& a, const ParseTree& b,
                   const KernelConfig& cfg) {
  check_kernel_config(cfg);
  if (!cfg.include_leaves)
    return kernel_impl(strip_leaves(a), strip_leaves(b), cfg);
  return kernel_impl(a, b, cfg);
}

double normalized_tree_similarity(const ParseTree& a, const ParseTree& b,
                                  const KernelConfig& cfg) {
  check_kernel_config(cfg);
  double kaa = tree_kernel(a, a, cfg);
  double kbb = tree_kernel(b, b, cfg);
  if (kaa <= 0.0 || kbb <= 0.0)
    throw data_error("zero self-kernel; cannot normalize");
  double kab = tree_kernel(a, b, cfg);
  return kab / std::sqrt(kaa * kbb);
}

}  // namespace refcover
