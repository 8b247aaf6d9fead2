// python bindings for the refcover core

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "refcover/bleu.hpp"
#include "refcover/cluster.hpp"
#include "refcover/common.hpp"
#include "refcover/diversity.hpp"
#include "refcover/mining.hpp"
#include "refcover/stats.hpp"
#include "refcover/text.hpp"
#include "refcover/tree.hpp"

namespace py = pybind11;
using namespace refcover;

namespace {

Matrix matrix_from_array(const py::array_t<float, py::array::c_style |
                                                      py::array::forcecast>&
                             arr) {
  if (arr.ndim() != 2) throw usage_error("embeddings must be a 2-d array");
  Matrix m;
  m.rows = static_cast<std::size_t>(arr.shape(0));
  m.cols = static_cast<std::size_t>(arr.shape(1));
  m.data.assign(arr.data(), arr.data() + m.rows * m.cols);
  return m;
}

py::array_t<float> matrix_to_array(const Matrix& m) {
  py::array_t<float> arr({m.rows, m.cols});
  std::copy(m.data.begin(), m.data.end(), arr.mutable_data());
  return arr;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "reference-coverage toolkit for MT evaluation";

  py::register_exception<usage_error>(m, "UsageError", PyExc_ValueError);
  py::register_exception<data_error>(m, "DataError", PyExc_ValueError);

  // text
  m.def("tokenize_v13a", &tokenize_v13a, py::arg("line"),
        "v13a tokenization of one raw segment");

  m.def(
      "extract_ngrams",
      [](const Tokens& segment, int max_order) {
        NGramMultiset counts = extract_ngrams(segment, max_order);
        py::dict out;
        for (int n = 1; n <= max_order; ++n)
          for (const auto& [key, cnt] : counts.at(n))
            out[py::tuple(py::cast(NGramMultiset::tokens_of(key)))] = cnt;
        return out;
      },
      py::arg("segment"), py::arg("max_order") = 4,
      "n-gram counts keyed by token tuple");

  // bleu
  py::class_<BleuScore>(m, "BleuScore")
      .def_readonly("score", &BleuScore::score)
      .def_readonly("bp", &BleuScore::bp)
      .def_readonly("precisions", &BleuScore::precisions)
      .def_readonly("hyp_len", &BleuScore::hyp_len)
      .def_readonly("ref_len", &BleuScore::ref_len)
      .def_readonly("match", &BleuScore::match)
      .def_readonly("total", &BleuScore::total)
      .def_readonly("empty_hypothesis", &BleuScore::empty_hypothesis)
      .def_property_readonly("score_x100", &BleuScore::score_x100)
      .def("__repr__", [](const BleuScore& s) {
        return "<BleuScore " + std::to_string(s.score_x100()) + ">";
      });

  m.def(
      "corpus_bleu",
      [](const std::vector<Tokens>& hyps,
         const std::vector<std::vector<Tokens>>& refs, int max_order) {
        BleuConfig cfg;
        cfg.max_order = max_order;
        return corpus_bleu(hyps, refs, cfg);
      },
      py::arg("hypotheses"), py::arg("references"), py::arg("max_order") = 4,
      "corpus BLEU over tokenized segments (refs: per-segment list)");

  m.def(
      "sentence_bleu",
      [](const Tokens& hyp, const std::vector<Tokens>& refs, int max_order,
         bool smooth) {
        BleuConfig cfg;
        cfg.max_order = max_order;
        cfg.smoothing = smooth ? Smoothing::exponential : Smoothing::none;
        return sentence_bleu(hyp, refs, cfg);
      },
      py::arg("hypothesis"), py::arg("references"), py::arg("max_order") = 4,
      py::arg("smooth") = true,
      "sentence BLEU with exponential smoothing by default");

  // trees
  py::class_<ParseTree>(m, "ParseTree")
      .def_readonly("label", &ParseTree::label)
      .def_readonly("children", &ParseTree::children)
      .def_readonly("lexical", &ParseTree::lexical)
      .def("__str__", &canonical_form)
      .def("__repr__", [](const ParseTree& t) {
        return "<ParseTree " + canonical_form(t) + ">";
      });

  m.def("parse_ptb", &parse_ptb, py::arg("text"),
        "parse one bracketed constituency tree");
  m.def("canonical_form", &canonical_form, py::arg("tree"));
  m.def("strip_leaves", &strip_leaves, py::arg("tree"));
  m.def("prune_depth", &prune_depth, py::arg("tree"), py::arg("max_depth"),
        py::arg("keep_leaves") = false);
  m.def(
      "tree_kernel",
      [](const ParseTree& a, const ParseTree& b, double lambda_,
         double sigma, bool include_leaves) {
        return tree_kernel(a, b, {lambda_, sigma, include_leaves});
      },
      py::arg("a"), py::arg("b"), py::arg("lambda_") = 0.5,
      py::arg("sigma") = 0.0, py::arg("include_leaves") = false);
  m.def(
      "tree_similarity",
      [](const ParseTree& a, const ParseTree& b, double lambda_,
         double sigma, bool include_leaves) {
        return normalized_tree_similarity(a, b,
                                          {lambda_, sigma, include_leaves});
      },
      py::arg("a"), py::arg("b"), py::arg("lambda_") = 0.5,
      py::arg("sigma") = 0.0, py::arg("include_leaves") = false,
      "normalized tree-kernel similarity in [0, 1]");

  // diversity
  m.def(
      "delta_bow",
      [](const Tokens& a, const Tokens& b) { return delta_bow(a, b).value; },
      py::arg("a"), py::arg("b"), "bag-of-words overlap ratio, clamped to 1");
  m.def(
      "ds_bow",
      [](const std::vector<Tokens>& set) { return ds_bow(set, nullptr); },
      py::arg("paraphrases"), "bag-of-words diversity score");
  m.def(
      "ds_tree",
      [](const std::vector<ParseTree>& parses, double lambda_, double sigma) {
        return ds_tree(parses, {lambda_, sigma, false});
      },
      py::arg("parses"), py::arg("lambda_") = 0.5, py::arg("sigma") = 0.0,
      "tree-kernel diversity score");

  // mining
  m.def(
      "select_top_half",
      [](const std::map<std::string, double>& scores) {
        std::vector<ScoredSystem> systems;
        for (const auto& [name, score] : scores)
          systems.push_back({name, score});
        return select_top_half(systems);
      },
      py::arg("scores"), "top half of systems by human score");
  m.def(
      "find_unrewarded_ngrams",
      [](const std::vector<Tokens>& refs, const std::vector<Tokens>& voters,
         const std::vector<int>& orders, double threshold) {
        std::vector<std::pair<Tokens, double>> out;
        for (const auto& g : filter_subsequences(
                 find_unrewarded_ngrams(refs, voters, orders, threshold)))
          out.emplace_back(NGramMultiset::tokens_of(g.key), g.fraction);
        return out;
      },
      py::arg("refs"), py::arg("voters"),
      py::arg("orders") = std::vector<int>{2, 3, 4},
      py::arg("threshold") = 0.75,
      "maximal unrewarded n-grams with voting fractions");
  m.def(
      "split_protocol",
      [](const std::vector<std::string>& names, int repeats,
         std::uint64_t seed) {
        std::vector<std::pair<std::vector<std::string>,
                              std::vector<std::string>>>
            out;
        for (const auto& s : split_protocol(names, repeats, seed))
          out.emplace_back(s.mining, s.evaluation);
        return out;
      },
      py::arg("systems"), py::arg("repeats"), py::arg("seed"),
      "seeded mining/evaluation bisections");

  // clustering
  py::class_<ClusterModel>(m, "ClusterModel")
      .def_property_readonly(
          "centroids",
          [](const ClusterModel& m_) { return matrix_to_array(m_.centroids); })
      .def_readonly("seed", &ClusterModel::seed)
      .def_readonly("iterations_run", &ClusterModel::iterations_run)
      .def_readonly("sse", &ClusterModel::sse);

  m.def(
      "kmeans",
      [](const py::array_t<float, py::array::c_style |
                                      py::array::forcecast>& x,
         int k, int max_iters, std::uint64_t seed, unsigned threads) {
        return kmeans(matrix_from_array(x), k, max_iters, seed, threads);
      },
      py::arg("embeddings"), py::arg("k"), py::arg("max_iters") = 100,
      py::arg("seed") = 1, py::arg("threads") = 1);
  m.def(
      "assign_codes",
      [](const py::array_t<float, py::array::c_style |
                                      py::array::forcecast>& x,
         const ClusterModel& model, unsigned threads) {
        return assign_codes(matrix_from_array(x), model, threads);
      },
      py::arg("embeddings"), py::arg("model"), py::arg("threads") = 1);
  m.def("prefix_codes", &prefix_codes, py::arg("lines"), py::arg("codes"),
        py::arg("k") = 0);
  m.def(
      "strip_codes",
      [](const std::vector<std::string>& lines) {
        std::vector<std::pair<std::string, int>> out;
        for (const auto& sl : strip_codes(lines))
          out.emplace_back(sl.text, sl.code);
        return out;
      },
      py::arg("lines"), "(text, code) per line; code -1 when absent");

  // statistics
  m.def("pearson", &pearson, py::arg("x"), py::arg("y"));
  m.def(
      "williams_test",
      [](double r12, double r13, double r23, int n) {
        WilliamsResult w = williams_test(r12, r13, r23, n);
        return std::make_pair(w.t, w.p);
      },
      py::arg("r12"), py::arg("r13"), py::arg("r23"), py::arg("n"),
      "(t, one-sided p) for correlated correlations");
  m.def("student_t_sf", &student_t_sf, py::arg("t"), py::arg("df"));

  py::class_<RankPair>(m, "RankPair")
      .def(py::init([](int segment, const std::string& better,
                       const std::string& worse) {
             return RankPair{segment, better, worse};
           }),
           py::arg("segment"), py::arg("better"), py::arg("worse"))
      .def_readonly("segment", &RankPair::segment)
      .def_readonly("better", &RankPair::better)
      .def_readonly("worse", &RankPair::worse);

  m.def("da_to_relative_ranking", &da_to_relative_ranking, py::arg("da"),
        py::arg("min_gap") = 25.0);
  m.def(
      "kendall_tau_rr",
      [](const std::vector<RankPair>& pairs, const SegmentScores& metric) {
        TauResult t = kendall_tau_rr(pairs, metric);
        return std::make_tuple(t.tau, t.concordant, t.discordant);
      },
      py::arg("pairs"), py::arg("metric"),
      "(tau, concordant, discordant) with ties counted as discordant");
  m.def(
      "decision_flips",
      [](const std::vector<RankPair>& pairs, const SegmentScores& baseline,
         const SegmentScores& candidate) {
        FlipResult f = decision_flips(pairs, baseline, candidate);
        return std::make_tuple(f.improved_pct, f.degraded_pct, f.improved,
                               f.degraded);
      },
      py::arg("pairs"), py::arg("baseline"), py::arg("candidate"));
  m.def("bootstrap_tau_significance",
        [](const std::vector<RankPair>& pairs, const SegmentScores& baseline,
           const SegmentScores& candidate, int iterations,
           std::uint64_t seed, unsigned threads) {
          return bootstrap_tau_significance(pairs, baseline, candidate,
                                            iterations, seed, threads);
        },
        py::arg("pairs"), py::arg("baseline"), py::arg("candidate"),
        py::arg("iterations") = 1000, py::arg("seed") = 1,
        py::arg("threads") = 1);
}
