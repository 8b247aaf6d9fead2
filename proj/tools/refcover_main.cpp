// refcover: multi-reference BLEU scoring, paraphrase-set diagnostics and
// metric-correlation analysis for MT evaluation data.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "refcover/bleu.hpp"
#include "refcover/cluster.hpp"
#include "refcover/common.hpp"
#include "refcover/diversity.hpp"
#include "refcover/io.hpp"
#include "refcover/mining.hpp"
#include "refcover/report.hpp"
#include "refcover/rng.hpp"
#include "refcover/stats.hpp"
#include "refcover/text.hpp"
#include "refcover/tree.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace refcover;

namespace {

void emit(const std::string& path, const std::string& content) {
  if (path == "-" || path.empty()) {
    std::fwrite(content.data(), 1, content.size(), stdout);
    return;
  }
  write_file_atomic(path, content);
  log_info("wrote " + path);
}

std::vector<Tokens> load_tokenized(const std::string& path) {
  std::vector<Tokens> out;
  for (const auto& line : read_lines(path)) out.push_back(tokenize_v13a(line));
  return out;
}

// one system per *.txt file; the stem names the system
std::map<std::string, std::vector<Tokens>> load_system_dir(
    const std::string& dir) {
  if (!fs::is_directory(dir)) throw data_error(dir + " is not a directory");
  std::map<std::string, std::vector<Tokens>> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().extension() != ".txt") continue;
    out[entry.path().stem().string()] =
        load_tokenized(entry.path().string());
  }
  if (out.empty()) throw data_error("no *.txt system outputs in " + dir);
  return out;
}

std::map<std::string, double> load_system_scores(const std::string& path) {
  std::map<std::string, double> out;
  for (const auto& row : read_tsv(path, 2)) {
    try {
      out[row[0]] = std::stod(row[1]);
    } catch (const std::exception&) {
      throw data_error(path + ": bad score '" + row[1] + "' for " + row[0]);
    }
  }
  if (out.empty()) throw data_error(path + ": no rows");
  return out;
}

SegmentScores load_segment_scores(const std::string& path) {
  SegmentScores out;
  for (const auto& row : read_tsv(path, 3)) {
    int seg;
    double score;
    try {
      seg = std::stoi(row[1]);
      score = std::stod(row[2]);
    } catch (const std::exception&) {
      throw data_error(path + ": bad row for system '" + row[0] + "'");
    }
    out[row[0]][seg] = score;
  }
  if (out.empty()) throw data_error(path + ": no rows");
  return out;
}

std::vector<ParseTree> load_parses(const std::string& path) {
  std::vector<ParseTree> out;
  std::vector<std::string> lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      out.push_back(parse_ptb(lines[i]));
    } catch (const parse_error& e) {
      throw data_error(path + ":" + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

// all refs for one corpus: refs[file][segment] -> refs_per_segment
std::vector<std::vector<Tokens>> align_refs(
    const std::vector<std::string>& paths) {
  if (paths.empty()) throw usage_error("at least one reference file needed");
  std::vector<std::vector<Tokens>> per_file;
  for (const auto& p : paths) per_file.push_back(load_tokenized(p));
  for (std::size_t i = 1; i < per_file.size(); ++i)
    if (per_file[i].size() != per_file[0].size())
      throw data_error(paths[i] + " has " +
                       std::to_string(per_file[i].size()) + " lines, " +
                       paths[0] + " has " +
                       std::to_string(per_file[0].size()));
  std::vector<std::vector<Tokens>> out(per_file[0].size());
  for (std::size_t s = 0; s < out.size(); ++s)
    for (const auto& f : per_file) out[s].push_back(f[s]);
  return out;
}

std::string with_suffix(const std::string& path, const std::string& tag) {
  fs::path p(path);
  fs::path ext = p.extension();
  fs::path stem = p.stem();
  return (p.parent_path() / (stem.string() + tag + ext.string())).string();
}

// ---- subcommand drivers ---------------------------------------------------

struct ScoreOpts {
  std::string hyp, out = "-";
  std::vector<std::string> refs;
  bool sentence = false;
  int max_order = 4;
  std::string smooth = "exp";
};

void run_score(const ScoreOpts& o) {
  std::vector<Tokens> hyps = load_tokenized(o.hyp);
  std::vector<std::vector<Tokens>> refs = align_refs(o.refs);
  if (hyps.size() != refs.size())
    throw data_error("hypothesis file has " + std::to_string(hyps.size()) +
                     " lines, references " + std::to_string(refs.size()));
  BleuConfig cfg;
  cfg.max_order = o.max_order;
  if (o.smooth == "exp") {
    cfg.smoothing = Smoothing::exponential;
  } else if (o.smooth == "none") {
    cfg.smoothing = Smoothing::none;
  } else {
    throw usage_error("unknown smoothing '" + o.smooth + "'");
  }

  json j;
  if (o.sentence) {
    j["level"] = "sentence";
    j["smooth"] = o.smooth;
    json segs = json::array();
    for (std::size_t i = 0; i < hyps.size(); ++i) {
      BleuScore s = sentence_bleu(hyps[i], refs[i], cfg);
      json js;
      js["segment"] = i;
      js["bleu"] = s.score_x100();
      if (s.empty_hypothesis) js["empty_hypothesis"] = true;
      segs.push_back(std::move(js));
    }
    j["segments"] = std::move(segs);
  } else {
    BleuScore s = corpus_bleu(hyps, refs, cfg);
    j["level"] = "corpus";
    j["bleu"] = s.score_x100();
    j["bp"] = s.bp;
    json prec = json::array();
    for (double p : s.precisions) prec.push_back(p * 100.0);
    j["precisions"] = std::move(prec);
    j["hyp_len"] = s.hyp_len;
    j["ref_len"] = s.ref_len;
    j["references"] = o.refs.size();
  }
  emit(o.out, j.dump(2) + "\n");
}

struct DiversityOpts {
  std::vector<std::string> paraphrases, parses;
  std::string out = "-";
  double lambda = 0.5, sigma = 0.0;
  bool ragged = false;
  unsigned threads = 0;
};

void run_diversity(const DiversityOpts& o) {
  std::vector<std::vector<Tokens>> files;
  for (const auto& p : o.paraphrases) files.push_back(load_tokenized(p));
  for (std::size_t i = 1; i < files.size(); ++i)
    if (files[i].size() != files[0].size())
      throw data_error("paraphrase files differ in line count");
  std::size_t nseg = files.empty() ? 0 : files[0].size();
  std::vector<std::vector<Tokens>> sets(nseg);
  for (std::size_t s = 0; s < nseg; ++s)
    for (const auto& f : files) sets[s].push_back(f[s]);

  std::optional<std::vector<std::vector<ParseTree>>> parses;
  if (!o.parses.empty()) {
    if (o.parses.size() != o.paraphrases.size())
      throw data_error("need one parse file per paraphrase file");
    std::vector<std::vector<ParseTree>> pfiles;
    for (const auto& p : o.parses) {
      pfiles.push_back(load_parses(p));
      if (pfiles.back().size() != nseg)
        throw data_error(p + " has " +
                         std::to_string(pfiles.back().size()) +
                         " parses for " + std::to_string(nseg) +
                         " segments");
    }
    parses.emplace(nseg);
    for (std::size_t s = 0; s < nseg; ++s)
      for (const auto& f : pfiles) (*parses)[s].push_back(f[s]);
  }

  KernelConfig kc;
  kc.lambda = o.lambda;
  kc.sigma = o.sigma;
  DiversityReport rep =
      corpus_diversity(sets, parses ? &*parses : nullptr, kc, o.ragged,
                       resolve_threads(o.threads));
  json j;
  j["segments"] = rep.segments;
  j["set_size"] = rep.set_size;
  j["ragged"] = rep.ragged;
  j["ds_bow"] = rep.mean_bow;
  if (!rep.tree.empty()) j["ds_tree"] = rep.mean_tree;
  j["bow_clamped_pairs"] = rep.bow_clamped;
  json per = json::array();
  for (std::size_t s = 0; s < rep.segments; ++s) {
    json e;
    e["segment"] = s;
    e["bow"] = rep.bow[s];
    if (!rep.tree.empty()) e["tree"] = rep.tree[s];
    per.push_back(std::move(e));
  }
  j["per_segment"] = std::move(per);
  emit(o.out, j.dump(2) + "\n");
}

struct TreeStatsOpts {
  std::string parses, out = "-";
  std::vector<int> depths{1, 2, 3, 4, 5};
};

void run_tree_stats(const TreeStatsOpts& o) {
  std::vector<ParseTree> trees = load_parses(o.parses);
  if (trees.empty()) throw data_error(o.parses + ": no trees");
  std::vector<TreeStatsRow> rows = distinct_tree_stats(trees, o.depths);
  std::string out =
      "depth\tdistinct_no_leaves\tdistinct_with_leaves\ttotal\ttype_token_"
      "ratio\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d\t%zu\t%zu\t%zu\t%.6f\n", r.depth,
                  r.distinct_no_leaves, r.distinct_with_leaves, r.total,
                  r.type_token_ratio);
    out += buf;
  }
  emit(o.out, out);
}

struct MineOpts {
  std::vector<std::string> refs;
  std::string systems_dir, scores, out = "-";
  std::vector<int> orders{2, 3, 4};
  double threshold = 0.75;
  int splits = 0;
  std::uint64_t split_seed = 1;
  std::string splits_out;
  unsigned threads = 0;
};

void run_mine(const MineOpts& o) {
  std::vector<std::vector<Tokens>> refs = align_refs(o.refs);
  std::map<std::string, std::vector<Tokens>> systems =
      load_system_dir(o.systems_dir);
  std::map<std::string, double> scores = load_system_scores(o.scores);
  std::vector<ScoredSystem> scored;
  for (const auto& [name, outputs] : systems) {
    if (outputs.size() != refs.size())
      throw data_error("system '" + name + "' has " +
                       std::to_string(outputs.size()) + " segments, refs " +
                       std::to_string(refs.size()));
    auto it = scores.find(name);
    if (it == scores.end())
      throw data_error("no human score for system '" + name + "'");
    scored.push_back({name, it->second});
  }
  unsigned threads = resolve_threads(o.threads);

  std::vector<std::string> voters = select_top_half(scored);
  log_info(std::to_string(voters.size()) + " of " +
           std::to_string(scored.size()) + " systems vote");
  ConstraintSet set = build_constraints(refs, systems, voters, o.orders,
                                        o.threshold, threads);
  emit(o.out, constraints_to_jsonl(set));

  if (o.splits > 0) {
    std::vector<std::string> names;
    for (const auto& s : scored) names.push_back(s.name);
    std::vector<Split> splits = split_protocol(names, o.splits,
                                               o.split_seed);
    json manifest;
    manifest["seed"] = o.split_seed;
    manifest["repeats"] = o.splits;
    json arr = json::array();
    for (std::size_t r = 0; r < splits.size(); ++r) {
      json js;
      js["mining"] = splits[r].mining;
      js["evaluation"] = splits[r].evaluation;
      arr.push_back(std::move(js));
      // constraints from the mining half only; its own top half votes
      std::vector<ScoredSystem> half;
      for (const auto& name : splits[r].mining)
        half.push_back({name, scores.at(name)});
      ConstraintSet split_set =
          build_constraints(refs, systems, select_top_half(half), o.orders,
                            o.threshold, threads);
      if (o.out != "-")
        emit(with_suffix(o.out, ".split" + std::to_string(r)),
             constraints_to_jsonl(split_set));
    }
    manifest["splits"] = std::move(arr);
    if (!o.splits_out.empty())
      emit(o.splits_out, manifest.dump(2) + "\n");
  }
}

struct ClusterFitOpts {
  std::string embeddings, out;
  int k = 8;
  int max_iters = 100;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

struct ClusterAssignOpts {
  std::string embeddings, model, out = "-";
  unsigned threads = 0;
};

struct ClusterPrefixOpts {
  std::string in, codes, out = "-";
  int k = 0;
};

struct ClusterStripOpts {
  std::string in, out = "-", codes_out;
};

void run_cluster_fit(const ClusterFitOpts& o) {
  Matrix x = load_matrix(o.embeddings);
  ClusterModel m =
      kmeans(x, o.k, o.max_iters, o.seed, resolve_threads(o.threads));
  save_model(o.out, m);
  log_info("k-means finished after " +
           std::to_string(m.iterations_run) + " iterations, sse " +
           std::to_string(m.sse.empty() ? 0.0 : m.sse.back()));
}

void run_cluster_assign(const ClusterAssignOpts& o) {
  Matrix x = load_matrix(o.embeddings);
  ClusterModel m = load_model(o.model);
  std::vector<int> codes = assign_codes(x, m, resolve_threads(o.threads));
  std::string out;
  for (int c : codes) {
    out += std::to_string(c);
    out += '\n';
  }
  emit(o.out, out);
}

void run_cluster_prefix(const ClusterPrefixOpts& o) {
  std::vector<std::string> lines = read_lines(o.in);
  std::vector<std::string> code_lines = read_lines(o.codes);
  std::vector<int> codes;
  for (std::size_t i = 0; i < code_lines.size(); ++i) {
    try {
      codes.push_back(std::stoi(code_lines[i]));
    } catch (const std::exception&) {
      throw data_error(o.codes + ":" + std::to_string(i + 1) +
                       ": bad code '" + code_lines[i] + "'");
    }
  }
  std::vector<std::string> prefixed = prefix_codes(lines, codes, o.k);
  std::string out;
  for (const auto& l : prefixed) {
    out += l;
    out += '\n';
  }
  emit(o.out, out);
}

void run_cluster_strip(const ClusterStripOpts& o) {
  std::vector<StrippedLine> stripped = strip_codes(read_lines(o.in));
  std::string text, codes;
  for (const auto& sl : stripped) {
    text += sl.text;
    text += '\n';
    codes += std::to_string(sl.code);
    codes += '\n';
  }
  emit(o.out, text);
  if (!o.codes_out.empty()) emit(o.codes_out, codes);
}

struct CorrelateOpts {
  std::string level, metric_dir, da, baseline, pair, out = "-";
  std::string table_out, table_format = "tsv";
  double gap = 25.0;
  int iterations = 1000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

std::map<std::string, std::string> metric_files(const std::string& dir) {
  if (!fs::is_directory(dir)) throw data_error(dir + " is not a directory");
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().extension() != ".tsv") continue;
    out[entry.path().stem().string()] = entry.path().string();
  }
  if (out.empty()) throw data_error("no *.tsv metric tables in " + dir);
  return out;
}

void run_correlate(const CorrelateOpts& o) {
  CorrelationReport rep;
  if (o.level == "system") {
    std::map<std::string, std::map<std::string, double>> metrics;
    for (const auto& [name, path] : metric_files(o.metric_dir))
      metrics[name] = load_system_scores(path);
    rep = correlate_system_level(metrics, load_system_scores(o.da),
                                 o.baseline, o.pair);
  } else if (o.level == "segment") {
    std::map<std::string, SegmentScores> metrics;
    for (const auto& [name, path] : metric_files(o.metric_dir))
      metrics[name] = load_segment_scores(path);
    rep = correlate_segment_level(metrics, load_segment_scores(o.da),
                                  o.baseline, o.pair, o.gap, o.iterations,
                                  o.seed, resolve_threads(o.threads));
  } else {
    throw usage_error("--level must be system or segment");
  }
  emit(o.out, report_to_json(rep));
  if (!o.table_out.empty()) {
    if (o.table_format == "tsv")
      emit(o.table_out, report_to_tsv(rep));
    else if (o.table_format == "markdown")
      emit(o.table_out, report_to_markdown(rep));
    else
      throw usage_error("unknown table format '" + o.table_format + "'");
  }
}

struct FlipsOpts {
  std::string da, baseline, candidate, out = "-";
  double gap = 25.0;
};

void run_flips(const FlipsOpts& o) {
  SegmentScores da = load_segment_scores(o.da);
  SegmentScores base = load_segment_scores(o.baseline);
  SegmentScores cand = load_segment_scores(o.candidate);
  std::vector<RankPair> pairs = da_to_relative_ranking(da, o.gap);
  FlipResult flips = decision_flips(pairs, base, cand);
  TauResult tb = kendall_tau_rr(pairs, base);
  TauResult tc = kendall_tau_rr(pairs, cand);
  json j;
  j["pairs"] = flips.total;
  j["improved"] = flips.improved;
  j["degraded"] = flips.degraded;
  j["unchanged"] = flips.unchanged;
  j["improved_pct"] = flips.improved_pct;
  j["degraded_pct"] = flips.degraded_pct;
  j["tau_baseline"] = tb.tau;
  j["tau_candidate"] = tc.tau;
  j["tau_delta"] = tc.tau - tb.tau;
  emit(o.out, j.dump(2) + "\n");
}

struct CoverageOpts {
  std::vector<std::string> refs, extra_refs;
  std::string systems_dir, out = "-";
  std::vector<int> orders{1, 4};
  int top = 50;
};

void run_coverage(const CoverageOpts& o) {
  std::vector<std::vector<Tokens>> orig = align_refs(o.refs);
  std::vector<std::vector<Tokens>> extra = align_refs(o.extra_refs);
  std::map<std::string, std::vector<Tokens>> systems =
      load_system_dir(o.systems_dir);
  std::vector<std::vector<Tokens>> outputs;
  for (const auto& [name, lines] : systems) {
    if (lines.size() != orig.size())
      throw data_error("system '" + name + "' segment count mismatch");
    outputs.push_back(lines);
  }
  std::vector<CoverageTable> tables =
      ngram_coverage(orig, extra, outputs, o.orders);
  json j;
  json arr = json::array();
  for (const auto& t : tables) {
    json jt;
    jt["order"] = t.order;
    auto dump = [&](const std::vector<CoverageEntry>& entries) {
      json a = json::array();
      int kept = 0;
      for (const auto& e : entries) {
        if (o.top > 0 && kept >= o.top) break;
        a.push_back({{"ngram", e.ngram}, {"count", e.count}});
        ++kept;
      }
      return a;
    };
    jt["rewarded_by_extra"] = dump(t.rewarded_by_extra);
    jt["unrewarded_everywhere"] = dump(t.unrewarded_everywhere);
    jt["rewarded_total"] = t.rewarded_by_extra.size();
    jt["unrewarded_total"] = t.unrewarded_everywhere.size();
    arr.push_back(std::move(jt));
  }
  j["orders"] = std::move(arr);
  emit(o.out, j.dump(2) + "\n");
}

struct CurveOpts {
  std::string metric, da, out = "-";
  std::vector<std::size_t> sizes;
  int samples = 10;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

void run_curve(const CurveOpts& o) {
  SegmentScores metric = load_segment_scores(o.metric);
  std::map<std::string, double> human = load_system_scores(o.da);
  std::set<int> seg_set;
  for (const auto& [sys, segs] : metric)
    for (const auto& [seg, score] : segs) seg_set.insert(seg);
  std::vector<int> segments(seg_set.begin(), seg_set.end());
  std::vector<std::size_t> sizes = o.sizes;
  if (sizes.empty()) sizes = {segments.size()};
  std::vector<CurvePoint> curve =
      subset_correlation_curve(metric, human, segments, sizes, o.samples,
                               o.seed, resolve_threads(o.threads));
  std::string out = "size\tmean_pearson\tstddev\tsamples\n";
  char buf[128];
  for (const auto& p : curve) {
    std::snprintf(buf, sizeof buf, "%zu\t%.6f\t%.6f\t%zu\n", p.size,
                  p.mean_r, p.stddev, p.rs.size());
    out += buf;
  }
  emit(o.out, out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "refcover: reference-coverage toolkit for machine translation "
      "evaluation"};
  app.require_subcommand(1);
  app.fallthrough();  // let --threads and --config follow the subcommand
  app.set_config("--config", "", "read defaults from an INI/TOML file");
  app.option_defaults()->always_capture_default();

  unsigned threads = 0;
  app.add_option("--threads", threads,
                 "worker threads (0 = REFCOVER_THREADS or hardware)")
      ->envname("REFCOVER_THREADS");

  ScoreOpts score;
  auto* cmd_score =
      app.add_subcommand("score", "BLEU over v13a-tokenized text");
  cmd_score->add_option("--hyp", score.hyp, "hypothesis file")->required();
  cmd_score
      ->add_option("--ref", score.refs,
                   "reference file(s), comma separated or repeated")
      ->required()
      ->delimiter(',');
  cmd_score->add_flag("--sentence", score.sentence,
                      "per-segment smoothed scores instead of corpus BLEU");
  cmd_score->add_option("--max-order", score.max_order, "n-gram order cap");
  cmd_score->add_option("--smooth", score.smooth,
                        "sentence smoothing: exp or none");
  cmd_score->add_option("--out", score.out, "output path (- for stdout)");

  DiversityOpts div;
  auto* cmd_div =
      app.add_subcommand("diversity", "paraphrase-set diversity scores");
  cmd_div
      ->add_option("--paraphrases", div.paraphrases,
                   "aligned paraphrase files")
      ->required()
      ->delimiter(',');
  cmd_div->add_option("--parses", div.parses, "aligned parse files")
      ->delimiter(',');
  cmd_div->add_option("--lambda", div.lambda, "tree kernel decay");
  cmd_div->add_option("--sigma", div.sigma, "tree kernel sigma (0 or 1)");
  cmd_div->add_flag("--ragged", div.ragged,
                    "allow unequal paraphrase counts per segment");
  cmd_div->add_option("--out", div.out, "output path");

  TreeStatsOpts ts;
  auto* cmd_ts =
      app.add_subcommand("tree-stats", "distinct-tree counts by depth");
  cmd_ts->add_option("--parses", ts.parses, "file of bracketed trees")
      ->required();
  cmd_ts->add_option("--depths", ts.depths, "depths to tabulate")
      ->delimiter(',');
  cmd_ts->add_option("--out", ts.out, "output path");

  MineOpts mine;
  auto* cmd_mine = app.add_subcommand(
      "mine", "unrewarded n-gram constraints from system outputs");
  cmd_mine->add_option("--refs", mine.refs, "reference file(s)")
      ->required()
      ->delimiter(',');
  cmd_mine
      ->add_option("--systems", mine.systems_dir,
                   "directory of system outputs (*.txt)")
      ->required();
  cmd_mine
      ->add_option("--scores", mine.scores,
                   "TSV of system<TAB>human score")
      ->required();
  cmd_mine->add_option("--orders", mine.orders, "n-gram orders to mine")
      ->delimiter(',');
  cmd_mine->add_option("--threshold", mine.threshold,
                       "voter agreement threshold");
  cmd_mine->add_option("--splits", mine.splits,
                       "also emit N mining/evaluation bisections");
  cmd_mine->add_option("--split-seed", mine.split_seed, "split RNG seed");
  cmd_mine->add_option("--splits-out", mine.splits_out,
                       "manifest path for the bisections");
  cmd_mine->add_option("--out", mine.out, "constraints JSONL path");

  auto* cmd_cluster =
      app.add_subcommand("cluster", "embedding clusters and pseudotokens");
  cmd_cluster->require_subcommand(1);
  ClusterFitOpts cf;
  auto* cmd_cf = cmd_cluster->add_subcommand("fit", "k-means centroids");
  cmd_cf->add_option("--embeddings", cf.embeddings, "binary matrix")
      ->required();
  cmd_cf->add_option("--k", cf.k, "number of clusters")->required();
  cmd_cf->add_option("--max-iters", cf.max_iters, "Lloyd iteration cap");
  cmd_cf->add_option("--seed", cf.seed, "RNG seed");
  cmd_cf->add_option("--out", cf.out, "model path")->required();
  ClusterAssignOpts ca;
  auto* cmd_ca =
      cmd_cluster->add_subcommand("assign", "nearest-centroid codes");
  cmd_ca->add_option("--embeddings", ca.embeddings, "binary matrix")
      ->required();
  cmd_ca->add_option("--model", ca.model, "model from fit")->required();
  cmd_ca->add_option("--out", ca.out, "codes path");
  ClusterPrefixOpts cp;
  auto* cmd_cp =
      cmd_cluster->add_subcommand("prefix", "prepend <cl_N> pseudotokens");
  cmd_cp->add_option("--in", cp.in, "sentence file")->required();
  cmd_cp->add_option("--codes", cp.codes, "one code per line")->required();
  cmd_cp->add_option("--k", cp.k, "validate codes against this k");
  cmd_cp->add_option("--out", cp.out, "output path");
  ClusterStripOpts cs;
  auto* cmd_cs =
      cmd_cluster->add_subcommand("strip", "remove <cl_N> pseudotokens");
  cmd_cs->add_option("--in", cs.in, "sentence file")->required();
  cmd_cs->add_option("--out", cs.out, "output path");
  cmd_cs->add_option("--codes-out", cs.codes_out,
                     "write the parsed codes here (-1 when absent)");

  CorrelateOpts corr;
  auto* cmd_corr = app.add_subcommand(
      "correlate", "metric-human correlation with significance");
  cmd_corr->add_option("--level", corr.level, "system or segment")
      ->required();
  cmd_corr
      ->add_option("--metric-scores", corr.metric_dir,
                   "directory of <metric>.tsv score tables")
      ->required();
  cmd_corr->add_option("--da", corr.da, "human judgment TSV")->required();
  cmd_corr->add_option("--baseline", corr.baseline,
                       "baseline metric for significance");
  cmd_corr->add_option("--pair", corr.pair, "language pair label");
  cmd_corr->add_option("--gap", corr.gap, "min DA gap for ranking pairs");
  cmd_corr->add_option("--iterations", corr.iterations,
                       "bootstrap iterations");
  cmd_corr->add_option("--seed", corr.seed, "bootstrap seed");
  cmd_corr->add_option("--out", corr.out, "JSON report path");
  cmd_corr->add_option("--table-out", corr.table_out,
                       "also write a table here");
  cmd_corr->add_option("--table-format", corr.table_format,
                       "tsv or markdown");

  auto* cmd_analyze =
      app.add_subcommand("analyze", "decision flips, coverage, curves");
  cmd_analyze->require_subcommand(1);
  FlipsOpts flips;
  auto* cmd_flips = cmd_analyze->add_subcommand(
      "flips", "pairwise decision changes between two metrics");
  cmd_flips->add_option("--da", flips.da, "segment DA judgments")
      ->required();
  cmd_flips->add_option("--baseline", flips.baseline,
                        "baseline metric segment scores")
      ->required();
  cmd_flips->add_option("--candidate", flips.candidate,
                        "candidate metric segment scores")
      ->required();
  cmd_flips->add_option("--gap", flips.gap, "min DA gap");
  cmd_flips->add_option("--out", flips.out, "output path");
  CoverageOpts cov;
  auto* cmd_cov = cmd_analyze->add_subcommand(
      "coverage", "system n-grams vs original and extra references");
  cmd_cov->add_option("--refs", cov.refs, "original reference file(s)")
      ->required()
      ->delimiter(',');
  cmd_cov->add_option("--extra-refs", cov.extra_refs,
                      "additional reference file(s)")
      ->required()
      ->delimiter(',');
  cmd_cov->add_option("--systems", cov.systems_dir,
                      "directory of system outputs")
      ->required();
  cmd_cov->add_option("--orders", cov.orders, "n-gram orders")
      ->delimiter(',');
  cmd_cov->add_option("--top", cov.top, "entries per table (0 = all)");
  cmd_cov->add_option("--out", cov.out, "output path");
  CurveOpts curve;
  auto* cmd_curve = cmd_analyze->add_subcommand(
      "curve", "correlation vs test-set size");
  cmd_curve->add_option("--metric", curve.metric,
                        "segment-level metric scores TSV")
      ->required();
  cmd_curve->add_option("--da", curve.da, "system-level human scores TSV")
      ->required();
  cmd_curve->add_option("--sizes", curve.sizes, "subset sizes")
      ->delimiter(',');
  cmd_curve->add_option("--samples", curve.samples, "samples per size");
  cmd_curve->add_option("--seed", curve.seed, "subset RNG seed");
  cmd_curve->add_option("--out", curve.out, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help, --version
    app.exit(e);
    return 1;
  }

  try {
    div.threads = mine.threads = cf.threads = ca.threads = corr.threads =
        curve.threads = threads;
    if (cmd_score->parsed()) run_score(score);
    if (cmd_div->parsed()) run_diversity(div);
    if (cmd_ts->parsed()) run_tree_stats(ts);
    if (cmd_mine->parsed()) run_mine(mine);
    if (cmd_cluster->parsed()) {
      if (cmd_cf->parsed()) run_cluster_fit(cf);
      if (cmd_ca->parsed()) run_cluster_assign(ca);
      if (cmd_cp->parsed()) run_cluster_prefix(cp);
      if (cmd_cs->parsed()) run_cluster_strip(cs);
    }
    if (cmd_corr->parsed()) run_correlate(corr);
    if (cmd_analyze->parsed()) {
      if (cmd_flips->parsed()) run_flips(flips);
      if (cmd_cov->parsed()) run_coverage(cov);
      if (cmd_curve->parsed()) run_curve(curve);
    }
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const refcover::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
