#include "refcover/report.hpp"

#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "refcover/common.hpp"

namespace refcover {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v, int digits) {
  if (std::isnan(v)) return "-";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string significance_stars(double p) {
  if (std::isnan(p)) return "";
  if (p <= 0.001) return "***";
  if (p <= 0.01) return "**";
  if (p <= 0.05) return "*";
  return "";
}

CorrelationReport correlate_system_level(
    const std::map<std::string, std::map<std::string, double>>& metrics,
    const std::map<std::string, double>& human, const std::string& baseline,
    const std::string& pair_label) {
  if (metrics.empty()) throw data_error("no metric score tables");
  if (!baseline.empty() && !metrics.count(baseline))
    throw data_error("baseline metric '" + baseline + "' not among inputs");

  std::vector<std::string> systems;
  std::vector<double> human_vec;
  for (const auto& [name, score] : human) {
    systems.push_back(name);
    human_vec.push_back(score);
  }
  if (systems.size() < 4)
    throw data_error("need at least 4 systems for system-level analysis");

  auto metric_vec = [&](const std::map<std::string, double>& table) {
    std::vector<double> v;
    v.reserve(systems.size());
    for (const auto& name : systems) {
      auto it = table.find(name);
      if (it == table.end())
        throw data_error("metric table missing system '" + name + "'");
      v.push_back(it->second);
    }
    return v;
  };

  CorrelationReport rep;
  rep.level = "system";
  rep.pair_label = pair_label;
  rep.baseline = baseline;
  rep.n = static_cast<long>(systems.size());

  std::vector<double> base_vec;
  double base_r = 0.0;
  if (!baseline.empty()) {
    base_vec = metric_vec(metrics.at(baseline));
    base_r = pearson(base_vec, human_vec);
  }
  for (const auto& [name, table] : metrics) {
    MetricRow row;
    row.metric = name;
    row.is_baseline = name == baseline;
    std::vector<double> v = metric_vec(table);
    row.value = pearson(v, human_vec);
    if (baseline.empty() || row.is_baseline) {
      row.p_vs_baseline = kNan;
    } else {
      double r23 = pearson(v, base_vec);
      row.p_vs_baseline =
          williams_test(row.value, base_r, r23,
                        static_cast<int>(systems.size()))
              .p;
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

CorrelationReport correlate_segment_level(
    const std::map<std::string, SegmentScores>& metrics,
    const SegmentScores& da, const std::string& baseline,
    const std::string& pair_label, double min_gap, int bootstrap_iterations,
    std::uint64_t seed, unsigned threads) {
  if (metrics.empty()) throw data_error("no metric score tables");
  if (!baseline.empty() && !metrics.count(baseline))
    throw data_error("baseline metric '" + baseline + "' not among inputs");
  std::vector<RankPair> pairs = da_to_relative_ranking(da, min_gap);
  if (pairs.empty())
    throw data_error("no relative-ranking pairs at gap " +
                     std::to_string(min_gap));

  CorrelationReport rep;
  rep.level = "segment";
  rep.pair_label = pair_label;
  rep.baseline = baseline;
  rep.min_gap = min_gap;
  rep.n = static_cast<long>(pairs.size());

  for (const auto& [name, table] : metrics) {
    MetricRow row;
    row.metric = name;
    row.is_baseline = name == baseline;
    row.value = kendall_tau_rr(pairs, table).tau;
    if (baseline.empty() || row.is_baseline) {
      row.p_vs_baseline = kNan;
      row.improved_pct = kNan;
      row.degraded_pct = kNan;
    } else {
      const SegmentScores& base = metrics.at(baseline);
      row.p_vs_baseline = bootstrap_tau_significance(
          pairs, base, table, bootstrap_iterations, seed, threads);
      FlipResult flips = decision_flips(pairs, base, table);
      row.improved_pct = flips.improved_pct;
      row.degraded_pct = flips.degraded_pct;
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

std::string report_to_json(const CorrelationReport& r) {
  nlohmann::json j;
  j["level"] = r.level;
  j["pair"] = r.pair_label;
  j["baseline"] = r.baseline;
  j[r.level == "system" ? "systems" : "pairs"] = r.n;
  if (r.level == "segment") j["min_gap"] = r.min_gap;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    nlohmann::json jr;
    jr["metric"] = row.metric;
    jr["baseline"] = row.is_baseline;
    jr[r.level == "system" ? "pearson" : "tau"] = row.value;
    if (std::isnan(row.p_vs_baseline)) {
      jr["p"] = nullptr;
    } else {
      jr["p"] = row.p_vs_baseline;
      jr["stars"] = significance_stars(row.p_vs_baseline);
    }
    if (r.level == "segment" && !std::isnan(row.improved_pct)) {
      jr["improved_pct"] = row.improved_pct;
      jr["degraded_pct"] = row.degraded_pct;
    }
    rows.push_back(std::move(jr));
  }
  j["metrics"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string report_to_tsv(const CorrelationReport& r) {
  std::string out;
  bool seg = r.level == "segment";
  out = seg ? "metric\ttau\tp\tstars\timproved_pct\tdegraded_pct\n"
            : "metric\tpearson\tp\tstars\n";
  for (const auto& row : r.rows) {
    out += row.metric;
    out += '\t';
    out += fmt(row.value, 3);
    out += '\t';
    out += fmt(row.p_vs_baseline, 4);
    out += '\t';
    out += significance_stars(row.p_vs_baseline);
    if (seg) {
      out += '\t';
      out += fmt(row.improved_pct, 1);
      out += '\t';
      out += fmt(row.degraded_pct, 1);
    }
    out += '\n';
  }
  return out;
}

std::string report_to_markdown(const CorrelationReport& r) {
  bool seg = r.level == "segment";
  std::string out = "| metric | " +
                    std::string(seg ? "tau" : "pearson") +
                    " | p | improved% | degraded% |\n";
  out += "|---|---|---|---|---|\n";
  for (const auto& row : r.rows) {
    out += "| " + row.metric +
           (row.is_baseline ? " (baseline)" : "") + " | " +
           fmt(row.value, 3) + significance_stars(row.p_vs_baseline) +
           " | " + fmt(row.p_vs_baseline, 4) + " | " +
           (seg ? fmt(row.improved_pct, 1) : std::string("-")) + " | " +
           (seg ? fmt(row.degraded_pct, 1) : std::string("-")) + " |\n";
  }
  return out;
}

}  // namespace refcover
