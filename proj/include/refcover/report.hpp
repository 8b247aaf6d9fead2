#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "refcover/stats.hpp"

namespace refcover {

// One metric's row in a correlation report.  p_vs_baseline is NaN for the
// baseline row itself.
struct MetricRow {
  std::string metric;
  bool is_baseline = false;
  double value = 0.0;          // pearson r (system) or tau (segment)
  double p_vs_baseline = 0.0;
  double improved_pct = 0.0;   // segment level only
  double degraded_pct = 0.0;
};

struct CorrelationReport {
  std::string level;       // "system" | "segment"
  std::string pair_label;  // e.g. "de-en"
  std::string baseline;
  long n = 0;              // systems (system level) or pairs (segment level)
  double min_gap = 0.0;
  std::vector<MetricRow> rows;
};

// system-level: Pearson r of each metric against the human system scores,
// Williams significance against the baseline metric.
CorrelationReport correlate_system_level(
    const std::map<std::string, std::map<std::string, double>>& metrics,
    const std::map<std::string, double>& human, const std::string& baseline,
    const std::string& pair_label);

// segment-level: daRR pairs from the segment DA judgments, Kendall tau per
// metric, paired bootstrap + decision flips against the baseline.
CorrelationReport correlate_segment_level(
    const std::map<std::string, SegmentScores>& metrics,
    const SegmentScores& da, const std::string& baseline,
    const std::string& pair_label, double min_gap, int bootstrap_iterations,
    std::uint64_t seed, unsigned threads);

// "***" p <= 0.001, "**" p <= 0.01, "*" p <= 0.05, else "".
std::string significance_stars(double p);

std::string report_to_json(const CorrelationReport& r);
std::string report_to_tsv(const CorrelationReport& r);
std::string report_to_markdown(const CorrelationReport& r);

}  // namespace refcover
