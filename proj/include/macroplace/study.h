#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "macroplace/clustering.h"
#include "macroplace/grid.h"
#include "macroplace/proxy_cost.h"
#include "macroplace/sa_engine.h"

namespace macroplace {

// Kendall tau-b (tie-corrected) in O(n log n). Throws LengthMismatch, and
// DegenerateInput for fewer than two samples or when either list is constant.
double kendall_tau(std::span<const double> xs, std::span<const double> ys);

struct MetricSummary {
  double mean = 0.0;
  double stddev = 0.0;  // sample (n - 1) estimator; 0 when n < 2
  std::size_t count = 0;
};

MetricSummary summarize(std::span<const double> values);

// One finished run of a study.
struct RunRecord {
  std::string group;  // seed label, e.g. "1" or "1+2"
  std::size_t run = 0;
  ProxyBreakdown cost;
  double hpwl = 0.0;  // weighted HPWL sum, length units
};

inline constexpr const char* kAggregateGroup = "AGGR";

struct StabilityRow {
  std::string group;
  std::map<std::string, MetricSummary> metrics;
};

// Rows per group in first-appearance order, then the pooled AGGR row.
struct StabilityReport {
  std::vector<std::string> metric_names;
  std::vector<StabilityRow> rows;
};

StabilityReport tabulate(const std::vector<RunRecord>& runs);

struct StudySpec {
  std::string label;
  SAConfig config;
  std::vector<std::uint64_t> seeds;  // seed pair splitting when size 2
  std::size_t workers = 1;
  double budget_seconds = 0.0;
};

// Runs every spec `runs_per_config` times. Throws InvalidConfig when
// runs_per_config < 2.
StabilityReport stability_study(const ClusteredNetlist& cnl, const Grid& grid, const std::vector<StudySpec>& specs,
                                std::size_t runs_per_config, std::vector<RunRecord>* runs_out = nullptr);

std::string format_stability_csv(const StabilityReport& report);
std::string format_stability_table(const StabilityReport& report);
// "<group>-<run>", the join key for external metric files.
std::string run_id(const RunRecord& r);
std::string format_runs_csv(const std::vector<RunRecord>& runs);

struct SweepRow {
  ProxyWeights weights;
  ProxyBreakdown cost;
};

// One geometry pass; each combo recombined from the same components.
std::vector<SweepRow> weight_sweep(const Netlist& netlist, const Placement& placement, const Grid& grid,
                                   const std::vector<ProxyWeights>& combos, const CongestionConfig& config = {});

std::string format_sweep_csv(const std::vector<SweepRow>& rows);

// The three weightings compared in the academic study.
std::vector<ProxyWeights> default_sweep_combos();

double weighted_hpwl(const Netlist& netlist, const Placement& placement);

// Everything needed to re-run a command, as "key = value" lines.
struct RunManifest {
  std::vector<std::pair<std::string, std::string>> entries;

  void add(std::string key, std::string value) { entries.emplace_back(std::move(key), std::move(value)); }
  std::string format() const;
  void write(const std::filesystem::path& path) const;
};

RunManifest base_manifest(const std::string& command);

}  // namespace macroplace
