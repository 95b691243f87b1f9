#include "macroplace/study.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <numeric>
#include <sstream>

#include "macroplace/error.h"
#include "macroplace/version.h"

namespace macroplace {

namespace {

using Count = long long;

Count tie_pairs(Count run) { return run * (run - 1) / 2; }

// Ties among consecutive equal values of a sorted sequence.
template <typename Eq>
Count count_ties(std::size_t n, Eq equal) {
  Count total = 0;
  Count run = 1;
  for (std::size_t i = 1; i < n; ++i) {
    if (equal(i - 1, i)) {
      ++run;
    } else {
      total += tie_pairs(run);
      run = 1;
    }
  }
  return total + tie_pairs(run);
}

// Stable merge sort on `v`, returning the number of inversions (strictly
// greater element before a smaller one).
Count merge_count(std::vector<double>& v, std::vector<double>& scratch, std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  Count swaps = merge_count(v, scratch, lo, mid) + merge_count(v, scratch, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += static_cast<Count>(mid - i);
      scratch[k++] = v[j++];
    } else {
      scratch[k++] = v[i++];
    }
  }
  while (i < mid) scratch[k++] = v[i++];
  while (j < hi) scratch[k++] = v[j++];
  std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo), scratch.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

}  // namespace

double kendall_tau(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error(ErrorKind::LengthMismatch, "kendall_tau needs equal-length inputs");
  const std::size_t n = xs.size();
  if (n < 2) throw Error(ErrorKind::DegenerateInput, "kendall_tau needs at least two samples");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return xs[a] < xs[b] || (xs[a] == xs[b] && ys[a] < ys[b]);
  });
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = ys[order[i]];

  const Count total = tie_pairs(static_cast<Count>(n));
  const Count x_ties = count_ties(n, [&](std::size_t a, std::size_t b) { return xs[order[a]] == xs[order[b]]; });
  const Count joint_ties = count_ties(n, [&](std::size_t a, std::size_t b) {
    return xs[order[a]] == xs[order[b]] && y[a] == y[b];
  });
  std::vector<double> scratch(n);
  const Count swaps = merge_count(y, scratch, 0, n);
  const Count y_ties = count_ties(n, [&](std::size_t a, std::size_t b) { return y[a] == y[b]; });

  const Count x_pairs = total - x_ties;
  const Count y_pairs = total - y_ties;
  if (x_pairs == 0 || y_pairs == 0) throw Error(ErrorKind::DegenerateInput, "kendall_tau input is constant");
  const Count score = total - x_ties - y_ties + joint_ties - 2 * swaps;  // concordant - discordant
  return static_cast<double>(score) / std::sqrt(static_cast<double>(x_pairs) * static_cast<double>(y_pairs));
}

MetricSummary summarize(std::span<const double> values) {
  MetricSummary s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() >= 2) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  return s;
}

namespace {

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names{"wirelength", "density", "congestion", "total", "hpwl"};
  return names;
}

double metric(const RunRecord& r, const std::string& name) {
  if (name == "wirelength") return r.cost.wirelength;
  if (name == "density") return r.cost.density;
  if (name == "congestion") return r.cost.congestion;
  if (name == "total") return r.cost.total;
  return r.hpwl;
}

StabilityRow summarize_group(const std::string& group, const std::vector<const RunRecord*>& runs) {
  StabilityRow row{group, {}};
  for (const std::string& name : metric_names()) {
    std::vector<double> values;
    values.reserve(runs.size());
    for (const RunRecord* r : runs) values.push_back(metric(*r, name));
    row.metrics[name] = summarize(values);
  }
  return row;
}

}  // namespace

StabilityReport tabulate(const std::vector<RunRecord>& runs) {
  StabilityReport report;
  report.metric_names = metric_names();
  std::vector<std::string> groups;
  for (const RunRecord& r : runs) {
    if (std::find(groups.begin(), groups.end(), r.group) == groups.end()) groups.push_back(r.group);
  }
  std::vector<const RunRecord*> all;
  for (const RunRecord& r : runs) all.push_back(&r);
  for (const std::string& g : groups) {
    std::vector<const RunRecord*> members;
    for (const RunRecord& r : runs) {
      if (r.group == g) members.push_back(&r);
    }
    report.rows.push_back(summarize_group(g, members));
  }
  report.rows.push_back(summarize_group(kAggregateGroup, all));
  return report;
}

double weighted_hpwl(const Netlist& netlist, const Placement& placement) {
  double sum = 0.0;
  for (const Net& net : netlist.nets()) sum += net.weight * net_hpwl(net, placement);
  return sum;
}

StabilityReport stability_study(const ClusteredNetlist& cnl, const Grid& grid, const std::vector<StudySpec>& specs,
                                std::size_t runs_per_config, std::vector<RunRecord>* runs_out) {
  if (runs_per_config < 2) throw Error(ErrorKind::InvalidConfig, "a stability study needs at least two runs per configuration");
  std::vector<RunRecord> runs;
  for (const StudySpec& spec : specs) {
    for (std::size_t r = 0; r < runs_per_config; ++r) {
      const ParallelResult res =
          run_parallel(cnl, grid, spec.config, std::max<std::size_t>(1, spec.workers), spec.seeds, spec.budget_seconds);
      runs.push_back({spec.label, r, res.best.best_cost, weighted_hpwl(cnl.netlist, res.best.best_placement)});
    }
  }
  StabilityReport report = tabulate(runs);
  if (runs_out) *runs_out = std::move(runs);
  return report;
}

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::string format_stability_csv(const StabilityReport& report) {
  std::ostringstream out;
  out << "group,count";
  for (const std::string& m : report.metric_names) out << ',' << m << "_mean," << m << "_std";
  out << '\n';
  for (const StabilityRow& row : report.rows) {
    out << row.group << ',' << row.metrics.at(report.metric_names.front()).count;
    for (const std::string& m : report.metric_names) {
      const MetricSummary& s = row.metrics.at(m);
      out << ',' << num(s.mean) << ',' << num(s.stddev);
    }
    out << '\n';
  }
  return out.str();
}

std::string format_stability_table(const StabilityReport& report) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header{"group"};
  for (const std::string& m : report.metric_names) header.push_back(m);
  cells.push_back(header);
  for (const StabilityRow& row : report.rows) {
    std::vector<std::string> line{row.group};
    for (const std::string& m : report.metric_names) {
      const MetricSummary& s = row.metrics.at(m);
      char buf[96];
      std::snprintf(buf, sizeof buf, "%.4f (%.4f)", s.mean, s.stddev);
      line.emplace_back(buf);
    }
    cells.push_back(std::move(line));
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  }
  std::ostringstream out;
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      out << line[i] << std::string(width[i] - line[i].size() + (i + 1 < line.size() ? 2 : 0), ' ');
    }
    out << '\n';
  }
  return out.str();
}

std::string run_id(const RunRecord& r) { return r.group + "-" + std::to_string(r.run); }

std::string format_runs_csv(const std::vector<RunRecord>& runs) {
  std::ostringstream out;
  out << "run_id,group,run,wirelength,density,congestion,total,hpwl\n";
  for (const RunRecord& r : runs) {
    out << run_id(r) << ',' << r.group << ',' << r.run << ',' << num(r.cost.wirelength) << ',' << num(r.cost.density) << ','
        << num(r.cost.congestion) << ',' << num(r.cost.total) << ',' << num(r.hpwl) << '\n';
  }
  return out.str();
}

std::vector<SweepRow> weight_sweep(const Netlist& netlist, const Placement& placement, const Grid& grid,
                                   const std::vector<ProxyWeights>& combos, const CongestionConfig& config) {
  const ProxyBreakdown components = proxy_cost(netlist, placement, grid, ProxyWeights{}, config);
  std::vector<SweepRow> rows;
  rows.reserve(combos.size());
  for (const ProxyWeights& w : combos) rows.push_back({w, recombine(components, w)});
  return rows;
}

std::string format_sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "gamma,lambda,wirelength,density,congestion,total\n";
  for (const SweepRow& r : rows) {
    out << num(r.weights.gamma) << ',' << num(r.weights.lambda) << ',' << num(r.cost.wirelength) << ','
        << num(r.cost.density) << ',' << num(r.cost.congestion) << ',' << num(r.cost.total) << '\n';
  }
  return out.str();
}

std::vector<ProxyWeights> default_sweep_combos() { return {{0.5, 0.5}, {1.0, 0.5}, {0.01, 0.01}}; }

std::string RunManifest::format() const {
  std::string out;
  for (const auto& [k, v] : entries) {
    const bool quote = v.find_first_of(", \t") != std::string::npos;
    out += k + " = " + (quote ? "\"" + v + "\"" : v) + "\n";
  }
  return out;
}

void RunManifest::write(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open " + path.string() + " for writing");
  out << format();
  if (!out) throw Error(ErrorKind::IoFailure, "write to " + path.string() + " failed");
}

RunManifest base_manifest(const std::string& command) {
  RunManifest m;
  m.add("command", command);
  m.add("tool_version", kVersion);
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  m.add("timestamp", buf);
  return m;
}

}  // namespace macroplace
