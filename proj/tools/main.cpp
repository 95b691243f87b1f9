#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "macroplace/clustering.h"
#include "macroplace/error.h"
#include "macroplace/fd_placer.h"
#include "macroplace/grid.h"
#include "macroplace/netlist_io.h"
#include "macroplace/proxy_cost.h"
#include "macroplace/sa_engine.h"
#include "macroplace/study.h"

namespace fs = std::filesystem;
using namespace macroplace;

namespace {

struct Options {
  int grid_cols = 32;
  int grid_rows = 32;
  double h_cap = 0.0;  // 0: default from canvas
  double v_cap = 0.0;
  double gamma = 0.5;
  double lambda = 0.5;
  std::uint64_t seed = 0;
  int smooth_radius = 2;
  double macro_h_usage = 1.0;
  double macro_v_usage = 1.0;
  int iters = 100;
  double ka = 1.0;
  double kr = 1.0;
  double io_factor = 1.0;
  std::size_t workers = 1;
  std::string seeds;
  double budget_seconds = 0.0;
  std::string init = "spiral";
  std::string action_weights = "0.2,0.2,0.2,0.2,0.2";
  std::string t_init = "auto";
  double cooling = 0.95;
  long epoch_len = 0;
  long max_steps = 10000;
  int fd_every = 2;
  std::string cluster = "grid";
  std::string external_metrics;
  std::string placement;
  std::string vacuous;
  bool overlap_fd = false;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : item.substr(b, e - b + 1));
  }
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::InvalidConfig, "bad number '" + s + "' for " + what);
}

std::uint64_t to_u64(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::InvalidConfig, "bad integer '" + s + "' for " + what);
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::uint64_t> seed_list(const Options& o) {
  if (o.seeds.empty()) return {o.seed};
  std::vector<std::uint64_t> out;
  for (const std::string& s : split(o.seeds, ',')) out.push_back(to_u64(s, "--seeds"));
  return out;
}

ProxyWeights weights(const Options& o) { return {o.gamma, o.lambda}; }

CongestionConfig congestion(const Options& o) { return {o.smooth_radius, o.macro_h_usage, o.macro_v_usage}; }

FDParams fd_params(const Options& o) {
  FDParams p;
  p.num_iters = o.iters;
  p.k_a = o.ka;
  p.k_r = o.kr;
  p.io_factor = o.io_factor;
  p.seed = o.seed;
  return p;
}

SAConfig sa_config(const Options& o) {
  SAConfig c;
  c.seed = o.seed;
  if (o.init == "spiral") {
    c.init = InitMode::Spiral;
  } else if (o.init == "greedy") {
    c.init = InitMode::GreedyPack;
  } else {
    throw Error(ErrorKind::InvalidConfig, "--init must be spiral or greedy");
  }
  const auto w = split(o.action_weights, ',');
  if (w.size() != kNumActionTypes) {
    throw Error(ErrorKind::InvalidConfig, "--action-weights needs five values (swap,shift,mirror,move,shuffle)");
  }
  for (std::size_t i = 0; i < w.size(); ++i) c.action_weights[i] = to_double(w[i], "--action-weights");
  c.max_steps = o.max_steps;
  if (o.t_init != "auto") c.t_init = to_double(o.t_init, "--t-init");
  c.cooling_ratio = o.cooling;
  c.epoch_len = o.epoch_len;
  c.fd_interval_multiplier = o.fd_every;
  c.fd_params = fd_params(o);
  c.weights = weights(o);
  c.congestion = congestion(o);
  c.validate();
  return c;
}

std::optional<VacuousMode> vacuous_mode(const std::string& text) {
  if (text.empty()) return std::nullopt;
  if (text == "lower-left") return VacuousLowerLeft{};
  if (text == "upper-right") return VacuousUpperRight{};
  const auto xy = split(text, ',');
  if (xy.size() != 2) throw Error(ErrorKind::InvalidConfig, "--vacuous takes lower-left, upper-right or X,Y");
  return VacuousPoint{to_double(xy[0], "--vacuous"), to_double(xy[1], "--vacuous")};
}

struct Pipeline {
  Netlist netlist;
  Placement placement;
  Grid grid;
  ClusteredNetlist cnl;
};

Grid make_grid(const Canvas& canvas, const Options& o) {
  const double h = o.h_cap > 0.0 ? o.h_cap : default_h_capacity(canvas, o.grid_rows);
  const double v = o.v_cap > 0.0 ? o.v_cap : default_v_capacity(canvas, o.grid_cols);
  return build_grid(canvas, o.grid_cols, o.grid_rows, h, v);
}

Placement merge(const Placement& base, const Placement& overlay) {
  Placement out = base;
  for (std::size_t i = 0; i < overlay.size(); ++i) {
    if (overlay.has(i)) out.set(i, overlay.at(i));
  }
  return out;
}

// parse -> optional placement override -> cluster -> optional overlap removal.
Pipeline build_pipeline(const std::string& input, const Options& o) {
  LoadedDesign d = load_design(input);
  Placement placement = d.placement;
  if (!o.placement.empty()) placement = merge(placement, read_placement(d.netlist, o.placement));
  if (const auto mode = vacuous_mode(o.vacuous)) placement = apply_vacuous_placement(d.netlist, *mode, placement);
  Grid grid = make_grid(d.netlist.canvas(), o);
  ClusteredNetlist cnl;
  if (o.cluster == "grid") {
    cnl = cluster_by_grid(d.netlist, placement, grid);
  } else if (o.cluster == "none") {
    cnl = cluster_none(d.netlist, placement);
  } else {
    throw Error(ErrorKind::InvalidConfig, "--cluster must be grid or none");
  }
  if (o.overlap_fd) cnl.placement = fd_repulsive_only(cnl.netlist, cnl.placement, fd_params(o));
  return {std::move(d.netlist), std::move(placement), std::move(grid), std::move(cnl)};
}

RunManifest manifest(const std::string& command, const std::string& input, const Options& o) {
  RunManifest m = base_manifest(command);
  m.add("input", input.empty() ? "" : fs::absolute(input).string());
  if (!o.placement.empty()) m.add("pl", fs::absolute(o.placement).string());
  if (!o.vacuous.empty()) m.add("vacuous", o.vacuous);
  m.add("cluster", o.cluster);
  m.add("overlap-fd", o.overlap_fd ? "true" : "false");
  m.add("grid-cols", std::to_string(o.grid_cols));
  m.add("grid-rows", std::to_string(o.grid_rows));
  m.add("h-cap", num(o.h_cap));
  m.add("v-cap", num(o.v_cap));
  m.add("gamma", num(o.gamma));
  m.add("lambda", num(o.lambda));
  m.add("smooth-radius", std::to_string(o.smooth_radius));
  m.add("macro-h-usage", num(o.macro_h_usage));
  m.add("macro-v-usage", num(o.macro_v_usage));
  m.add("seed", std::to_string(o.seed));
  if (!o.seeds.empty()) m.add("seeds", o.seeds);
  m.add("iters", std::to_string(o.iters));
  m.add("ka", num(o.ka));
  m.add("kr", num(o.kr));
  m.add("io-factor", num(o.io_factor));
  m.add("workers", std::to_string(o.workers));
  m.add("budget-seconds", num(o.budget_seconds));
  m.add("init", o.init);
  m.add("action-weights", o.action_weights);
  m.add("t-init", o.t_init);
  m.add("cooling", num(o.cooling));
  m.add("epoch-len", std::to_string(o.epoch_len));
  m.add("max-steps", std::to_string(o.max_steps));
  m.add("fd-every", std::to_string(o.fd_every));
  return m;
}

fs::path manifest_path(const fs::path& output) { return fs::path(output.string() + ".manifest"); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error(ErrorKind::IoFailure, "write to " + path.string() + " failed");
}

std::string breakdown_text(const ProxyBreakdown& b, const ProxyWeights& w) {
  return "wirelength=" + num(b.wirelength) + "\ndensity=" + num(b.density) + "\ncongestion=" + num(b.congestion) +
         "\ntotal=" + num(b.total) + "\ngamma=" + num(w.gamma) + "\nlambda=" + num(w.lambda) + "\n";
}

// Minimal CSV table: header names and rows of cells, no quoting.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name, const fs::path& path) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw Error(ErrorKind::InvalidConfig, path.string() + " has no column '" + name + "'");
  }
};

Table read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::MissingFile, "cannot open " + path.string());
  Table t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split(line, ',');
    if (t.header.empty()) {
      t.header = std::move(cells);
      continue;
    }
    if (cells.size() != t.header.size()) {
      throw Error(ErrorKind::MalformedLine, path.string() + ":" + std::to_string(line_no) + ": expected " +
                                                std::to_string(t.header.size()) + " fields");
    }
    t.rows.push_back(std::move(cells));
  }
  return t;
}

// Joins `extra` into `base` on the run_id column.
Table join_on_run_id(const Table& base, const fs::path& base_path, const Table& extra, const fs::path& extra_path) {
  const std::size_t bk = base.column("run_id", base_path);
  const std::size_t ek = extra.column("run_id", extra_path);
  std::map<std::string, const std::vector<std::string>*> by_id;
  for (const auto& row : extra.rows) by_id[row[ek]] = &row;
  Table out;
  out.header = base.header;
  for (std::size_t i = 0; i < extra.header.size(); ++i) {
    if (i != ek) out.header.push_back(extra.header[i]);
  }
  for (const auto& row : base.rows) {
    const auto it = by_id.find(row[bk]);
    if (it == by_id.end()) continue;
    auto joined = row;
    for (std::size_t i = 0; i < it->second->size(); ++i) {
      if (i != ek) joined.push_back((*it->second)[i]);
    }
    out.rows.push_back(std::move(joined));
  }
  return out;
}

int cmd_parse(const std::string& input, const std::string& out) {
  std::size_t dropped = 0;
  std::size_t clamped_ports = 0;
  std::size_t clamped_pins = 0;
  LoadedDesign d;
  if (fs::path(input).extension() == ".aux") {
    BookshelfDesign b = parse_bookshelf(input);
    dropped = b.dropped_nets;
    clamped_ports = b.clamped_ports;
    clamped_pins = b.clamped_pins;
    d = {std::move(b.netlist), std::move(b.placement)};
  } else {
    d = load_design(input);
  }
  std::map<NodeKind, std::size_t> kinds;
  std::size_t pins = 0;
  std::size_t movable_macros = 0;
  for (const Node& n : d.netlist.nodes()) {
    ++kinds[n.kind];
    if (n.is_movable_macro()) ++movable_macros;
  }
  for (const Net& net : d.netlist.nets()) pins += net.pins.size();
  std::cout << "nodes=" << d.netlist.num_nodes() << "\nmacros=" << kinds[NodeKind::Macro]
            << "\nmovable_macros=" << movable_macros << "\nstdcells=" << kinds[NodeKind::StdCell]
            << "\nclusters=" << kinds[NodeKind::Cluster] << "\nports=" << kinds[NodeKind::Port]
            << "\nnets=" << d.netlist.num_nets() << "\npins=" << pins << "\ncanvas_width=" << num(d.netlist.canvas().width)
            << "\ncanvas_height=" << num(d.netlist.canvas().height) << "\ndropped_nets=" << dropped
            << "\nclamped_ports=" << clamped_ports << "\nclamped_pins=" << clamped_pins << "\n";
  if (!out.empty()) {
    write_native(d.netlist, out);
    bool any_placed = false;
    for (std::size_t i = 0; i < d.placement.size(); ++i) any_placed = any_placed || d.placement.has(i);
    if (any_placed) write_text(out + ".pl", format_placement(d.netlist, d.placement));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("macroplace"));

  CLI::App app{"Macro placement evaluation and simulated-annealing toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Plain-text key = value file; command-line flags take precedence");
  // Run manifests double as config files; their bookkeeping keys are ignored.
  app.allow_config_extras(true);

  Options o;
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");
  app.add_option("--grid-cols", o.grid_cols, "Grid columns")->check(CLI::PositiveNumber);
  app.add_option("--grid-rows", o.grid_rows, "Grid rows")->check(CLI::PositiveNumber);
  app.add_option("--h-cap", o.h_cap, "Horizontal routing capacity per cell (0: 10 * cell height)");
  app.add_option("--v-cap", o.v_cap, "Vertical routing capacity per cell (0: 10 * cell width)");
  app.add_option("--gamma", o.gamma, "Density weight");
  app.add_option("--lambda", o.lambda, "Congestion weight");
  app.add_option("--seed", o.seed, "Random seed");
  app.add_option("--smooth-radius", o.smooth_radius, "Net congestion smoothing radius")->check(CLI::NonNegativeNumber);
  app.add_option("--macro-h-usage", o.macro_h_usage, "Horizontal tracks blocked per unit of macro boundary");
  app.add_option("--macro-v-usage", o.macro_v_usage, "Vertical tracks blocked per unit of macro boundary");
  app.add_option("--iters", o.iters, "Force-directed iterations")->check(CLI::PositiveNumber);
  app.add_option("--ka", o.ka, "Attractive force factor");
  app.add_option("--kr", o.kr, "Repulsive force factor");
  app.add_option("--io-factor", o.io_factor, "Attraction multiplier on port connections");
  app.add_option("--workers", o.workers, "Parallel annealing workers")->check(CLI::PositiveNumber);
  app.add_option("--seeds", o.seeds, "Comma-separated seeds split across workers (default: --seed)");
  app.add_option("--budget-seconds", o.budget_seconds, "Wall-clock cap per worker (0: none)");
  app.add_option("--init", o.init, "Initial macro placement: spiral or greedy");
  app.add_option("--action-weights", o.action_weights, "Weights of swap,shift,mirror,move,shuffle");
  app.add_option("--t-init", o.t_init, "Initial temperature, or auto");
  app.add_option("--cooling", o.cooling, "Temperature ratio per epoch");
  app.add_option("--epoch-len", o.epoch_len, "Steps per temperature (0: 10 * macros)");
  app.add_option("--max-steps", o.max_steps, "Annealing steps per worker");
  app.add_option("--fd-every", o.fd_every, "Run force-directed placement every N * macros steps (2 to 5)");
  app.add_option("--cluster", o.cluster, "Standard-cell handling: grid or none");
  app.add_option("--external-metrics", o.external_metrics, "CSV with a run_id column joined into study tables");
  app.add_option("--pl", o.placement, "Placement file overriding the design's locations");
  app.add_option("--vacuous", o.vacuous, "Put every movable node at lower-left, upper-right or X,Y");
  app.add_flag("--overlap-fd", o.overlap_fd, "Repulsive-only force-directed pass after clustering");

  std::string input;
  std::string out;
  std::string x_col = "total";
  std::string y_col = "hpwl";
  std::size_t runs = 3;
  std::string combos;
  bool repulsive_only = false;

  auto* parse = app.add_subcommand("parse", "Read a design and print its statistics");
  parse->add_option("input", input, "Netlist (.aux for Bookshelf)")->required();
  parse->add_option("-o,--out", out, "Write the netlist in native format (placement to <out>.pl)");

  auto* cluster = app.add_subcommand("cluster", "Cluster standard cells and write the clustered design");
  cluster->add_option("input", input, "Netlist")->required();
  cluster->add_option("-o,--out", out, "Native netlist output; placement goes to <out>.pl")->required();

  auto* fd = app.add_subcommand("fd", "Force-directed placement of soft nodes");
  fd->add_option("input", input, "Netlist")->required();
  fd->add_option("-o,--out", out, "Placement output")->required();
  fd->add_flag("--repulsive-only", repulsive_only, "Overlap removal only (attraction off)");

  auto* evaluate = app.add_subcommand("evaluate", "Print the proxy cost breakdown of a placement");
  evaluate->add_option("input", input, "Netlist")->required();

  auto* sa = app.add_subcommand("sa", "Simulated-annealing macro placement");
  sa->add_option("input", input, "Netlist")->required();
  sa->add_option("-o,--out-dir", out, "Output directory")->required();

  auto* stability = app.add_subcommand("stability", "Repeat annealing runs and tabulate mean and std-dev");
  stability->add_option("input", input, "Netlist")->required();
  stability->add_option("-o,--out-dir", out, "Output directory")->required();
  stability->add_option("--runs", runs, "Runs per seed (at least 2)");

  auto* sweep = app.add_subcommand("sweep", "Proxy cost under several (gamma, lambda) weightings");
  sweep->add_option("input", input, "Netlist")->required();
  sweep->add_option("--combos", combos, "gamma:lambda pairs, comma-separated (default 0.5:0.5,1:0.5,0.01:0.01)");
  sweep->add_option("-o,--out", out, "CSV output (default: stdout)");

  auto* shuffle = app.add_subcommand("shuffle", "Permute same-size macros and compare costs");
  shuffle->add_option("input", input, "Netlist")->required();
  shuffle->add_option("-o,--out", out, "Shuffled placement output")->required();

  auto* kendall = app.add_subcommand("kendall", "Kendall tau-b between two columns of a CSV");
  kendall->add_option("input", input, "CSV file (for example runs.csv from stability)")->required();
  kendall->add_option("--x", x_col, "First column");
  kendall->add_option("--y", y_col, "Second column");

  auto* plot = app.add_subcommand("plot", "Render a placement as SVG");
  plot->add_option("input", input, "Netlist")->required();
  plot->add_option("-o,--out", out, "SVG output")->required();

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);
  if (verbose) spdlog::set_level(spdlog::level::debug);

  try {
    if (parse->parsed()) return cmd_parse(input, out);

    if (cluster->parsed()) {
      const Pipeline p = build_pipeline(input, o);
      write_native(p.cnl.netlist, out);
      write_text(out + ".pl", format_placement(p.cnl.netlist, p.cnl.placement));
      manifest("cluster", input, o).write(manifest_path(out));
      std::cout << "nodes=" << p.cnl.netlist.num_nodes() << "\nnets=" << p.cnl.netlist.num_nets()
                << "\nclustered_cells=" << p.cnl.cluster_of.size() << "\n";
      return 0;
    }

    if (fd->parsed()) {
      const Pipeline p = build_pipeline(input, o);
      const Placement placed = repulsive_only ? fd_repulsive_only(p.cnl.netlist, p.cnl.placement, fd_params(o))
                                              : fd_place(p.cnl.netlist, p.cnl.placement, fd_params(o));
      write_placement(p.cnl.netlist, placed, out);
      RunManifest m = manifest("fd", input, o);
      m.add("repulsive-only", repulsive_only ? "true" : "false");
      m.write(manifest_path(out));
      return 0;
    }

    if (evaluate->parsed()) {
      const Pipeline p = build_pipeline(input, o);
      const ProxyBreakdown b = proxy_cost(p.cnl.netlist, p.cnl.placement, p.grid, weights(o), congestion(o));
      std::cout << breakdown_text(b, weights(o));
      return 0;
    }

    if (sa->parsed()) {
      const SAConfig config = sa_config(o);
      const Pipeline p = build_pipeline(input, o);
      const fs::path dir(out);
      fs::create_directories(dir);
      const ParallelResult r = run_parallel(p.cnl, p.grid, config, o.workers, seed_list(o), o.budget_seconds);
      write_native(p.cnl.netlist, dir / "netlist.txt");
      write_placement(p.cnl.netlist, r.best.best_placement, dir / "placement.pl");
      std::string breakdown = breakdown_text(r.best.best_cost, weights(o));
      breakdown += "initial_total=" + num(r.best.initial_cost.total) + "\nbest_worker=" +
                   std::to_string(r.best_worker) + "\nbest_seed=" + std::to_string(r.best.seed) + "\nsteps=" +
                   std::to_string(r.best.steps) + "\nt_init=" + num(r.best.t_init) + "\nfailed_workers=" +
                   std::to_string(r.failures.size()) + "\n";
      write_text(dir / "breakdown.txt", breakdown);
      for (std::size_t w = 0; w < r.workers.size(); ++w) {
        write_text(dir / ("trace_w" + std::to_string(w) + ".csv"), format_trace_csv(r.workers[w].cost_trace));
      }
      manifest("sa", input, o).write(dir / "manifest.txt");
      std::cout << breakdown;
      return 0;
    }

    if (stability->parsed()) {
      const SAConfig config = sa_config(o);
      const Pipeline p = build_pipeline(input, o);
      std::vector<StudySpec> specs;
      for (std::uint64_t s : seed_list(o)) {
        StudySpec spec{std::to_string(s), config, {s}, o.workers, o.budget_seconds};
        spec.config.seed = s;
        specs.push_back(spec);
      }
      std::vector<RunRecord> records;
      const StabilityReport report = stability_study(p.cnl, p.grid, specs, runs, &records);
      const fs::path dir(out);
      fs::create_directories(dir);
      write_text(dir / "stability.csv", format_stability_csv(report));
      write_text(dir / "runs.csv", format_runs_csv(records));
      if (!o.external_metrics.empty()) {
        const Table joined =
            join_on_run_id(read_csv(dir / "runs.csv"), dir / "runs.csv", read_csv(o.external_metrics), o.external_metrics);
        std::string text;
        for (std::size_t i = 0; i < joined.header.size(); ++i) text += (i ? "," : "") + joined.header[i];
        text += "\n";
        for (const auto& row : joined.rows) {
          for (std::size_t i = 0; i < row.size(); ++i) text += (i ? "," : "") + row[i];
          text += "\n";
        }
        write_text(dir / "runs_joined.csv", text);
      }
      RunManifest m = manifest("stability", input, o);
      m.add("runs", std::to_string(runs));
      if (!o.external_metrics.empty()) m.add("external-metrics", o.external_metrics);
      m.write(dir / "manifest.txt");
      std::cout << format_stability_table(report);
      return 0;
    }

    if (sweep->parsed()) {
      const Pipeline p = build_pipeline(input, o);
      std::vector<ProxyWeights> list;
      if (combos.empty()) {
        list = default_sweep_combos();
      } else {
        for (const std::string& c : split(combos, ',')) {
          const auto gl = split(c, ':');
          if (gl.size() != 2) throw Error(ErrorKind::InvalidConfig, "--combos entries look like gamma:lambda");
          list.push_back({to_double(gl[0], "--combos"), to_double(gl[1], "--combos")});
        }
      }
      const std::string csv = format_sweep_csv(weight_sweep(p.cnl.netlist, p.cnl.placement, p.grid, list, congestion(o)));
      if (out.empty()) {
        std::cout << csv;
      } else {
        write_text(out, csv);
        RunManifest m = manifest("sweep", input, o);
        if (!combos.empty()) m.add("combos", combos);
        m.write(manifest_path(out));
      }
      return 0;
    }

    if (shuffle->parsed()) {
      const Pipeline p = build_pipeline(input, o);
      const Placement shuffled = shuffle_same_size(p.cnl.netlist, p.cnl.placement, o.seed);
      write_placement(p.cnl.netlist, shuffled, out);
      manifest("shuffle", input, o).write(manifest_path(out));
      const ProxyBreakdown before = proxy_cost(p.cnl.netlist, p.cnl.placement, p.grid, weights(o), congestion(o));
      const ProxyBreakdown after = proxy_cost(p.cnl.netlist, shuffled, p.grid, weights(o), congestion(o));
      std::cout << "before_total=" << num(before.total) << "\nafter_total=" << num(after.total)
                << "\nbefore_hpwl=" << num(weighted_hpwl(p.cnl.netlist, p.cnl.placement))
                << "\nafter_hpwl=" << num(weighted_hpwl(p.cnl.netlist, shuffled)) << "\n";
      return 0;
    }

    if (kendall->parsed()) {
      Table t = read_csv(input);
      if (!o.external_metrics.empty()) t = join_on_run_id(t, input, read_csv(o.external_metrics), o.external_metrics);
      const std::size_t xi = t.column(x_col, input);
      const std::size_t yi = t.column(y_col, input);
      std::vector<double> xs, ys;
      for (const auto& row : t.rows) {
        xs.push_back(to_double(row[xi], x_col));
        ys.push_back(to_double(row[yi], y_col));
      }
      const double tau = kendall_tau(xs, ys);
      std::cout << "n=" << xs.size() << "\ntau_b=" << num(tau) << "\n";
      return 0;
    }

    if (plot->parsed()) {
      const Pipeline p = build_pipeline(input, o);
      write_svg(p.cnl.netlist, p.cnl.placement, p.grid, out);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
