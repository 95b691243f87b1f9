#include "macroplace/sa_engine.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <thread>

#include <spdlog/spdlog.h>

#include "macroplace/error.h"

namespace macroplace {

std::string_view to_string(ActionType a) {
  switch (a) {
    case ActionType::Swap: return "swap";
    case ActionType::Shift: return "shift";
    case ActionType::Mirror: return "mirror";
    case ActionType::Move: return "move";
    case ActionType::Shuffle: return "shuffle";
  }
  return "unknown";
}

void SAConfig::validate() const {
  double sum = 0.0;
  for (double w : action_weights) {
    if (!(w >= 0.0)) throw Error(ErrorKind::InvalidConfig, "action weights must be nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw Error(ErrorKind::InvalidConfig, "action weights must sum to 1");
  if (max_steps < 0) throw Error(ErrorKind::InvalidConfig, "max_steps must be nonnegative");
  if (t_init && !(*t_init >= 0.0)) throw Error(ErrorKind::InvalidConfig, "t_init must be nonnegative");
  if (!(cooling_ratio > 0.0 && cooling_ratio < 1.0)) {
    throw Error(ErrorKind::InvalidConfig, "cooling ratio must lie in (0, 1)");
  }
  if (epoch_len < 0) throw Error(ErrorKind::InvalidConfig, "epoch_len must be positive (or 0 for the default)");
  if (fd_interval_multiplier < 2 || fd_interval_multiplier > 5) {
    throw Error(ErrorKind::InvalidConfig, "FD interval multiplier must be one of 2, 3, 4, 5");
  }
  if (budget_seconds < 0.0) throw Error(ErrorKind::InvalidConfig, "budget must be nonnegative");
}

std::vector<GridCell> spiral_order(int n_cols, int n_rows) {
  std::vector<GridCell> out;
  out.reserve(static_cast<std::size_t>(n_cols) * n_rows);
  int left = 0, right = n_cols - 1, bottom = 0, top = n_rows - 1;
  while (left <= right && bottom <= top) {
    for (int c = left; c <= right; ++c) out.push_back({c, bottom});
    for (int r = bottom + 1; r <= top; ++r) out.push_back({right, r});
    if (top > bottom) {
      for (int c = right - 1; c >= left; --c) out.push_back({c, top});
    }
    if (left < right) {
      for (int r = top - 1; r > bottom; --r) out.push_back({left, r});
    }
    ++left;
    --right;
    ++bottom;
    --top;
  }
  return out;
}

namespace {

Placement place_in_order(const Netlist& netlist, const Grid& grid, const std::vector<NodeIndex>& macros,
                         const Placement& base, const std::vector<GridCell>& order) {
  Placement pl = base.size() == netlist.num_nodes() ? base : Placement(netlist.num_nodes());
  for (NodeIndex m : macros) pl.clear(m);
  for (NodeIndex m : macros) {
    bool placed = false;
    for (const GridCell& cell : order) {
      if (is_legal_macro_location(netlist, grid, pl, m, cell, Orientation::N)) {
        const Point c = grid.cell_center(cell);
        pl.set(m, {c.x, c.y, Orientation::N});
        placed = true;
        break;
      }
    }
    if (!placed) throw Error(ErrorKind::Unplaceable, netlist.node(m).id);
  }
  return pl;
}

}  // namespace

Placement init_spiral(const Netlist& netlist, const Grid& grid, const std::vector<NodeIndex>& macros,
                      const Placement& base) {
  return place_in_order(netlist, grid, macros, base, spiral_order(grid.n_cols(), grid.n_rows()));
}

Placement init_greedy_pack(const Netlist& netlist, const Grid& grid, const std::vector<NodeIndex>& macros,
                           const Placement& base) {
  std::vector<NodeIndex> sorted = macros;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [&](NodeIndex a, NodeIndex b) { return netlist.node(a).area() > netlist.node(b).area(); });
  std::vector<GridCell> order;
  order.reserve(grid.n_cells());
  for (int r = 0; r < grid.n_rows(); ++r) {
    for (int c = 0; c < grid.n_cols(); ++c) order.push_back({c, r});
  }
  return place_in_order(netlist, grid, sorted, base, order);
}

MacroState::MacroState(const Netlist& netlist, const Grid& grid, Placement placement)
    : netlist_(&netlist), grid_(&grid), placement_(std::move(placement)), macros_(netlist.movable_macros()),
      slot_(netlist.num_nodes(), SIZE_MAX) {
  cells_.reserve(macros_.size());
  for (std::size_t k = 0; k < macros_.size(); ++k) {
    const Pose& p = placement_.at(macros_[k]);
    cells_.push_back(grid.cell_of({p.x, p.y}));
    slot_[macros_[k]] = k;
  }
}

std::size_t MacroState::slot_of(NodeIndex macro) const {
  const std::size_t k = slot_.at(macro);
  if (k == SIZE_MAX) throw Error(ErrorKind::UnknownNode, "node index " + std::to_string(macro) + " is not a movable macro");
  return k;
}

std::optional<Action> MacroState::try_apply(const Action& action) {
  Action undo{action.type, {}};
  undo.moves.reserve(action.moves.size());
  for (const MacroMove& mv : action.moves) {
    const std::size_t k = slot_of(mv.macro);
    undo.moves.push_back({mv.macro, cells_[k], placement_.at(mv.macro).orient});
  }
  for (const MacroMove& mv : action.moves) placement_.clear(mv.macro);
  bool legal = true;
  std::size_t done = 0;
  for (; done < action.moves.size(); ++done) {
    const MacroMove& mv = action.moves[done];
    if (!is_legal_macro_location(*netlist_, *grid_, placement_, mv.macro, mv.cell, mv.orient)) {
      legal = false;
      break;
    }
    const Point c = grid_->cell_center(mv.cell);
    placement_.set(mv.macro, {c.x, c.y, mv.orient});
  }
  if (!legal) {
    for (const MacroMove& mv : undo.moves) {
      const Point c = grid_->cell_center(mv.cell);
      placement_.set(mv.macro, {c.x, c.y, mv.orient});
    }
    return std::nullopt;
  }
  for (const MacroMove& mv : action.moves) cells_[slot_of(mv.macro)] = mv.cell;
  return undo;
}

ActionType sample_action_type(const ActionWeights& weights, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < kNumActionTypes; ++i) {
    if (weights[i] <= 0.0) continue;
    last = i;
    acc += weights[i];
    if (u < acc) return static_cast<ActionType>(i);
  }
  return static_cast<ActionType>(last);
}

Action propose_action(const MacroState& state, const Grid& grid, ActionType type, Rng& rng) {
  const std::size_t n = state.macros().size();
  Action a{type, {}};
  if (n == 0) return a;
  switch (type) {
    case ActionType::Swap: {
      if (n < 2) return a;
      const std::size_t i = rng.below(n);
      std::size_t j = rng.below(n - 1);
      if (j >= i) ++j;
      a.moves.push_back({state.macros()[i], state.cell(j), state.orient(i)});
      a.moves.push_back({state.macros()[j], state.cell(i), state.orient(j)});
      break;
    }
    case ActionType::Shift: {
      static constexpr int kDx[4] = {1, -1, 0, 0};
      static constexpr int kDy[4] = {0, 0, 1, -1};
      const std::size_t i = rng.below(n);
      const auto d = rng.below(4);
      const GridCell c = state.cell(i);
      a.moves.push_back({state.macros()[i], {c.col + kDx[d], c.row + kDy[d]}, state.orient(i)});
      break;
    }
    case ActionType::Mirror: {
      const std::size_t i = rng.below(n);
      const Orientation flip = rng.below(2) == 0 ? Orientation::FN : Orientation::FS;
      a.moves.push_back({state.macros()[i], state.cell(i), compose(state.orient(i), flip)});
      break;
    }
    case ActionType::Move: {
      const std::size_t i = rng.below(n);
      const auto cell = rng.below(grid.n_cells());
      a.moves.push_back({state.macros()[i],
                         {static_cast<int>(cell % grid.n_cols()), static_cast<int>(cell / grid.n_cols())},
                         state.orient(i)});
      break;
    }
    case ActionType::Shuffle: {
      const std::size_t k = std::min(kShuffleArity, n);
      std::vector<std::size_t> pick(n);
      for (std::size_t i = 0; i < n; ++i) pick[i] = i;
      for (std::size_t i = 0; i < k; ++i) std::swap(pick[i], pick[i + rng.below(n - i)]);
      pick.resize(k);
      std::vector<std::size_t> perm = pick;
      rng.shuffle(perm.begin(), perm.end());
      for (std::size_t i = 0; i < k; ++i) {
        a.moves.push_back({state.macros()[pick[i]], state.cell(perm[i]), state.orient(pick[i])});
      }
      break;
    }
  }
  return a;
}

namespace {

using Clock = std::chrono::steady_clock;

class Annealer {
 public:
  Annealer(const ClusteredNetlist& cnl, const Grid& grid, const SAConfig& config, const AcceptObserver& observer)
      : cnl_(cnl), netlist_(cnl.netlist), grid_(grid), config_(config), observer_(observer), rng_(config.seed),
        has_soft_(!netlist_.soft_nodes().empty()) {}

  SAResult run();

 private:
  ProxyBreakdown score(const Placement& pl) const {
    return proxy_cost(netlist_, pl, grid_, config_.weights, config_.congestion);
  }
  // Clusters re-placed for the current macros. FD is a pure function of the
  // macro layout, so rescoring the same layout later gives the same cost.
  Placement with_fd(const Placement& pl) const {
    return has_soft_ ? fd_place(netlist_, pl, config_.fd_params) : pl;
  }
  double calibrate_temperature(MacroState& state, double current);
  // Up to kProposalAttempts draws; returns the undo record of the applied one.
  std::optional<Action> attempt(MacroState& state, ActionType type) {
    for (int i = 0; i < kProposalAttempts; ++i) {
      const Action a = propose_action(state, grid_, type, rng_);
      if (a.moves.empty()) return std::nullopt;
      if (auto undo = state.try_apply(a)) return undo;
    }
    return std::nullopt;
  }
  bool out_of_time() const {
    return config_.budget_seconds > 0.0 &&
           std::chrono::duration<double>(Clock::now() - start_).count() >= config_.budget_seconds;
  }

  const ClusteredNetlist& cnl_;
  const Netlist& netlist_;
  const Grid& grid_;
  const SAConfig& config_;
  const AcceptObserver& observer_;
  Rng rng_;
  bool has_soft_;
  Clock::time_point start_ = Clock::now();
};

double Annealer::calibrate_temperature(MacroState& state, double current) {
  constexpr int kProbes = 100;
  std::vector<double> uphill;
  for (int p = 0; p < kProbes && !out_of_time(); ++p) {
    const ActionType type = sample_action_type(config_.action_weights, rng_);
    std::optional<Action> undo = attempt(state, type);
    if (!undo) continue;
    const double delta = score(state.placement()).total - current;
    if (delta > 0.0) uphill.push_back(delta);
    state.try_apply(*undo);
  }
  if (uphill.empty()) return 0.0;
  std::sort(uphill.begin(), uphill.end());
  const std::size_t m = uphill.size();
  const double median = m % 2 == 1 ? uphill[m / 2] : 0.5 * (uphill[m / 2 - 1] + uphill[m / 2]);
  // exp(-median / t) = 0.5
  return median / std::log(2.0);
}

SAResult Annealer::run() {
  config_.validate();
  const std::vector<NodeIndex> macros = netlist_.movable_macros();
  if (macros.empty()) throw Error(ErrorKind::InitFailed, "no movable macros to place");
  const std::size_t n = macros.size();

  Placement init;
  try {
    init = config_.init == InitMode::Spiral ? init_spiral(netlist_, grid_, macros, cnl_.placement)
                                            : init_greedy_pack(netlist_, grid_, macros, cnl_.placement);
  } catch (const Error& e) {
    throw Error(ErrorKind::InitFailed, e.what());
  }
  MacroState state(netlist_, grid_, with_fd(init));

  SAResult result;
  result.seed = config_.seed;
  result.fd_interval_multiplier = config_.fd_interval_multiplier;
  ProxyBreakdown current = score(state.placement());
  result.initial_cost = current;
  result.cost_trace.push_back({0, current.total});
  if (observer_) observer_(0, state.placement(), current.total);

  // Lowest-cost state scored with fresh clusters, and lowest accepted state.
  Placement best_fresh = state.placement();
  ProxyBreakdown best_fresh_cost = current;
  Placement best_seen = state.placement();
  double best_seen_cost = current.total;

  double t = config_.t_init ? *config_.t_init : calibrate_temperature(state, current.total);
  result.t_init = t;
  const long epoch = config_.epoch_len > 0 ? config_.epoch_len : static_cast<long>(10 * n);
  const long fd_every = static_cast<long>(config_.fd_interval_multiplier * n);

  long step = 0;
  while (step < config_.max_steps && !out_of_time()) {
    ++step;
    const ActionType type = sample_action_type(config_.action_weights, rng_);
    ++result.actions_taken[static_cast<std::size_t>(type)];
    std::optional<Action> undo = attempt(state, type);
    if (undo) {
      const ProxyBreakdown next = score(state.placement());
      const double delta = next.total - current.total;
      const bool accept = delta <= 0.0 || (t > 0.0 && rng_.uniform() < std::exp(-delta / t));
      if (accept) {
        current = next;
        result.cost_trace.push_back({step, current.total});
        if (observer_) observer_(step, state.placement(), current.total);
        if (current.total < best_seen_cost) {
          best_seen = state.placement();
          best_seen_cost = current.total;
          if (!has_soft_) best_fresh_cost = current;
        }
      } else {
        state.try_apply(*undo);
      }
    }
    if (step % epoch == 0) t *= config_.cooling_ratio;
    if (has_soft_ && step % fd_every == 0 && !out_of_time()) {
      state.placement() = fd_place(netlist_, state.placement(), config_.fd_params);
      current = score(state.placement());
      result.cost_trace.push_back({step, current.total});
      if (observer_) observer_(step, state.placement(), current.total);
      if (current.total < best_fresh_cost.total) {
        best_fresh = state.placement();
        best_fresh_cost = current;
      }
      if (current.total < best_seen_cost) {
        best_seen = state.placement();
        best_seen_cost = current.total;
      }
    }
  }
  result.steps = step;

  // Past the budget the last fresh-cluster state stands.
  if (has_soft_ && !out_of_time()) {
    Placement rescored = with_fd(best_seen);
    const ProxyBreakdown cost = score(rescored);
    if (cost.total < best_fresh_cost.total) {
      best_fresh = std::move(rescored);
      best_fresh_cost = cost;
    }
  } else if (!has_soft_) {
    best_fresh = std::move(best_seen);
  }
  result.best_placement = std::move(best_fresh);
  result.best_cost = best_fresh_cost;
  return result;
}

}  // namespace

SAResult anneal(const ClusteredNetlist& cnl, const Grid& grid, const SAConfig& config,
                const AcceptObserver& on_accept) {
  Annealer annealer(cnl, grid, config, on_accept);
  return annealer.run();
}

SAConfig worker_config(const SAConfig& base, std::size_t index, std::size_t n_workers,
                       const std::vector<std::uint64_t>& seeds) {
  SAConfig cfg = base;
  const std::uint64_t group_seed = seeds.empty() ? base.seed : seeds[index * seeds.size() / n_workers];
  // First worker index of this seed group.
  std::size_t first = index;
  if (!seeds.empty()) {
    while (first > 0 && (first - 1) * seeds.size() / n_workers == index * seeds.size() / n_workers) --first;
  } else {
    first = 0;
  }
  const std::size_t k = index - first;
  cfg.seed = k == 0 ? group_seed : mix_seed(group_seed, k);
  cfg.fd_interval_multiplier = 2 + static_cast<int>((base.fd_interval_multiplier - 2 + index) % 4);
  return cfg;
}

ParallelResult run_parallel(const ClusteredNetlist& cnl, const Grid& grid, const SAConfig& base,
                            std::size_t n_workers, const std::vector<std::uint64_t>& seeds,
                            double budget_seconds) {
  if (n_workers < 1) throw Error(ErrorKind::InvalidConfig, "at least one worker is required");
  base.validate();
  ParallelResult out;
  out.workers.resize(n_workers);
  std::vector<std::exception_ptr> errors(n_workers);
  std::vector<char> ok(n_workers, 0);
  {
    std::vector<std::jthread> threads;
    threads.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) {
      threads.emplace_back([&, w] {
        try {
          SAConfig cfg = worker_config(base, w, n_workers, seeds);
          if (budget_seconds > 0.0) cfg.budget_seconds = budget_seconds;
          out.workers[w] = anneal(cnl, grid, cfg);
          ok[w] = 1;
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  bool any = false;
  for (std::size_t w = 0; w < n_workers; ++w) {
    if (!ok[w]) {
      try {
        std::rethrow_exception(errors[w]);
      } catch (const std::exception& e) {
        out.failures.push_back("worker " + std::to_string(w) + ": " + e.what());
      }
      continue;
    }
    if (!any || out.workers[w].best_cost.total < out.best.best_cost.total) {
      out.best = out.workers[w];
      out.best_worker = w;
      any = true;
    }
  }
  if (!any) std::rethrow_exception(errors.front());
  return out;
}

Placement shuffle_same_size(const Netlist& netlist, const Placement& placement, std::uint64_t seed) {
  std::map<std::pair<double, double>, std::vector<NodeIndex>> classes;
  std::vector<std::pair<double, double>> order;
  for (NodeIndex m : netlist.movable_macros()) {
    if (!placement.has(m)) continue;
    const std::pair<double, double> key{netlist.node(m).width, netlist.node(m).height};
    auto& members = classes[key];
    if (members.empty()) order.push_back(key);
    members.push_back(m);
  }
  Rng rng(seed);
  Placement out = placement;
  for (const auto& key : order) {
    const std::vector<NodeIndex>& members = classes[key];
    if (members.size() < 2) continue;
    std::vector<NodeIndex> donors = members;
    rng.shuffle(donors.begin(), donors.end());
    for (std::size_t i = 0; i < members.size(); ++i) out.set(members[i], placement.at(donors[i]));
  }
  return out;
}

std::string format_trace_csv(const std::vector<TracePoint>& trace) {
  std::string out = "step,cost\n";
  char buf[64];
  for (const TracePoint& p : trace) {
    std::snprintf(buf, sizeof buf, "%ld,%.17g\n", p.step, p.cost);
    out += buf;
  }
  return out;
}

}  // namespace macroplace
