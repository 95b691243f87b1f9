#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "macroplace/clustering.h"
#include "macroplace/fd_placer.h"
#include "macroplace/grid.h"
#include "macroplace/proxy_cost.h"
#include "macroplace/rng.h"

namespace macroplace {

enum class InitMode { Spiral, GreedyPack };

enum class ActionType { Swap = 0, Shift, Mirror, Move, Shuffle };
inline constexpr std::size_t kNumActionTypes = 5;
std::string_view to_string(ActionType a);

using ActionWeights = std::array<double, kNumActionTypes>;  // indexed by ActionType

// Number of macros a Shuffle action permutes.
inline constexpr std::size_t kShuffleArity = 4;
// Attempts at drawing a legal proposal before a step becomes a no-op.
inline constexpr int kProposalAttempts = 10;

struct SAConfig {
  std::uint64_t seed = 0;
  InitMode init = InitMode::Spiral;
  ActionWeights action_weights{0.2, 0.2, 0.2, 0.2, 0.2};
  long max_steps = 10000;
  std::optional<double> t_init;  // nullopt: calibrated from probe actions
  double cooling_ratio = 0.95;
  long epoch_len = 0;              // 0: 10 * number of macros
  int fd_interval_multiplier = 2;  // FD every multiplier * n macro actions
  FDParams fd_params;
  ProxyWeights weights;
  CongestionConfig congestion;
  double budget_seconds = 0.0;  // wall-clock cap per anneal; 0 means none

  // Throws InvalidConfig.
  void validate() const;
};

struct TracePoint {
  long step = 0;
  double cost = 0.0;

  friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

struct SAResult {
  Placement best_placement;
  ProxyBreakdown best_cost;
  ProxyBreakdown initial_cost;
  std::vector<TracePoint> cost_trace;  // accepted costs, step-ordered
  std::array<long, kNumActionTypes> actions_taken{};
  long steps = 0;
  double t_init = 0.0;
  std::uint64_t seed = 0;
  int fd_interval_multiplier = 2;
};

// Grid cells visited by a counterclockwise inward spiral from the lower-left
// cell: along the bottom row, up the right column, back along the top row,
// down the left column, then the next ring inside.
std::vector<GridCell> spiral_order(int n_cols, int n_rows);

// Places `macros` in order at the first legal cell of the spiral. `base`
// supplies every other node (fixed macros block cells). Throws Unplaceable.
Placement init_spiral(const Netlist& netlist, const Grid& grid, const std::vector<NodeIndex>& macros,
                      const Placement& base);

// Sorts `macros` by area (largest first, stable) and gives each the first
// legal cell in row-major order from the lower-left. Throws Unplaceable.
Placement init_greedy_pack(const Netlist& netlist, const Grid& grid, const std::vector<NodeIndex>& macros,
                           const Placement& base);

struct MacroMove {
  NodeIndex macro = 0;
  GridCell cell;
  Orientation orient = Orientation::N;
};

struct Action {
  ActionType type = ActionType::Swap;
  std::vector<MacroMove> moves;
};

// Current macro layout the annealer works on.
class MacroState {
 public:
  MacroState(const Netlist& netlist, const Grid& grid, Placement placement);

  const Placement& placement() const { return placement_; }
  Placement& placement() { return placement_; }
  const std::vector<NodeIndex>& macros() const { return macros_; }
  GridCell cell(std::size_t k) const { return cells_[k]; }
  Orientation orient(std::size_t k) const { return placement_.at(macros_[k]).orient; }
  std::size_t slot_of(NodeIndex macro) const;

  // Applies all moves if the result is legal; otherwise leaves the state
  // untouched. Returns the undo record on success.
  std::optional<Action> try_apply(const Action& action);

 private:
  const Netlist* netlist_;
  const Grid* grid_;
  Placement placement_;
  std::vector<NodeIndex> macros_;
  std::vector<GridCell> cells_;
  std::vector<std::size_t> slot_;  // node index -> position in macros_
};

// Draws one proposal of the given type (not yet legality-checked).
Action propose_action(const MacroState& state, const Grid& grid, ActionType type, Rng& rng);
ActionType sample_action_type(const ActionWeights& weights, Rng& rng);

using AcceptObserver = std::function<void(long step, const Placement& placement, double cost)>;

// Metropolis annealing over movable macros. Soft nodes are re-placed by FD
// after initialization, every fd_interval_multiplier * n steps, and once more
// on the best state at the end (FD passes and temperature probes are skipped
// once the budget is spent); between FD passes the cost uses the last FD
// cluster locations. The reported best is the lowest cost among states scored
// with up-to-date cluster locations. Throws InitFailed.
SAResult anneal(const ClusteredNetlist& cnl, const Grid& grid, const SAConfig& config,
                const AcceptObserver& on_accept = {});

struct ParallelResult {
  SAResult best;
  std::size_t best_worker = 0;
  std::vector<SAResult> workers;  // empty entries for failed workers
  std::vector<std::string> failures;
};

// Seed and FD cadence of worker `index` out of `n_workers`. Seeds are split
// into equal contiguous groups; the first worker of a group uses the group
// seed as-is, later ones derive a stream from it. The FD multiplier cycles
// through {2, 3, 4, 5} starting from the base config's value.
SAConfig worker_config(const SAConfig& base, std::size_t index, std::size_t n_workers,
                       const std::vector<std::uint64_t>& seeds);

// Independent workers on separate threads; returns the lowest-cost result.
// `budget_seconds` (0 = none) caps every worker's wall-clock time. Fails only
// when every worker fails.
ParallelResult run_parallel(const ClusteredNetlist& cnl, const Grid& grid, const SAConfig& base,
                            std::size_t n_workers, const std::vector<std::uint64_t>& seeds,
                            double budget_seconds);

// Permutes (location, orientation) within each class of equal-size movable
// macros; macro A takes the pose that macro B had.
Placement shuffle_same_size(const Netlist& netlist, const Placement& placement, std::uint64_t seed);

// Writes "step,cost" rows.
std::string format_trace_csv(const std::vector<TracePoint>& trace);

}  // namespace macroplace
