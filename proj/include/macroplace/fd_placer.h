#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "macroplace/grid.h"
#include "macroplace/netlist.h"
#include "macroplace/rng.h"

namespace macroplace {

struct FDParams {
  int num_iters = 100;
  double k_a = 1.0;        // attractive factor
  double k_r = 1.0;        // repulsive factor
  double io_factor = 1.0;  // multiplies k_a on pairs touching a port
  std::uint64_t seed = 0;
  // When false, soft nodes already placed in the input start from there
  // instead of the canvas center.
  bool start_at_center = true;
};

struct Force {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Force&, const Force&) = default;
};

// Two-pin pairs of a star centered at the net's source pin (first pin when
// none is marked). Entries are pin indices (center, other). Throws
// DegenerateNet for nets with fewer than two pins.
std::vector<std::pair<std::size_t, std::size_t>> decompose_star(const Net& net);

// Force on the node owning p1, pulling it toward p2. Component magnitudes are
// k_a * io_scale * |dx| and k_a * io_scale * |dy|; the other node receives the
// negation.
Force attractive_force(Point p1, Point p2, double k_a, double io_scale);

// Force on node 1 pushing it away from node 2; node 2 receives the negation.
// Zero unless the bounding boxes overlap with positive area. Component
// magnitudes are k_r * f_r_max * |d| / dist between centers. Coincident
// centers get magnitude k_r * f_r_max in a direction drawn from `rng`.
Force repulsive_force(const Node& n1, const Pose& p1, const Node& n2, const Pose& p2, double k_r,
                      double f_r_max, Rng& rng);

double max_move_distance(const Canvas& canvas, int num_iters);

struct FDIterationView {
  int iteration = 0;
  double max_move = 0.0;
  std::span<const Force> normalized;  // per node, after normalization
  const Placement* placement = nullptr;  // after this iteration's moves
};
using FDObserver = std::function<void(const FDIterationView&)>;

// Force-directed placement of soft nodes (clusters, or standard cells left
// unclustered). `fixed` must place every other node; those never move. Soft
// nodes start at the canvas center. Each iteration accumulates attraction over
// star-decomposed nets and repulsion over overlapping pairs, normalizes each
// axis by its maximum absolute component over all nodes, scales by the
// maximum move distance, then moves soft nodes; a move that would leave the
// canvas is cancelled. Returns `fixed` with soft nodes placed. With no soft
// nodes, logs a warning and returns `fixed` unchanged.
Placement fd_place(const Netlist& netlist, const Placement& fixed, const FDParams& params,
                   const FDObserver& observer = {});

// fd_place with k_a forced to zero and soft nodes starting from their input
// locations: overlap removal only.
Placement fd_repulsive_only(const Netlist& netlist, const Placement& fixed, FDParams params,
                            const FDObserver& observer = {});

}  // namespace macroplace
