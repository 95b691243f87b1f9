#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "macroplace/grid.h"
#include "macroplace/netlist.h"

namespace macroplace {

struct ProxyWeights {
  double gamma = 0.5;   // density
  double lambda = 0.5;  // congestion
};

struct CongestionConfig {
  int smooth_radius = 2;
  double macro_h_usage = 1.0;  // tracks per unit length of boundary crossed
  double macro_v_usage = 1.0;
};

enum class RouteDirection { Horizontal, Vertical };

// Per-cell routing demand. h[flat(c, r)] is the demand on the right boundary
// of cell (c, r); v[flat(c, r)] on its top boundary.
struct BoundaryDemand {
  std::vector<double> h;
  std::vector<double> v;

  explicit BoundaryDemand(std::size_t n_cells = 0) : h(n_cells, 0.0), v(n_cells, 0.0) {}
};

// Demand-to-capacity ratios per cell, flattened row-major from the bottom.
struct CongestionGrids {
  std::vector<double> h_macro;
  std::vector<double> v_macro;
  std::vector<double> h_net;
  std::vector<double> v_net;

  std::vector<double> h_cong() const;
  std::vector<double> v_cong() const;
};

struct ProxyBreakdown {
  double wirelength = 0.0;
  double density = 0.0;
  double congestion = 0.0;
  double total = 0.0;
};

// Mean of the `count` largest values (count clamped to [1, size]); 0 for an
// empty input.
double top_mean(std::vector<double> values, std::size_t count);

// ceil(n / 10) and ceil(n / 20) in integer arithmetic.
std::size_t top_decile_count(std::size_t n);
std::size_t top_twentieth_count(std::size_t n);

// HPWL of one net from pin positions (orientation-aware).
double net_hpwl(const Net& net, const Placement& placement);

// (1/|nets|) * sum(weight * HPWL / (width + height)). Throws EmptyNetlist.
double wirelength_cost(const Netlist& netlist, const Placement& placement);

// Per-cell covered area of every node with positive area, over cell area.
std::vector<double> density_map(const Netlist& netlist, const Placement& placement, const Grid& grid);
// Mean of the top ceil(10%) cells of density_map.
double density_cost(const Netlist& netlist, const Placement& placement, const Grid& grid);

// Macro blockage on cell boundaries: each macro whose interior crosses a
// cell's right (top) boundary adds usage * overlap length / capacity.
void macro_congestion(const Netlist& netlist, const Placement& placement, const Grid& grid,
                      double macro_h_usage, double macro_v_usage, std::vector<double>& h_macro,
                      std::vector<double>& v_macro);

// Distinct cells touched by a net's pins; the first entry is the source cell.
std::vector<GridCell> net_cells(const Net& net, const Placement& placement, const Grid& grid);

// Adds the routed demand of one net to `demand`. `cells` must be distinct with
// the source cell at `source`. 1 cell adds nothing; 2 cells route one L
// (horizontal arm from the source first); 3 cells share a straight segment
// when two of them are row- or column-aligned and branch an L to the third,
// falling back to a source star otherwise; more cells route a source star of
// L's. Throws EmptyCellSet.
void route_net(std::span<const GridCell> cells, std::size_t source, double weight, const Grid& grid,
               BoundaryDemand& demand);

// Spreads each value evenly over the 2*radius+1 cells centered on it along the
// routing direction (rows for Horizontal, columns for Vertical), truncated at
// the grid edge. Conserves the total.
std::vector<double> smooth_congestion(std::span<const double> values, int n_cols, int n_rows,
                                      RouteDirection direction, int radius);

// Net demand over capacity, smoothed.
void net_congestion(const Netlist& netlist, const Placement& placement, const Grid& grid, int smooth_radius,
                    std::vector<double>& h_net, std::vector<double>& v_net);

CongestionGrids congestion_grids(const Netlist& netlist, const Placement& placement, const Grid& grid,
                                 const CongestionConfig& config);

// Mean of the top ceil(5%) of all H and V values pooled together.
double congestion_cost(const CongestionGrids& grids);

// Same components, new weights; no geometry is recomputed.
ProxyBreakdown recombine(const ProxyBreakdown& components, const ProxyWeights& weights);

ProxyBreakdown proxy_cost(const Netlist& netlist, const Placement& placement, const Grid& grid,
                          const ProxyWeights& weights, const CongestionConfig& config = {});

}  // namespace macroplace
