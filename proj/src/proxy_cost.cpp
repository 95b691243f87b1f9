#include "macroplace/proxy_cost.h"

#include <algorithm>
#include <cmath>
#include <functional>

#include "macroplace/error.h"

namespace macroplace {

std::vector<double> CongestionGrids::h_cong() const {
  std::vector<double> out(h_macro.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = h_macro[i] + h_net[i];
  return out;
}

std::vector<double> CongestionGrids::v_cong() const {
  std::vector<double> out(v_macro.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = v_macro[i] + v_net[i];
  return out;
}

double top_mean(std::vector<double> values, std::size_t count) {
  if (values.empty()) return 0.0;
  count = std::clamp<std::size_t>(count, 1, values.size());
  std::partial_sort(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(count), values.end(),
                    std::greater<>());
  double sum = 0.0;
  for (std::size_t i = 0; i < count; ++i) sum += values[i];
  return sum / static_cast<double>(count);
}

std::size_t top_decile_count(std::size_t n) { return (n + 9) / 10; }

std::size_t top_twentieth_count(std::size_t n) { return (n + 19) / 20; }

double net_hpwl(const Net& net, const Placement& placement) {
  const Point first = placement.pin_position(net.pins.front());
  double xlo = first.x, xhi = first.x, ylo = first.y, yhi = first.y;
  for (std::size_t i = 1; i < net.pins.size(); ++i) {
    const Point p = placement.pin_position(net.pins[i]);
    xlo = std::min(xlo, p.x);
    xhi = std::max(xhi, p.x);
    ylo = std::min(ylo, p.y);
    yhi = std::max(yhi, p.y);
  }
  return (xhi - xlo) + (yhi - ylo);
}

double wirelength_cost(const Netlist& netlist, const Placement& placement) {
  if (netlist.num_nets() == 0) throw Error(ErrorKind::EmptyNetlist, "wirelength needs at least one net");
  const double norm = netlist.canvas().width + netlist.canvas().height;
  double sum = 0.0;
  for (const Net& net : netlist.nets()) sum += net.weight * net_hpwl(net, placement) / norm;
  return sum / static_cast<double>(netlist.num_nets());
}

namespace {

// Inclusive index range of cells intersecting [lo, hi] along one axis.
std::pair<int, int> span_cells(double lo, double hi, double pitch, int n) {
  const int a = std::clamp(static_cast<int>(std::floor(lo / pitch)), 0, n - 1);
  const int b = std::clamp(static_cast<int>(std::floor(hi / pitch)), 0, n - 1);
  return {a, b};
}

}  // namespace

std::vector<double> density_map(const Netlist& netlist, const Placement& placement, const Grid& grid) {
  std::vector<double> covered(grid.n_cells(), 0.0);
  for (NodeIndex i = 0; i < netlist.num_nodes(); ++i) {
    const Node& n = netlist.node(i);
    if (n.area() <= 0.0 || !placement.has(i)) continue;
    const Rect r = bounding_box(n, placement.at(i));
    const auto [c0, c1] = span_cells(r.xlo, r.xhi, grid.cell_w(), grid.n_cols());
    const auto [r0, r1] = span_cells(r.ylo, r.yhi, grid.cell_h(), grid.n_rows());
    for (int row = r0; row <= r1; ++row) {
      for (int col = c0; col <= c1; ++col) {
        const Rect cell{col * grid.cell_w(), row * grid.cell_h(), (col + 1) * grid.cell_w(),
                        (row + 1) * grid.cell_h()};
        covered[grid.flat(col, row)] += overlap_area(r, cell);
      }
    }
  }
  const double cell_area = grid.cell_area();
  for (double& d : covered) d /= cell_area;
  return covered;
}

double density_cost(const Netlist& netlist, const Placement& placement, const Grid& grid) {
  std::vector<double> d = density_map(netlist, placement, grid);
  const std::size_t k = top_decile_count(d.size());
  return top_mean(std::move(d), k);
}

void macro_congestion(const Netlist& netlist, const Placement& placement, const Grid& grid,
                      double macro_h_usage, double macro_v_usage, std::vector<double>& h_macro,
                      std::vector<double>& v_macro) {
  h_macro.assign(grid.n_cells(), 0.0);
  v_macro.assign(grid.n_cells(), 0.0);
  const double cw = grid.cell_w();
  const double ch = grid.cell_h();
  for (NodeIndex i = 0; i < netlist.num_nodes(); ++i) {
    const Node& n = netlist.node(i);
    if (n.kind != NodeKind::Macro || !placement.has(i)) continue;
    const Rect r = bounding_box(n, placement.at(i));
    const auto [c0, c1] = span_cells(r.xlo, r.xhi, cw, grid.n_cols());
    const auto [r0, r1] = span_cells(r.ylo, r.yhi, ch, grid.n_rows());
    // Right boundary of column c sits at (c + 1) * cw.
    for (int col = c0; col <= c1 && col < grid.n_cols() - 1; ++col) {
      const double x = (col + 1) * cw;
      if (!(r.xlo < x && x < r.xhi)) continue;
      for (int row = r0; row <= r1; ++row) {
        const double len = std::min(r.yhi, (row + 1) * ch) - std::max(r.ylo, row * ch);
        if (len > 0.0) h_macro[grid.flat(col, row)] += macro_h_usage * len / grid.h_capacity();
      }
    }
    for (int row = r0; row <= r1 && row < grid.n_rows() - 1; ++row) {
      const double y = (row + 1) * ch;
      if (!(r.ylo < y && y < r.yhi)) continue;
      for (int col = c0; col <= c1; ++col) {
        const double len = std::min(r.xhi, (col + 1) * cw) - std::max(r.xlo, col * cw);
        if (len > 0.0) v_macro[grid.flat(col, row)] += macro_v_usage * len / grid.v_capacity();
      }
    }
  }
}

std::vector<GridCell> net_cells(const Net& net, const Placement& placement, const Grid& grid) {
  std::vector<GridCell> cells;
  const std::size_t src = net.source_index();
  auto add = [&](const Pin& pin) {
    const GridCell c = grid.cell_of(placement.pin_position(pin));
    if (std::find(cells.begin(), cells.end(), c) == cells.end()) cells.push_back(c);
  };
  add(net.pins[src]);
  for (std::size_t i = 0; i < net.pins.size(); ++i) {
    if (i != src) add(net.pins[i]);
  }
  return cells;
}

namespace {

void horizontal_run(int row, int c1, int c2, double w, const Grid& grid, BoundaryDemand& d) {
  for (int c = std::min(c1, c2); c < std::max(c1, c2); ++c) d.h[grid.flat(c, row)] += w;
}

void vertical_run(int col, int r1, int r2, double w, const Grid& grid, BoundaryDemand& d) {
  for (int r = std::min(r1, r2); r < std::max(r1, r2); ++r) d.v[grid.flat(col, r)] += w;
}

// Horizontal arm in the row of `from`, then vertical arm in the column of `to`.
void l_route(GridCell from, GridCell to, double w, const Grid& grid, BoundaryDemand& d) {
  horizontal_run(from.row, from.col, to.col, w, grid, d);
  vertical_run(to.col, from.row, to.row, w, grid, d);
}

int manhattan(GridCell a, GridCell b) { return std::abs(a.col - b.col) + std::abs(a.row - b.row); }

void route_three(std::span<const GridCell> ordered, double w, const Grid& grid, BoundaryDemand& d) {
  static constexpr int kPairs[3][3] = {{0, 1, 2}, {0, 2, 1}, {1, 2, 0}};
  for (const auto& pq : kPairs) {
    const GridCell p = ordered[pq[0]];
    const GridCell q = ordered[pq[1]];
    const GridCell third = ordered[pq[2]];
    if (p.row != q.row && p.col != q.col) continue;
    if (p.row == q.row) {
      horizontal_run(p.row, p.col, q.col, w, grid, d);
    } else {
      vertical_run(p.col, p.row, q.row, w, grid, d);
    }
    const GridCell from = manhattan(q, third) < manhattan(p, third) ? q : p;
    l_route(from, third, w, grid, d);
    return;
  }
  l_route(ordered[0], ordered[1], w, grid, d);
  l_route(ordered[0], ordered[2], w, grid, d);
}

}  // namespace

void route_net(std::span<const GridCell> cells, std::size_t source, double weight, const Grid& grid,
               BoundaryDemand& demand) {
  if (cells.empty()) throw Error(ErrorKind::EmptyCellSet, "route_net needs at least one cell");
  if (source >= cells.size()) throw Error(ErrorKind::OutOfRange, "source index outside the cell set");
  if (cells.size() == 1) return;
  const GridCell src = cells[source];
  if (cells.size() == 3) {
    // Source first, then the sinks in their given order.
    GridCell ordered[3] = {src, {}, {}};
    for (std::size_t i = 0, k = 1; i < 3; ++i) {
      if (i != source) ordered[k++] = cells[i];
    }
    route_three(ordered, weight, grid, demand);
    return;
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i != source) l_route(src, cells[i], weight, grid, demand);
  }
}

std::vector<double> smooth_congestion(std::span<const double> values, int n_cols, int n_rows,
                                      RouteDirection direction, int radius) {
  if (radius < 0) throw Error(ErrorKind::InvalidConfig, "smoothing radius must be nonnegative");
  std::vector<double> out(values.size(), 0.0);
  for (int row = 0; row < n_rows; ++row) {
    for (int col = 0; col < n_cols; ++col) {
      const double v = values[static_cast<std::size_t>(row) * n_cols + col];
      if (v == 0.0) continue;
      if (direction == RouteDirection::Horizontal) {
        const int lo = std::max(0, col - radius);
        const int hi = std::min(n_cols - 1, col + radius);
        const double share = v / (hi - lo + 1);
        for (int c = lo; c <= hi; ++c) out[static_cast<std::size_t>(row) * n_cols + c] += share;
      } else {
        const int lo = std::max(0, row - radius);
        const int hi = std::min(n_rows - 1, row + radius);
        const double share = v / (hi - lo + 1);
        for (int r = lo; r <= hi; ++r) out[static_cast<std::size_t>(r) * n_cols + col] += share;
      }
    }
  }
  return out;
}

void net_congestion(const Netlist& netlist, const Placement& placement, const Grid& grid, int smooth_radius,
                    std::vector<double>& h_net, std::vector<double>& v_net) {
  BoundaryDemand demand(grid.n_cells());
  for (const Net& net : netlist.nets()) {
    const std::vector<GridCell> cells = net_cells(net, placement, grid);
    route_net(cells, 0, net.weight, grid, demand);
  }
  for (double& h : demand.h) h /= grid.h_capacity();
  for (double& v : demand.v) v /= grid.v_capacity();
  h_net = smooth_congestion(demand.h, grid.n_cols(), grid.n_rows(), RouteDirection::Horizontal, smooth_radius);
  v_net = smooth_congestion(demand.v, grid.n_cols(), grid.n_rows(), RouteDirection::Vertical, smooth_radius);
}

CongestionGrids congestion_grids(const Netlist& netlist, const Placement& placement, const Grid& grid,
                                 const CongestionConfig& config) {
  CongestionGrids g;
  macro_congestion(netlist, placement, grid, config.macro_h_usage, config.macro_v_usage, g.h_macro, g.v_macro);
  net_congestion(netlist, placement, grid, config.smooth_radius, g.h_net, g.v_net);
  return g;
}

double congestion_cost(const CongestionGrids& grids) {
  std::vector<double> pooled = grids.h_cong();
  const std::vector<double> v = grids.v_cong();
  pooled.insert(pooled.end(), v.begin(), v.end());
  const std::size_t k = top_twentieth_count(pooled.size());
  return top_mean(std::move(pooled), k);
}

ProxyBreakdown recombine(const ProxyBreakdown& components, const ProxyWeights& weights) {
  ProxyBreakdown out = components;
  out.total = components.wirelength + weights.gamma * components.density + weights.lambda * components.congestion;
  return out;
}

ProxyBreakdown proxy_cost(const Netlist& netlist, const Placement& placement, const Grid& grid,
                          const ProxyWeights& weights, const CongestionConfig& config) {
  ProxyBreakdown b;
  b.wirelength = wirelength_cost(netlist, placement);
  b.density = density_cost(netlist, placement, grid);
  b.congestion = congestion_cost(congestion_grids(netlist, placement, grid, config));
  return recombine(b, weights);
}

}  // namespace macroplace
