#include "oracle.h"

#include <algorithm>
#include <cmath>
#include <functional>

namespace oracle {

using namespace macroplace;

namespace {

struct Box {
  double x0, y0, x1, y1;
};

// N, FN, S and FS all keep the width along x.
Box box_of(const Node& n, const Pose& p) {
  return {p.x - n.width / 2, p.y - n.height / 2, p.x + n.width / 2, p.y + n.height / 2};
}

void pin_xy(const Placement& pl, const Pin& pin, double& x, double& y) {
  const Pose& p = pl.at(pin.owner);
  double dx = pin.offset.x;
  double dy = pin.offset.y;
  switch (p.orient) {
    case Orientation::N:
      break;
    case Orientation::FN:
      dx = -dx;
      break;
    case Orientation::S:
      dx = -dx;
      dy = -dy;
      break;
    case Orientation::FS:
      dy = -dy;
      break;
  }
  x = p.x + dx;
  y = p.y + dy;
}

double mean_of_top(std::vector<double> v, double fraction) {
  std::sort(v.begin(), v.end(), std::greater<>());
  std::size_t k = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(v.size()) - 1e-9));
  k = std::max<std::size_t>(k, 1);
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += v[i];
  return s / static_cast<double>(k);
}

struct Cell {
  int c, r;
  bool operator==(const Cell&) const = default;
};

Cell cell_at(const Grid& g, double x, double y) {
  int c = static_cast<int>(std::floor(x / (g.canvas().width / g.n_cols())));
  int r = static_cast<int>(std::floor(y / (g.canvas().height / g.n_rows())));
  c = std::min(std::max(c, 0), g.n_cols() - 1);
  r = std::min(std::max(r, 0), g.n_rows() - 1);
  return {c, r};
}

// Walks a path cell by cell and charges every boundary it crosses.
struct Router {
  const Grid& g;
  std::vector<double>& h;
  std::vector<double>& v;
  double w;

  void step_h(Cell& at, int dir) {
    const int c = dir > 0 ? at.c : at.c - 1;
    h[static_cast<std::size_t>(at.r * g.n_cols() + c)] += w;
    at.c += dir;
  }
  void step_v(Cell& at, int dir) {
    const int r = dir > 0 ? at.r : at.r - 1;
    v[static_cast<std::size_t>(r * g.n_cols() + at.c)] += w;
    at.r += dir;
  }
  void straight(Cell a, Cell b) {
    while (a.c != b.c) step_h(a, b.c > a.c ? 1 : -1);
    while (a.r != b.r) step_v(a, b.r > a.r ? 1 : -1);
  }
  void ell(Cell a, Cell b) {
    Cell corner{b.c, a.r};
    straight(a, corner);
    straight(corner, b);
  }
};

int dist(Cell a, Cell b) { return std::abs(a.c - b.c) + std::abs(a.r - b.r); }

}  // namespace

double wirelength(const Netlist& nl, const Placement& pl) {
  double sum = 0.0;
  for (const Net& net : nl.nets()) {
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (const Pin& pin : net.pins) {
      double x, y;
      pin_xy(pl, pin, x, y);
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
    sum += net.weight * ((x1 - x0) + (y1 - y0)) / (nl.canvas().width + nl.canvas().height);
  }
  return sum / static_cast<double>(nl.num_nets());
}

std::vector<double> density_map(const Netlist& nl, const Placement& pl, const Grid& g) {
  const double cw = g.canvas().width / g.n_cols();
  const double ch = g.canvas().height / g.n_rows();
  std::vector<double> d(static_cast<std::size_t>(g.n_cols() * g.n_rows()), 0.0);
  for (int r = 0; r < g.n_rows(); ++r) {
    for (int c = 0; c < g.n_cols(); ++c) {
      double covered = 0.0;
      for (std::size_t i = 0; i < nl.num_nodes(); ++i) {
        const Node& n = nl.node(i);
        if (n.width * n.height <= 0.0) continue;
        const Box b = box_of(n, pl.at(i));
        const double ox = std::min(b.x1, (c + 1) * cw) - std::max(b.x0, c * cw);
        const double oy = std::min(b.y1, (r + 1) * ch) - std::max(b.y0, r * ch);
        if (ox > 0 && oy > 0) covered += ox * oy;
      }
      d[static_cast<std::size_t>(r * g.n_cols() + c)] = covered / (cw * ch);
    }
  }
  return d;
}

void net_demand(const Netlist& nl, const Placement& pl, const Grid& g, std::vector<double>& h,
                std::vector<double>& v) {
  const std::size_t n = static_cast<std::size_t>(g.n_cols() * g.n_rows());
  h.assign(n, 0.0);
  v.assign(n, 0.0);
  for (const Net& net : nl.nets()) {
    std::size_t src = 0;
    for (std::size_t i = 0; i < net.pins.size(); ++i) {
      if (net.pins[i].is_source) src = i;
    }
    std::vector<Cell> cells;
    auto visit = [&](std::size_t i) {
      double x, y;
      pin_xy(pl, net.pins[i], x, y);
      const Cell c = cell_at(g, x, y);
      if (std::find(cells.begin(), cells.end(), c) == cells.end()) cells.push_back(c);
    };
    visit(src);
    for (std::size_t i = 0; i < net.pins.size(); ++i) {
      if (i != src) visit(i);
    }
    Router route{g, h, v, net.weight};
    if (cells.size() == 3) {
      const int pairs[3][3] = {{0, 1, 2}, {0, 2, 1}, {1, 2, 0}};
      bool done = false;
      for (const auto& p : pairs) {
        const Cell a = cells[p[0]], b = cells[p[1]], t = cells[p[2]];
        if (a.c != b.c && a.r != b.r) continue;
        route.straight(a, b);
        route.ell(dist(b, t) < dist(a, t) ? b : a, t);
        done = true;
        break;
      }
      if (!done) {
        route.ell(cells[0], cells[1]);
        route.ell(cells[0], cells[2]);
      }
    } else {
      for (std::size_t i = 1; i < cells.size(); ++i) route.ell(cells[0], cells[i]);
    }
  }
}

std::vector<double> smooth(const std::vector<double>& values, int n_cols, int n_rows, bool horizontal, int radius) {
  std::vector<double> out(values.size(), 0.0);
  for (int r = 0; r < n_rows; ++r) {
    for (int c = 0; c < n_cols; ++c) {
      std::vector<std::size_t> window;
      for (int k = -radius; k <= radius; ++k) {
        const int cc = horizontal ? c + k : c;
        const int rr = horizontal ? r : r + k;
        if (cc >= 0 && cc < n_cols && rr >= 0 && rr < n_rows) window.push_back(static_cast<std::size_t>(rr * n_cols + cc));
      }
      const double value = values[static_cast<std::size_t>(r * n_cols + c)];
      for (std::size_t idx : window) out[idx] += value / static_cast<double>(window.size());
    }
  }
  return out;
}

Congestion congestion(const Netlist& nl, const Placement& pl, const Grid& g, const CongestionConfig& config) {
  const double cw = g.canvas().width / g.n_cols();
  const double ch = g.canvas().height / g.n_rows();
  const std::size_t n = static_cast<std::size_t>(g.n_cols() * g.n_rows());
  Congestion out;
  out.h_macro.assign(n, 0.0);
  out.v_macro.assign(n, 0.0);
  for (int r = 0; r < g.n_rows(); ++r) {
    for (int c = 0; c < g.n_cols(); ++c) {
      const std::size_t idx = static_cast<std::size_t>(r * g.n_cols() + c);
      for (std::size_t i = 0; i < nl.num_nodes(); ++i) {
        const Node& node = nl.node(i);
        if (node.kind != NodeKind::Macro) continue;
        const Box b = box_of(node, pl.at(i));
        const double right = (c + 1) * cw;
        if (c + 1 < g.n_cols() && b.x0 < right && right < b.x1) {
          const double len = std::min(b.y1, (r + 1) * ch) - std::max(b.y0, r * ch);
          if (len > 0) out.h_macro[idx] += config.macro_h_usage * len / g.h_capacity();
        }
        const double top = (r + 1) * ch;
        if (r + 1 < g.n_rows() && b.y0 < top && top < b.y1) {
          const double len = std::min(b.x1, (c + 1) * cw) - std::max(b.x0, c * cw);
          if (len > 0) out.v_macro[idx] += config.macro_v_usage * len / g.v_capacity();
        }
      }
    }
  }
  std::vector<double> h, v;
  net_demand(nl, pl, g, h, v);
  for (double& x : h) x /= g.h_capacity();
  for (double& x : v) x /= g.v_capacity();
  out.h_net = smooth(h, g.n_cols(), g.n_rows(), true, config.smooth_radius);
  out.v_net = smooth(v, g.n_cols(), g.n_rows(), false, config.smooth_radius);
  return out;
}

Components proxy_components(const Netlist& nl, const Placement& pl, const Grid& g, const CongestionConfig& config) {
  Components out;
  out.wirelength = oracle::wirelength(nl, pl);
  out.density = mean_of_top(oracle::density_map(nl, pl, g), 0.10);
  const Congestion cg = oracle::congestion(nl, pl, g, config);
  std::vector<double> pooled;
  for (std::size_t i = 0; i < cg.h_macro.size(); ++i) pooled.push_back(cg.h_macro[i] + cg.h_net[i]);
  for (std::size_t i = 0; i < cg.v_macro.size(); ++i) pooled.push_back(cg.v_macro[i] + cg.v_net[i]);
  out.congestion = mean_of_top(pooled, 0.05);
  return out;
}

double kendall_tau_b(const std::vector<double>& xs, const std::vector<double>& ys) {
  long long concordant = 0, discordant = 0, tie_x = 0, tie_y = 0, total = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      ++total;
      const bool tx = xs[i] == xs[j];
      const bool ty = ys[i] == ys[j];
      if (tx) ++tie_x;
      if (ty) ++tie_y;
      if (tx || ty) continue;
      if ((xs[i] < xs[j]) == (ys[i] < ys[j])) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  return static_cast<double>(concordant - discordant) /
         std::sqrt(static_cast<double>(total - tie_x) * static_cast<double>(total - tie_y));
}

double exhaustive_optimum(const Netlist& nl, const Placement& base, const Grid& grid, const ProxyWeights& weights,
                          const CongestionConfig& config, std::size_t* evaluated) {
  std::vector<NodeIndex> macros;
  for (NodeIndex i = 0; i < nl.num_nodes(); ++i) {
    if (nl.node(i).kind == NodeKind::Macro && nl.node(i).movable) macros.push_back(i);
  }
  const int n_cells = grid.n_cols() * grid.n_rows();
  std::vector<int> chosen(macros.size(), -1);
  std::vector<bool> used(static_cast<std::size_t>(n_cells), false);
  Placement pl = base;
  double best = 1e300;
  std::size_t count = 0;
  std::function<void(std::size_t)> recurse = [&](std::size_t k) {
    if (k == macros.size()) {
      if (total_macro_overlap(nl, pl) > 0.0) return;
      ++count;
      best = std::min(best, proxy_cost(nl, pl, grid, weights, config).total);
      return;
    }
    for (int cell = 0; cell < n_cells; ++cell) {
      if (used[static_cast<std::size_t>(cell)]) continue;
      used[static_cast<std::size_t>(cell)] = true;
      const Point p = grid.cell_center(cell % grid.n_cols(), cell / grid.n_cols());
      pl.set(macros[k], {p.x, p.y, base.at(macros[k]).orient});
      recurse(k + 1);
      used[static_cast<std::size_t>(cell)] = false;
    }
  };
  recurse(0);
  if (evaluated) *evaluated = count;
  return best;
}

}  // namespace oracle
