#include "macroplace/fd_placer.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <spdlog/spdlog.h>

#include "macroplace/error.h"

namespace macroplace {

std::vector<std::pair<std::size_t, std::size_t>> decompose_star(const Net& net) {
  if (net.pins.size() < 2) throw Error(ErrorKind::DegenerateNet, "net '" + net.id + "' has fewer than 2 pins");
  const std::size_t center = net.source_index();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(net.pins.size() - 1);
  for (std::size_t i = 0; i < net.pins.size(); ++i) {
    if (i != center) pairs.emplace_back(center, i);
  }
  return pairs;
}

Force attractive_force(Point p1, Point p2, double k_a, double io_scale) {
  const double k = k_a * io_scale;
  return {k * (p2.x - p1.x), k * (p2.y - p1.y)};
}

Force repulsive_force(const Node& n1, const Pose& p1, const Node& n2, const Pose& p2, double k_r,
                      double f_r_max, Rng& rng) {
  if (overlap_area(bounding_box(n1, p1), bounding_box(n2, p2)) <= 0.0) return {};
  const double dx = p1.x - p2.x;
  const double dy = p1.y - p2.y;
  const double dist = std::hypot(dx, dy);
  const double k = k_r * f_r_max;
  if (dist == 0.0) {
    const double angle = 2.0 * std::numbers::pi * rng.uniform();
    return {k * std::cos(angle), k * std::sin(angle)};
  }
  return {k * dx / dist, k * dy / dist};
}

double max_move_distance(const Canvas& canvas, int num_iters) {
  return std::max(canvas.width, canvas.height) / num_iters;
}

namespace {

struct AttractPair {
  const Pin* a;
  const Pin* b;
  double io_scale;
};

// Overlap candidates (i < j) in lexicographic order, so accumulation order is
// the same as an all-pairs loop.
std::vector<std::pair<NodeIndex, NodeIndex>> overlapping_pairs(const Netlist& netlist, const Placement& pl) {
  std::vector<NodeIndex> order;
  std::vector<Rect> boxes(netlist.num_nodes());
  for (NodeIndex i = 0; i < netlist.num_nodes(); ++i) {
    if (netlist.node(i).area() <= 0.0) continue;
    boxes[i] = bounding_box(netlist.node(i), pl.at(i));
    order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](NodeIndex a, NodeIndex b) {
    return boxes[a].xlo < boxes[b].xlo || (boxes[a].xlo == boxes[b].xlo && a < b);
  });
  std::vector<std::pair<NodeIndex, NodeIndex>> pairs;
  for (std::size_t s = 0; s < order.size(); ++s) {
    const Rect& a = boxes[order[s]];
    for (std::size_t t = s + 1; t < order.size() && boxes[order[t]].xlo < a.xhi; ++t) {
      if (overlap_area(a, boxes[order[t]]) > 0.0) {
        pairs.emplace_back(std::min(order[s], order[t]), std::max(order[s], order[t]));
      }
    }
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

}  // namespace

Placement fd_place(const Netlist& netlist, const Placement& fixed, const FDParams& params,
                   const FDObserver& observer) {
  if (params.num_iters < 1) throw Error(ErrorKind::InvalidConfig, "num_iters must be at least 1");
  if (params.k_a < 0.0 || params.k_r < 0.0 || params.io_factor < 0.0) {
    throw Error(ErrorKind::InvalidConfig, "force factors must be nonnegative");
  }
  if (fixed.size() != netlist.num_nodes()) {
    throw Error(ErrorKind::PreconditionViolation, "placement does not match the netlist");
  }
  const std::vector<NodeIndex> soft = netlist.soft_nodes();
  if (soft.empty()) {
    spdlog::warn("force-directed placement: no movable clusters");
    return fixed;
  }
  std::vector<bool> is_soft(netlist.num_nodes(), false);
  for (NodeIndex i : soft) is_soft[i] = true;
  for (NodeIndex i = 0; i < netlist.num_nodes(); ++i) {
    if (!is_soft[i] && !fixed.has(i)) {
      throw Error(ErrorKind::PreconditionViolation, "fixed node '" + netlist.node(i).id + "' has no location");
    }
  }

  const Canvas& canvas = netlist.canvas();
  Placement pl = fixed;
  for (NodeIndex i : soft) {
    if (params.start_at_center || !pl.has(i)) pl.set(i, {canvas.width / 2, canvas.height / 2, Orientation::N});
  }

  std::vector<AttractPair> attract;
  if (params.k_a > 0.0) {
    for (const Net& net : netlist.nets()) {
      for (const auto& [c, o] : decompose_star(net)) {
        const Pin& a = net.pins[c];
        const Pin& b = net.pins[o];
        if (a.owner == b.owner) continue;
        const bool io = netlist.node(a.owner).kind == NodeKind::Port || netlist.node(b.owner).kind == NodeKind::Port;
        attract.push_back({&a, &b, io ? params.io_factor : 1.0});
      }
    }
  }

  const double max_move = max_move_distance(canvas, params.num_iters);
  const double f_r_max = max_move;
  Rng rng(params.seed);
  std::vector<Force> force(netlist.num_nodes());

  for (int iter = 0; iter < params.num_iters; ++iter) {
    std::fill(force.begin(), force.end(), Force{});
    for (const AttractPair& p : attract) {
      const Force f = attractive_force(pl.pin_position(*p.a), pl.pin_position(*p.b), params.k_a, p.io_scale);
      force[p.a->owner].x += f.x;
      force[p.a->owner].y += f.y;
      force[p.b->owner].x -= f.x;
      force[p.b->owner].y -= f.y;
    }
    if (params.k_r > 0.0) {
      for (const auto& [i, j] : overlapping_pairs(netlist, pl)) {
        const Force f = repulsive_force(netlist.node(i), pl.at(i), netlist.node(j), pl.at(j), params.k_r, f_r_max, rng);
        force[i].x += f.x;
        force[i].y += f.y;
        force[j].x -= f.x;
        force[j].y -= f.y;
      }
    }

    double max_x = 0.0;
    double max_y = 0.0;
    for (const Force& f : force) {
      max_x = std::max(max_x, std::abs(f.x));
      max_y = std::max(max_y, std::abs(f.y));
    }
    for (Force& f : force) {
      f.x = max_x > 0.0 ? f.x / max_x * max_move : 0.0;
      f.y = max_y > 0.0 ? f.y / max_y * max_move : 0.0;
    }

    for (NodeIndex i : soft) {
      const Pose& cur = pl.at(i);
      const Pose next{cur.x + force[i].x, cur.y + force[i].y, cur.orient};
      if (inside_canvas(bounding_box(netlist.node(i), next), canvas)) pl.set(i, next);
    }
    if (observer) observer({iter, max_move, force, &pl});
  }
  return pl;
}

Placement fd_repulsive_only(const Netlist& netlist, const Placement& fixed, FDParams params,
                            const FDObserver& observer) {
  params.k_a = 0.0;
  params.start_at_center = false;
  return fd_place(netlist, fixed, params, observer);
}

}  // namespace macroplace
