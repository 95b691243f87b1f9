#include "macroplace/clustering.h"

#include <algorithm>
#include <cmath>
#include <unordered_set>
#include <vector>

#include "macroplace/error.h"

namespace macroplace {

namespace {

bool is_clusterable(const Node& n) { return n.kind == NodeKind::StdCell && n.movable; }

std::string unique_id(const Netlist& netlist, std::unordered_set<std::string>& taken, std::string base) {
  std::string id = base;
  for (int suffix = 1; netlist.find(id) || taken.count(id); ++suffix) {
    id = base + "_" + std::to_string(suffix);
  }
  taken.insert(id);
  return id;
}

}  // namespace

ClusteredNetlist cluster_by_grid(const Netlist& netlist, const Placement& initial, const Grid& grid) {
  if (initial.size() != netlist.num_nodes()) {
    throw Error(ErrorKind::PreconditionViolation, "initial placement does not match the netlist");
  }
  // Bucket members and areas, indexed by flat cell (row-major from the bottom).
  std::vector<double> bucket_area(grid.n_cells(), 0.0);
  std::vector<std::size_t> bucket_of(netlist.num_nodes(), SIZE_MAX);
  for (NodeIndex i = 0; i < netlist.num_nodes(); ++i) {
    const Node& n = netlist.node(i);
    if (!is_clusterable(n)) continue;
    if (!initial.has(i)) throw Error(ErrorKind::MissingInitialLocation, n.id);
    const Pose& p = initial.at(i);
    const std::size_t b = grid.flat(grid.cell_of({p.x, p.y}));
    bucket_of[i] = b;
    bucket_area[b] += n.area();
  }

  std::vector<Node> nodes;
  std::vector<NodeIndex> new_index(netlist.num_nodes(), SIZE_MAX);
  for (NodeIndex i = 0; i < netlist.num_nodes(); ++i) {
    if (bucket_of[i] != SIZE_MAX) continue;
    new_index[i] = nodes.size();
    nodes.push_back(netlist.node(i));
  }
  std::vector<NodeIndex> cluster_node(grid.n_cells(), SIZE_MAX);
  std::unordered_set<std::string> taken;
  for (int row = 0; row < grid.n_rows(); ++row) {
    for (int col = 0; col < grid.n_cols(); ++col) {
      const std::size_t b = grid.flat(col, row);
      if (bucket_area[b] <= 0.0) continue;
      Node c;
      c.id = unique_id(netlist, taken, "cluster_" + std::to_string(col) + "_" + std::to_string(row));
      c.kind = NodeKind::Cluster;
      c.width = c.height = std::sqrt(bucket_area[b]);
      c.movable = true;
      cluster_node[b] = nodes.size();
      nodes.push_back(std::move(c));
    }
  }

  ClusteredNetlist out;
  for (NodeIndex i = 0; i < netlist.num_nodes(); ++i) {
    if (bucket_of[i] == SIZE_MAX) continue;
    const NodeIndex c = cluster_node[bucket_of[i]];
    new_index[i] = c;
    out.cluster_of.emplace(netlist.node(i).id, nodes[c].id);
  }

  std::vector<Net> nets;
  nets.reserve(netlist.num_nets());
  for (const Net& net : netlist.nets()) {
    Net rewired;
    rewired.id = net.id;
    rewired.weight = net.weight;
    std::vector<std::pair<NodeIndex, std::size_t>> cluster_pins;  // cluster node -> pin slot
    for (const Pin& pin : net.pins) {
      const NodeIndex owner = new_index[pin.owner];
      if (bucket_of[pin.owner] == SIZE_MAX) {
        rewired.pins.push_back({owner, pin.offset, pin.is_source});
        continue;
      }
      auto it = std::find_if(cluster_pins.begin(), cluster_pins.end(),
                             [owner](const auto& e) { return e.first == owner; });
      if (it == cluster_pins.end()) {
        cluster_pins.emplace_back(owner, rewired.pins.size());
        rewired.pins.push_back({owner, {0.0, 0.0}, pin.is_source});
      } else if (pin.is_source) {
        rewired.pins[it->second].is_source = true;
      }
    }
    if (rewired.pins.size() < 2) continue;
    nets.push_back(std::move(rewired));
  }

  out.netlist = Netlist(netlist.canvas(), std::move(nodes), std::move(nets));
  out.netlist.set_file_origin(netlist.file_origin());
  out.placement = Placement(out.netlist.num_nodes());
  for (NodeIndex i = 0; i < netlist.num_nodes(); ++i) {
    if (bucket_of[i] == SIZE_MAX && initial.has(i)) out.placement.set(new_index[i], initial.at(i));
  }
  for (std::size_t b = 0; b < grid.n_cells(); ++b) {
    if (cluster_node[b] == SIZE_MAX) continue;
    const int col = static_cast<int>(b % grid.n_cols());
    const int row = static_cast<int>(b / grid.n_cols());
    const Point c = grid.cell_center(col, row);
    out.placement.set(cluster_node[b], {c.x, c.y, Orientation::N});
  }
  return out;
}

ClusteredNetlist cluster_none(const Netlist& netlist, const Placement& initial) {
  ClusteredNetlist out;
  out.netlist = netlist;
  out.placement = initial.size() == netlist.num_nodes() ? initial : Placement(netlist.num_nodes());
  return out;
}

Placement apply_vacuous_placement(const Netlist& netlist, const VacuousMode& mode) {
  return apply_vacuous_placement(netlist, mode, Placement(netlist.num_nodes()));
}

Placement apply_vacuous_placement(const Netlist& netlist, const VacuousMode& mode, const Placement& base) {
  const Canvas& canvas = netlist.canvas();
  Point at;
  if (const auto* p = std::get_if<VacuousPoint>(&mode)) {
    at = {p->x, p->y};
    if (!(at.x >= 0.0 && at.x <= canvas.width && at.y >= 0.0 && at.y <= canvas.height)) {
      throw Error(ErrorKind::PointOutsideCanvas,
                  "(" + std::to_string(at.x) + ", " + std::to_string(at.y) + ") is outside the canvas");
    }
  } else if (std::holds_alternative<VacuousUpperRight>(mode)) {
    at = {canvas.width, canvas.height};
  }
  Placement out(netlist.num_nodes());
  for (NodeIndex i = 0; i < netlist.num_nodes(); ++i) {
    if (netlist.node(i).movable) {
      out.set(i, {at.x, at.y, Orientation::N});
    } else if (base.size() == netlist.num_nodes() && base.has(i)) {
      out.set(i, base.at(i));
    }
  }
  return out;
}

}  // namespace macroplace
