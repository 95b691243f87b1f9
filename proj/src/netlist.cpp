#include "macroplace/netlist.h"

#include <cmath>

#include "macroplace/error.h"

namespace macroplace {

namespace {

// Pin offsets within this distance of an owner's half-extent are accepted.
constexpr double kOffsetSlack = 1e-9;

}  // namespace

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Macro: return "macro";
    case NodeKind::StdCell: return "stdcell";
    case NodeKind::Cluster: return "cluster";
    case NodeKind::Port: return "port";
  }
  return "unknown";
}

std::optional<NodeKind> parse_node_kind(std::string_view text) {
  if (text == "macro") return NodeKind::Macro;
  if (text == "stdcell") return NodeKind::StdCell;
  if (text == "cluster") return NodeKind::Cluster;
  if (text == "port") return NodeKind::Port;
  return std::nullopt;
}

std::size_t Net::source_index() const {
  for (std::size_t i = 0; i < pins.size(); ++i) {
    if (pins[i].is_source) return i;
  }
  return 0;
}

Netlist::Netlist(Canvas canvas, std::vector<Node> nodes, std::vector<Net> nets)
    : canvas_(canvas), nodes_(std::move(nodes)), nets_(std::move(nets)) {
  if (!(canvas_.width > 0.0) || !(canvas_.height > 0.0)) {
    throw Error(ErrorKind::InvalidDimension, "canvas width and height must be positive");
  }
  index_.reserve(nodes_.size());
  for (NodeIndex i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (n.kind == NodeKind::Port) {
      if (n.width != 0.0 || n.height != 0.0) {
        throw Error(ErrorKind::PreconditionViolation, "port '" + n.id + "' must have zero size");
      }
    } else if (!(n.width > 0.0) || !(n.height > 0.0)) {
      throw Error(ErrorKind::PreconditionViolation, "node '" + n.id + "' must have positive size");
    }
    if (!index_.emplace(n.id, i).second) {
      throw Error(ErrorKind::PreconditionViolation, "duplicate node id '" + n.id + "'");
    }
  }
  for (const Net& net : nets_) {
    if (net.pins.size() < 2) {
      throw Error(ErrorKind::DegenerateNet, "net '" + net.id + "' has fewer than 2 pins");
    }
    if (!(net.weight >= 0.0) || !std::isfinite(net.weight)) {
      throw Error(ErrorKind::PreconditionViolation, "net '" + net.id + "' has invalid weight");
    }
    int sources = 0;
    for (const Pin& pin : net.pins) {
      if (pin.owner >= nodes_.size()) {
        throw Error(ErrorKind::DanglingPinReference, "net '" + net.id + "' references a missing node");
      }
      const Node& owner = nodes_[pin.owner];
      if (std::abs(pin.offset.x) > owner.width / 2 + kOffsetSlack ||
          std::abs(pin.offset.y) > owner.height / 2 + kOffsetSlack) {
        throw Error(ErrorKind::PreconditionViolation,
                    "pin offset on '" + owner.id + "' in net '" + net.id + "' exceeds node extents");
      }
      sources += pin.is_source ? 1 : 0;
    }
    if (sources > 1) {
      throw Error(ErrorKind::PreconditionViolation, "net '" + net.id + "' has more than one source pin");
    }
  }
}

std::optional<NodeIndex> Netlist::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NodeIndex Netlist::index_of(std::string_view id) const {
  if (auto i = find(id)) return *i;
  throw Error(ErrorKind::UnknownNode, "no node named '" + std::string(id) + "'");
}

std::vector<NodeIndex> Netlist::movable_macros() const {
  std::vector<NodeIndex> out;
  for (NodeIndex i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].is_movable_macro()) out.push_back(i);
  }
  return out;
}

std::vector<NodeIndex> Netlist::soft_nodes() const {
  std::vector<NodeIndex> out;
  for (NodeIndex i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].is_soft()) out.push_back(i);
  }
  return out;
}

}  // namespace macroplace
