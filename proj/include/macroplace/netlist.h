#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace macroplace {

using NodeIndex = std::size_t;

enum class NodeKind { Macro, StdCell, Cluster, Port };

std::string_view to_string(NodeKind kind);
std::optional<NodeKind> parse_node_kind(std::string_view text);

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct Node {
  std::string id;
  NodeKind kind = NodeKind::StdCell;
  double width = 0.0;
  double height = 0.0;
  bool movable = true;

  double area() const { return width * height; }
  // Nodes the force-directed placer is allowed to move.
  bool is_soft() const { return movable && (kind == NodeKind::Cluster || kind == NodeKind::StdCell); }
  // Nodes the annealer places on grid-cell centers.
  bool is_movable_macro() const { return movable && kind == NodeKind::Macro; }
};

struct Pin {
  NodeIndex owner = 0;
  Point offset;  // from the owner's center
  bool is_source = false;
};

struct Net {
  std::string id;
  double weight = 1.0;
  std::vector<Pin> pins;

  // Index into pins of the source pin, or of the first pin when none is marked.
  std::size_t source_index() const;
};

struct Canvas {
  double width = 0.0;
  double height = 0.0;
};

// Immutable once built. Node ids are unique; every pin owner is a valid index.
class Netlist {
 public:
  Netlist() = default;
  Netlist(Canvas canvas, std::vector<Node> nodes, std::vector<Net> nets);

  const Canvas& canvas() const { return canvas_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Net>& nets() const { return nets_; }
  const Node& node(NodeIndex i) const { return nodes_.at(i); }
  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_nets() const { return nets_.size(); }

  std::optional<NodeIndex> find(std::string_view id) const;
  // Throws UnknownNode.
  NodeIndex index_of(std::string_view id) const;

  std::vector<NodeIndex> movable_macros() const;
  std::vector<NodeIndex> soft_nodes() const;

  // Lower-left of the canvas in the coordinate frame of the source files;
  // internal coordinates are relative to it.
  Point file_origin() const { return file_origin_; }
  void set_file_origin(Point origin) { file_origin_ = origin; }

 private:
  Canvas canvas_;
  std::vector<Node> nodes_;
  std::vector<Net> nets_;
  std::unordered_map<std::string, NodeIndex> index_;
  Point file_origin_;
};

}  // namespace macroplace
