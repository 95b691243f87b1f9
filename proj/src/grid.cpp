#include "macroplace/grid.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "macroplace/error.h"

namespace macroplace {

std::string_view to_string(Orientation o) {
  switch (o) {
    case Orientation::N: return "N";
    case Orientation::FN: return "FN";
    case Orientation::S: return "S";
    case Orientation::FS: return "FS";
  }
  return "N";
}

std::optional<Orientation> parse_orientation(std::string_view text) {
  if (text == "N") return Orientation::N;
  if (text == "FN") return Orientation::FN;
  if (text == "S") return Orientation::S;
  if (text == "FS") return Orientation::FS;
  return std::nullopt;
}

Orientation compose(Orientation a, Orientation b) {
  // Encode as (flip_x, flip_y) bits: N=00, FN=10, FS=01, S=11.
  auto bits = [](Orientation o) {
    switch (o) {
      case Orientation::N: return 0;
      case Orientation::FN: return 2;
      case Orientation::FS: return 1;
      case Orientation::S: return 3;
    }
    return 0;
  };
  switch (bits(a) ^ bits(b)) {
    case 0: return Orientation::N;
    case 2: return Orientation::FN;
    case 1: return Orientation::FS;
    default: return Orientation::S;
  }
}

Point transform_pin_offset(Point offset, Orientation orient) {
  switch (orient) {
    case Orientation::N: return offset;
    case Orientation::FN: return {-offset.x, offset.y};
    case Orientation::S: return {-offset.x, -offset.y};
    case Orientation::FS: return {offset.x, -offset.y};
  }
  return offset;
}

Rect bounding_box(const Node& node, const Pose& pose) {
  const double hw = node.width / 2;
  const double hh = node.height / 2;
  return {pose.x - hw, pose.y - hh, pose.x + hw, pose.y + hh};
}

double overlap_area(const Rect& a, const Rect& b, double slack) {
  const double w = std::min(a.xhi, b.xhi) - std::max(a.xlo, b.xlo);
  const double h = std::min(a.yhi, b.yhi) - std::max(a.ylo, b.ylo);
  if (w <= slack || h <= slack) return 0.0;
  return w * h;
}

bool inside_canvas(const Rect& r, const Canvas& canvas, double slack) {
  return r.xlo >= -slack && r.ylo >= -slack && r.xhi <= canvas.width + slack && r.yhi <= canvas.height + slack;
}

double legality_slack(const Canvas& canvas) { return 1e-9 * std::max(canvas.width, canvas.height); }

const Pose& Placement::at(NodeIndex i) const {
  if (!placed_.at(i)) {
    throw Error(ErrorKind::PreconditionViolation, "node index " + std::to_string(i) + " is not placed");
  }
  return poses_[i];
}

Point Placement::pin_position(const Pin& pin) const {
  const Pose& p = at(pin.owner);
  const Point d = transform_pin_offset(pin.offset, p.orient);
  return {p.x + d.x, p.y + d.y};
}

Grid::Grid(Canvas canvas, int n_cols, int n_rows, double h_capacity, double v_capacity)
    : canvas_(canvas), n_cols_(n_cols), n_rows_(n_rows), h_capacity_(h_capacity), v_capacity_(v_capacity) {
  if (n_cols < 1 || n_rows < 1) {
    throw Error(ErrorKind::InvalidDimension, "grid needs at least one column and one row");
  }
  if (!(h_capacity > 0.0) || !(v_capacity > 0.0)) {
    throw Error(ErrorKind::InvalidDimension, "routing capacities must be positive");
  }
  if (!(canvas.width > 0.0) || !(canvas.height > 0.0)) {
    throw Error(ErrorKind::InvalidDimension, "canvas must have positive size");
  }
  cell_w_ = canvas.width / n_cols;
  cell_h_ = canvas.height / n_rows;
}

Point Grid::cell_center(int col, int row) const {
  if (!contains({col, row})) {
    throw Error(ErrorKind::OutOfRange,
                "cell (" + std::to_string(col) + "," + std::to_string(row) + ") outside grid");
  }
  return {(col + 0.5) * cell_w_, (row + 0.5) * cell_h_};
}

GridCell Grid::cell_of(Point p) const {
  const int col = static_cast<int>(std::floor(p.x / cell_w_));
  const int row = static_cast<int>(std::floor(p.y / cell_h_));
  return {std::clamp(col, 0, n_cols_ - 1), std::clamp(row, 0, n_rows_ - 1)};
}

Grid build_grid(Canvas canvas, int n_cols, int n_rows, double h_capacity, double v_capacity) {
  return Grid(canvas, n_cols, n_rows, h_capacity, v_capacity);
}

double default_h_capacity(const Canvas& canvas, int n_rows) { return 10.0 * canvas.height / n_rows; }

double default_v_capacity(const Canvas& canvas, int n_cols) { return 10.0 * canvas.width / n_cols; }

bool is_legal_macro_location(const Netlist& netlist, const Grid& grid, const Placement& placement,
                             NodeIndex macro, GridCell cell, Orientation orient) {
  if (macro >= netlist.num_nodes() || !netlist.node(macro).is_movable_macro()) {
    throw Error(ErrorKind::UnknownNode, "node index " + std::to_string(macro) + " is not a movable macro");
  }
  if (!grid.contains(cell)) return false;
  const Point c = grid.cell_center(cell);
  const Rect box = bounding_box(netlist.node(macro), {c.x, c.y, orient});
  const double slack = legality_slack(netlist.canvas());
  if (!inside_canvas(box, netlist.canvas(), slack)) return false;
  for (NodeIndex j = 0; j < netlist.num_nodes(); ++j) {
    if (j == macro || netlist.node(j).kind != NodeKind::Macro || !placement.has(j)) continue;
    if (overlap_area(box, bounding_box(netlist.node(j), placement.at(j)), slack) > 0.0) return false;
  }
  return true;
}

double total_macro_overlap(const Netlist& netlist, const Placement& placement) {
  std::vector<NodeIndex> macros;
  for (NodeIndex i = 0; i < netlist.num_nodes(); ++i) {
    if (netlist.node(i).kind == NodeKind::Macro && placement.has(i)) macros.push_back(i);
  }
  const double slack = legality_slack(netlist.canvas());
  double total = 0.0;
  for (std::size_t a = 0; a < macros.size(); ++a) {
    const Rect ra = bounding_box(netlist.node(macros[a]), placement.at(macros[a]));
    for (std::size_t b = a + 1; b < macros.size(); ++b) {
      total += overlap_area(ra, bounding_box(netlist.node(macros[b]), placement.at(macros[b])), slack);
    }
  }
  return total;
}

}  // namespace macroplace
