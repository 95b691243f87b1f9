#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "macroplace/netlist.h"

namespace macroplace {

// N identity, FN mirror across the vertical axis (x -> -x), S 180 degrees,
// FS mirror across the horizontal axis (y -> -y).
enum class Orientation { N, FN, S, FS };

std::string_view to_string(Orientation o);
std::optional<Orientation> parse_orientation(std::string_view text);

// Result of applying `b` after `a`. The four orientations form a Klein group.
Orientation compose(Orientation a, Orientation b);

Point transform_pin_offset(Point offset, Orientation orient);

struct Pose {
  double x = 0.0;  // node center
  double y = 0.0;
  Orientation orient = Orientation::N;

  friend bool operator==(const Pose&, const Pose&) = default;
};

struct Rect {
  double xlo = 0.0;
  double ylo = 0.0;
  double xhi = 0.0;
  double yhi = 0.0;

  double width() const { return xhi - xlo; }
  double height() const { return yhi - ylo; }
};

Rect bounding_box(const Node& node, const Pose& pose);
// Area of intersection; zero for rectangles that only touch. Intersections no
// thicker than `slack` along either axis count as touching.
double overlap_area(const Rect& a, const Rect& b, double slack = 0.0);
bool inside_canvas(const Rect& r, const Canvas& canvas, double slack = 0.0);

// Rounding slack for legality tests on a canvas: cell centers are computed in
// floating point, so abutting macros may disagree by a few ulps.
double legality_slack(const Canvas& canvas);

// Pose per node index of a specific netlist.
class Placement {
 public:
  Placement() = default;
  explicit Placement(std::size_t num_nodes) : poses_(num_nodes), placed_(num_nodes, false) {}

  std::size_t size() const { return poses_.size(); }
  bool has(NodeIndex i) const { return placed_.at(i); }
  const Pose& at(NodeIndex i) const;
  void set(NodeIndex i, Pose pose) {
    poses_.at(i) = pose;
    placed_.at(i) = true;
  }
  void clear(NodeIndex i) { placed_.at(i) = false; }

  // Position of a pin given its owner's pose.
  Point pin_position(const Pin& pin) const;

  friend bool operator==(const Placement&, const Placement&) = default;

 private:
  std::vector<Pose> poses_;
  std::vector<bool> placed_;
};

struct GridCell {
  int col = 0;
  int row = 0;

  friend bool operator==(const GridCell&, const GridCell&) = default;
};

class Grid {
 public:
  // Throws InvalidDimension.
  Grid(Canvas canvas, int n_cols, int n_rows, double h_capacity, double v_capacity);

  const Canvas& canvas() const { return canvas_; }
  int n_cols() const { return n_cols_; }
  int n_rows() const { return n_rows_; }
  std::size_t n_cells() const { return static_cast<std::size_t>(n_cols_) * n_rows_; }
  double cell_w() const { return cell_w_; }
  double cell_h() const { return cell_h_; }
  double cell_area() const { return cell_w_ * cell_h_; }
  double h_capacity() const { return h_capacity_; }
  double v_capacity() const { return v_capacity_; }

  // Row-major flat index with row 0 at the bottom.
  std::size_t flat(int col, int row) const { return static_cast<std::size_t>(row) * n_cols_ + col; }
  std::size_t flat(GridCell c) const { return flat(c.col, c.row); }

  // Throws OutOfRange.
  Point cell_center(int col, int row) const;
  Point cell_center(GridCell c) const { return cell_center(c.col, c.row); }
  // Cell containing a point; points on the far canvas edges map to the last cell.
  GridCell cell_of(Point p) const;
  bool contains(GridCell c) const { return c.col >= 0 && c.col < n_cols_ && c.row >= 0 && c.row < n_rows_; }

 private:
  Canvas canvas_;
  int n_cols_;
  int n_rows_;
  double cell_w_;
  double cell_h_;
  double h_capacity_;
  double v_capacity_;
};

Grid build_grid(Canvas canvas, int n_cols, int n_rows, double h_capacity, double v_capacity);

// Capacity default used when none is configured: ten tracks per unit of the
// boundary length.
double default_h_capacity(const Canvas& canvas, int n_rows);
double default_v_capacity(const Canvas& canvas, int n_cols);

// True iff `macro` centered on `cell` with `orient` lies inside the canvas and
// has zero-area overlap with every other placed macro. Throws UnknownNode when
// `macro` is not a movable macro of `netlist`.
bool is_legal_macro_location(const Netlist& netlist, const Grid& grid, const Placement& placement,
                             NodeIndex macro, GridCell cell, Orientation orient);

// Sum of pairwise macro overlap areas; zero for any legal macro placement.
double total_macro_overlap(const Netlist& netlist, const Placement& placement);

}  // namespace macroplace
