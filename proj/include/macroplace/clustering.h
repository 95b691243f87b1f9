#pragma once

#include <map>
#include <string>
#include <variant>

#include "macroplace/grid.h"
#include "macroplace/netlist.h"

namespace macroplace {

// A netlist whose standard cells have been replaced by square soft clusters.
struct ClusteredNetlist {
  Netlist netlist;
  std::map<std::string, std::string> cluster_of;  // std-cell id -> cluster id
  Placement placement;  // initial locations: clusters at their bucket centers
};

// Buckets every movable standard cell by the grid cell containing its center
// in `initial`. Each non-empty bucket becomes one cluster (ordered by row,
// then column) with side sqrt(total member area), located at the bucket's
// cell center. Member pins collapse to one center pin per cluster per net;
// nets left with fewer than two pins are dropped. Fixed nodes are kept as-is.
// Throws MissingInitialLocation.
ClusteredNetlist cluster_by_grid(const Netlist& netlist, const Placement& initial, const Grid& grid);

// Keeps every standard cell as its own soft node.
ClusteredNetlist cluster_none(const Netlist& netlist, const Placement& initial);

struct VacuousPoint {
  double x = 0.0;
  double y = 0.0;
};
struct VacuousLowerLeft {};
struct VacuousUpperRight {};
using VacuousMode = std::variant<VacuousPoint, VacuousLowerLeft, VacuousUpperRight>;

// Every movable node placed at one location; fixed nodes keep their pose in
// `base` (or stay unplaced when `base` has none). Throws PointOutsideCanvas.
Placement apply_vacuous_placement(const Netlist& netlist, const VacuousMode& mode);
Placement apply_vacuous_placement(const Netlist& netlist, const VacuousMode& mode, const Placement& base);

}  // namespace macroplace
