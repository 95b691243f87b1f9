#pragma once

#include <cstddef>
#include <filesystem>
#include <string>

#include "macroplace/grid.h"
#include "macroplace/netlist.h"

namespace macroplace {

struct BookshelfCounts {
  std::size_t num_nodes = 0;
  std::size_t num_terminals = 0;
  std::size_t num_nets = 0;
  std::size_t num_pins = 0;
};

struct BookshelfDesign {
  Netlist netlist;
  Placement placement;          // from the .pl file, node centers
  BookshelfCounts declared;     // header declarations
  std::size_t dropped_nets = 0;  // nets with fewer than two pins
  std::size_t clamped_ports = 0;
  std::size_t clamped_pins = 0;
};

// Reads a Bookshelf benchmark through its .aux file. Terminals become fixed
// nodes: zero-size ports when no larger than one row in each direction, fixed
// macros otherwise. Movable nodes taller than one placement row become macros.
// Throws MissingFile, MalformedLine, DanglingPinReference.
BookshelfDesign parse_bookshelf(const std::filesystem::path& aux_path);

// Native line-based netlist format:
//   canvas <width> <height>
//   origin <x> <y>            (optional; lower-left corner in placement files)
//   node <id> <macro|stdcell|cluster|port> <width> <height> <movable|fixed>
//   net <id> <weight>
//   pin <net-id> <node-id> <dx> <dy> [source]
// '#' starts a comment. Nets with fewer than two pins are dropped.
Netlist parse_native(const std::filesystem::path& path);
void write_native(const Netlist& netlist, const std::filesystem::path& path);

// Either format, chosen by extension (.aux for Bookshelf).
struct LoadedDesign {
  Netlist netlist;
  Placement placement;  // empty (all unplaced) for native netlists
};
LoadedDesign load_design(const std::filesystem::path& path);

// Bookshelf .pl text: lower-left corners in the file frame, fixed precision of
// six decimals, orientation token, /FIXED on non-movable nodes. Throws
// PreconditionViolation when a movable node is unplaced, IoFailure on write
// errors.
void write_placement(const Netlist& netlist, const Placement& placement, const std::filesystem::path& path);
std::string format_placement(const Netlist& netlist, const Placement& placement);

// Reads a .pl file; nodes not mentioned stay unplaced. Unknown node names
// raise UnknownNode.
Placement read_placement(const Netlist& netlist, const std::filesystem::path& path);

// SVG 1.1 plot: canvas outline, grid lines, macros as filled rectangles,
// soft nodes as outlined squares and ports as short ticks.
void write_svg(const Netlist& netlist, const Placement& placement, const Grid& grid,
               const std::filesystem::path& path);
std::string render_svg(const Netlist& netlist, const Placement& placement, const Grid& grid);

}  // namespace macroplace
