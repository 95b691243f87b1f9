#include <fstream>
#include <sstream>

#include "macroplace/error.h"
#include "macroplace/netlist_io.h"
#include "text_util.h"

namespace macroplace {

namespace fs = std::filesystem;

std::string format_placement(const Netlist& netlist, const Placement& placement) {
  if (placement.size() != netlist.num_nodes()) {
    throw Error(ErrorKind::PreconditionViolation, "placement does not match the netlist");
  }
  const Point origin = netlist.file_origin();
  std::ostringstream out;
  out << "UCLA pl 1.0\n\n";
  for (NodeIndex i = 0; i < netlist.num_nodes(); ++i) {
    const Node& n = netlist.node(i);
    if (!placement.has(i)) {
      if (n.movable) {
        throw Error(ErrorKind::PreconditionViolation, "movable node '" + n.id + "' has no location");
      }
      continue;
    }
    const Pose& p = placement.at(i);
    out << n.id << ' ' << fixed6(p.x - n.width / 2 + origin.x) << ' ' << fixed6(p.y - n.height / 2 + origin.y)
        << " : " << to_string(p.orient) << (n.movable ? "" : " /FIXED") << '\n';
  }
  return out.str();
}

void write_placement(const Netlist& netlist, const Placement& placement, const fs::path& path) {
  const std::string text = format_placement(netlist, placement);
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error(ErrorKind::IoFailure, "write to " + path.string() + " failed");
}

Placement read_placement(const Netlist& netlist, const fs::path& path) {
  LineReader in(path);
  std::vector<std::string> t;
  const Point origin = netlist.file_origin();
  Placement placement(netlist.num_nodes());
  while (in.next(t)) {
    if (t[0] == "UCLA") continue;
    if (t.size() < 3) in.fail("expected '<name> <x> <y> [: <orient>] [/FIXED]'");
    const NodeIndex i = netlist.index_of(t[0]);
    const Node& n = netlist.node(i);
    Pose p{in.number(t[1], "x") - origin.x + n.width / 2, in.number(t[2], "y") - origin.y + n.height / 2,
           Orientation::N};
    for (std::size_t k = 3; k < t.size(); ++k) {
      if (t[k] == ":" || t[k] == "/FIXED" || t[k] == "/FIXED_NI") continue;
      const auto o = parse_orientation(t[k]);
      if (!o) in.fail("unsupported orientation '" + t[k] + "'");
      p.orient = *o;
    }
    placement.set(i, p);
  }
  return placement;
}

}  // namespace macroplace
