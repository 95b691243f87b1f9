#include <algorithm>
#include <fstream>
#include <sstream>

#include "macroplace/error.h"
#include "macroplace/netlist_io.h"
#include "text_util.h"

namespace macroplace {

namespace {

constexpr double kImageSize = 800.0;
constexpr double kMargin = 10.0;

std::string xml_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const Netlist& netlist, const Placement& placement, const Grid& grid) {
  const Canvas& c = netlist.canvas();
  const double scale = kImageSize / std::max(c.width, c.height);
  const double w = c.width * scale;
  const double h = c.height * scale;
  // SVG y grows downward; canvas y grows upward.
  auto sx = [&](double x) { return fixed6(kMargin + x * scale); };
  auto sy = [&](double y) { return fixed6(kMargin + h - y * scale); };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fixed6(w + 2 * kMargin)
      << "\" height=\"" << fixed6(h + 2 * kMargin) << "\">\n";
  out << "<rect class=\"canvas\" x=\"" << sx(0) << "\" y=\"" << sy(c.height) << "\" width=\"" << fixed6(w)
      << "\" height=\"" << fixed6(h) << "\" fill=\"white\" stroke=\"black\" stroke-width=\"1\"/>\n";
  for (int col = 1; col < grid.n_cols(); ++col) {
    const double x = col * grid.cell_w();
    out << "<line class=\"grid\" x1=\"" << sx(x) << "\" y1=\"" << sy(0) << "\" x2=\"" << sx(x) << "\" y2=\""
        << sy(c.height) << "\" stroke=\"#cccccc\" stroke-width=\"0.5\"/>\n";
  }
  for (int row = 1; row < grid.n_rows(); ++row) {
    const double y = row * grid.cell_h();
    out << "<line class=\"grid\" x1=\"" << sx(0) << "\" y1=\"" << sy(y) << "\" x2=\"" << sx(c.width) << "\" y2=\""
        << sy(y) << "\" stroke=\"#cccccc\" stroke-width=\"0.5\"/>\n";
  }
  const double tick = std::max(2.0, 0.01 * kImageSize);
  for (NodeIndex i = 0; i < netlist.num_nodes(); ++i) {
    if (!placement.has(i)) continue;
    const Node& n = netlist.node(i);
    const Pose& p = placement.at(i);
    if (n.kind == NodeKind::Port) {
      out << "<line class=\"port\" x1=\"" << sx(p.x) << "\" y1=\"" << fixed6(kMargin + h - p.y * scale - tick / 2)
          << "\" x2=\"" << sx(p.x) << "\" y2=\"" << fixed6(kMargin + h - p.y * scale + tick / 2)
          << "\" stroke=\"red\" stroke-width=\"1\"/>\n";
      continue;
    }
    const Rect r = bounding_box(n, p);
    out << "<rect class=\"" << (n.kind == NodeKind::Macro ? "macro" : "cluster") << "\" x=\"" << sx(r.xlo)
        << "\" y=\"" << sy(r.yhi) << "\" width=\"" << fixed6(r.width() * scale) << "\" height=\""
        << fixed6(r.height() * scale) << '"';
    if (n.kind == NodeKind::Macro) {
      out << " fill=\"" << (n.movable ? "#4a90d9" : "#7f7f7f") << "\" stroke=\"black\" stroke-width=\"0.5\"";
    } else {
      out << " fill=\"none\" stroke=\"#2e8b57\" stroke-width=\"0.5\"";
    }
    out << "><title>" << xml_escape(n.id) << ' ' << to_string(p.orient) << "</title></rect>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void write_svg(const Netlist& netlist, const Placement& placement, const Grid& grid,
               const std::filesystem::path& path) {
  const std::string text = render_svg(netlist, placement, grid);
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error(ErrorKind::IoFailure, "write to " + path.string() + " failed");
}

}  // namespace macroplace
