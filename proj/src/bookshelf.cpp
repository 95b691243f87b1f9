#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <spdlog/spdlog.h>

#include "macroplace/error.h"
#include "macroplace/netlist_io.h"
#include "text_util.h"

namespace macroplace {

namespace fs = std::filesystem;

namespace {

struct RawNode {
  std::string name;
  double width = 0.0;
  double height = 0.0;
  bool terminal = false;
};

struct RawPin {
  std::string node;
  bool output = false;
  double dx = 0.0;
  double dy = 0.0;
  std::size_t line = 0;
};

struct RawNet {
  std::string name;
  std::vector<RawPin> pins;
};

struct RawPl {
  double x = 0.0;
  double y = 0.0;
  Orientation orient = Orientation::N;
  bool fixed = false;
};

struct RowExtent {
  double xlo = std::numeric_limits<double>::infinity();
  double xhi = -std::numeric_limits<double>::infinity();
  double ylo = std::numeric_limits<double>::infinity();
  double yhi = -std::numeric_limits<double>::infinity();
  double row_height = 0.0;
  bool any = false;
};

bool is_header(const std::vector<std::string>& t) { return !t.empty() && t[0] == "UCLA"; }

// "Key : value" lines; returns the value when the first token matches.
std::optional<std::string> keyed_value(const std::vector<std::string>& t, std::string_view key) {
  if (t.size() >= 3 && t[0] == key && t[1] == ":") return t[2];
  return std::nullopt;
}

std::size_t keyed_count(const std::vector<std::string>& t, const LineReader& in) {
  return static_cast<std::size_t>(in.number(t[2], "count"));
}

void read_nodes(const fs::path& path, std::vector<RawNode>& nodes, BookshelfCounts& declared) {
  LineReader in(path);
  std::vector<std::string> t;
  while (in.next(t)) {
    if (is_header(t)) continue;
    if (keyed_value(t, "NumNodes")) {
      declared.num_nodes = keyed_count(t, in);
      continue;
    }
    if (keyed_value(t, "NumTerminals")) {
      declared.num_terminals = keyed_count(t, in);
      continue;
    }
    if (t.size() < 3) in.fail("expected '<name> <width> <height> [terminal]'");
    RawNode n;
    n.name = t[0];
    n.width = in.number(t[1], "width");
    n.height = in.number(t[2], "height");
    if (n.width < 0.0 || n.height < 0.0) in.fail("negative node size");
    n.terminal = t.size() > 3 && (t[3] == "terminal" || t[3] == "terminal_NI");
    nodes.push_back(std::move(n));
  }
  const auto terminals =
      static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const RawNode& n) { return n.terminal; }));
  if (nodes.size() != declared.num_nodes) {
    in.fail("NumNodes declares " + std::to_string(declared.num_nodes) + " but " + std::to_string(nodes.size()) +
            " were listed");
  }
  if (terminals != declared.num_terminals) {
    in.fail("NumTerminals declares " + std::to_string(declared.num_terminals) + " but " +
            std::to_string(terminals) + " were listed");
  }
}

void read_nets(const fs::path& path, std::vector<RawNet>& nets, BookshelfCounts& declared) {
  LineReader in(path);
  std::vector<std::string> t;
  std::size_t pins_left = 0;
  std::size_t total_pins = 0;
  while (in.next(t)) {
    if (is_header(t)) continue;
    if (keyed_value(t, "NumNets")) {
      declared.num_nets = keyed_count(t, in);
      continue;
    }
    if (keyed_value(t, "NumPins")) {
      declared.num_pins = keyed_count(t, in);
      continue;
    }
    if (auto degree = keyed_value(t, "NetDegree")) {
      if (pins_left != 0) in.fail("previous net is missing pins");
      RawNet net;
      pins_left = static_cast<std::size_t>(in.number(*degree, "net degree"));
      net.name = t.size() > 3 ? t[3] : "net" + std::to_string(nets.size());
      nets.push_back(std::move(net));
      continue;
    }
    if (pins_left == 0) in.fail("pin line outside a NetDegree block");
    RawPin pin;
    pin.node = t[0];
    pin.line = in.line();
    std::size_t k = 1;
    if (k < t.size() && t[k] != ":") {
      pin.output = t[k] == "O";
      ++k;
    }
    if (k < t.size()) {
      if (t[k] != ":" || k + 2 >= t.size()) in.fail("expected ': <dx> <dy>' after pin direction");
      pin.dx = in.number(t[k + 1], "pin x offset");
      pin.dy = in.number(t[k + 2], "pin y offset");
    }
    nets.back().pins.push_back(std::move(pin));
    --pins_left;
    ++total_pins;
  }
  if (pins_left != 0) in.fail("last net is missing pins");
  if (nets.size() != declared.num_nets) {
    in.fail("NumNets declares " + std::to_string(declared.num_nets) + " but " + std::to_string(nets.size()) +
            " were listed");
  }
  if (total_pins != declared.num_pins) {
    in.fail("NumPins declares " + std::to_string(declared.num_pins) + " but " + std::to_string(total_pins) +
            " were listed");
  }
}

std::unordered_map<std::string, RawPl> read_pl(const fs::path& path) {
  std::unordered_map<std::string, RawPl> out;
  LineReader in(path);
  std::vector<std::string> t;
  while (in.next(t)) {
    if (is_header(t)) continue;
    if (t.size() < 3) in.fail("expected '<name> <x> <y> [: <orient>] [/FIXED]'");
    RawPl pl;
    pl.x = in.number(t[1], "x");
    pl.y = in.number(t[2], "y");
    for (std::size_t k = 3; k < t.size(); ++k) {
      if (t[k] == ":") continue;
      if (t[k] == "/FIXED" || t[k] == "/FIXED_NI") {
        pl.fixed = true;
      } else if (auto o = parse_orientation(t[k])) {
        pl.orient = *o;
      } else {
        in.fail("unsupported orientation '" + t[k] + "'");
      }
    }
    out[t[0]] = pl;
  }
  return out;
}

RowExtent read_scl(const fs::path& path) {
  RowExtent rows;
  LineReader in(path);
  std::vector<std::string> t;
  double coordinate = 0.0;
  double height = 0.0;
  double spacing = 1.0;
  double site_width = 0.0;
  bool have_spacing = false;
  while (in.next(t)) {
    if (is_header(t)) continue;
    if (t[0] == "CoreRow") {
      coordinate = height = site_width = 0.0;
      spacing = 1.0;
      have_spacing = false;
    } else if (auto v = keyed_value(t, "Coordinate")) {
      coordinate = in.number(*v, "row coordinate");
    } else if (auto v = keyed_value(t, "Height")) {
      height = in.number(*v, "row height");
    } else if (auto v = keyed_value(t, "Sitewidth")) {
      site_width = in.number(*v, "site width");
    } else if (auto v = keyed_value(t, "Sitespacing")) {
      spacing = in.number(*v, "site spacing");
      have_spacing = true;
    } else if (auto v = keyed_value(t, "SubrowOrigin")) {
      const double origin = in.number(*v, "subrow origin");
      if (t.size() < 6 || t[3] != "NumSites") in.fail("expected 'SubrowOrigin : <x> NumSites : <n>'");
      const double sites = in.number(t[5], "site count");
      const double pitch = have_spacing ? spacing : (site_width > 0.0 ? site_width : 1.0);
      rows.xlo = std::min(rows.xlo, origin);
      rows.xhi = std::max(rows.xhi, origin + sites * pitch);
      rows.ylo = std::min(rows.ylo, coordinate);
      rows.yhi = std::max(rows.yhi, coordinate + height);
      if (!rows.any) rows.row_height = height;
      rows.any = true;
    }
  }
  return rows;
}

// Most common height among movable nodes; stands in for the row height when
// no .scl file is given.
double modal_height(const std::vector<RawNode>& nodes) {
  std::map<double, std::size_t> counts;
  for (const RawNode& n : nodes) {
    if (!n.terminal) ++counts[n.height];
  }
  double best = 0.0;
  std::size_t best_count = 0;
  for (const auto& [h, c] : counts) {
    if (c > best_count) {
      best = h;
      best_count = c;
    }
  }
  return best;
}

}  // namespace

BookshelfDesign parse_bookshelf(const fs::path& aux_path) {
  if (!fs::exists(aux_path)) throw Error(ErrorKind::MissingFile, aux_path.string());

  fs::path nodes_file, nets_file, pl_file, scl_file;
  {
    LineReader in(aux_path);
    std::vector<std::string> t;
    while (in.next(t)) {
      for (const std::string& tok : t) {
        const fs::path p = aux_path.parent_path() / tok;
        const std::string ext = fs::path(tok).extension().string();
        if (ext == ".nodes") nodes_file = p;
        else if (ext == ".nets") nets_file = p;
        else if (ext == ".pl") pl_file = p;
        else if (ext == ".scl") scl_file = p;
      }
    }
  }
  for (const fs::path* required : {&nodes_file, &nets_file, &pl_file}) {
    if (required->empty()) {
      throw Error(ErrorKind::MalformedLine, aux_path.string() + ": aux file does not list .nodes, .nets and .pl");
    }
    if (!fs::exists(*required)) throw Error(ErrorKind::MissingFile, required->string());
  }
  if (!scl_file.empty() && !fs::exists(scl_file)) throw Error(ErrorKind::MissingFile, scl_file.string());

  BookshelfDesign design;
  std::vector<RawNode> raw_nodes;
  std::vector<RawNet> raw_nets;
  read_nodes(nodes_file, raw_nodes, design.declared);
  read_nets(nets_file, raw_nets, design.declared);
  const auto pl = read_pl(pl_file);
  const RowExtent rows = scl_file.empty() ? RowExtent{} : read_scl(scl_file);

  // Canvas: core rows when available, else the extent of fixed objects, else
  // the extent of everything placed.
  Rect extent{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
              -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  auto grow = [&](const RawNode& n) {
    const auto it = pl.find(n.name);
    if (it == pl.end()) return;
    extent.xlo = std::min(extent.xlo, it->second.x);
    extent.ylo = std::min(extent.ylo, it->second.y);
    extent.xhi = std::max(extent.xhi, it->second.x + n.width);
    extent.yhi = std::max(extent.yhi, it->second.y + n.height);
  };
  if (rows.any) {
    extent = {rows.xlo, rows.ylo, rows.xhi, rows.yhi};
  } else {
    for (const RawNode& n : raw_nodes) {
      if (n.terminal) grow(n);
    }
    if (!(extent.width() > 0.0) || !(extent.height() > 0.0)) {
      for (const RawNode& n : raw_nodes) grow(n);
    }
  }
  if (!(extent.width() > 0.0) || !(extent.height() > 0.0)) {
    throw Error(ErrorKind::MalformedLine, aux_path.string() + ": cannot infer a canvas with positive area");
  }
  const Canvas canvas{extent.width(), extent.height()};
  const Point origin{extent.xlo, extent.ylo};
  const double row_height = rows.any && rows.row_height > 0.0 ? rows.row_height : modal_height(raw_nodes);
  const double tall = row_height * (1.0 + 1e-9);

  std::vector<Node> nodes;
  nodes.reserve(raw_nodes.size());
  std::unordered_map<std::string, NodeIndex> index;
  index.reserve(raw_nodes.size());
  std::vector<RawPl> poses(raw_nodes.size());
  std::vector<bool> has_pose(raw_nodes.size(), false);
  for (const RawNode& r : raw_nodes) {
    Node n;
    n.id = r.name;
    n.width = r.width;
    n.height = r.height;
    const auto it = pl.find(r.name);
    const bool fixed_in_pl = it != pl.end() && it->second.fixed;
    if (r.terminal) {
      n.movable = false;
      if (r.width <= tall && r.height <= tall) {
        n.kind = NodeKind::Port;
        n.width = n.height = 0.0;
      } else {
        n.kind = NodeKind::Macro;
      }
    } else {
      n.movable = !fixed_in_pl;
      n.kind = r.height > tall ? NodeKind::Macro : NodeKind::StdCell;
      if (!(n.width > 0.0) || !(n.height > 0.0)) {
        throw Error(ErrorKind::MalformedLine, nodes_file.string() + ": node '" + r.name + "' has zero size");
      }
    }
    if (!index.emplace(n.id, nodes.size()).second) {
      throw Error(ErrorKind::MalformedLine, nodes_file.string() + ": duplicate node '" + n.id + "'");
    }
    if (it != pl.end()) {
      poses[nodes.size()] = it->second;
      has_pose[nodes.size()] = true;
    }
    nodes.push_back(std::move(n));
  }

  Placement placement(nodes.size());
  for (NodeIndex i = 0; i < nodes.size(); ++i) {
    if (!has_pose[i]) continue;
    const RawNode& r = raw_nodes[i];
    Pose p{poses[i].x - origin.x + r.width / 2, poses[i].y - origin.y + r.height / 2, poses[i].orient};
    if (nodes[i].kind == NodeKind::Port) {
      const Pose clamped{std::clamp(p.x, 0.0, canvas.width), std::clamp(p.y, 0.0, canvas.height), p.orient};
      if (!(clamped == p)) {
        ++design.clamped_ports;
        spdlog::debug("port '{}' clamped onto the canvas boundary", nodes[i].id);
      }
      p = clamped;
    }
    placement.set(i, p);
  }

  std::vector<Net> nets;
  nets.reserve(raw_nets.size());
  for (const RawNet& rn : raw_nets) {
    Net net;
    net.id = rn.name;
    bool have_source = false;
    for (const RawPin& rp : rn.pins) {
      const auto it = index.find(rp.node);
      if (it == index.end()) {
        throw Error(ErrorKind::DanglingPinReference, nets_file.string() + ":" + std::to_string(rp.line) +
                                                         ": pin references unknown node '" + rp.node + "'");
      }
      const Node& owner = nodes[it->second];
      Pin pin;
      pin.owner = it->second;
      pin.offset = {std::clamp(rp.dx, -owner.width / 2, owner.width / 2),
                    std::clamp(rp.dy, -owner.height / 2, owner.height / 2)};
      if (owner.kind != NodeKind::Port && (pin.offset.x != rp.dx || pin.offset.y != rp.dy)) {
        ++design.clamped_pins;
      }
      pin.is_source = rp.output && !have_source;
      have_source = have_source || pin.is_source;
      net.pins.push_back(pin);
    }
    if (net.pins.size() < 2) {
      ++design.dropped_nets;
      continue;
    }
    nets.push_back(std::move(net));
  }
  if (design.dropped_nets > 0) spdlog::warn("dropped {} nets with fewer than two pins", design.dropped_nets);
  if (design.clamped_ports > 0) spdlog::info("clamped {} ports onto the canvas boundary", design.clamped_ports);
  if (design.clamped_pins > 0) spdlog::warn("clamped {} pin offsets to their node extents", design.clamped_pins);

  design.netlist = Netlist(canvas, std::move(nodes), std::move(nets));
  design.netlist.set_file_origin(origin);
  design.placement = std::move(placement);
  return design;
}

LoadedDesign load_design(const fs::path& path) {
  if (path.extension() == ".aux") {
    BookshelfDesign d = parse_bookshelf(path);
    return {std::move(d.netlist), std::move(d.placement)};
  }
  Netlist n = parse_native(path);
  Placement p(n.num_nodes());
  return {std::move(n), std::move(p)};
}

}  // namespace macroplace
