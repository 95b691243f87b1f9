#include <cstdio>
#include <fstream>
#include <unordered_map>

#include <spdlog/spdlog.h>

#include "macroplace/error.h"
#include "macroplace/netlist_io.h"
#include "text_util.h"

namespace macroplace {

namespace fs = std::filesystem;

namespace {

// Shortest text that reads back to the same double.
std::string exact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Netlist parse_native(const fs::path& path) {
  LineReader in(path);
  std::vector<std::string> t;
  Canvas canvas;
  bool have_canvas = false;
  Point origin;
  std::vector<Node> nodes;
  std::unordered_map<std::string, NodeIndex> node_index;
  std::vector<Net> nets;
  std::unordered_map<std::string, std::size_t> net_index;

  while (in.next(t)) {
    const std::string& kind = t[0];
    if (kind == "canvas") {
      if (t.size() != 3) in.fail("expected 'canvas <width> <height>'");
      canvas = {in.number(t[1], "canvas width"), in.number(t[2], "canvas height")};
      have_canvas = true;
    } else if (kind == "origin") {
      if (t.size() != 3) in.fail("expected 'origin <x> <y>'");
      origin = {in.number(t[1], "origin x"), in.number(t[2], "origin y")};
    } else if (kind == "node") {
      if (t.size() != 6) in.fail("expected 'node <id> <kind> <width> <height> <movable|fixed>'");
      Node n;
      n.id = t[1];
      const auto k = parse_node_kind(t[2]);
      if (!k) in.fail("unknown node kind '" + t[2] + "'");
      n.kind = *k;
      n.width = in.number(t[3], "width");
      n.height = in.number(t[4], "height");
      if (t[5] != "movable" && t[5] != "fixed") in.fail("expected 'movable' or 'fixed'");
      n.movable = t[5] == "movable";
      if (!node_index.emplace(n.id, nodes.size()).second) in.fail("duplicate node '" + n.id + "'");
      nodes.push_back(std::move(n));
    } else if (kind == "net") {
      if (t.size() != 3) in.fail("expected 'net <id> <weight>'");
      Net net;
      net.id = t[1];
      net.weight = in.number(t[2], "net weight");
      if (net.weight < 0.0) in.fail("negative net weight");
      if (!net_index.emplace(net.id, nets.size()).second) in.fail("duplicate net '" + net.id + "'");
      nets.push_back(std::move(net));
    } else if (kind == "pin") {
      if (t.size() != 5 && !(t.size() == 6 && t[5] == "source")) {
        in.fail("expected 'pin <net-id> <node-id> <dx> <dy> [source]'");
      }
      const auto net_it = net_index.find(t[1]);
      if (net_it == net_index.end()) in.fail("pin references unknown net '" + t[1] + "'");
      const auto node_it = node_index.find(t[2]);
      if (node_it == node_index.end()) {
        throw Error(ErrorKind::DanglingPinReference,
                    path.string() + ":" + std::to_string(in.line()) + ": unknown node '" + t[2] + "'");
      }
      Net& net = nets[net_it->second];
      Pin pin{node_it->second, {in.number(t[3], "pin dx"), in.number(t[4], "pin dy")}, t.size() == 6};
      if (pin.is_source) {
        for (const Pin& other : net.pins) {
          if (other.is_source) in.fail("net '" + net.id + "' already has a source pin");
        }
      }
      net.pins.push_back(pin);
    } else {
      in.fail("unknown record '" + kind + "'");
    }
  }
  if (!have_canvas) throw Error(ErrorKind::MalformedLine, path.string() + ": missing canvas record");

  std::vector<Net> kept;
  kept.reserve(nets.size());
  std::size_t dropped = 0;
  for (Net& net : nets) {
    if (net.pins.size() < 2) {
      ++dropped;
      continue;
    }
    kept.push_back(std::move(net));
  }
  if (dropped > 0) spdlog::warn("{}: dropped {} nets with fewer than two pins", path.string(), dropped);
  Netlist netlist(canvas, std::move(nodes), std::move(kept));
  netlist.set_file_origin(origin);
  return netlist;
}

void write_native(const Netlist& netlist, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open " + path.string() + " for writing");
  out << "canvas " << exact(netlist.canvas().width) << ' ' << exact(netlist.canvas().height) << '\n';
  const Point origin = netlist.file_origin();
  if (origin.x != 0.0 || origin.y != 0.0) out << "origin " << exact(origin.x) << ' ' << exact(origin.y) << '\n';
  for (const Node& n : netlist.nodes()) {
    out << "node " << n.id << ' ' << to_string(n.kind) << ' ' << exact(n.width) << ' ' << exact(n.height) << ' '
        << (n.movable ? "movable" : "fixed") << '\n';
  }
  for (const Net& net : netlist.nets()) {
    out << "net " << net.id << ' ' << exact(net.weight) << '\n';
    for (const Pin& pin : net.pins) {
      out << "pin " << net.id << ' ' << netlist.node(pin.owner).id << ' ' << exact(pin.offset.x) << ' '
          << exact(pin.offset.y) << (pin.is_source ? " source" : "") << '\n';
    }
  }
  if (!out) throw Error(ErrorKind::IoFailure, "write to " + path.string() + " failed");
}

}  // namespace macroplace
