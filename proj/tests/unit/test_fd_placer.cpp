#include <doctest.h>

#include <cmath>

#include "macroplace/error.h"
#include "macroplace/fd_placer.h"
#include "random_instance.h"

using namespace macroplace;

namespace {

double pair_overlap(const Netlist& n, const Placement& p, NodeIndex a, NodeIndex b) {
  return overlap_area(bounding_box(n.node(a), p.at(a)), bounding_box(n.node(b), p.at(b)));
}

}  // namespace

TEST_CASE("decompose_star") {
  const Net two{"n", 1, {{0, {0, 0}, false}, {1, {0, 0}, false}}};
  CHECK(decompose_star(two) == std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}});
  Net five{"n", 1, {}};
  for (NodeIndex i = 0; i < 5; ++i) five.pins.push_back({i, {0, 0}, i == 3});
  const auto pairs = decompose_star(five);
  CHECK(pairs.size() == 4);
  for (const auto& [c, o] : pairs) {
    CHECK(c == 3);
    CHECK(o != 3);
  }
  const Net three{"n", 1, {{0, {0, 0}, false}, {1, {0, 0}, true}, {2, {0, 0}, false}}};
  CHECK(decompose_star(three) == std::vector<std::pair<std::size_t, std::size_t>>{{1, 0}, {1, 2}});
  const Net one{"n", 1, {{0, {0, 0}, false}}};
  CHECK_THROWS_AS(decompose_star(one), Error);
}

TEST_CASE("attractive_force") {
  CHECK(attractive_force({1, 1}, {1, 1}, 1, 1) == Force{0, 0});
  const Force f = attractive_force({0, 0}, {3, 4}, 1, 1);
  CHECK(f == Force{3, 4});
  CHECK(attractive_force({0, 0}, {3, 4}, 1, 2) == Force{6, 8});
  CHECK(attractive_force({3, 4}, {0, 0}, 1, 1) == Force{-3, -4});
}

TEST_CASE("repulsive_force") {
  Rng rng(1);
  const Node a{"a", NodeKind::Cluster, 10, 10, true};
  CHECK(repulsive_force(a, {0, 0}, a, {20, 0}, 1, 10, rng) == Force{0, 0});
  CHECK(repulsive_force(a, {0, 0}, a, {10, 0}, 1, 10, rng) == Force{0, 0});  // touching only
  const Force f = repulsive_force(a, {3, 4}, a, {0, 0}, 1, 10, rng);
  CHECK(f.x == doctest::Approx(6));
  CHECK(f.y == doctest::Approx(8));
  const Force g = repulsive_force(a, {0, 0}, a, {3, 4}, 1, 10, rng);
  CHECK(g.x == doctest::Approx(-6));
  CHECK(g.y == doctest::Approx(-8));
  const Force c = repulsive_force(a, {5, 5}, a, {5, 5}, 2, 10, rng);
  CHECK(std::hypot(c.x, c.y) == doctest::Approx(20));
  Rng r1(9), r2(9);
  CHECK(repulsive_force(a, {5, 5}, a, {5, 5}, 1, 1, r1) == repulsive_force(a, {5, 5}, a, {5, 5}, 1, 1, r2));
}

TEST_CASE("a lone cluster with no nets stays at the canvas center") {
  const Netlist n({80, 60}, {{"c", NodeKind::Cluster, 4, 4, true}}, {});
  const Placement out = fd_place(n, Placement(1), {});
  CHECK(out.at(0).x == 40.0);
  CHECK(out.at(0).y == 30.0);
}

TEST_CASE("two overlapping clusters symmetric about the center end mirror-symmetric") {
  const Netlist n({100, 100}, {{"a", NodeKind::Cluster, 10, 10, true}, {"b", NodeKind::Cluster, 10, 10, true}}, {});
  Placement start(2);
  start.set(0, {47, 50, Orientation::N});
  start.set(1, {53, 50, Orientation::N});
  const Placement out = fd_repulsive_only(n, start, {});
  CHECK(out.at(0).x + out.at(1).x == doctest::Approx(100.0));
  CHECK(out.at(0).y == doctest::Approx(50.0));
  CHECK(out.at(1).y == doctest::Approx(50.0));
  CHECK(out.at(0).x < 47.0);
}

TEST_CASE("cluster pulled toward a corner port moves at most max_move per axis and stays inside") {
  const Netlist n({100, 50}, {{"c", NodeKind::Cluster, 8, 8, true}, {"p", NodeKind::Port, 0, 0, false}},
                  {{"n", 1.0, {{1, {0, 0}, true}, {0, {0, 0}, false}}}});
  Placement fixed(2);
  fixed.set(1, {0, 0, Orientation::N});
  FDParams params;
  params.num_iters = 10;
  const double max_move = max_move_distance(n.canvas(), 10);
  CHECK(max_move == 10.0);
  Pose prev{50, 25, Orientation::N};
  int seen = 0;
  const Placement out = fd_place(n, fixed, params, [&](const FDIterationView& v) {
    const Pose& p = v.placement->at(0);
    CHECK(std::abs(p.x - prev.x) <= max_move + 1e-9);
    CHECK(std::abs(p.y - prev.y) <= max_move + 1e-9);
    CHECK(inside_canvas(bounding_box(n.node(0), p), n.canvas()));
    prev = p;
    ++seen;
  });
  CHECK(seen == 10);
  CHECK(out.at(0).x < 50.0);
  CHECK(out.at(0).x >= 4.0);
  CHECK(out.at(1).x == 0.0);
}

TEST_CASE("fixed nodes never move and a fresh run is bit-identical") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto inst = testing_support::random_clustered_instance(seed);
    FDParams params;
    params.seed = seed;
    params.num_iters = 30;
    const Placement a = fd_place(inst.netlist, inst.placement, params);
    const Placement b = fd_place(inst.netlist, inst.placement, params);
    CHECK(a == b);
    for (NodeIndex i = 0; i < inst.netlist.num_nodes(); ++i) {
      if (!inst.netlist.node(i).is_soft()) CHECK(a.at(i) == inst.placement.at(i));
    }
  }
}

TEST_CASE("normalization pins the largest horizontal component to max_move") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto inst = testing_support::random_clustered_instance(seed);
    FDParams params;
    params.num_iters = 20;
    fd_place(inst.netlist, inst.placement, params, [&](const FDIterationView& v) {
      double mx = 0.0, my = 0.0;
      for (const Force& f : v.normalized) {
        mx = std::max(mx, std::abs(f.x));
        my = std::max(my, std::abs(f.y));
      }
      if (mx > 0.0) CHECK(std::abs(mx - v.max_move) <= 1e-9);
      if (my > 0.0) CHECK(std::abs(my - v.max_move) <= 1e-9);
    });
  }
}

TEST_CASE("repulsive-only FD") {
  SUBCASE("disjoint clusters do not move") {
    const Netlist n({100, 100}, {{"a", NodeKind::Cluster, 10, 10, true}, {"b", NodeKind::Cluster, 10, 10, true}},
                    {{"n", 1.0, {{0, {0, 0}, false}, {1, {0, 0}, false}}}});
    Placement start(2);
    start.set(0, {20, 20, Orientation::N});
    start.set(1, {70, 70, Orientation::N});
    CHECK(fd_repulsive_only(n, start, {}) == start);
  }
  SUBCASE("stacked clusters separate") {
    const Netlist n({100, 100}, {{"a", NodeKind::Cluster, 10, 10, true}, {"b", NodeKind::Cluster, 10, 10, true}}, {});
    Placement start(2);
    start.set(0, {50, 50, Orientation::N});
    start.set(1, {50, 50, Orientation::N});
    const Placement out = fd_repulsive_only(n, start, {});
    CHECK(pair_overlap(n, out, 0, 1) < pair_overlap(n, start, 0, 1));
  }
  SUBCASE("equals fd_place with k_a = 0 from the same start") {
    const auto inst = testing_support::random_clustered_instance(4);
    FDParams p;
    p.k_a = 0.0;
    p.start_at_center = false;
    CHECK(fd_repulsive_only(inst.netlist, inst.placement, {}) == fd_place(inst.netlist, inst.placement, p));
  }
}

TEST_CASE("fd_place with no soft nodes returns the input") {
  const Netlist n({10, 10}, {{"m", NodeKind::Macro, 2, 2, false}}, {});
  Placement pl(1);
  pl.set(0, {5, 5, Orientation::N});
  CHECK(fd_place(n, pl, {}) == pl);
}

TEST_CASE("fd_place rejects bad parameters and unplaced fixed nodes") {
  const Netlist n({10, 10}, {{"m", NodeKind::Macro, 2, 2, false}, {"c", NodeKind::Cluster, 1, 1, true}}, {});
  FDParams bad;
  bad.num_iters = 0;
  CHECK_THROWS_AS(fd_place(n, Placement(2), bad), Error);
  CHECK_THROWS_AS(fd_place(n, Placement(2), {}), Error);
}
