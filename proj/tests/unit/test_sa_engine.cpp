#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "macroplace/error.h"
#include "macroplace/sa_engine.h"
#include "oracle.h"
#include "random_instance.h"

using namespace macroplace;

namespace {

ClusteredNetlist as_clustered(const Netlist& n, const Placement& p) { return cluster_none(n, p); }

std::vector<Node> unit_macros(int count, double side) {
  std::vector<Node> nodes;
  for (int i = 0; i < count; ++i) nodes.push_back({"m" + std::to_string(i), NodeKind::Macro, side, side, true});
  return nodes;
}

bool legal(const Netlist& n, const Placement& p) {
  if (total_macro_overlap(n, p) > 0.0) return false;
  for (NodeIndex i = 0; i < n.num_nodes(); ++i) {
    if (p.has(i) && !inside_canvas(bounding_box(n.node(i), p.at(i)), n.canvas(), legality_slack(n.canvas()))) return false;
  }
  return true;
}

std::multiset<std::pair<double, double>> occupied(const MacroState& s) {
  std::multiset<std::pair<double, double>> out;
  for (NodeIndex m : s.macros()) out.insert({s.placement().at(m).x, s.placement().at(m).y});
  return out;
}

}  // namespace

TEST_CASE("spiral order runs counterclockwise inward from the lower-left") {
  const auto o = spiral_order(3, 3);
  const std::vector<GridCell> expect{{0, 0}, {1, 0}, {2, 0}, {2, 1}, {2, 2}, {1, 2}, {0, 2}, {0, 1}, {1, 1}};
  CHECK(o == expect);
  CHECK(spiral_order(4, 2).size() == 8);
  CHECK(spiral_order(1, 5).size() == 5);
  const auto big = spiral_order(7, 4);
  std::set<std::pair<int, int>> seen;
  for (GridCell c : big) seen.insert({c.col, c.row});
  CHECK(seen.size() == 28);
}

TEST_CASE("init_spiral") {
  const Grid g = build_grid({20, 20}, 2, 2, 1, 1);
  SUBCASE("one macro goes to the lower-left cell") {
    const Netlist n({20, 20}, unit_macros(1, 10), {});
    const Placement p = init_spiral(n, g, n.movable_macros(), Placement(1));
    CHECK(p.at(0).x == 5.0);
    CHECK(p.at(0).y == 5.0);
  }
  SUBCASE("four cell-sized macros fill the four corners") {
    const Netlist n({20, 20}, unit_macros(4, 10), {});
    const Placement p = init_spiral(n, g, n.movable_macros(), Placement(4));
    CHECK(p.at(1).x == 15.0);
    CHECK(p.at(1).y == 5.0);
    CHECK(p.at(3).x == 5.0);
    CHECK(p.at(3).y == 15.0);
    CHECK(total_macro_overlap(n, p) == 0.0);
  }
  SUBCASE("a macro larger than the canvas is Unplaceable") {
    const Netlist n({20, 20}, unit_macros(1, 25), {});
    CHECK_THROWS_AS(init_spiral(n, g, n.movable_macros(), Placement(1)), Error);
  }
}

TEST_CASE("init_greedy_pack") {
  const Grid g = build_grid({40, 40}, 4, 4, 1, 1);
  SUBCASE("two equal macros land side by side in the bottom row") {
    const Netlist n({40, 40}, unit_macros(2, 10), {});
    const Placement p = init_greedy_pack(n, g, n.movable_macros(), Placement(2));
    CHECK(p.at(0).x == 5.0);
    CHECK(p.at(1).x == 15.0);
    CHECK(p.at(1).y == 5.0);
  }
  SUBCASE("larger macros are packed first") {
    std::vector<Node> nodes{{"small", NodeKind::Macro, 5, 5, true}, {"big", NodeKind::Macro, 20, 20, true}};
    const Netlist n({40, 40}, nodes, {});
    const Placement p = init_greedy_pack(n, g, n.movable_macros(), Placement(2));
    CHECK(p.at(1).x == 15.0);  // first cell where the 20 x 20 block fits
    CHECK(legal(n, p));
  }
  SUBCASE("random feasible instances have zero overlap") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto inst = testing_support::random_macro_instance(seed, 1 + static_cast<int>(seed % 6), 4);
      const Placement p = init_greedy_pack(inst.netlist, inst.grid, inst.netlist.movable_macros(), inst.placement);
      CHECK(legal(inst.netlist, p));
      const Placement s = init_spiral(inst.netlist, inst.grid, inst.netlist.movable_macros(), inst.placement);
      CHECK(legal(inst.netlist, s));
    }
  }
}

TEST_CASE("actions") {
  const auto inst = testing_support::random_macro_instance(5, 5, 4);
  const Placement start = init_spiral(inst.netlist, inst.grid, inst.netlist.movable_macros(), inst.placement);
  Rng rng(2);
  SUBCASE("mirror twice along one axis restores the placement") {
    MacroState s(inst.netlist, inst.grid, start);
    const NodeIndex m = s.macros()[2];
    const GridCell cell = s.cell(2);
    Action a{ActionType::Mirror, {{m, cell, compose(s.orient(2), Orientation::FN)}}};
    REQUIRE(s.try_apply(a));
    Action b{ActionType::Mirror, {{m, cell, compose(s.orient(2), Orientation::FN)}}};
    REQUIRE(s.try_apply(b));
    CHECK(s.placement() == start);
  }
  SUBCASE("swap and shuffle keep the occupied cell multiset for same-size macros") {
    const Netlist n({40, 40}, unit_macros(6, 10), {});
    const Grid g = build_grid({40, 40}, 4, 4, 1, 1);
    MacroState s(n, g, init_spiral(n, g, n.movable_macros(), Placement(6)));
    const auto before = occupied(s);
    for (int i = 0; i < 50; ++i) {
      for (ActionType t : {ActionType::Swap, ActionType::Shuffle}) {
        const Action a = propose_action(s, g, t, rng);
        if (t == ActionType::Shuffle) CHECK(a.moves.size() == kShuffleArity);
        if (s.try_apply(a)) CHECK(occupied(s) == before);
      }
    }
  }
  SUBCASE("shift moves one macro to a 4-neighbor") {
    MacroState s(inst.netlist, inst.grid, start);
    for (int i = 0; i < 100; ++i) {
      const Action a = propose_action(s, inst.grid, ActionType::Shift, rng);
      REQUIRE(a.moves.size() == 1);
      const GridCell from = s.cell(s.slot_of(a.moves[0].macro));
      const GridCell to = a.moves[0].cell;
      CHECK(std::abs(from.col - to.col) + std::abs(from.row - to.row) == 1);
      if (!inst.grid.contains(to)) CHECK_FALSE(s.try_apply(a).has_value());
    }
  }
  SUBCASE("illegal proposals leave the state untouched") {
    const Netlist n({20, 20}, unit_macros(2, 10), {});
    const Grid g = build_grid({20, 20}, 2, 2, 1, 1);
    MacroState s(n, g, init_spiral(n, g, n.movable_macros(), Placement(2)));
    const Placement before = s.placement();
    Action clash{ActionType::Move, {{0, s.cell(1), Orientation::N}}};
    CHECK_FALSE(s.try_apply(clash).has_value());
    CHECK(s.placement() == before);
  }
  SUBCASE("undo restores the previous state") {
    MacroState s(inst.netlist, inst.grid, start);
    for (int i = 0; i < 200; ++i) {
      const Placement before = s.placement();
      const Action a = propose_action(s, inst.grid, static_cast<ActionType>(i % 5), rng);
      if (auto undo = s.try_apply(a)) {
        CHECK(legal(inst.netlist, s.placement()));
        REQUIRE(s.try_apply(*undo));
        CHECK(s.placement() == before);
      }
    }
  }
}

TEST_CASE("anneal with zero steps returns the initialization") {
  const auto inst = testing_support::random_macro_instance(1, 3, 3);
  const ClusteredNetlist c = as_clustered(inst.netlist, inst.placement);
  SAConfig cfg;
  cfg.max_steps = 0;
  const SAResult r = anneal(c, inst.grid, cfg);
  CHECK(r.best_cost.total == r.initial_cost.total);
  const Placement init = init_spiral(inst.netlist, inst.grid, inst.netlist.movable_macros(), inst.placement);
  CHECK(r.best_placement == init);
}

TEST_CASE("greedy annealing swaps two macros to shorten a net") {
  // m0 lands lower-left and m1 next to it; the port sits at the far right, so
  // swapping brings m0 (the only connected macro) closer.
  const Netlist n({40, 10}, {{"m0", NodeKind::Macro, 10, 10, true}, {"m1", NodeKind::Macro, 10, 10, true},
                             {"p", NodeKind::Port, 0, 0, false}},
                  {{"n", 1.0, {{0, {0, 0}, true}, {2, {0, 0}, false}}}});
  Placement base(3);
  base.set(2, {40, 5, Orientation::N});
  const Grid g = build_grid({40, 10}, 4, 1, 10, 10);
  SAConfig cfg;
  cfg.t_init = 0.0;
  cfg.max_steps = 200;
  cfg.action_weights = {1, 0, 0, 0, 0};
  const SAResult r = anneal(as_clustered(n, base), g, cfg);
  CHECK(r.best_cost.total < r.initial_cost.total);
  CHECK(r.best_placement.at(0).x == 15.0);
}

TEST_CASE("annealing is deterministic and every accepted state is legal") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = testing_support::random_macro_instance(seed, 4, 4);
    const ClusteredNetlist c = as_clustered(inst.netlist, inst.placement);
    SAConfig cfg;
    cfg.seed = seed;
    cfg.max_steps = 300;
    bool all_legal = true;
    const SAResult a = anneal(c, inst.grid, cfg, [&](long, const Placement& p, double) {
      all_legal = all_legal && legal(inst.netlist, p);
    });
    const SAResult b = anneal(c, inst.grid, cfg);
    CHECK(all_legal);
    CHECK(format_trace_csv(a.cost_trace) == format_trace_csv(b.cost_trace));
    CHECK(a.best_placement == b.best_placement);
    CHECK(a.best_cost.total <= a.initial_cost.total);
    long total = 0;
    for (long k : a.actions_taken) total += k;
    CHECK(total == a.steps);
    for (std::size_t i = 1; i < a.cost_trace.size(); ++i) CHECK(a.cost_trace[i - 1].step <= a.cost_trace[i].step);
  }
}

TEST_CASE("mirror-only annealing visits orientation states only") {
  std::vector<Node> nodes = unit_macros(2, 8);
  nodes.push_back({"p", NodeKind::Port, 0, 0, false});
  const Netlist n({30, 30}, nodes, {{"n", 1.0, {{0, {3, 1}, true}, {1, {-2, 2}, false}, {2, {0, 0}, false}}}});
  const Grid g = build_grid({30, 30}, 3, 3, 1, 1);
  Placement base(3);
  base.set(2, {30, 30, Orientation::N});
  SAConfig cfg;
  cfg.action_weights = {0, 0, 1, 0, 0};
  cfg.max_steps = 200;
  std::set<std::pair<double, double>> centers;
  std::set<double> costs;
  anneal(as_clustered(n, base), g, cfg, [&](long, const Placement& p, double cost) {
    for (NodeIndex i = 0; i < 2; ++i) centers.insert({p.at(i).x, p.at(i).y});
    costs.insert(cost);
  });
  CHECK(centers.size() == 2);
  CHECK(costs.size() <= 16);
}

TEST_CASE("annealing with FD updates clusters and keeps best <= init") {
  const auto inst = testing_support::random_clustered_instance(3);
  std::vector<Node> nodes = inst.netlist.nodes();
  nodes.push_back({"mov", NodeKind::Macro, inst.grid.cell_w(), inst.grid.cell_h(), true});
  std::vector<Net> nets = inst.netlist.nets();
  nets.push_back({"x", 1.0, {{nodes.size() - 1, {0, 0}, true}, {0, {0, 0}, false}}});
  const Netlist n(inst.netlist.canvas(), nodes, nets);
  Placement base(n.num_nodes());
  for (NodeIndex i = 0; i < inst.placement.size(); ++i) base.set(i, inst.placement.at(i));
  SAConfig cfg;
  cfg.max_steps = 100;
  cfg.fd_params.num_iters = 20;
  const SAResult r = anneal(as_clustered(n, base), inst.grid, cfg);
  CHECK(r.best_cost.total <= r.initial_cost.total);
}

TEST_CASE("anneal without macros fails") {
  const Netlist n({10, 10}, {{"c", NodeKind::Cluster, 1, 1, true}}, {});
  CHECK_THROWS_AS(anneal(as_clustered(n, Placement(1)), build_grid({10, 10}, 2, 2, 1, 1), {}), Error);
  SAConfig bad;
  bad.action_weights = {1, 1, 0, 0, 0};
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("run_parallel") {
  const auto inst = testing_support::random_macro_instance(8, 3, 3);
  const ClusteredNetlist c = as_clustered(inst.netlist, inst.placement);
  SAConfig cfg;
  cfg.max_steps = 200;
  cfg.seed = 4;
  SUBCASE("one worker equals anneal") {
    const ParallelResult p = run_parallel(c, inst.grid, cfg, 1, {4}, 0.0);
    const SAResult a = anneal(c, inst.grid, cfg);
    CHECK(p.best.best_placement == a.best_placement);
    CHECK(format_trace_csv(p.best.cost_trace) == format_trace_csv(a.cost_trace));
  }
  SUBCASE("repeat runs are identical and the best is the minimum") {
    const ParallelResult a = run_parallel(c, inst.grid, cfg, 4, {4, 5}, 0.0);
    const ParallelResult b = run_parallel(c, inst.grid, cfg, 4, {4, 5}, 0.0);
    CHECK(a.best.best_placement == b.best.best_placement);
    for (std::size_t w = 0; w < 4; ++w) {
      CHECK(format_trace_csv(a.workers[w].cost_trace) == format_trace_csv(b.workers[w].cost_trace));
      CHECK(a.best.best_cost.total <= a.workers[w].best_cost.total);
    }
  }
  SUBCASE("worker configuration splits seeds and cycles FD cadence") {
    const SAConfig w0 = worker_config(cfg, 0, 4, {10, 20});
    const SAConfig w1 = worker_config(cfg, 1, 4, {10, 20});
    const SAConfig w2 = worker_config(cfg, 2, 4, {10, 20});
    const SAConfig w3 = worker_config(cfg, 3, 4, {10, 20});
    CHECK(w0.seed == 10);
    CHECK(w2.seed == 20);
    CHECK(w1.seed != 10);
    CHECK(w3.seed != 20);
    CHECK(w0.fd_interval_multiplier == 2);
    CHECK(w1.fd_interval_multiplier == 3);
    CHECK(w3.fd_interval_multiplier == 5);
  }
}

TEST_CASE("SA reaches the exhaustive optimum on tiny instances") {
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto inst = testing_support::random_macro_instance(seed + 50, 3, 3);
    SAConfig cfg;
    cfg.max_steps = 1500;
    cfg.action_weights = {0.25, 0.25, 0.0, 0.25, 0.25};
    const ParallelResult r = run_parallel(cluster_none(inst.netlist, inst.placement), inst.grid, cfg, 4,
                                          {seed}, 0.0);
    std::size_t count = 0;
    const double best =
        oracle::exhaustive_optimum(inst.netlist, r.best.best_placement, inst.grid, cfg.weights, cfg.congestion, &count);
    CHECK(count == 504);
    if (r.best.best_cost.total == best) ++hits;
  }
  CHECK(hits == 5);
}

TEST_CASE("shuffle_same_size") {
  SUBCASE("distinct sizes are left alone") {
    std::vector<Node> nodes{{"a", NodeKind::Macro, 1, 1, true}, {"b", NodeKind::Macro, 2, 1, true}};
    const Netlist n({10, 10}, nodes, {});
    Placement p(2);
    p.set(0, {2, 2, Orientation::FN});
    p.set(1, {6, 6, Orientation::S});
    CHECK(shuffle_same_size(n, p, 3) == p);
  }
  SUBCASE("same-size pose tuples are permuted") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const Netlist n({100, 100}, unit_macros(6, 5), {});
      Placement p(6);
      Rng rng(seed);
      for (NodeIndex i = 0; i < 6; ++i) {
        p.set(i, {10.0 + 15.0 * static_cast<double>(i), 50, static_cast<Orientation>(rng.below(4))});
      }
      const Placement s = shuffle_same_size(n, p, seed);
      std::multiset<std::tuple<double, double, int>> a, b;
      for (NodeIndex i = 0; i < 6; ++i) {
        a.insert({p.at(i).x, p.at(i).y, static_cast<int>(p.at(i).orient)});
        b.insert({s.at(i).x, s.at(i).y, static_cast<int>(s.at(i).orient)});
      }
      CHECK(a == b);
    }
  }
}
