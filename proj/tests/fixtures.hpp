#pragma once

#include <tuple>
#include <vector>

#include "rb/diffusion.hpp"
#include "rb/graph.hpp"
#include "rb/rng.hpp"

namespace fixtures {

using namespace rb;

inline Network make_net(NodeId n, const std::vector<std::tuple<NodeId, NodeId, double>>& arcs) {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  pairs.reserve(arcs.size());
  for (const auto& [u, v, p] : arcs) pairs.emplace_back(u, v);
  Network net = Network::from_arcs(n, std::move(pairs));
  for (const auto& [u, v, p] : arcs) {
    size_t a = find_arc(net, u, v);
    net.set_arc_prob(a, p);
  }
  return net;
}

// 0 -> 1 -> 2, all certain. Rumor at 0: gamma(empty)=0, gamma({1})=2.
inline Network line3() { return make_net(3, {{0, 1, 1.0}, {1, 2, 1.0}}); }

// Star with a certain center: one PIC attempt per step.
inline Network star(uint32_t leaves = 4) {
  std::vector<std::tuple<NodeId, NodeId, double>> arcs;
  for (uint32_t i = 1; i <= leaves; ++i) arcs.push_back({0, i, 1.0});
  return make_net(leaves + 1, arcs);
}

struct TvFixture {
  Network net;
  Scenario scenario;
};

// Three fixed half-probability instances for the process-equivalence test:
// one rumor cascade plus one or two positive cascades each.
inline std::vector<TvFixture> tv_fixtures() {
  std::vector<TvFixture> out;
  {
    TvFixture f{make_net(4, {{0, 2, 0.5}, {0, 3, 0.5}, {1, 2, 0.5}, {2, 3, 0.5}}), {}};
    f.scenario.rumor_seeds = {0};
    f.scenario.positive_actions = {{1}};
    out.push_back(std::move(f));
  }
  {
    TvFixture f{make_net(5, {{0, 3, 0.5}, {1, 3, 0.5}, {2, 4, 0.5}, {3, 4, 0.5}}), {}};
    f.scenario.rumor_seeds = {0};
    f.scenario.positive_actions = {{1}, {2}};
    out.push_back(std::move(f));
  }
  {
    TvFixture f{make_net(4, {{0, 1, 0.5}, {0, 3, 0.5}, {1, 2, 0.5}, {2, 3, 0.5}}), {}};
    f.scenario.rumor_seeds = {0};
    f.scenario.positive_actions = {{2}};
    out.push_back(std::move(f));
  }
  return out;
}

struct StructFixture {
  Network net;
  NodeSet a_r;
};

// Small dyadic-probability instances for the exhaustive structural checks
// and the game audits (4-6 nodes, at most 6 arcs).
inline std::vector<StructFixture> struct_fixtures() {
  std::vector<StructFixture> out;
  out.push_back({line3(), {0}});
  out.push_back({make_net(5, {{0, 1, 0.5}, {0, 3, 0.5}, {1, 2, 0.5}, {1, 4, 0.5}, {2, 3, 0.5},
                              {3, 4, 1.0}}),
                 {0}});
  out.push_back({make_net(6, {{0, 1, 0.25}, {0, 2, 0.75}, {1, 3, 0.5}, {2, 4, 0.5}, {3, 5, 1.0},
                              {4, 5, 0.5}}),
                 {0}});
  out.push_back({make_net(4, {{0, 1, 0.5}, {1, 2, 0.5}, {2, 3, 0.5}, {0, 3, 0.5}}), {0}});
  return out;
}

struct FactFixture {
  Network net;
  Scenario base;      // the smaller full-action
  Scenario extended;  // with the extra agent seed
};

// Rumor without the top priority: the same union split differently changes
// the outcome. Node 2 is hit simultaneously by the rumor (from 0) and the
// positive seed at 1; which cascade hosts node 1 decides the tie.
inline FactFixture fact1() {
  FactFixture f;
  f.net = make_net(3, {{0, 2, 1.0}, {1, 2, 1.0}});
  Semantics sem;
  sem.priority_order = {2, 0, 1};  // C2 above the rumor, C1 below
  f.base.rumor_seeds = {0};
  f.base.positive_actions = {{1}, {}};
  f.base.semantics = sem;
  f.extended = f.base;
  f.extended.positive_actions = {{}, {1}};
  return f;
}

// Heterogeneous priority: the gate node 5 prefers C1 over the rumor but
// ranks C2 last. A second agent at node 1 flips node 3 from C1 to C2, the
// gate then falls to the rumor and the tail follows.
inline FactFixture fact2() {
  FactFixture f;
  f.net = make_net(7, {{0, 3, 1.0}, {1, 3, 1.0}, {2, 4, 1.0}, {3, 5, 1.0}, {4, 5, 1.0},
                       {5, 6, 1.0}});
  Semantics sem;
  sem.priority_mode = PriorityMode::heterogeneous;
  sem.node_priority[3] = {0, 2, 1};  // C2 beats C1 where the agents collide
  sem.node_priority[5] = {1, 0, 2};  // C1 beats the rumor at the gate
  f.base.rumor_seeds = {2};
  f.base.positive_actions = {{0}, {}};
  f.base.semantics = sem;
  f.extended = f.base;
  f.extended.positive_actions = {{0}, {1}};
  return f;
}

// Inactive-only selection: the hub (1) attempts node 2 first, then node 3.
// Seeding node 2 makes the hub skip it, so the rumor reaches node 3 a step
// early and ties go to the rumor.
inline FactFixture fact3() {
  FactFixture f;
  f.net = make_net(7, {{0, 1, 1.0}, {1, 2, 1.0}, {1, 3, 1.0}, {4, 5, 1.0}, {5, 3, 1.0},
                       {3, 6, 1.0}});
  Semantics sem;
  sem.selection = Selection::inactive_only;
  sem.fixed_order[1] = {2, 3};
  f.base.rumor_seeds = {0};
  f.base.positive_actions = {{4}, {}};
  f.base.semantics = sem;
  f.extended = f.base;
  f.extended.positive_actions = {{4}, {2}};
  return f;
}

// Random small digraph with dyadic probabilities, for property tests.
inline Network random_net(NodeId n, uint32_t arcs, uint64_t seed) {
  Rng rng(seed);
  const double choices[4] = {0.25, 0.5, 0.75, 1.0};
  std::vector<std::tuple<NodeId, NodeId, double>> list;
  std::vector<std::pair<NodeId, NodeId>> used;
  uint32_t guard = 0;
  while (list.size() < arcs && ++guard < 100 * arcs + 100) {
    NodeId u = rng.below(n);
    NodeId v = rng.below(n);
    if (u == v) continue;
    std::pair<NodeId, NodeId> key{u, v};
    bool dup = false;
    for (const auto& k : used) dup |= (k == key);
    if (dup) continue;
    used.push_back(key);
    list.push_back({u, v, choices[rng.below(4)]});
  }
  return make_net(n, list);
}

}  // namespace fixtures
