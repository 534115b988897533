#pragma once

#include <cstdint>
#include <iosfwd>
#include <unordered_map>
#include <vector>

#include "rb/graph.hpp"
#include "rb/realization.hpp"
#include "rb/rng.hpp"

namespace rb {

// Cascade ids: 0 is the rumor, 1..k are the positive agents.
using CascadeId = int32_t;
inline constexpr CascadeId kRumor = 0;
inline constexpr CascadeId kInactive = -1;

enum class Model { pic, bic };
enum class PriorityMode { homogeneous, heterogeneous };
enum class Selection { attempt_all, inactive_only };

struct Semantics {
  Model model = Model::pic;
  PriorityMode priority_mode = PriorityMode::homogeneous;
  Selection selection = Selection::attempt_all;

  // Cascade ids from highest to lowest priority; empty means the default
  // order (rumor first, then agents by index). Must list every cascade.
  std::vector<CascadeId> priority_order;

  // Per-node priority overrides, consulted only under heterogeneous mode.
  std::unordered_map<NodeId, std::vector<CascadeId>> node_priority;

  // Optional fixed attempt order (out-neighbor lists). When present for a
  // node it replaces the random/realization order, which makes the
  // inactive-only variant fully deterministic.
  std::unordered_map<NodeId, std::vector<NodeId>> fixed_order;
};

struct Scenario {
  std::vector<NodeId> rumor_seeds;
  std::vector<std::vector<NodeId>> positive_actions;  // a_1..a_k
  Semantics semantics;

  // Rumor-aware games assume positive seeds never overlap the rumor's.
  bool require_disjoint_positive = false;

  uint32_t cascade_count() const { return static_cast<uint32_t>(positive_actions.size()) + 1; }
};

struct Outcome {
  std::vector<CascadeId> cascade;     // kInactive or the winning cascade
  std::vector<uint32_t> time;         // activation time; valid when active
  std::vector<uint32_t> rumor_rounds; // cumulative rumor-active count, index = time step

  uint32_t count(CascadeId c) const;
  uint32_t inactive_count() const;
};

void validate_scenario(const Network& net, const Scenario& sc);

// Stochastic diffusion on the network: at each step every active node picks
// one not-yet-attempted neighbor (uniformly, or per the variant semantics)
// and succeeds with the arc probability; simultaneous successes at a node
// resolve by cascade priority.
Outcome run_stochastic(const Network& net, const Scenario& sc, Rng& rng);

// Deterministic diffusion on a realization: a node activated at time t
// attempts its rank-j neighbor at time t+j (blocked arcs still consume the
// slot); the attempt succeeds iff the arc is live.
Outcome run_deterministic(const Realization& r, const Scenario& sc);

// Variant-semantics entry points; both engines honor every Semantics knob.
inline Outcome run_variant(const Network& net, const Scenario& sc, Rng& rng) {
  return run_stochastic(net, sc, rng);
}
inline Outcome run_variant(const Realization& r, const Scenario& sc) {
  return run_deterministic(r, sc);
}

// Number of rumor-activated nodes in a realization under default semantics,
// straight from the live-distance characterization: u is rumor-active iff
// dis(a_r,u) is finite and dis(a_r,u) <= dis(union_x,u), ties to rumor.
// union_x may be empty (treated as infinitely far).
uint32_t rumor_count_fast(const Realization& r, std::span<const NodeId> a_r,
                          std::span<const NodeId> union_x);

// Outcome export: "node,cascade,time" rows (time blank when inactive).
void write_outcome_nodes_csv(const Outcome& o, std::ostream& out);
// Outcome export: "round,rumor_count" rows.
void write_outcome_rounds_csv(const Outcome& o, std::ostream& out);

}  // namespace rb
