#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "rb/graph.hpp"
#include "rb/rng.hpp"

namespace rb {

inline constexpr uint64_t kUnreachable = std::numeric_limits<uint64_t>::max();

// A deterministic world sample of a network: every arc is live or blocked,
// and every node carries a uniform random attempt order over its
// out-neighbors. rank[arc] is the 1-based position of the arc's target in
// its source's order; a node activated at time t attempts its rank-j
// neighbor at time t+j, and the attempt succeeds iff the arc is live.
struct Realization {
  const Network* net = nullptr;
  std::vector<uint8_t> live;   // per arc, 0/1
  std::vector<uint32_t> rank;  // per arc, 1..d_u, injective within each node

  uint32_t node_count() const { return net->node_count(); }
};

// Samples a realization: each arc live independently with its propagation
// probability, each node's attempt order a uniform permutation
// (Fisher-Yates). Fully determined by the rng state.
Realization generate(const Network& net, Rng& rng);

// Probability that `generate` produces exactly this realization:
// prod_live p_e * prod_blocked (1-p_e) * prod_u 1/(d_u!). Long-double
// accumulation; the oracle module has an exact-rational version.
double probability(const Realization& r);

// Shortest-path distances over live arcs from a nonempty source set, arc
// length = rank. kUnreachable marks nodes no live path reaches.
std::vector<uint64_t> live_distances(const Realization& r, std::span<const NodeId> sources);

uint64_t live_distance(const Realization& r, std::span<const NodeId> sources, NodeId target);

// Debug/golden-test text dump: live arcs and per-node attempt orders.
void dump_realization(const Realization& r, std::ostream& out);

// Convenience for tests: arc index of (u,v), or npos.
size_t find_arc(const Network& net, NodeId u, NodeId v);

}  // namespace rb
