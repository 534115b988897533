#include "rb/realization.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <queue>

namespace rb {

Realization generate(const Network& net, Rng& rng) {
  Realization r;
  r.net = &net;
  const size_t m = net.arc_count();
  r.live.resize(m);
  r.rank.resize(m);
  for (size_t a = 0; a < m; ++a) r.live[a] = rng.bernoulli(net.arc_prob(a)) ? 1 : 0;

  // Fisher-Yates per node over the positions of its out-arcs; rank[arc] is
  // where the arc landed in the shuffle, 1-based.
  std::vector<uint32_t> slot;
  for (NodeId u = 0; u < net.node_count(); ++u) {
    const uint32_t d = net.out_degree(u);
    if (d == 0) continue;
    const size_t base = net.arc_begin(u);
    slot.resize(d);
    for (uint32_t i = 0; i < d; ++i) slot[i] = i;
    for (uint32_t i = d - 1; i > 0; --i) {
      uint32_t j = rng.below(i + 1);
      std::swap(slot[i], slot[j]);
    }
    for (uint32_t i = 0; i < d; ++i) r.rank[base + slot[i]] = i + 1;
  }
  return r;
}

double probability(const Realization& r) {
  const Network& net = *r.net;
  long double acc = 1.0L;
  for (size_t a = 0; a < net.arc_count(); ++a) {
    double p = net.arc_prob(a);
    acc *= r.live[a] ? p : (1.0 - p);
  }
  for (NodeId u = 0; u < net.node_count(); ++u)
    for (uint32_t j = 2; j <= net.out_degree(u); ++j) acc /= j;
  return static_cast<double>(acc);
}

std::vector<uint64_t> live_distances(const Realization& r, std::span<const NodeId> sources) {
  if (sources.empty()) throw Error("live_distances: empty source set");
  const Network& net = *r.net;
  std::vector<uint64_t> dist(net.node_count(), kUnreachable);

  using Entry = std::pair<uint64_t, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (NodeId s : sources) {
    if (s >= net.node_count()) throw Error("live_distances: source out of range");
    if (dist[s] != 0) {
      dist[s] = 0;
      heap.emplace(0, s);
    }
  }
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d != dist[u]) continue;
    const size_t base = net.arc_begin(u);
    auto nbrs = net.out_neighbors(u);
    for (size_t i = 0; i < nbrs.size(); ++i) {
      if (!r.live[base + i]) continue;
      uint64_t nd = d + r.rank[base + i];
      if (nd < dist[nbrs[i]]) {
        dist[nbrs[i]] = nd;
        heap.emplace(nd, nbrs[i]);
      }
    }
  }
  return dist;
}

uint64_t live_distance(const Realization& r, std::span<const NodeId> sources, NodeId target) {
  return live_distances(r, sources)[target];
}

void dump_realization(const Realization& r, std::ostream& out) {
  const Network& net = *r.net;
  out << "live-arcs\n";
  for (NodeId u = 0; u < net.node_count(); ++u) {
    const size_t base = net.arc_begin(u);
    auto nbrs = net.out_neighbors(u);
    for (size_t i = 0; i < nbrs.size(); ++i)
      if (r.live[base + i]) out << u << " " << nbrs[i] << "\n";
  }
  out << "attempt-orders\n";
  std::vector<NodeId> by_rank;
  for (NodeId u = 0; u < net.node_count(); ++u) {
    const uint32_t d = net.out_degree(u);
    if (d == 0) continue;
    const size_t base = net.arc_begin(u);
    by_rank.assign(d, 0);
    for (uint32_t i = 0; i < d; ++i) by_rank[r.rank[base + i] - 1] = net.arc_target(base + i);
    out << u << ":";
    for (NodeId v : by_rank) out << " " << v;
    out << "\n";
  }
}

size_t find_arc(const Network& net, NodeId u, NodeId v) {
  const size_t base = net.arc_begin(u);
  auto nbrs = net.out_neighbors(u);
  for (size_t i = 0; i < nbrs.size(); ++i)
    if (nbrs[i] == v) return base + i;
  return static_cast<size_t>(-1);
}

}  // namespace rb
