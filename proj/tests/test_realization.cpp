#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "fixtures.hpp"
#include "rb/realization.hpp"

using namespace rb;

TEST_CASE("certain arcs are always live") {
  Network net = fixtures::line3();
  Rng rng(1);
  for (int i = 0; i < 10; ++i) {
    Realization r = generate(net, rng);
    CHECK(r.live[0] == 1);
    CHECK(r.live[1] == 1);
  }
}

TEST_CASE("identical seeds give identical realizations") {
  Network net = fixtures::random_net(10, 20, 3);
  Rng a(99), b(99);
  Realization ra = generate(net, a);
  Realization rb_ = generate(net, b);
  CHECK(ra.live == rb_.live);
  CHECK(ra.rank == rb_.rank);
}

TEST_CASE("permutations are uniform: order frequency over 10k samples") {
  // node 0 with out-neighbors {1,2}: order (1,2) should appear half the time
  Network net = fixtures::make_net(3, {{0, 1, 1.0}, {0, 2, 1.0}});
  Rng rng(7);
  int first_order = 0;
  const int samples = 10'000;
  const size_t arc01 = find_arc(net, 0, 1);
  for (int i = 0; i < samples; ++i) {
    Realization r = generate(net, rng);
    if (r.rank[arc01] == 1) ++first_order;
  }
  const double freq = static_cast<double>(first_order) / samples;
  CHECK(freq == doctest::Approx(0.5).epsilon(0.04));  // 0.5 +- 0.02
}

TEST_CASE("live frequency matches the arc probability") {
  Network net = fixtures::make_net(2, {{0, 1, 0.3}});
  Rng rng(11);
  int live = 0;
  const int samples = 10'000;
  for (int i = 0; i < samples; ++i) live += generate(net, rng).live[0];
  CHECK(static_cast<double>(live) / samples == doctest::Approx(0.3).epsilon(0.067));
}

TEST_CASE("probability: forced realizations have probability one") {
  Network net = fixtures::line3();  // all p=1, degrees <= 1
  Rng rng(2);
  Realization r = generate(net, rng);
  CHECK(probability(r) == doctest::Approx(1.0));
}

TEST_CASE("probability: one node with two half arcs") {
  Network net = fixtures::make_net(3, {{0, 1, 0.5}, {0, 2, 0.5}});
  Rng rng(5);
  Realization r = generate(net, rng);
  // any arc pattern has probability 1/4 and either order 1/2
  CHECK(probability(r) == doctest::Approx(0.125));
}

TEST_CASE("live distances: sources, chains and unreachable") {
  Network net = fixtures::make_net(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  Rng rng(1);
  Realization r = generate(net, rng);
  // pin weights for the chain: both nodes have a single out-arc, rank 1
  NodeId src[1] = {0};
  CHECK(live_distance(r, src, 0) == 0);
  CHECK(live_distance(r, src, 1) == 1);
  CHECK(live_distance(r, src, 2) == 2);

  // manufactured weights: a->b rank 2, b->c rank 1 (spec chain example)
  Realization h;
  Network weighted = fixtures::make_net(4, {{0, 1, 1.0}, {0, 3, 1.0}, {1, 2, 1.0}});
  h.net = &weighted;
  h.live = {1, 0, 1};  // a->b live, a->d blocked, b->c live
  h.rank = {2, 1, 1};
  NodeId a[1] = {0};
  CHECK(live_distance(h, a, 2) == 3);
  CHECK(live_distance(h, a, 3) == kUnreachable);  // blocked arc
  CHECK_THROWS_AS(live_distances(h, {}), Error);
}

namespace {

// Independent oracle: exhaustive DFS over all simple paths on live arcs.
uint64_t brute_force_distance(const Realization& r, NodeId from, NodeId to,
                              std::vector<bool>& on_path) {
  if (from == to) return 0;
  const Network& net = *r.net;
  on_path[from] = true;
  uint64_t best = kUnreachable;
  const size_t base = net.arc_begin(from);
  auto nbrs = net.out_neighbors(from);
  for (size_t i = 0; i < nbrs.size(); ++i) {
    if (!r.live[base + i] || on_path[nbrs[i]]) continue;
    uint64_t rest = brute_force_distance(r, nbrs[i], to, on_path);
    if (rest != kUnreachable) best = std::min(best, rest + r.rank[base + i]);
  }
  on_path[from] = false;
  return best;
}

}  // namespace

TEST_CASE("live distances agree with an exhaustive path oracle") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    Network net = fixtures::random_net(8, 14, 1000 + seed);
    Rng rng(seed);
    Realization r = generate(net, rng);
    NodeId src[1] = {seed % 8 == 0 ? NodeId{0} : NodeId(seed % 8)};
    auto dist = live_distances(r, src);
    std::vector<bool> on_path(net.node_count(), false);
    for (NodeId v = 0; v < net.node_count(); ++v)
      CHECK(dist[v] == brute_force_distance(r, src[0], v, on_path));
  }
}

TEST_CASE("triangle property over live arcs") {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    Network net = fixtures::random_net(8, 16, 2000 + seed);
    Rng rng(seed);
    Realization r = generate(net, rng);
    NodeId src[2] = {0, 1};
    auto dist = live_distances(r, src);
    for (NodeId u = 0; u < net.node_count(); ++u) {
      const size_t base = net.arc_begin(u);
      auto nbrs = net.out_neighbors(u);
      for (size_t i = 0; i < nbrs.size(); ++i) {
        if (!r.live[base + i] || dist[u] == kUnreachable) continue;
        CHECK(dist[nbrs[i]] <= dist[u] + r.rank[base + i]);
      }
    }
  }
}

TEST_CASE("dump format lists live arcs and orders") {
  Network net = fixtures::make_net(3, {{0, 1, 1.0}, {0, 2, 1.0}});
  Realization r;
  r.net = &net;
  r.live = {1, 0};
  r.rank = {2, 1};
  std::ostringstream out;
  dump_realization(r, out);
  CHECK(out.str() == "live-arcs\n0 1\nattempt-orders\n0: 2 1\n");
}
