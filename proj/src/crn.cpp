#include "rb/crn.hpp"

#include <algorithm>
#include <queue>

#include <omp.h>

#include "rb/montecarlo.hpp"

namespace rb {

namespace {

struct WorldBalls {
  uint64_t base = 0;                  // nodes with unreachable rumor distance
  std::vector<uint32_t> ball_off{0};  // per element
  std::vector<NodeId> ball_nodes;
};

}  // namespace

CrnGammaEvaluator::CrnGammaEvaluator(const Network& net, NodeSet a_r, uint32_t realizations,
                                     uint64_t seed, int threads, uint32_t max_ball)
    : net_(&net), a_r_(canonical_set(std::move(a_r))), realizations_(realizations) {
  if (realizations_ == 0) throw Error("common-realization evaluator needs at least one world");
  const uint32_t n = net.node_count();

  std::vector<bool> is_rumor(n, false);
  for (NodeId v : a_r_) is_rumor[v] = true;

  std::vector<WorldBalls> worlds(realizations_);
  const int T = threads <= 0 ? omp_get_max_threads() : threads;

#pragma omp parallel num_threads(T)
  {
    TrialKernel kernel(net);
    std::vector<uint64_t> dist_r;
    // reverse live CSR, rebuilt per world
    std::vector<uint32_t> roff(n + 1);
    std::vector<NodeId> rtgt;
    std::vector<uint32_t> rw;
    // epoch-stamped distances for the bounded reverse passes
    std::vector<uint64_t> dval(n, 0);
    std::vector<uint32_t> dstamp(n, 0);
    uint32_t epoch = 0;
    using Entry = std::pair<uint64_t, NodeId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;

#pragma omp for schedule(dynamic)
    for (int64_t w = 0; w < static_cast<int64_t>(realizations_); ++w) {
      Rng rng = derived_rng(seed, static_cast<uint64_t>(w));
      kernel.sample(rng);
      if (a_r_.empty()) {
        worlds[w].base = n;
        continue;
      }
      kernel.dijkstra(a_r_, dist_r);

      auto off = kernel.live_offsets();
      auto tgt = kernel.live_targets();
      auto wgt = kernel.live_weights();
      std::fill(roff.begin(), roff.end(), 0u);
      const size_t live = tgt.size();
      for (size_t e = 0; e < live; ++e) roff[tgt[e] + 1]++;
      for (uint32_t u = 0; u < n; ++u) roff[u + 1] += roff[u];
      rtgt.resize(live);
      rw.resize(live);
      {
        std::vector<uint32_t> cursor(roff.begin(), roff.end() - 1);
        for (NodeId u = 0; u < n; ++u)
          for (uint32_t e = off[u]; e < off[u + 1]; ++e) {
            const uint32_t slot = cursor[tgt[e]]++;
            rtgt[slot] = u;
            rw[slot] = wgt[e];
          }
      }

      WorldBalls& out = worlds[w];
      for (NodeId u = 0; u < n; ++u) {
        const uint64_t dr = dist_r[u];
        if (dr == kUnreachable) {
          ++out.base;
          continue;
        }
        if (dr == 0) continue;  // rumor seeds can never be saved

        // Everything strictly closer to u than the rumor, over reversed
        // live arcs (dis(x,u) = reverse distance u -> x).
        ++epoch;
        dval[u] = 0;
        dstamp[u] = epoch;
        heap.emplace(0, u);
        const size_t ball_start = out.ball_nodes.size();
        while (!heap.empty()) {
          auto [d, x] = heap.top();
          heap.pop();
          if (dstamp[x] != epoch || d != dval[x]) continue;
          if (!is_rumor[x]) out.ball_nodes.push_back(x);
          if (max_ball > 0 && out.ball_nodes.size() - ball_start >= max_ball) {
            while (!heap.empty()) heap.pop();
            break;
          }
          for (uint32_t e = roff[x]; e < roff[x + 1]; ++e) {
            const uint64_t nd = d + rw[e];
            if (nd >= dr) continue;
            const NodeId y = rtgt[e];
            if (dstamp[y] != epoch || nd < dval[y]) {
              dval[y] = nd;
              dstamp[y] = epoch;
              heap.emplace(nd, y);
            }
          }
        }
        if (out.ball_nodes.size() == ball_start) continue;  // unsavable
        std::sort(out.ball_nodes.begin() + ball_start, out.ball_nodes.end());
        out.ball_off.push_back(static_cast<uint32_t>(out.ball_nodes.size()));
      }
    }
  }

  // Flatten into the inverted index, elements ordered by (world, node).
  std::vector<uint64_t> count(n, 0);
  for (const WorldBalls& wb : worlds) {
    base_gamma_ += wb.base;
    element_count_ += wb.ball_off.size() - 1;
    for (NodeId x : wb.ball_nodes) count[x]++;
  }
  inv_off_.assign(n + 1, 0);
  for (NodeId x = 0; x < n; ++x) inv_off_[x + 1] = inv_off_[x] + count[x];
  inv_elems_.resize(inv_off_[n]);

  std::vector<uint64_t> cursor(inv_off_.begin(), inv_off_.end() - 1);
  uint32_t element = 0;
  for (const WorldBalls& wb : worlds) {
    for (size_t e = 0; e + 1 < wb.ball_off.size(); ++e, ++element)
      for (uint32_t i = wb.ball_off[e]; i < wb.ball_off[e + 1]; ++i)
        inv_elems_[cursor[wb.ball_nodes[i]]++] = element;
  }
  mark_.assign(element_count_, 0);
}

uint64_t CrnGammaEvaluator::cover_from(const NodeSet& nodes, uint32_t stamp) const {
  uint64_t covered = 0;
  for (NodeId x : nodes)
    for (uint64_t i = inv_off_[x]; i < inv_off_[x + 1]; ++i) {
      const uint32_t e = inv_elems_[i];
      if (mark_[e] != stamp) {
        mark_[e] = stamp;
        ++covered;
      }
    }
  return covered;
}

uint64_t CrnGammaEvaluator::gamma(const NodeSet& union_x) const {
  if (++stamp_ == 0) {
    std::fill(mark_.begin(), mark_.end(), 0u);
    stamp_ = 1;
  }
  return base_gamma_ + cover_from(union_x, stamp_);
}

std::optional<std::pair<NodeId, uint64_t>> CrnGammaEvaluator::best_singleton(
    const NodeSet& others, const NodeSet& pool) const {
  if (pool.empty()) return std::nullopt;
  if (++stamp_ == 0) {
    std::fill(mark_.begin(), mark_.end(), 0u);
    stamp_ = 1;
  }
  const uint64_t covered_by_others = cover_from(others, stamp_);

  NodeId best_node = pool.front();
  uint64_t best_gain = 0;
  bool first = true;
  for (NodeId v : pool) {
    uint64_t gain = 0;
    for (uint64_t i = inv_off_[v]; i < inv_off_[v + 1]; ++i)
      if (mark_[inv_elems_[i]] != stamp_) ++gain;
    if (first || gain > best_gain) {
      first = false;
      best_node = v;
      best_gain = gain;
    }
  }
  return std::make_pair(best_node, base_gamma_ + covered_by_others + best_gain);
}

}  // namespace rb
