#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rb/graph.hpp"

namespace rb {

// Common-random-realization evaluator of the social utility. A fixed sample
// of realizations is drawn once against the rumor seed set; every action
// comparison then runs against the same worlds, so gamma differences are
// pathwise consistent: the value is an integer (sum of per-world gamma over
// the sample), monotone in the seed union world by world, and strict
// improvements found by the game dynamics are genuine on this sample.
//
// Per world, a node u with finite positive rumor distance d is saved by
// seeding x iff dis(x,u) < d; its "savior ball" is collected by a reverse
// shortest-path pass cut off at d-1. gamma(X) then reduces to counting ball
// membership, and single-seed argmax scans an inverted index instead of
// rerunning any simulation.
class CrnGammaEvaluator {
 public:
  using value_type = uint64_t;

  // realizations: sample size (worlds). seed drives the whole sample; the
  // result is deterministic for fixed inputs regardless of thread count.
  // max_ball > 0 keeps only the that many nearest saviors per element, a
  // memory cap for large graphs (the truncated value stays a monotone
  // submodular coverage function, so the dynamics remain sound; final
  // estimates never run through this evaluator).
  CrnGammaEvaluator(const Network& net, NodeSet a_r, uint32_t realizations, uint64_t seed,
                    int threads = 0, uint32_t max_ball = 0);

  // Sum over the sampled worlds of gamma^g(X).
  uint64_t gamma(const NodeSet& union_x) const;
  double gamma_mean(const NodeSet& union_x) const {
    return static_cast<double>(gamma(union_x)) / static_cast<double>(realizations_);
  }
  double to_mean(uint64_t v) const {
    return static_cast<double>(v) / static_cast<double>(realizations_);
  }

  // argmax over the pool of gamma(others ∪ {v}); ties to the smallest id.
  std::optional<std::pair<NodeId, uint64_t>> best_singleton(const NodeSet& others,
                                                            const NodeSet& pool) const;

  const NodeSet& rumor_seeds() const { return a_r_; }
  const Network& network() const { return *net_; }
  uint32_t realization_count() const { return realizations_; }
  size_t element_count() const { return element_count_; }
  size_t index_size() const { return inv_elems_.size(); }

 private:
  const Network* net_;
  NodeSet a_r_;
  uint32_t realizations_;

  uint64_t base_gamma_ = 0;  // worlds' nodes the rumor can never reach
  size_t element_count_ = 0;

  // inverted index: candidate node -> savable elements it rescues
  std::vector<uint64_t> inv_off_;
  std::vector<uint32_t> inv_elems_;

  mutable std::vector<uint32_t> mark_;
  mutable uint32_t stamp_ = 0;

  uint64_t cover_from(const NodeSet& nodes, uint32_t stamp) const;
};

}  // namespace rb
