#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rb/diffusion.hpp"
#include "rb/graph.hpp"
#include "rb/realization.hpp"
#include "rb/rng.hpp"

namespace rb {

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample stdev / sqrt(trials)
  uint64_t trials = 0;
};

enum class GammaBackend {
  realization,          // fused live-subgraph sampling + distance kernel (default)
  realization_literal,  // generate() + rumor_count_fast(), kept as the serial reference
  stochastic,           // full stochastic engine (handles variant semantics)
};

struct McOptions {
  GammaBackend backend = GammaBackend::realization;
  // 0 = all available threads (OpenMP), 1 = serial loop. Estimates are
  // bitwise identical across thread counts: per-trial streams are derived
  // from (seed, trial index) and the accumulators are integers.
  int threads = 0;
};

// Reusable per-thread workspace for the fused realization kernel: samples the
// live subgraph (geometric skips under a uniform probability model) together
// with the attempt-rank weights of live arcs only, then runs the two
// multi-source shortest-path passes of the rumor-count characterization.
// The sampled law is exactly that of generate() + rumor_count_fast().
class TrialKernel {
 public:
  explicit TrialKernel(const Network& net);

  // Rumor-active count for one sampled world. When new_by_round is non-null,
  // adds the number of nodes the rumor claims at each time step
  // (new_by_round[t] += count activated at t, including seeds at t=0).
  uint32_t rumor_count(std::span<const NodeId> a_r, std::span<const NodeId> union_x, Rng& rng,
                       std::vector<uint64_t>* new_by_round = nullptr);

  // Lower-level access for callers that post-process the sampled world
  // (e.g. the common-realization evaluator).
  void sample(Rng& rng);
  void dijkstra(std::span<const NodeId> sources, std::vector<uint64_t>& dist) const;
  std::span<const uint32_t> live_offsets() const { return off_; }
  std::span<const NodeId> live_targets() const { return tgt_; }
  std::span<const uint32_t> live_weights() const { return weight_; }

 private:
  const Network& net_;
  bool uniform_p_ = false;
  double p_ = 0.0;
  std::vector<NodeId> arc_source_;

  // live subgraph in CSR form, rebuilt per trial
  std::vector<uint32_t> live_arcs_;
  std::vector<uint32_t> off_;
  std::vector<NodeId> tgt_;
  std::vector<uint32_t> weight_;

  // sparse Fisher-Yates scratch (epoch-stamped)
  std::vector<uint32_t> fy_val_, fy_stamp_;
  uint32_t fy_epoch_ = 0;

  std::vector<uint64_t> dist_r_, dist_x_;
};

// Monte Carlo estimate of the social utility gamma: mean over trials of
// (node count - rumor-active count). Realization backends require default
// semantics; the stochastic backend accepts any.
Estimate mc_gamma(const Network& net, const Scenario& sc, uint64_t trials, uint64_t seed,
                  const McOptions& opts = {});

// Monte Carlo estimate of sigma_agent: expected number of C_agent-active
// nodes (agent in 1..k). Always runs the full stochastic engine — the fast
// kernel only counts the rumor cascade.
Estimate mc_sigma(const Network& net, const Scenario& sc, uint32_t agent, uint64_t trials,
                  uint64_t seed, const McOptions& opts = {});

// Mean cumulative rumor-active count per round (index = time step). Trials
// that quiesce early hold their final count for later rounds.
std::vector<double> mc_rumor_rounds(const Network& net, const Scenario& sc, uint64_t trials,
                                    uint64_t seed, const McOptions& opts = {});

// Statistical test of the process equivalence: total-variation distance
// between the empirical final-labeling distribution of the stochastic
// process over `trials` runs and the exact distribution of the
// realization-based process obtained by oracle enumeration. Only feasible
// on instances small enough to enumerate.
double equivalence_distance(const Network& net, const Scenario& sc, uint64_t trials,
                            uint64_t seed, int threads = 0);

}  // namespace rb
