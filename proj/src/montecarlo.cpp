#include "rb/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <string>

#include <omp.h>

#include "rb/oracle.hpp"

namespace rb {

namespace {

int resolve_threads(int requested) {
  if (requested <= 0) return omp_get_max_threads();
  return requested;
}

bool default_kernel_semantics(const Semantics& sem, uint32_t cascades) {
  if (sem.model != Model::pic || sem.priority_mode != PriorityMode::homogeneous ||
      sem.selection != Selection::attempt_all)
    return false;
  if (!sem.node_priority.empty() || !sem.fixed_order.empty()) return false;
  if (!sem.priority_order.empty())
    for (uint32_t c = 0; c < cascades; ++c)
      if (sem.priority_order.size() <= c || sem.priority_order[c] != static_cast<CascadeId>(c))
        return false;
  return true;
}

Estimate finalize(uint64_t sum, uint64_t sum_sq, uint64_t trials) {
  Estimate e;
  e.trials = trials;
  if (trials == 0) return e;
  e.mean = static_cast<double>(sum) / static_cast<double>(trials);
  if (trials > 1) {
    double var = (static_cast<double>(sum_sq) - e.mean * static_cast<double>(sum)) /
                 static_cast<double>(trials - 1);
    e.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(trials));
  }
  return e;
}

NodeSet positive_union(const Scenario& sc) {
  NodeSet u;
  for (const auto& a : sc.positive_actions) u.insert(u.end(), a.begin(), a.end());
  return canonical_set(std::move(u));
}

}  // namespace

TrialKernel::TrialKernel(const Network& net) : net_(net) {
  const size_t m = net.arc_count();
  arc_source_.resize(m);
  for (NodeId u = 0; u < net.node_count(); ++u)
    for (size_t a = net.arc_begin(u); a < net.arc_begin(u) + net.out_degree(u); ++a)
      arc_source_[a] = u;

  uniform_p_ = m > 0;
  p_ = m > 0 ? net.arc_prob(0) : 0.0;
  for (size_t a = 1; a < m; ++a)
    if (net.arc_prob(a) != p_) {
      uniform_p_ = false;
      break;
    }

  uint32_t max_d = 0;
  for (NodeId u = 0; u < net.node_count(); ++u) max_d = std::max(max_d, net.out_degree(u));
  fy_val_.assign(max_d, 0);
  fy_stamp_.assign(max_d, 0);

  off_.assign(net.node_count() + 1, 0);
  dist_r_.assign(net.node_count(), kUnreachable);
  dist_x_.assign(net.node_count(), kUnreachable);
}

void TrialKernel::sample(Rng& rng) {
  const size_t m = net_.arc_count();
  live_arcs_.clear();

  if (uniform_p_ && p_ >= 1.0) {
    live_arcs_.resize(m);
    for (size_t a = 0; a < m; ++a) live_arcs_[a] = static_cast<uint32_t>(a);
  } else if (uniform_p_ && p_ <= 0.0) {
    // nothing live
  } else if (uniform_p_) {
    // Geometric skips: visit only the live arcs.
    const double log_q = std::log1p(-p_);
    double cursor = -1.0;
    while (true) {
      double u = rng.unit();
      cursor += 1.0 + std::floor(std::log1p(-u) / log_q);
      if (cursor >= static_cast<double>(m)) break;
      live_arcs_.push_back(static_cast<uint32_t>(cursor));
    }
  } else {
    for (size_t a = 0; a < m; ++a)
      if (rng.bernoulli(net_.arc_prob(a))) live_arcs_.push_back(static_cast<uint32_t>(a));
  }

  // Rank weights for live arcs: the ranks of a node's live arcs are a
  // uniform injection into {1..d_u}, the exact marginal of a full uniform
  // permutation restricted to the live arcs. Sampled by sparse Fisher-Yates
  // over the first k_u slots.
  const uint32_t n = net_.node_count();
  if (fy_epoch_ >= UINT32_MAX - n - 1) {  // one bump per node group below
    std::fill(fy_stamp_.begin(), fy_stamp_.end(), 0u);
    fy_epoch_ = 0;
  }
  std::fill(off_.begin(), off_.end(), 0u);
  for (uint32_t a : live_arcs_) off_[arc_source_[a] + 1]++;
  for (uint32_t u = 0; u < n; ++u) off_[u + 1] += off_[u];

  tgt_.resize(live_arcs_.size());
  weight_.resize(live_arcs_.size());
  size_t i = 0;
  while (i < live_arcs_.size()) {
    const NodeId u = arc_source_[live_arcs_[i]];
    size_t j = i;
    while (j < live_arcs_.size() && arc_source_[live_arcs_[j]] == u) ++j;
    const uint32_t d = net_.out_degree(u);
    ++fy_epoch_;
    auto fy_get = [&](uint32_t idx) { return fy_stamp_[idx] == fy_epoch_ ? fy_val_[idx] : idx; };
    auto fy_set = [&](uint32_t idx, uint32_t v) {
      fy_val_[idx] = v;
      fy_stamp_[idx] = fy_epoch_;
    };
    for (size_t t = i; t < j; ++t) {
      const uint32_t step = static_cast<uint32_t>(t - i);
      const uint32_t pick = step + rng.below(d - step);
      const uint32_t value = fy_get(pick);
      fy_set(pick, fy_get(step));
      tgt_[t] = net_.arc_target(live_arcs_[t]);
      weight_[t] = value + 1;
    }
    i = j;
  }
}

void TrialKernel::dijkstra(std::span<const NodeId> sources, std::vector<uint64_t>& dist) const {
  dist.assign(net_.node_count(), kUnreachable);
  using Entry = std::pair<uint64_t, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (NodeId s : sources) {
    dist[s] = 0;
    heap.emplace(0, s);
  }
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d != dist[u]) continue;
    for (uint32_t e = off_[u]; e < off_[u + 1]; ++e) {
      const uint64_t nd = d + weight_[e];
      if (nd < dist[tgt_[e]]) {
        dist[tgt_[e]] = nd;
        heap.emplace(nd, tgt_[e]);
      }
    }
  }
}

uint32_t TrialKernel::rumor_count(std::span<const NodeId> a_r, std::span<const NodeId> union_x,
                                  Rng& rng, std::vector<uint64_t>* new_by_round) {
  if (a_r.empty()) return 0;
  sample(rng);
  dijkstra(a_r, dist_r_);
  const bool blocked = !union_x.empty();
  if (blocked) dijkstra(union_x, dist_x_);

  uint32_t count = 0;
  for (NodeId u = 0; u < net_.node_count(); ++u) {
    const uint64_t dr = dist_r_[u];
    if (dr == kUnreachable) continue;
    if (blocked && dr > dist_x_[u]) continue;
    ++count;
    if (new_by_round != nullptr) {
      // A rumor-active node activates exactly at its live distance from a_r.
      if (new_by_round->size() <= dr) new_by_round->resize(dr + 1, 0);
      (*new_by_round)[dr]++;
    }
  }
  return count;
}

namespace {

// Shared trial loop: integer accumulation keeps results independent of the
// thread count and merge order.
template <class TrialFn>
Estimate accumulate_trials(uint64_t trials, int threads, TrialFn&& value_of_trial) {
  uint64_t sum = 0, sum_sq = 0;
  const int T = resolve_threads(threads);
  if (T == 1) {
    for (uint64_t t = 0; t < trials; ++t) {
      const uint64_t v = value_of_trial(t);
      sum += v;
      sum_sq += v * v;
    }
  } else {
#pragma omp parallel num_threads(T) reduction(+ : sum, sum_sq)
    {
#pragma omp for schedule(dynamic, 64)
      for (int64_t t = 0; t < static_cast<int64_t>(trials); ++t) {
        const uint64_t v = value_of_trial(static_cast<uint64_t>(t));
        sum += v;
        sum_sq += v * v;
      }
    }
  }
  return finalize(sum, sum_sq, trials);
}

}  // namespace

Estimate mc_gamma(const Network& net, const Scenario& sc, uint64_t trials, uint64_t seed,
                  const McOptions& opts) {
  validate_scenario(net, sc);
  if (trials < 1) throw Error("mc_gamma: trials must be at least 1");
  const uint32_t n = net.node_count();

  if (opts.backend == GammaBackend::stochastic) {
    return accumulate_trials(trials, opts.threads, [&](uint64_t t) -> uint64_t {
      Rng rng = derived_rng(seed, t);
      return n - run_stochastic(net, sc, rng).count(kRumor);
    });
  }

  if (!default_kernel_semantics(sc.semantics, sc.cascade_count()))
    throw Error("realization backends require default PIC semantics");
  const NodeSet union_x = positive_union(sc);

  if (opts.backend == GammaBackend::realization_literal) {
    return accumulate_trials(trials, opts.threads, [&](uint64_t t) -> uint64_t {
      Rng rng = derived_rng(seed, t);
      if (sc.rumor_seeds.empty()) return n;
      Realization r = generate(net, rng);
      return n - rumor_count_fast(r, sc.rumor_seeds, union_x);
    });
  }

  const int T = resolve_threads(opts.threads);
  uint64_t sum = 0, sum_sq = 0;
  if (T == 1) {
    TrialKernel kernel(net);
    for (uint64_t t = 0; t < trials; ++t) {
      Rng rng = derived_rng(seed, t);
      const uint64_t v = n - kernel.rumor_count(sc.rumor_seeds, union_x, rng);
      sum += v;
      sum_sq += v * v;
    }
  } else {
#pragma omp parallel num_threads(T) reduction(+ : sum, sum_sq)
    {
      TrialKernel kernel(net);
#pragma omp for schedule(dynamic, 64)
      for (int64_t t = 0; t < static_cast<int64_t>(trials); ++t) {
        Rng rng = derived_rng(seed, static_cast<uint64_t>(t));
        const uint64_t v = n - kernel.rumor_count(sc.rumor_seeds, union_x, rng);
        sum += v;
        sum_sq += v * v;
      }
    }
  }
  return finalize(sum, sum_sq, trials);
}

Estimate mc_sigma(const Network& net, const Scenario& sc, uint32_t agent, uint64_t trials,
                  uint64_t seed, const McOptions& opts) {
  validate_scenario(net, sc);
  if (agent < 1 || agent > sc.positive_actions.size())
    throw Error("mc_sigma: agent index out of range");
  if (trials < 1) throw Error("mc_sigma: trials must be at least 1");
  return accumulate_trials(trials, opts.threads, [&](uint64_t t) -> uint64_t {
    Rng rng = derived_rng(seed, t);
    return run_stochastic(net, sc, rng).count(static_cast<CascadeId>(agent));
  });
}

std::vector<double> mc_rumor_rounds(const Network& net, const Scenario& sc, uint64_t trials,
                                    uint64_t seed, const McOptions& opts) {
  validate_scenario(net, sc);
  if (trials < 1) throw Error("mc_rumor_rounds: trials must be at least 1");
  const bool kernel_ok = opts.backend != GammaBackend::stochastic &&
                         default_kernel_semantics(sc.semantics, sc.cascade_count());
  const NodeSet union_x = positive_union(sc);
  const int T = resolve_threads(opts.threads);

  std::vector<uint64_t> new_by_round;  // merged across trials
#pragma omp parallel num_threads(T)
  {
    std::vector<uint64_t> local;
    TrialKernel kernel(net);
#pragma omp for schedule(dynamic, 64)
    for (int64_t t = 0; t < static_cast<int64_t>(trials); ++t) {
      Rng rng = derived_rng(seed, static_cast<uint64_t>(t));
      if (kernel_ok) {
        if (!sc.rumor_seeds.empty()) kernel.rumor_count(sc.rumor_seeds, union_x, rng, &local);
      } else {
        Outcome o = run_stochastic(net, sc, rng);
        const auto& rounds = o.rumor_rounds;
        if (local.size() < rounds.size()) local.resize(rounds.size(), 0);
        for (size_t r = 0; r < rounds.size(); ++r)
          local[r] += rounds[r] - (r == 0 ? 0 : rounds[r - 1]);
      }
    }
#pragma omp critical
    {
      if (new_by_round.size() < local.size()) new_by_round.resize(local.size(), 0);
      for (size_t r = 0; r < local.size(); ++r) new_by_round[r] += local[r];
    }
  }

  std::vector<double> mean_cumulative(new_by_round.size());
  uint64_t cum = 0;
  for (size_t r = 0; r < new_by_round.size(); ++r) {
    cum += new_by_round[r];
    mean_cumulative[r] = static_cast<double>(cum) / static_cast<double>(trials);
  }
  if (mean_cumulative.empty()) mean_cumulative.push_back(0.0);
  return mean_cumulative;
}

double equivalence_distance(const Network& net, const Scenario& sc, uint64_t trials,
                            uint64_t seed, int threads) {
  validate_scenario(net, sc);
  if (net.node_count() > 16)
    throw Error("equivalence_distance: final-state space too large to enumerate");
  if (trials < 1) throw Error("equivalence_distance: trials must be at least 1");

  auto label_of = [&](const Outcome& o) {
    std::string key(o.cascade.size(), '\0');
    for (size_t u = 0; u < o.cascade.size(); ++u) key[u] = static_cast<char>(o.cascade[u] + 1);
    return key;
  };

  // Exact law of the realization-based process.
  std::map<std::string, Rational> exact;
  enumerate_realizations(net, [&](const Realization& r, const Rational& pr) {
    exact[label_of(run_deterministic(r, sc))] += pr;
  });

  // Empirical law of the stochastic process.
  std::map<std::string, uint64_t> counts;
  const int T = resolve_threads(threads);
#pragma omp parallel num_threads(T)
  {
    std::map<std::string, uint64_t> local;
#pragma omp for schedule(dynamic, 256)
    for (int64_t t = 0; t < static_cast<int64_t>(trials); ++t) {
      Rng rng = derived_rng(seed, static_cast<uint64_t>(t));
      local[label_of(run_stochastic(net, sc, rng))]++;
    }
#pragma omp critical
    for (const auto& [key, c] : local) counts[key] += c;
  }

  double tv = 0.0;
  for (const auto& [key, pr] : exact) {
    auto it = counts.find(key);
    const double emp = it == counts.end()
                           ? 0.0
                           : static_cast<double>(it->second) / static_cast<double>(trials);
    tv += std::abs(emp - pr.convert_to<double>());
  }
  for (const auto& [key, c] : counts)
    if (!exact.count(key)) tv += static_cast<double>(c) / static_cast<double>(trials);
  return tv / 2.0;
}

}  // namespace rb
