#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <queue>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "rb/graph.hpp"
#include "rb/rng.hpp"

namespace rb {

// Evaluator of the social utility as a set function of the positive-seed
// union. Exact (oracle) and common-random-realization implementations share
// this surface; value_type is exactly comparable in both (rational / integer
// sum), which is what makes strict-improvement dynamics sound.
template <class E>
concept GammaEvaluatorLike = requires(const E& e, const NodeSet& x) {
  typename E::value_type;
  { e.gamma(x) } -> std::convertible_to<typename E::value_type>;
  { e.best_singleton(x, x) };
  { e.rumor_seeds() } -> std::convertible_to<const NodeSet&>;
  { e.network() };
  { e.to_mean(std::declval<typename E::value_type>()) } -> std::convertible_to<double>;
};

// Per-agent utility system: rumor-aware (delta_i) or rumor-oblivious
// (sigma_i), over exactly comparable values.
template <class S>
concept UtilitySystemLike = requires(const S& s, const FullAction& a, uint32_t agent) {
  typename S::value_type;
  { s.utility(a, agent) } -> std::convertible_to<typename S::value_type>;
  { s.social(a) } -> std::convertible_to<typename S::value_type>;
  { s.mean(std::declval<typename S::value_type>()) } -> std::convertible_to<double>;
};

struct AgentSpec {
  uint32_t budget = 1;
  NodeSet pool;  // action space = subsets of pool of size <= budget
};

inline NodeSet action_union(const FullAction& a) {
  NodeSet u;
  for (const auto& s : a) u = set_union_of(u, s);
  return u;
}

// Union of everyone's action except `agent` (1-based).
inline NodeSet action_union_excluding(const FullAction& a, uint32_t agent) {
  NodeSet u;
  for (size_t i = 0; i < a.size(); ++i)
    if (i + 1 != agent) u = set_union_of(u, a[i]);
  return u;
}

inline FullAction with_action(FullAction a, uint32_t agent, NodeSet s) {
  a[agent - 1] = std::move(s);
  return a;
}

inline void validate_full_action(const std::vector<AgentSpec>& agents, const FullAction& a) {
  if (a.size() != agents.size()) throw Error("full-action has the wrong number of agents");
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() > agents[i].budget) throw Error("action exceeds the agent budget");
    for (NodeId v : a[i])
      if (!set_contains(agents[i].pool, v)) throw Error("action leaves the agent pool");
  }
}

inline std::string action_key(const FullAction& a) {
  std::string key;
  for (const auto& s : a) {
    for (NodeId v : s) {
      key += std::to_string(v);
      key += ',';
    }
    key += ';';
  }
  return key;
}

// Rumor-aware private utility: the agent's marginal contribution to the
// social utility. Nonnegative pathwise under both evaluators.
template <GammaEvaluatorLike E>
typename E::value_type delta(const E& eval, const FullAction& a, uint32_t agent) {
  typename E::value_type with = eval.gamma(action_union(a));
  typename E::value_type without = eval.gamma(action_union_excluding(a, agent));
  if (with < without)
    throw Error("delta: social utility dropped when an action was added (internal invariant)");
  return with - without;
}

// Rumor-aware utility system on top of a gamma evaluator.
template <GammaEvaluatorLike E>
class RumorAwareSystem {
 public:
  using value_type = typename E::value_type;
  explicit RumorAwareSystem(const E& eval) : eval_(&eval) {}

  value_type utility(const FullAction& a, uint32_t agent) const { return delta(*eval_, a, agent); }
  value_type social(const FullAction& a) const { return eval_->gamma(action_union(a)); }
  double mean(const value_type& v) const { return eval_->to_mean(v); }

 private:
  const E* eval_;
};

// The rumor-oblivious private utility sigma_i(A), named for symmetry with delta.
template <UtilitySystemLike S>
typename S::value_type sigma_private(const S& sys, const FullAction& a, uint32_t agent) {
  return sys.utility(a, agent);
}

// Exhaustive best response of one agent with every other action fixed.
// Ties go to the lexicographically smallest node-id set.
template <UtilitySystemLike S>
NodeSet best_response_bruteforce(const S& sys, const std::vector<AgentSpec>& agents,
                                 const FullAction& a, uint32_t agent, uint64_t cap = 1'000'000) {
  const AgentSpec& spec = agents[agent - 1];
  std::vector<NodeSet> space = enumerate_bounded_subsets(spec.pool, spec.budget);
  if (space.size() > cap)
    throw Error("best_response_bruteforce: action space of " + std::to_string(space.size()) +
                " exceeds the cap");
  std::optional<typename S::value_type> best;
  NodeSet best_set;
  for (NodeSet& cand : space) {
    typename S::value_type u = sys.utility(with_action(a, agent, cand), agent);
    if (!best || u > *best) {  // strict: the lexicographically first max wins
      best = std::move(u);
      best_set = std::move(cand);
    }
  }
  return best_set;
}

// Lazy (CELF-style) greedy response: adds the pool node of maximal marginal
// utility until the budget is exhausted or no margin is positive. Margins
// are submodular given the other agents' actions, so stale queue entries
// only overestimate.
template <UtilitySystemLike S>
NodeSet greedy_response(const S& sys, const std::vector<AgentSpec>& agents, const FullAction& a,
                        uint32_t agent) {
  using V = typename S::value_type;
  const AgentSpec& spec = agents[agent - 1];

  struct Entry {
    V margin;
    NodeId v;
    uint32_t round;
    bool operator<(const Entry& o) const {
      if (margin != o.margin) return margin < o.margin;
      return v > o.v;  // smaller id floats to the top on ties
    }
  };

  NodeSet current;
  V current_u = sys.utility(with_action(a, agent, {}), agent);

  std::priority_queue<Entry> heap;
  for (NodeId v : spec.pool) {
    V u = sys.utility(with_action(a, agent, {v}), agent);
    heap.push({u < current_u ? V{} : V(u - current_u), v, 0});
  }

  uint32_t round = 0;
  while (current.size() < spec.budget && !heap.empty()) {
    Entry top = heap.top();
    heap.pop();
    if (top.round != round) {
      NodeSet trial = canonical_set(set_union_of(current, {top.v}));
      V u = sys.utility(with_action(a, agent, trial), agent);
      heap.push({u < current_u ? V{} : V(u - current_u), top.v, round});
      continue;
    }
    if (!(top.margin > V{})) break;
    current = canonical_set(set_union_of(current, {top.v}));
    current_u = sys.utility(with_action(a, agent, current), agent);
    ++round;
  }
  return current;
}

struct TraceStep {
  uint32_t iteration = 0;
  uint32_t agent = 0;  // 1-based
  NodeSet action;
  double utility = 0.0;
  double social = 0.0;
};

struct EquilibriumReport {
  FullAction final_action;
  std::vector<double> utilities;  // per agent, at the final action
  double social = 0.0;
  std::vector<TraceStep> trace;
  bool is_nash = false;
  bool cycled = false;
  uint32_t rounds = 0;
};

void write_equilibrium_csv(const EquilibriumReport& report, std::ostream& out);

// Round-robin single-seed dynamics with k unit-budget agents whose pool is
// everything outside the rumor seeds. An agent re-seeds only when strictly
// better, so the social value rises with every change and the loop must
// reach a fixpoint (= a pure Nash equilibrium of the unit-budget game).
template <GammaEvaluatorLike E>
EquilibriumReport simple_game(const E& eval, uint32_t k, uint64_t round_cap = 0) {
  const auto& net = eval.network();
  const NodeSet& a_r = eval.rumor_seeds();
  NodeSet pool;
  for (NodeId v = 0; v < net.node_count(); ++v)
    if (!set_contains(a_r, v)) pool.push_back(v);

  if (round_cap == 0) round_cap = static_cast<uint64_t>(net.node_count()) * std::max(k, 1u) + 1;

  FullAction a(k);
  EquilibriumReport report;
  uint32_t iteration = 0;
  for (uint64_t round = 0;; ++round) {
    if (round >= round_cap)
      throw Error("simple_game failed to settle within " + std::to_string(round_cap) + " rounds");
    bool changed = false;
    for (uint32_t agent = 1; agent <= k; ++agent) {
      NodeSet others = action_union_excluding(a, agent);
      auto current = eval.gamma(action_union(a));
      auto best = eval.best_singleton(others, pool);
      if (best && best->second > current) {
        a[agent - 1] = {best->first};
        changed = true;
        auto base = eval.gamma(others);
        report.trace.push_back({++iteration, agent, a[agent - 1],
                                eval.to_mean(best->second - base),
                                eval.to_mean(best->second)});
      }
    }
    report.rounds = static_cast<uint32_t>(round + 1);
    if (!changed) break;
  }

  report.final_action = a;
  report.social = eval.to_mean(eval.gamma(action_union(a)));
  report.utilities.resize(k);
  report.is_nash = true;
  for (uint32_t agent = 1; agent <= k; ++agent) {
    NodeSet others = action_union_excluding(a, agent);
    auto current = eval.gamma(action_union(a));
    report.utilities[agent - 1] = eval.to_mean(current - eval.gamma(others));
    auto best = eval.best_singleton(others, pool);
    if ((best && best->second > current) || eval.gamma(others) > current) report.is_nash = false;
  }
  return report;
}

enum class DynamicsMode { rumor_aware, rumor_oblivious };

// Better-response dynamics: repeatedly applies the first strictly improving
// unilateral deviation (agents in order, actions lexicographic) until none
// exists. Under rumor-aware utilities every step strictly raises the social
// value, so revisiting a full-action is impossible; under rumor-oblivious
// utilities a revisit is a genuine cycle and is reported, not an error.
template <UtilitySystemLike S>
EquilibriumReport better_response_dynamics(const S& sys, const std::vector<AgentSpec>& agents,
                                           FullAction a,
                                           DynamicsMode mode = DynamicsMode::rumor_aware) {
  validate_full_action(agents, a);
  const uint32_t k = static_cast<uint32_t>(agents.size());
  std::vector<std::vector<NodeSet>> spaces(k);
  for (uint32_t i = 0; i < k; ++i)
    spaces[i] = enumerate_bounded_subsets(agents[i].pool, agents[i].budget);

  EquilibriumReport report;
  std::unordered_set<std::string> visited;
  auto social = sys.social(a);
  uint32_t iteration = 0;

  while (true) {
    if (!visited.insert(action_key(a)).second) {
      if (mode == DynamicsMode::rumor_aware)
        throw Error("better_response_dynamics revisited a full-action under rumor-aware "
                    "utilities (internal invariant)");
      report.cycled = true;
      break;
    }
    bool improved = false;
    for (uint32_t agent = 1; agent <= k && !improved; ++agent) {
      auto current_u = sys.utility(a, agent);
      for (const NodeSet& cand : spaces[agent - 1]) {
        if (cand == a[agent - 1]) continue;
        FullAction trial = with_action(a, agent, cand);
        auto u = sys.utility(trial, agent);
        if (u > current_u) {
          auto new_social = sys.social(trial);
          if (mode == DynamicsMode::rumor_aware && !(new_social > social))
            throw Error("improvement step did not raise the social value (internal invariant)");
          a = std::move(trial);
          social = std::move(new_social);
          report.trace.push_back(
              {++iteration, agent, cand, sys.mean(u), sys.mean(social)});
          improved = true;
          break;
        }
      }
    }
    if (!improved) {
      report.is_nash = true;
      break;
    }
  }

  report.final_action = a;
  report.social = sys.mean(social);
  report.utilities.resize(k);
  for (uint32_t agent = 1; agent <= k; ++agent)
    report.utilities[agent - 1] = sys.mean(sys.utility(a, agent));
  report.rounds = iteration;
  return report;
}

// Round-robin greedy responses until a full round changes nothing (an agent
// switches only when strictly better). The fixpoint satisfies the
// approximate-response condition: every action is at least as good as the
// agent's greedy response, hence within (1-1/e) of its best response.
template <UtilitySystemLike S>
EquilibriumReport greedy_equilibrium(const S& sys, const std::vector<AgentSpec>& agents,
                                     FullAction a, uint64_t round_cap = 1000) {
  validate_full_action(agents, a);
  const uint32_t k = static_cast<uint32_t>(agents.size());
  EquilibriumReport report;
  uint32_t iteration = 0;
  for (uint64_t round = 0;; ++round) {
    if (round >= round_cap) throw Error("greedy_equilibrium failed to settle");
    bool changed = false;
    for (uint32_t agent = 1; agent <= k; ++agent) {
      NodeSet g = greedy_response(sys, agents, a, agent);
      if (g == a[agent - 1]) continue;
      auto u_cur = sys.utility(a, agent);
      auto u_new = sys.utility(with_action(a, agent, g), agent);
      if (u_new > u_cur) {
        a[agent - 1] = g;
        changed = true;
        report.trace.push_back({++iteration, agent, g, sys.mean(u_new),
                                sys.mean(sys.social(a))});
      }
    }
    report.rounds = static_cast<uint32_t>(round + 1);
    if (!changed) break;
  }
  report.final_action = a;
  report.social = sys.mean(sys.social(a));
  report.utilities.resize(k);
  for (uint32_t agent = 1; agent <= k; ++agent)
    report.utilities[agent - 1] = sys.mean(sys.utility(a, agent));
  return report;
}

struct NashAudit {
  bool is_nash = false;
  uint32_t deviating_agent = 0;  // 1-based, 0 when none found
  NodeSet deviation;
  double social = 0.0;
  double optimal_social = 0.0;
  FullAction optimal;
  bool optimum_computed = false;

  double ratio_vs_optimum() const {
    return optimal_social > 0.0 ? social / optimal_social : 1.0;
  }
};

// Checks every unilateral deviation of every agent, and (optionally) brute
// forces the social optimum over the whole product action space.
template <UtilitySystemLike S>
NashAudit is_pure_nash(const S& sys, const std::vector<AgentSpec>& agents, const FullAction& a,
                       bool brute_force_optimum = true, uint64_t cap = 1'000'000) {
  validate_full_action(agents, a);
  const uint32_t k = static_cast<uint32_t>(agents.size());
  NashAudit audit;
  audit.social = sys.mean(sys.social(a));
  audit.is_nash = true;

  std::vector<std::vector<NodeSet>> spaces(k);
  uint64_t combos = 1;
  for (uint32_t i = 0; i < k; ++i) {
    spaces[i] = enumerate_bounded_subsets(agents[i].pool, agents[i].budget);
    if (combos > cap / std::max<uint64_t>(spaces[i].size(), 1)) combos = cap + 1;
    else combos *= spaces[i].size();
  }
  if (combos > cap) throw Error("is_pure_nash: deviation space exceeds the cap");

  for (uint32_t agent = 1; agent <= k && audit.is_nash; ++agent) {
    auto current_u = sys.utility(a, agent);
    for (const NodeSet& cand : spaces[agent - 1]) {
      if (cand == a[agent - 1]) continue;
      if (sys.utility(with_action(a, agent, cand), agent) > current_u) {
        audit.is_nash = false;
        audit.deviating_agent = agent;
        audit.deviation = cand;
        break;
      }
    }
  }

  if (brute_force_optimum && k > 0) {
    std::vector<size_t> pick(k, 0);
    std::optional<typename S::value_type> best;
    FullAction best_action;
    while (true) {
      FullAction candidate(k);
      for (uint32_t i = 0; i < k; ++i) candidate[i] = spaces[i][pick[i]];
      auto value = sys.social(candidate);
      if (!best || value > *best) {
        best = std::move(value);
        best_action = std::move(candidate);
      }
      uint32_t i = 0;
      while (i < k) {
        if (++pick[i] < spaces[i].size()) break;
        pick[i++] = 0;
      }
      if (i == k) break;
    }
    audit.optimal = best_action;
    audit.optimal_social = sys.mean(*best);
    audit.optimum_computed = true;
  }
  return audit;
}

enum class BaselineMethod { greedy_social, max_degree, random_pick, none };

// max-degree / random / none seeders; greedy-social needs a gamma evaluator
// and lives in the template overload below.
NodeSet baseline_seeds_simple(const Network& net, const NodeSet& a_r, BaselineMethod method,
                              uint32_t budget, Rng* rng = nullptr);

// Single-positive-cascade seeders used as experiment baselines.
template <GammaEvaluatorLike E>
NodeSet baseline_seeds(const E& eval, BaselineMethod method, uint32_t budget,
                       Rng* rng = nullptr) {
  const auto& net = eval.network();
  const NodeSet& a_r = eval.rumor_seeds();
  if (method != BaselineMethod::greedy_social)
    return baseline_seeds_simple(net, a_r, method, budget, rng);

  NodeSet pool;
  for (NodeId v = 0; v < net.node_count(); ++v)
    if (!set_contains(a_r, v)) pool.push_back(v);
  if (budget > pool.size()) throw Error("baseline budget exceeds the candidate pool");
  RumorAwareSystem<E> sys(eval);
  std::vector<AgentSpec> one{{budget, pool}};
  return greedy_response(sys, one, FullAction{{}}, 1);
}

}  // namespace rb
