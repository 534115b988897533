#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "rb/diffusion.hpp"
#include "rb/graph.hpp"
#include "rb/realization.hpp"

namespace rb {

// Exact arithmetic for the enumeration path: the structural checks must not
// fail from rounding, so realization probabilities stay rational until the
// reporting boundary. Doubles convert exactly (they are dyadic rationals),
// which makes the oracle compute the exact law of the double-based sampler.
using Rational = boost::multiprecision::cpp_rational;

inline constexpr uint64_t kDefaultRealizationCap = 1'000'000;

// Number of distinct realizations: 2^(free arcs) * prod_u d_u!, where arcs
// with probability 0 or 1 are forced and contribute no factor.
// Throws when the count exceeds `cap`, naming the count.
uint64_t realization_space_size(const Network& net, uint64_t cap = kDefaultRealizationCap);

// Visits every realization exactly once with its exact probability.
// The Realization reference is reused between calls; copy it to keep it.
void enumerate_realizations(const Network& net,
                            const std::function<void(const Realization&, const Rational&)>& visit,
                            uint64_t cap = kDefaultRealizationCap);

// Exact probability that `generate` produces this realization.
Rational probability_exact(const Realization& r);

struct ExactValue {
  Rational value;
  double as_double() const { return value.convert_to<double>(); }
};

// Exact social utility under default semantics: sum_g Pr[g] * (n - rumor
// count), with the rumor count from the live-distance characterization.
ExactValue exact_gamma(const Network& net, const NodeSet& a_r, const NodeSet& union_x,
                       uint64_t cap = kDefaultRealizationCap);

// Exact expected number of non-rumor nodes under an arbitrary scenario
// (any semantics), via the deterministic engine per realization.
ExactValue exact_gamma_action(const Network& net, const Scenario& sc,
                              uint64_t cap = kDefaultRealizationCap);

// Exact expected number of C_agent-active nodes (agent in 1..k).
ExactValue exact_sigma(const Network& net, const Scenario& sc, uint32_t agent,
                       uint64_t cap = kDefaultRealizationCap);

// Materialized enumeration with per-realization rumor distances and
// all-pairs live distances; evaluates the social utility gamma as an exact
// set function of the positive-seed union. Also serves as the exact
// evaluator for the game module. Requires node_count <= 64 (subset masks).
class ExactGammaEvaluator {
 public:
  using value_type = Rational;

  ExactGammaEvaluator(const Network& net, NodeSet a_r, uint64_t cap = kDefaultRealizationCap);

  const Rational& gamma(const NodeSet& union_x) const;
  double gamma_mean(const NodeSet& union_x) const { return gamma(union_x).convert_to<double>(); }
  double to_mean(const Rational& v) const { return v.convert_to<double>(); }

  // argmax over the pool of gamma(others ∪ {v}), ties to the smallest id.
  // Returns the winning node and its gamma value; nullopt on empty pool.
  std::optional<std::pair<NodeId, Rational>> best_singleton(const NodeSet& others,
                                                            const NodeSet& pool) const;

  const NodeSet& rumor_seeds() const { return a_r_; }
  const Network& network() const { return *net_; }

 private:
  struct World {
    Rational prob;
    std::vector<uint64_t> dis_r;  // from the rumor seed set
    std::vector<uint64_t> dist;   // node_count x node_count, row = source
  };

  uint32_t gamma_world(const World& w, const NodeSet& union_x) const;

  const Network* net_;
  NodeSet a_r_;
  std::vector<World> worlds_;
  mutable std::unordered_map<uint64_t, Rational> memo_;
};

// Exact private utilities of the rumor-oblivious game: sigma_i(A), the
// expected reach of agent i's own cascade, plus the action-based social
// utility. Backed by a materialized enumeration; results are cached per
// full-action.
class ExactSigmaSystem {
 public:
  using value_type = Rational;

  ExactSigmaSystem(const Network& net, NodeSet a_r, uint32_t agents, Semantics semantics = {},
                   uint64_t cap = kDefaultRealizationCap);

  Rational utility(const FullAction& a, uint32_t agent) const;  // sigma_agent, agent in 1..k
  Rational social(const FullAction& a) const;                   // gamma(A)
  double mean(const Rational& v) const { return v.convert_to<double>(); }
  uint32_t agent_count() const { return agents_; }

 private:
  struct Evaluated {
    std::vector<Rational> sigma;
    Rational gamma;
  };
  const Evaluated& evaluate(const FullAction& a) const;

  const Network* net_;
  NodeSet a_r_;
  uint32_t agents_;
  Semantics semantics_;
  std::vector<Realization> realizations_;
  std::vector<Rational> probs_;
  mutable std::unordered_map<std::string, Evaluated> cache_;
};

// ---- Structural verification (set function, monotone+submodular, valid
// ---- utility system) by exhaustive enumeration on tiny instances.

enum class CheckResult { pass, fail, skipped };

struct StructureCheckConfig {
  uint32_t agents = 2;
  uint32_t budget = 1;
  Semantics semantics;  // default PIC; variants switch to action-based checks
  uint64_t realization_cap = kDefaultRealizationCap;
  uint32_t max_candidates = 8;
  uint32_t max_union_size = 3;   // unions tested by the set-function check
  uint32_t max_partitions = 8;   // partition assignments tested per union
};

struct StructureReport {
  struct Failure {
    std::string check;
    std::string witness;
  };

  CheckResult set_function = CheckResult::skipped;
  CheckResult monotone = CheckResult::skipped;
  CheckResult submodular = CheckResult::skipped;
  CheckResult utility_sum = CheckResult::skipped;   // Eq-style: sum_i delta_i <= gamma
  CheckResult sigma_cover = CheckResult::skipped;   // sigma_i >= gamma(A)-gamma(A(i,empty))
  std::vector<Failure> failures;
  uint64_t checks_run = 0;

  bool all_passed() const;
};

StructureReport check_structure(const Network& net, const NodeSet& a_r,
                                const StructureCheckConfig& cfg = {});

void write_structure_report(const StructureReport& report, std::ostream& out);

}  // namespace rb
