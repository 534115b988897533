#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "rb/crn.hpp"
#include "rb/game.hpp"
#include "rb/oracle.hpp"

using namespace rb;

namespace {

NodeSet candidates_of(const Network& net, const NodeSet& a_r) {
  NodeSet out;
  for (NodeId v = 0; v < net.node_count(); ++v)
    if (!set_contains(a_r, v)) out.push_back(v);
  return out;
}

std::vector<AgentSpec> unit_agents(const Network& net, const NodeSet& a_r, uint32_t k,
                                   uint32_t budget = 1) {
  return std::vector<AgentSpec>(k, AgentSpec{budget, candidates_of(net, a_r)});
}

constexpr double kApproxResponseBound = 2.582;  // (2e-1)/(e-1), rounded up

}  // namespace

TEST_CASE("delta: empty action and the exact line") {
  Network net = fixtures::line3();
  ExactGammaEvaluator eval(net, {0});
  CHECK(delta(eval, {{}, {2}}, 1) == Rational(0));
  CHECK(delta(eval, {{1}}, 1) == Rational(2));
}

TEST_CASE("the utility sums stay below the social value on exhaustive fixtures") {
  for (const auto& fx : fixtures::struct_fixtures()) {
    ExactGammaEvaluator eval(fx.net, fx.a_r);
    NodeSet pool = candidates_of(fx.net, fx.a_r);
    auto space = enumerate_bounded_subsets(pool, 1);
    for (const NodeSet& a1 : space)
      for (const NodeSet& a2 : space) {
        FullAction A = {a1, a2};
        Rational sum = delta(eval, A, 1) + delta(eval, A, 2);
        CHECK(sum <= eval.gamma(action_union(A)));
      }
  }
}

TEST_CASE("rumor-oblivious sigma covers the marginal social utility") {
  for (const auto& fx : fixtures::struct_fixtures()) {
    ExactGammaEvaluator eval(fx.net, fx.a_r);
    ExactSigmaSystem sigma(fx.net, fx.a_r, 2);
    NodeSet pool = candidates_of(fx.net, fx.a_r);
    auto space = enumerate_bounded_subsets(pool, 1);
    for (const NodeSet& a1 : space)
      for (const NodeSet& a2 : space) {
        FullAction A = {a1, a2};
        CHECK(sigma_private(sigma, A, 1) >= delta(eval, A, 1));
        CHECK(sigma_private(sigma, A, 2) >= delta(eval, A, 2));
      }
  }
}

TEST_CASE("sigma system trivial values") {
  Network net = fixtures::make_net(4, {{0, 1, 1.0}});
  ExactSigmaSystem sigma(net, {0}, 2);
  CHECK(sigma.utility({{}, {3}}, 1) == Rational(0));
  CHECK(sigma.utility({{}, {3}}, 2) == Rational(1));
}

TEST_CASE("brute-force best response") {
  Network net = fixtures::line3();
  ExactGammaEvaluator eval(net, {0});
  RumorAwareSystem sys(eval);

  std::vector<AgentSpec> single{AgentSpec{1, {1}}};
  CHECK(best_response_bruteforce(sys, single, {{}}, 1) == NodeSet{1});

  std::vector<AgentSpec> zero{AgentSpec{0, {1, 2}}};
  CHECK(best_response_bruteforce(sys, zero, {{}}, 1).empty());

  // agrees with a direct exhaustive scan on a five-node instance
  const auto fx = fixtures::struct_fixtures()[1];
  ExactGammaEvaluator ev5(fx.net, fx.a_r);
  RumorAwareSystem sys5(ev5);
  std::vector<AgentSpec> agents = unit_agents(fx.net, fx.a_r, 2, 2);
  FullAction base = {{}, {2}};
  NodeSet best = best_response_bruteforce(sys5, agents, base, 1);
  Rational best_value = sys5.utility(with_action(base, 1, best), 1);
  for (const NodeSet& cand : enumerate_bounded_subsets(agents[0].pool, 2)) {
    Rational u = sys5.utility(with_action(base, 1, cand), 1);
    CHECK(u <= best_value);
    if (u == best_value) CHECK(!(cand < best));  // lexicographic tie rule
  }
}

TEST_CASE("greedy response: optimal at budget one, guarantee at budget two") {
  for (const auto& fx : fixtures::struct_fixtures()) {
    ExactGammaEvaluator eval(fx.net, fx.a_r);
    RumorAwareSystem sys(eval);
    std::vector<AgentSpec> agents = unit_agents(fx.net, fx.a_r, 2, 1);
    FullAction empty_base = {{}, {}};
    CHECK(greedy_response(sys, agents, empty_base, 1) ==
          best_response_bruteforce(sys, agents, empty_base, 1));

    std::vector<AgentSpec> b2 = unit_agents(fx.net, fx.a_r, 2, 2);
    for (const NodeSet& other : enumerate_bounded_subsets(b2[1].pool, 1)) {
      FullAction base = {{}, other};
      NodeSet g = greedy_response(sys, b2, base, 1);
      NodeSet opt = best_response_bruteforce(sys, b2, base, 1);
      double ug = sys.mean(sys.utility(with_action(base, 1, g), 1));
      double uo = sys.mean(sys.utility(with_action(base, 1, opt), 1));
      CHECK(ug >= (1.0 - std::exp(-1.0)) * uo - 1e-12);
    }
  }

  Network net = fixtures::line3();
  ExactGammaEvaluator eval(net, {0});
  RumorAwareSystem sys(eval);
  std::vector<AgentSpec> empty_pool{AgentSpec{2, {}}};
  CHECK(greedy_response(sys, empty_pool, {{}}, 1).empty());
}

TEST_CASE("simple game: degenerate and exact cases") {
  Network net = fixtures::line3();
  ExactGammaEvaluator eval(net, {0});

  EquilibriumReport none = simple_game(eval, 0);
  CHECK(none.final_action.empty());
  CHECK(none.social == eval.gamma_mean({}));

  EquilibriumReport one = simple_game(eval, 1);
  REQUIRE(one.final_action.size() == 1);
  CHECK(one.final_action[0] == NodeSet{1});
  CHECK(one.social == 2.0);
  CHECK(one.is_nash);
}

TEST_CASE("simple game equilibria survive a full deviation audit") {
  for (const auto& fx : fixtures::struct_fixtures()) {
    ExactGammaEvaluator eval(fx.net, fx.a_r);
    EquilibriumReport rep = simple_game(eval, 2);
    CHECK(rep.is_nash);
    RumorAwareSystem sys(eval);
    NashAudit audit = is_pure_nash(sys, unit_agents(fx.net, fx.a_r, 2), rep.final_action);
    CHECK(audit.is_nash);
    CHECK(audit.ratio_vs_optimum() >= 0.5 - 1e-12);  // the 2-approximation bound
  }
}

TEST_CASE("better-response dynamics from a Nash point stops immediately") {
  const auto fx = fixtures::struct_fixtures()[1];
  ExactGammaEvaluator eval(fx.net, fx.a_r);
  RumorAwareSystem sys(eval);
  auto agents = unit_agents(fx.net, fx.a_r, 2);
  EquilibriumReport nash = simple_game(eval, 2);
  EquilibriumReport again = better_response_dynamics(sys, agents, nash.final_action);
  CHECK(again.trace.empty());
  CHECK(again.final_action == nash.final_action);
  CHECK(again.is_nash);
}

TEST_CASE("better-response dynamics: strict social increase and audited equilibria") {
  for (const auto& fx : fixtures::struct_fixtures()) {
    ExactGammaEvaluator eval(fx.net, fx.a_r);
    RumorAwareSystem sys(eval);
    auto agents = unit_agents(fx.net, fx.a_r, 2);
    for (uint64_t seed = 0; seed < 10; ++seed) {
      // random initial full-action
      Rng rng(seed);
      FullAction init(2);
      for (auto& a : init)
        if (rng.below(2)) a = {agents[0].pool[rng.below(static_cast<uint32_t>(agents[0].pool.size()))]};
      EquilibriumReport rep = better_response_dynamics(sys, agents, init);
      CHECK(rep.is_nash);
      double last = -1.0;
      for (const TraceStep& step : rep.trace) {
        CHECK(step.social > last);
        last = step.social;
      }
      NashAudit audit = is_pure_nash(sys, agents, rep.final_action);
      CHECK(audit.is_nash);
      CHECK(audit.ratio_vs_optimum() >= 0.5 - 1e-12);
    }
  }
}

TEST_CASE("greedy-response equilibria satisfy the approximate-response bound") {
  for (const auto& fx : fixtures::struct_fixtures()) {
    ExactGammaEvaluator eval(fx.net, fx.a_r);
    RumorAwareSystem sys(eval);
    auto agents = unit_agents(fx.net, fx.a_r, 2, 2);
    EquilibriumReport rep = greedy_equilibrium(sys, agents, FullAction(2));
    NashAudit audit = is_pure_nash(sys, agents, rep.final_action);
    CHECK(audit.optimum_computed);
    CHECK(audit.optimal_social <= kApproxResponseBound * rep.social + 1e-9);
  }
}

TEST_CASE("single-agent brute force is a Nash equilibrium") {
  const auto fx = fixtures::struct_fixtures()[2];
  ExactGammaEvaluator eval(fx.net, fx.a_r);
  RumorAwareSystem sys(eval);
  std::vector<AgentSpec> one = unit_agents(fx.net, fx.a_r, 1, 2);
  NodeSet best = best_response_bruteforce(sys, one, {{}}, 1);
  NashAudit audit = is_pure_nash(sys, one, {best});
  CHECK(audit.is_nash);
}

TEST_CASE("baseline seeders") {
  // rumor seed 0 tops the degree order: max-degree must skip it
  Network net = fixtures::star(5);
  ExactGammaEvaluator eval(net, {0});
  CHECK(baseline_seeds(eval, BaselineMethod::none, 3).empty());
  NodeSet md = baseline_seeds(eval, BaselineMethod::max_degree, 2);
  CHECK(md.size() == 2);
  CHECK(!set_contains(md, 0));

  Rng rng(4);
  NodeSet rnd = baseline_seeds(eval, BaselineMethod::random_pick, 3, &rng);
  CHECK(rnd.size() == 3);
  for (NodeId v : rnd) CHECK(v != 0);
  CHECK_THROWS_AS(baseline_seeds(eval, BaselineMethod::random_pick, 6, &rng), Error);

  // greedy at budget one equals the global best single blocker
  const auto fx = fixtures::struct_fixtures()[1];
  ExactGammaEvaluator ev(fx.net, fx.a_r);
  RumorAwareSystem sys(ev);
  NodeSet greedy1 = baseline_seeds(ev, BaselineMethod::greedy_social, 1);
  std::vector<AgentSpec> one = unit_agents(fx.net, fx.a_r, 1);
  CHECK(greedy1 == best_response_bruteforce(sys, one, {{}}, 1));
}

TEST_CASE("the common-realization evaluator matches the oracle") {
  const auto fx = fixtures::struct_fixtures()[1];
  ExactGammaEvaluator exact(fx.net, fx.a_r);
  CrnGammaEvaluator crn(fx.net, fx.a_r, 4'000, 99);
  NodeSet pool = candidates_of(fx.net, fx.a_r);
  for (const NodeSet& x : enumerate_bounded_subsets(pool, 2)) {
    const double e = exact.gamma_mean(x);
    const double c = crn.gamma_mean(x);
    // gamma is bounded by n=5; 4k worlds put 4 sigma well under 0.2
    CHECK(std::abs(e - c) <= 0.2);
  }

  // pathwise nonnegative utilities and a clean argmax
  CHECK(delta(crn, {{1}, {}}, 1) >= 0);
  auto best = crn.best_singleton({}, pool);
  REQUIRE(best.has_value());
  CHECK(best->second == crn.gamma({best->first}));
}

TEST_CASE("simple game on the common-realization evaluator") {
  Network net = fixtures::line3();
  CrnGammaEvaluator crn(net, {0}, 64, 5);
  EquilibriumReport rep = simple_game(crn, 1);
  REQUIRE(rep.final_action.size() == 1);
  CHECK(rep.final_action[0] == NodeSet{1});  // dominant on every realization
  CHECK(rep.is_nash);
}

TEST_CASE("rumor-oblivious dynamics report rather than loop") {
  const auto fx = fixtures::struct_fixtures()[3];
  ExactSigmaSystem sigma(fx.net, fx.a_r, 2);
  auto agents = unit_agents(fx.net, fx.a_r, 2);
  EquilibriumReport rep =
      better_response_dynamics(sigma, agents, FullAction(2), DynamicsMode::rumor_oblivious);
  CHECK((rep.is_nash || rep.cycled));  // it must settle one way or the other
}

TEST_CASE("positive priority order changes sigma but never gamma") {
  // both agents hit node 3 at step one; the winner is the higher-priority
  // positive cascade
  Network net = fixtures::make_net(4, {{1, 3, 1.0}, {2, 3, 1.0}});
  FullAction a = {{1}, {2}};

  ExactSigmaSystem default_order(net, {0}, 2);
  CHECK(default_order.utility(a, 1) == Rational(2));
  CHECK(default_order.utility(a, 2) == Rational(1));

  Semantics swapped;
  swapped.priority_order = {0, 2, 1};
  ExactSigmaSystem agent2_first(net, {0}, 2, swapped);
  CHECK(agent2_first.utility(a, 1) == Rational(1));
  CHECK(agent2_first.utility(a, 2) == Rational(2));

  CHECK(default_order.social(a) == agent2_first.social(a));
  CHECK(default_order.social(a) == Rational(3));  // only the rumor seed is lost
}

TEST_CASE("actions picked on the realization sample hold up under the oracle") {
  for (const auto& fx : fixtures::struct_fixtures()) {
    ExactGammaEvaluator exact(fx.net, fx.a_r);
    CrnGammaEvaluator crn(fx.net, fx.a_r, 3'000, 123);
    EquilibriumReport from_crn = simple_game(crn, 2);
    EquilibriumReport from_exact = simple_game(exact, 2);
    const double via_crn = exact.gamma_mean(action_union(from_crn.final_action));
    const double via_exact = exact.gamma_mean(action_union(from_exact.final_action));
    CHECK(via_crn >= 0.9 * via_exact);
  }
}

TEST_CASE("enumeration caps are enforced") {
  const auto fx = fixtures::struct_fixtures()[1];
  ExactGammaEvaluator eval(fx.net, fx.a_r);
  RumorAwareSystem sys(eval);
  auto agents = unit_agents(fx.net, fx.a_r, 2, 2);
  CHECK_THROWS_WITH_AS(best_response_bruteforce(sys, agents, FullAction(2), 1, 3),
                       doctest::Contains("cap"), Error);
  CHECK_THROWS_WITH_AS(is_pure_nash(sys, agents, FullAction(2), true, 3),
                       doctest::Contains("cap"), Error);
}

TEST_CASE("equilibrium trace export") {
  Network net = fixtures::line3();
  ExactGammaEvaluator eval(net, {0});
  EquilibriumReport rep = simple_game(eval, 1);
  std::ostringstream out;
  write_equilibrium_csv(rep, out);
  CHECK(out.str().find("iteration,agent,action,utility,social") == 0);
  CHECK(out.str().find("1,1,1,2,2") != std::string::npos);
  CHECK(out.str().find("nash 1") != std::string::npos);
}
