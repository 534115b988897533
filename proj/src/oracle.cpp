#include "rb/oracle.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace rb {

namespace {

bool is_free_arc(double p) { return p > 0.0 && p < 1.0; }

uint64_t factorial(uint32_t d) {
  uint64_t f = 1;
  for (uint32_t j = 2; j <= d; ++j) f *= j;
  return f;
}

struct EnumerationLayout {
  std::vector<size_t> free_arcs;           // arcs with 0 < p < 1
  std::vector<NodeId> perm_nodes;          // nodes with d_u >= 2
  std::vector<uint64_t> perm_radix;        // d_u! per perm node
  unsigned __int128 total = 1;

  explicit EnumerationLayout(const Network& net) {
    for (size_t a = 0; a < net.arc_count(); ++a)
      if (is_free_arc(net.arc_prob(a))) free_arcs.push_back(a);
    for (NodeId u = 0; u < net.node_count(); ++u)
      if (net.out_degree(u) >= 2) {
        perm_nodes.push_back(u);
        perm_radix.push_back(factorial(net.out_degree(u)));
      }
    for (size_t i = 0; i < free_arcs.size() && total <= (unsigned __int128)1 << 100; ++i) total *= 2;
    for (uint64_t f : perm_radix) {
      total *= f;
      if (total > (unsigned __int128)1 << 100) break;
    }
  }
};

std::string set_to_string(const NodeSet& s) {
  std::string out = "{";
  for (size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  return out + "}";
}

std::string action_to_string(const std::vector<NodeSet>& actions) {
  std::string out = "(";
  for (size_t i = 0; i < actions.size(); ++i) {
    if (i) out += ",";
    out += set_to_string(actions[i]);
  }
  return out + ")";
}

Scenario make_scenario(const NodeSet& a_r, std::vector<NodeSet> actions, const Semantics& sem) {
  Scenario sc;
  sc.rumor_seeds = a_r;
  sc.positive_actions.assign(actions.begin(), actions.end());
  sc.semantics = sem;
  return sc;
}

bool is_default_semantics(const Semantics& sem, uint32_t cascade_count) {
  if (sem.model != Model::pic || sem.priority_mode != PriorityMode::homogeneous ||
      sem.selection != Selection::attempt_all)
    return false;
  if (!sem.node_priority.empty() || !sem.fixed_order.empty()) return false;
  if (!sem.priority_order.empty()) {
    for (uint32_t c = 0; c < cascade_count; ++c)
      if (sem.priority_order.size() <= c || sem.priority_order[c] != static_cast<CascadeId>(c))
        return false;
  }
  return true;
}

}  // namespace

uint64_t realization_space_size(const Network& net, uint64_t cap) {
  EnumerationLayout layout(net);
  if (layout.total > cap) {
    std::ostringstream msg;
    msg << "realization enumeration too large: ";
    if (layout.total > (unsigned __int128)UINT64_MAX)
      msg << "more than 2^64";
    else
      msg << static_cast<uint64_t>(layout.total);
    msg << " realizations exceed the cap of " << cap;
    throw Error(msg.str());
  }
  return static_cast<uint64_t>(layout.total);
}

void enumerate_realizations(const Network& net,
                            const std::function<void(const Realization&, const Rational&)>& visit,
                            uint64_t cap) {
  const uint64_t total = realization_space_size(net, cap);
  EnumerationLayout layout(net);

  // Constant permutation factor: every specific order has probability 1/d_u!.
  Rational perm_const(1);
  for (uint64_t f : layout.perm_radix) perm_const /= f;

  // Exact per-arc factors for the free arcs.
  std::vector<Rational> live_f, blocked_f;
  live_f.reserve(layout.free_arcs.size());
  for (size_t a : layout.free_arcs) {
    Rational p(net.arc_prob(a));
    live_f.push_back(p);
    blocked_f.push_back(Rational(1) - p);
  }

  Realization r;
  r.net = &net;
  r.live.assign(net.arc_count(), 0);
  r.rank.assign(net.arc_count(), 0);
  // Forced arcs and trivial orders.
  for (size_t a = 0; a < net.arc_count(); ++a)
    if (net.arc_prob(a) >= 1.0) r.live[a] = 1;
  for (NodeId u = 0; u < net.node_count(); ++u)
    if (net.out_degree(u) == 1) r.rank[net.arc_begin(u)] = 1;

  std::vector<uint32_t> pool;
  for (uint64_t idx = 0; idx < total; ++idx) {
    uint64_t q = idx;
    Rational prob = perm_const;
    for (size_t i = 0; i < layout.free_arcs.size(); ++i) {
      const bool live = (q & 1) != 0;
      q >>= 1;
      r.live[layout.free_arcs[i]] = live ? 1 : 0;
      prob *= live ? live_f[i] : blocked_f[i];
    }
    for (size_t pi = 0; pi < layout.perm_nodes.size(); ++pi) {
      const NodeId u = layout.perm_nodes[pi];
      const uint32_t d = net.out_degree(u);
      const size_t base = net.arc_begin(u);
      uint64_t code = q % layout.perm_radix[pi];
      q /= layout.perm_radix[pi];
      // Lehmer decode: position i of the order gets the code-selected slot.
      pool.resize(d);
      for (uint32_t i = 0; i < d; ++i) pool[i] = i;
      uint64_t f = layout.perm_radix[pi];
      for (uint32_t i = 0; i < d; ++i) {
        f /= (d - i);
        const uint32_t j = static_cast<uint32_t>(code / f);
        code %= f;
        r.rank[base + pool[j]] = i + 1;
        pool.erase(pool.begin() + j);
      }
    }
    visit(r, prob);
  }
}

Rational probability_exact(const Realization& r) {
  const Network& net = *r.net;
  Rational prob(1);
  for (size_t a = 0; a < net.arc_count(); ++a) {
    Rational p(net.arc_prob(a));
    prob *= r.live[a] ? p : Rational(1) - p;
  }
  for (NodeId u = 0; u < net.node_count(); ++u) prob /= factorial(net.out_degree(u));
  return prob;
}

ExactValue exact_gamma(const Network& net, const NodeSet& a_r, const NodeSet& union_x, uint64_t cap) {
  if (a_r.empty()) return {Rational(net.node_count())};
  Rational acc(0);
  enumerate_realizations(
      net,
      [&](const Realization& r, const Rational& pr) {
        acc += pr * (net.node_count() - rumor_count_fast(r, a_r, union_x));
      },
      cap);
  return {acc};
}

ExactValue exact_gamma_action(const Network& net, const Scenario& sc, uint64_t cap) {
  Rational acc(0);
  enumerate_realizations(
      net,
      [&](const Realization& r, const Rational& pr) {
        acc += pr * (net.node_count() - run_deterministic(r, sc).count(kRumor));
      },
      cap);
  return {acc};
}

ExactValue exact_sigma(const Network& net, const Scenario& sc, uint32_t agent, uint64_t cap) {
  if (agent < 1 || agent > sc.positive_actions.size())
    throw Error("exact_sigma: agent index out of range");
  Rational acc(0);
  enumerate_realizations(
      net,
      [&](const Realization& r, const Rational& pr) {
        acc += pr * run_deterministic(r, sc).count(static_cast<CascadeId>(agent));
      },
      cap);
  return {acc};
}

ExactGammaEvaluator::ExactGammaEvaluator(const Network& net, NodeSet a_r, uint64_t cap)
    : net_(&net), a_r_(canonical_set(std::move(a_r))) {
  if (net.node_count() > 64) throw Error("exact evaluator requires at most 64 nodes");
  const uint32_t n = net.node_count();
  enumerate_realizations(
      net,
      [&](const Realization& r, const Rational& pr) {
        World w;
        w.prob = pr;
        if (a_r_.empty())
          w.dis_r.assign(n, kUnreachable);
        else
          w.dis_r = live_distances(r, a_r_);
        w.dist.resize(static_cast<size_t>(n) * n);
        for (NodeId s = 0; s < n; ++s) {
          NodeId src[1] = {s};
          auto row = live_distances(r, src);
          std::copy(row.begin(), row.end(), w.dist.begin() + static_cast<size_t>(s) * n);
        }
        worlds_.push_back(std::move(w));
      },
      cap);
}

uint32_t ExactGammaEvaluator::gamma_world(const World& w, const NodeSet& union_x) const {
  const uint32_t n = net_->node_count();
  uint32_t rumor = 0;
  for (NodeId u = 0; u < n; ++u) {
    const uint64_t dr = w.dis_r[u];
    if (dr == kUnreachable) continue;
    uint64_t dx = kUnreachable;
    for (NodeId x : union_x) dx = std::min(dx, w.dist[static_cast<size_t>(x) * n + u]);
    if (dr <= dx) ++rumor;
  }
  return n - rumor;
}

const Rational& ExactGammaEvaluator::gamma(const NodeSet& union_x) const {
  uint64_t mask = 0;
  for (NodeId x : union_x) mask |= uint64_t{1} << x;
  auto it = memo_.find(mask);
  if (it != memo_.end()) return it->second;
  Rational acc(0);
  for (const World& w : worlds_) acc += w.prob * gamma_world(w, union_x);
  return memo_.emplace(mask, std::move(acc)).first->second;
}

std::optional<std::pair<NodeId, Rational>> ExactGammaEvaluator::best_singleton(
    const NodeSet& others, const NodeSet& pool) const {
  std::optional<std::pair<NodeId, Rational>> best;
  for (NodeId v : pool) {
    Rational g = gamma(set_union_of(others, {v}));
    if (!best || g > best->second) best = {v, std::move(g)};
  }
  return best;
}

ExactSigmaSystem::ExactSigmaSystem(const Network& net, NodeSet a_r, uint32_t agents,
                                   Semantics semantics, uint64_t cap)
    : net_(&net), a_r_(canonical_set(std::move(a_r))), agents_(agents),
      semantics_(std::move(semantics)) {
  enumerate_realizations(
      net,
      [&](const Realization& r, const Rational& pr) {
        realizations_.push_back(r);
        probs_.push_back(pr);
      },
      cap);
}

const ExactSigmaSystem::Evaluated& ExactSigmaSystem::evaluate(const FullAction& a) const {
  if (a.size() != agents_) throw Error("full-action has the wrong number of agents");
  std::string key;
  for (const auto& s : a) {
    for (NodeId v : s) key += std::to_string(v) + ",";
    key += ";";
  }
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;

  Scenario sc = {a_r_, {a.begin(), a.end()}, semantics_, false};
  Evaluated ev;
  ev.sigma.assign(agents_, Rational(0));
  ev.gamma = 0;
  for (size_t w = 0; w < realizations_.size(); ++w) {
    Outcome o = run_deterministic(realizations_[w], sc);
    for (uint32_t i = 0; i < agents_; ++i)
      ev.sigma[i] += probs_[w] * o.count(static_cast<CascadeId>(i + 1));
    ev.gamma += probs_[w] * (net_->node_count() - o.count(kRumor));
  }
  return cache_.emplace(std::move(key), std::move(ev)).first->second;
}

Rational ExactSigmaSystem::utility(const FullAction& a, uint32_t agent) const {
  if (agent < 1 || agent > agents_) throw Error("agent index out of range");
  return evaluate(a).sigma[agent - 1];
}

Rational ExactSigmaSystem::social(const FullAction& a) const { return evaluate(a).gamma; }

bool StructureReport::all_passed() const {
  for (CheckResult c : {set_function, monotone, submodular, utility_sum, sigma_cover})
    if (c == CheckResult::fail) return false;
  return true;
}

namespace {

struct MaterializedWorlds {
  std::vector<Realization> realizations;
  std::vector<Rational> probs;
};

MaterializedWorlds materialize(const Network& net, uint64_t cap) {
  MaterializedWorlds mw;
  enumerate_realizations(
      net,
      [&](const Realization& r, const Rational& pr) {
        mw.realizations.push_back(r);
        mw.probs.push_back(pr);
      },
      cap);
  return mw;
}

}  // namespace

StructureReport check_structure(const Network& net, const NodeSet& a_r,
                                const StructureCheckConfig& cfg) {
  StructureReport report;
  const uint32_t n = net.node_count();
  NodeSet rumor = canonical_set(a_r);

  NodeSet candidates;
  for (NodeId v = 0; v < n; ++v)
    if (!set_contains(rumor, v)) candidates.push_back(v);
  if (candidates.size() > cfg.max_candidates)
    throw Error("check_structure: " + std::to_string(candidates.size()) +
                " candidate nodes exceed the cap of " + std::to_string(cfg.max_candidates));

  const uint32_t k = cfg.agents;
  const bool default_sem = is_default_semantics(cfg.semantics, k + 1);

  auto fail = [&](CheckResult& slot, const std::string& check, const std::string& witness) {
    slot = CheckResult::fail;
    report.failures.push_back({check, witness});
  };

  // Exact gamma of a full-action under the configured semantics.
  MaterializedWorlds worlds = materialize(net, cfg.realization_cap);
  auto gamma_action = [&](const std::vector<NodeSet>& actions) {
    Scenario sc = make_scenario(rumor, actions, cfg.semantics);
    Rational acc(0);
    for (size_t i = 0; i < worlds.realizations.size(); ++i)
      acc += worlds.probs[i] * (n - run_deterministic(worlds.realizations[i], sc).count(kRumor));
    return acc;
  };

  // ---- Set function: every assignment of a union to the k agents gives the
  // same exact social utility.
  {
    report.set_function = CheckResult::pass;
    const uint32_t assign_choices = (1u << k) - 1;  // nonempty agent subsets
    std::vector<NodeSet> unions = enumerate_bounded_subsets(candidates, cfg.max_union_size);
    for (const NodeSet& u : unions) {
      if (u.empty()) continue;
      bool have_first = false;
      Rational first_value;
      std::string first_desc;
      std::vector<uint32_t> digits(u.size(), 0);
      for (uint32_t count = 0; count < cfg.max_partitions; ++count) {
        std::vector<NodeSet> actions(k);
        for (size_t e = 0; e < u.size(); ++e)
          for (uint32_t agent = 0; agent < k; ++agent)
            if ((digits[e] + 1) & (1u << agent)) actions[agent].push_back(u[e]);
        Rational value = gamma_action(actions);
        ++report.checks_run;
        if (!have_first) {
          have_first = true;
          first_value = value;
          first_desc = action_to_string(actions);
        } else if (value != first_value) {
          fail(report.set_function, "set_function",
               "union " + set_to_string(u) + ": gamma" + first_desc + " = " + first_value.str() +
                   " but gamma" + action_to_string(actions) + " = " + value.str());
        }
        // Advance the mixed-radix assignment odometer.
        size_t e = 0;
        while (e < u.size()) {
          if (++digits[e] < assign_choices) break;
          digits[e++] = 0;
        }
        if (e == u.size()) break;
      }
    }
  }

  if (default_sem) {
    ExactGammaEvaluator eval(net, rumor, cfg.realization_cap);
    const size_t c = candidates.size();
    auto subset = [&](uint64_t mask) {
      NodeSet s;
      for (size_t i = 0; i < c; ++i)
        if (mask & (uint64_t{1} << i)) s.push_back(candidates[i]);
      return s;
    };
    std::vector<Rational> g(uint64_t{1} << c);
    for (uint64_t m = 0; m < g.size(); ++m) g[m] = eval.gamma(subset(m));

    // ---- Monotone: removing any single element never raises gamma.
    report.monotone = CheckResult::pass;
    for (uint64_t y = 1; y < g.size(); ++y) {
      for (size_t i = 0; i < c; ++i) {
        if (!(y & (uint64_t{1} << i))) continue;
        ++report.checks_run;
        if (g[y & ~(uint64_t{1} << i)] > g[y]) {
          fail(report.monotone, "monotone",
               "gamma" + set_to_string(subset(y & ~(uint64_t{1} << i))) + " > gamma" +
                   set_to_string(subset(y)));
        }
      }
    }

    // ---- Submodular: diminishing margins over all X subseteq Y, v not in Y.
    report.submodular = CheckResult::pass;
    for (uint64_t y = 0; y < g.size(); ++y) {
      for (uint64_t x = y;; x = (x - 1) & y) {
        for (size_t i = 0; i < c; ++i) {
          const uint64_t v = uint64_t{1} << i;
          if (y & v) continue;
          ++report.checks_run;
          if (g[x | v] - g[x] < g[y | v] - g[y]) {
            fail(report.submodular, "submodular",
                 "X=" + set_to_string(subset(x)) + " Y=" + set_to_string(subset(y)) +
                     " v=" + std::to_string(candidates[i]));
          }
        }
        if (x == 0) break;
      }
    }

    // ---- Valid utility system over all budget-feasible full-actions.
    report.utility_sum = CheckResult::pass;
    report.sigma_cover = CheckResult::pass;
    std::vector<NodeSet> actions_space = enumerate_bounded_subsets(candidates, cfg.budget);
    std::vector<size_t> pick(k, 0);
    while (true) {
      std::vector<NodeSet> actions(k);
      for (uint32_t i = 0; i < k; ++i) actions[i] = actions_space[pick[i]];

      NodeSet full_union;
      for (const auto& a : actions) full_union = set_union_of(full_union, a);
      const Rational& g_all = eval.gamma(full_union);

      std::vector<Rational> delta(k);
      for (uint32_t i = 0; i < k; ++i) {
        NodeSet others;
        for (uint32_t j = 0; j < k; ++j)
          if (j != i) others = set_union_of(others, actions[j]);
        delta[i] = g_all - eval.gamma(others);
      }

      Rational delta_sum(0);
      for (const Rational& d : delta) delta_sum += d;
      ++report.checks_run;
      if (delta_sum > g_all)
        fail(report.utility_sum, "utility_sum",
             "sum of delta_i > gamma at A=" + action_to_string(actions));

      // sigma_i(A) >= gamma(A) - gamma(A(i,empty)), per agent, exact.
      Scenario sc = make_scenario(rumor, actions, cfg.semantics);
      std::vector<Rational> sigma(k, Rational(0));
      for (size_t w = 0; w < worlds.realizations.size(); ++w) {
        Outcome o = run_deterministic(worlds.realizations[w], sc);
        for (uint32_t i = 0; i < k; ++i)
          sigma[i] += worlds.probs[w] * o.count(static_cast<CascadeId>(i + 1));
      }
      for (uint32_t i = 0; i < k; ++i) {
        ++report.checks_run;
        if (sigma[i] < delta[i])
          fail(report.sigma_cover, "sigma_cover",
               "sigma_" + std::to_string(i + 1) + " < delta_" + std::to_string(i + 1) +
                   " at A=" + action_to_string(actions));
      }

      size_t agent = 0;
      while (agent < k) {
        if (++pick[agent] < actions_space.size()) break;
        pick[agent++] = 0;
      }
      if (agent == k) break;
    }
  } else {
    // Variant semantics: gamma need not be a set function, so monotonicity is
    // checked over full-action extensions instead of unions.
    report.monotone = CheckResult::pass;
    std::vector<NodeSet> actions_space = enumerate_bounded_subsets(candidates, cfg.budget);
    std::vector<size_t> pick(k, 0);
    while (true) {
      std::vector<NodeSet> actions(k);
      for (uint32_t i = 0; i < k; ++i) actions[i] = actions_space[pick[i]];
      Rational base = gamma_action(actions);
      for (uint32_t i = 0; i < k; ++i) {
        if (actions[i].size() >= cfg.budget) continue;
        for (NodeId v : candidates) {
          if (set_contains(actions[i], v)) continue;
          std::vector<NodeSet> extended = actions;
          extended[i] = canonical_set(set_union_of(actions[i], {v}));
          ++report.checks_run;
          if (gamma_action(extended) < base)
            fail(report.monotone, "monotone",
                 "gamma" + action_to_string(extended) + " < gamma" + action_to_string(actions));
        }
      }
      size_t agent = 0;
      while (agent < k) {
        if (++pick[agent] < actions_space.size()) break;
        pick[agent++] = 0;
      }
      if (agent == k) break;
    }
  }

  return report;
}

void write_structure_report(const StructureReport& report, std::ostream& out) {
  auto line = [&](const char* name, CheckResult r) {
    out << name << ","
        << (r == CheckResult::pass ? "pass" : r == CheckResult::fail ? "fail" : "skipped") << "\n";
  };
  out << "check,result\n";
  line("set_function", report.set_function);
  line("monotone", report.monotone);
  line("submodular", report.submodular);
  line("utility_sum", report.utility_sum);
  line("sigma_cover", report.sigma_cover);
  out << "checks_run," << report.checks_run << "\n";
  for (const auto& f : report.failures) out << "failure," << f.check << "," << f.witness << "\n";
}

}  // namespace rb
