#include "rb/game.hpp"

#include <ostream>

namespace rb {

NodeSet baseline_seeds_simple(const Network& net, const NodeSet& a_r, BaselineMethod method,
                              uint32_t budget, Rng* rng) {
  NodeSet pool;
  for (NodeId v = 0; v < net.node_count(); ++v)
    if (!set_contains(a_r, v)) pool.push_back(v);
  if (budget > pool.size()) throw Error("baseline budget exceeds the candidate pool");

  switch (method) {
    case BaselineMethod::none:
      return {};
    case BaselineMethod::max_degree: {
      auto ranked = top_degree_nodes(net, net.node_count());
      NodeSet out;
      for (NodeId v : ranked) {
        if (set_contains(a_r, v)) continue;
        out.push_back(v);
        if (out.size() == budget) break;
      }
      return canonical_set(std::move(out));
    }
    case BaselineMethod::random_pick: {
      if (rng == nullptr) throw Error("random baseline needs a random stream");
      NodeSet shuffled = pool;
      for (size_t i = 0; i < budget; ++i) {
        size_t j = i + rng->below(static_cast<uint32_t>(shuffled.size() - i));
        std::swap(shuffled[i], shuffled[j]);
      }
      shuffled.resize(budget);
      return canonical_set(std::move(shuffled));
    }
    case BaselineMethod::greedy_social:
      throw Error("greedy-social seeding needs a gamma evaluator");
  }
  throw Error("unknown baseline method");
}

void write_equilibrium_csv(const EquilibriumReport& report, std::ostream& out) {
  out << "iteration,agent,action,utility,social\n";
  auto put_action = [&](const NodeSet& s) {
    for (size_t i = 0; i < s.size(); ++i) {
      if (i) out << "|";
      out << s[i];
    }
  };
  for (const TraceStep& s : report.trace) {
    out << s.iteration << "," << s.agent << ",";
    put_action(s.action);
    out << "," << s.utility << "," << s.social << "\n";
  }
  out << "# final";
  for (size_t i = 0; i < report.final_action.size(); ++i) {
    out << " a" << (i + 1) << "=";
    put_action(report.final_action[i]);
  }
  out << "\n# social " << report.social << " nash " << (report.is_nash ? 1 : 0) << " cycled "
      << (report.cycled ? 1 : 0) << " rounds " << report.rounds << "\n";
}

}  // namespace rb
