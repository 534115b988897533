#include "rb/diffusion.hpp"

#include <algorithm>
#include <ostream>

namespace rb {

namespace {

struct PriorityTable {
  std::vector<uint32_t> global_rank;  // cascade id -> rank, lower wins
  const Semantics* sem;

  PriorityTable(const Semantics& s, uint32_t cascade_count) : sem(&s) {
    global_rank.resize(cascade_count);
    if (s.priority_order.empty()) {
      for (uint32_t c = 0; c < cascade_count; ++c) global_rank[c] = c;
    } else {
      std::vector<bool> seen(cascade_count, false);
      if (s.priority_order.size() != cascade_count)
        throw Error("priority_order must list every cascade exactly once");
      for (uint32_t i = 0; i < cascade_count; ++i) {
        CascadeId c = s.priority_order[i];
        if (c < 0 || static_cast<uint32_t>(c) >= cascade_count || seen[c])
          throw Error("priority_order must be a permutation of the cascade ids");
        seen[c] = true;
        global_rank[c] = i;
      }
    }
  }

  uint32_t rank_at(NodeId v, CascadeId c) const {
    if (sem->priority_mode == PriorityMode::heterogeneous) {
      auto it = sem->node_priority.find(v);
      if (it != sem->node_priority.end()) {
        const auto& order = it->second;
        for (uint32_t i = 0; i < order.size(); ++i)
          if (order[i] == c) return i;
        throw Error("node priority override misses a cascade");
      }
    }
    return global_rank[c];
  }

  bool beats(NodeId v, CascadeId challenger, CascadeId holder) const {
    return rank_at(v, challenger) < rank_at(v, holder);
  }
};

// Per-active-node attempt state shared by both engines.
struct Attacker {
  NodeId u;
  std::vector<uint32_t> arcs;  // arc indices; ordered modes consume via ptr
  uint32_t ptr = 0;
  bool ordered = false;  // realization order or a fixed order pins the sequence
};

std::vector<uint32_t> ordered_arcs(const Network& net, const Realization* r,
                                   const Semantics& sem, NodeId u) {
  const size_t base = net.arc_begin(u);
  const uint32_t d = net.out_degree(u);
  std::vector<uint32_t> order(d);
  auto fo = sem.fixed_order.find(u);
  if (fo != sem.fixed_order.end()) {
    const auto& seq = fo->second;
    if (seq.size() != d) throw Error("fixed_order must list every out-neighbor");
    std::vector<bool> used(d, false);
    for (uint32_t i = 0; i < d; ++i) {
      size_t arc = find_arc(net, u, seq[i]);
      if (arc == static_cast<size_t>(-1) || used[arc - base])
        throw Error("fixed_order must be a permutation of the out-neighbors");
      used[arc - base] = true;
      order[i] = static_cast<uint32_t>(arc);
    }
    return order;
  }
  if (r != nullptr) {
    for (uint32_t i = 0; i < d; ++i) order[r->rank[base + i] - 1] = static_cast<uint32_t>(base + i);
  } else {
    for (uint32_t i = 0; i < d; ++i) order[i] = static_cast<uint32_t>(base + i);
  }
  return order;
}

struct Engine {
  const Network& net;
  const Scenario& sc;
  const Realization* real;  // null in stochastic mode
  Rng* rng;                 // null in deterministic mode
  PriorityTable prio;

  Outcome out;
  std::vector<Attacker> attackers;
  std::vector<NodeId> newly_active;
  std::vector<CascadeId> pending;   // per node, candidate cascade this step
  std::vector<NodeId> touched;
  uint32_t rumor_active = 0;

  Engine(const Network& n, const Scenario& s, const Realization* r, Rng* g)
      : net(n), sc(s), real(r), rng(g), prio(s.semantics, s.cascade_count()) {
    out.cascade.assign(net.node_count(), kInactive);
    out.time.assign(net.node_count(), 0);
    pending.assign(net.node_count(), kInactive);
  }

  void seed_claims() {
    auto claim = [&](NodeId v, CascadeId c) {
      if (out.cascade[v] == kInactive) {
        out.cascade[v] = c;
        newly_active.push_back(v);
      } else if (prio.beats(v, c, out.cascade[v])) {
        out.cascade[v] = c;
      }
    };
    for (NodeId v : sc.rumor_seeds) claim(v, kRumor);
    for (size_t i = 0; i < sc.positive_actions.size(); ++i)
      for (NodeId v : sc.positive_actions[i]) claim(v, static_cast<CascadeId>(i + 1));
    for (NodeId v : newly_active)
      if (out.cascade[v] == kRumor) ++rumor_active;
    out.rumor_rounds.push_back(rumor_active);
  }

  void enlist(NodeId u) {
    if (net.out_degree(u) == 0) return;
    Attacker a;
    a.u = u;
    a.ordered = real != nullptr || sc.semantics.fixed_order.count(u) > 0;
    if (a.ordered) {
      a.arcs = ordered_arcs(net, real, sc.semantics, u);
    } else {
      a.arcs.resize(net.out_degree(u));
      const size_t base = net.arc_begin(u);
      for (uint32_t i = 0; i < a.arcs.size(); ++i) a.arcs[i] = static_cast<uint32_t>(base + i);
    }
    attackers.push_back(std::move(a));
  }

  bool arc_fires(uint32_t arc) {
    if (real != nullptr) return real->live[arc] != 0;
    return rng->bernoulli(net.arc_prob(arc));
  }

  void record_success(uint32_t arc, CascadeId c) {
    NodeId v = net.arc_target(arc);
    if (out.cascade[v] != kInactive) return;  // chance burned on an active node
    if (pending[v] == kInactive) {
      pending[v] = c;
      touched.push_back(v);
    } else if (prio.beats(v, c, pending[v])) {
      pending[v] = c;
    }
  }

  // One attempt round for one attacker; returns false when the attacker is
  // permanently done and can be dropped.
  bool step_attacker(Attacker& a, bool& attempted) {
    const CascadeId c = out.cascade[a.u];
    const bool ordered = a.ordered;

    if (sc.semantics.model == Model::bic) {
      // Everything not yet attempted fires in this one step.
      for (uint32_t i = a.ptr; i < a.arcs.size(); ++i) {
        uint32_t arc = a.arcs[i];
        if (sc.semantics.selection == Selection::inactive_only &&
            out.cascade[net.arc_target(arc)] != kInactive)
          continue;
        attempted = true;
        if (arc_fires(arc)) record_success(arc, c);
      }
      return false;
    }

    if (sc.semantics.selection == Selection::inactive_only) {
      if (ordered) {
        // Skipped active targets can never become eligible again.
        while (a.ptr < a.arcs.size() && out.cascade[net.arc_target(a.arcs[a.ptr])] != kInactive)
          ++a.ptr;
        if (a.ptr == a.arcs.size()) return false;
        uint32_t arc = a.arcs[a.ptr++];
        attempted = true;
        if (arc_fires(arc)) record_success(arc, c);
        return a.ptr < a.arcs.size();
      }
      // Uniform pick among unattempted arcs with inactive targets.
      uint32_t eligible = 0;
      for (uint32_t i = 0; i < a.arcs.size(); ++i)
        if (out.cascade[net.arc_target(a.arcs[i])] == kInactive) ++eligible;
      if (eligible == 0) return false;
      uint32_t pick = rng->below(eligible);
      for (uint32_t i = 0; i < a.arcs.size(); ++i) {
        if (out.cascade[net.arc_target(a.arcs[i])] != kInactive) continue;
        if (pick-- == 0) {
          uint32_t arc = a.arcs[i];
          a.arcs[i] = a.arcs.back();
          a.arcs.pop_back();
          attempted = true;
          if (arc_fires(arc)) record_success(arc, c);
          break;
        }
      }
      return !a.arcs.empty();
    }

    // attempt_all: one arc per step, in order for realizations/fixed order,
    // uniformly without replacement otherwise.
    uint32_t arc;
    if (ordered) {
      arc = a.arcs[a.ptr++];
    } else {
      uint32_t i = rng->below(static_cast<uint32_t>(a.arcs.size()));
      arc = a.arcs[i];
      a.arcs[i] = a.arcs.back();
      a.arcs.pop_back();
    }
    attempted = true;
    if (arc_fires(arc)) record_success(arc, c);
    return ordered ? a.ptr < a.arcs.size() : !a.arcs.empty();
  }

  Outcome run() {
    seed_claims();
    for (NodeId v : newly_active) enlist(v);
    newly_active.clear();

    const uint64_t horizon = net.total_out_degree() + net.node_count() + 1;
    for (uint32_t t = 1;; ++t) {
      if (t > horizon) throw Error("diffusion exceeded its step bound (internal invariant)");
      bool attempted = false;
      for (size_t i = 0; i < attackers.size();) {
        if (step_attacker(attackers[i], attempted)) {
          ++i;
        } else {
          attackers[i] = std::move(attackers.back());
          attackers.pop_back();
        }
      }
      if (!attempted) break;

      for (NodeId v : touched) {
        out.cascade[v] = pending[v];
        out.time[v] = t;
        pending[v] = kInactive;
        if (out.cascade[v] == kRumor) ++rumor_active;
        enlist(v);
      }
      touched.clear();
      out.rumor_rounds.push_back(rumor_active);
    }
    return std::move(out);
  }
};

}  // namespace

uint32_t Outcome::count(CascadeId c) const {
  return static_cast<uint32_t>(std::count(cascade.begin(), cascade.end(), c));
}

uint32_t Outcome::inactive_count() const { return count(kInactive); }

void validate_scenario(const Network& net, const Scenario& sc) {
  auto check_nodes = [&](const std::vector<NodeId>& nodes) {
    for (NodeId v : nodes)
      if (v >= net.node_count()) throw Error("seed node out of range");
  };
  check_nodes(sc.rumor_seeds);
  for (const auto& a : sc.positive_actions) check_nodes(a);

  if (sc.require_disjoint_positive) {
    std::vector<bool> is_rumor(net.node_count(), false);
    for (NodeId v : sc.rumor_seeds) is_rumor[v] = true;
    for (const auto& a : sc.positive_actions)
      for (NodeId v : a)
        if (is_rumor[v]) throw Error("positive seed overlaps the rumor seed set");
  }
  PriorityTable check(sc.semantics, sc.cascade_count());
  (void)check;

  for (const auto& [v, order] : sc.semantics.node_priority) {
    if (v >= net.node_count()) throw Error("node priority override out of range");
    std::vector<bool> seen(sc.cascade_count(), false);
    if (order.size() != sc.cascade_count())
      throw Error("node priority override must list every cascade exactly once");
    for (CascadeId c : order) {
      if (c < 0 || static_cast<uint32_t>(c) >= sc.cascade_count() || seen[c])
        throw Error("node priority override must be a permutation of the cascade ids");
      seen[c] = true;
    }
  }
}

Outcome run_stochastic(const Network& net, const Scenario& sc, Rng& rng) {
  validate_scenario(net, sc);
  return Engine(net, sc, nullptr, &rng).run();
}

Outcome run_deterministic(const Realization& r, const Scenario& sc) {
  validate_scenario(*r.net, sc);
  return Engine(*r.net, sc, &r, nullptr).run();
}

uint32_t rumor_count_fast(const Realization& r, std::span<const NodeId> a_r,
                          std::span<const NodeId> union_x) {
  if (a_r.empty()) throw Error("rumor_count_fast: rumor seed set is empty");
  std::vector<uint64_t> dr = live_distances(r, a_r);
  uint32_t count = 0;
  if (union_x.empty()) {
    for (uint64_t d : dr)
      if (d != kUnreachable) ++count;
    return count;
  }
  std::vector<uint64_t> dx = live_distances(r, union_x);
  for (NodeId u = 0; u < r.node_count(); ++u)
    if (dr[u] != kUnreachable && dr[u] <= dx[u]) ++count;
  return count;
}

void write_outcome_nodes_csv(const Outcome& o, std::ostream& out) {
  out << "node,cascade,time\n";
  for (size_t u = 0; u < o.cascade.size(); ++u) {
    out << u << "," << o.cascade[u] << ",";
    if (o.cascade[u] != kInactive) out << o.time[u];
    out << "\n";
  }
}

void write_outcome_rounds_csv(const Outcome& o, std::ostream& out) {
  out << "round,rumor_count\n";
  for (size_t t = 0; t < o.rumor_rounds.size(); ++t) out << t << "," << o.rumor_rounds[t] << "\n";
}

}  // namespace rb
