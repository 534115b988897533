#include "rb/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>

#include "rb/crn.hpp"
#include "rb/game.hpp"
#include "rb/montecarlo.hpp"

namespace rb {

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::game: return "game";
    case Strategy::greedy: return "greedy";
    case Strategy::max_degree: return "max-degree";
    case Strategy::random_pick: return "random";
    case Strategy::none: return "none";
  }
  throw Error("unknown strategy");
}

Strategy parse_strategy(const std::string& name) {
  if (name == "game") return Strategy::game;
  if (name == "greedy") return Strategy::greedy;
  if (name == "max-degree") return Strategy::max_degree;
  if (name == "random") return Strategy::random_pick;
  if (name == "none") return Strategy::none;
  throw Error("unknown strategy: " + name);
}

namespace {

uint64_t subseed(uint64_t master, uint64_t a, uint64_t b, uint64_t purpose) {
  return mix64(master ^ mix64(a * 0x9E3779B97F4A7C15ull + b) ^ (purpose * 0xD1B54A32D192ED03ull));
}

std::vector<uint32_t> default_sweep(const ExperimentConfig& cfg) {
  if (cfg.experiment == 3) return {0};  // the sweep axis is the round index
  if (!cfg.sweep.empty()) return cfg.sweep;
  if (cfg.full_fidelity) {
    std::vector<uint32_t> s(30);
    for (uint32_t i = 0; i < 30; ++i) s[i] = i + 1;
    return s;
  }
  return {1, 5, 10};
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
  Network net = load_edge_list_file(cfg.dataset_path, cfg.undirected);
  assign_probabilities(net, cfg.prob);
  return run_experiment_on(net, cfg);
}

std::vector<ResultRow> run_experiment_on(const Network& net, const ExperimentConfig& cfg) {
  if (cfg.experiment < 1 || cfg.experiment > 3) throw Error("experiment must be 1, 2 or 3");
  if (cfg.trials < 1) throw Error("trials must be at least 1");
  if (cfg.strategies.empty()) throw Error("no strategies selected");

  const uint64_t trials = cfg.full_fidelity ? std::max<uint64_t>(cfg.trials, 10'000) : cfg.trials;
  const uint32_t crn_worlds =
      cfg.crn_realizations > 0 ? cfg.crn_realizations : (cfg.full_fidelity ? 400u : 200u);

  std::vector<Strategy> strategies = cfg.strategies;
  std::sort(strategies.begin(), strategies.end(), [](Strategy a, Strategy b) {
    return strategy_name(a) < strategy_name(b);
  });

  const bool needs_crn = std::any_of(strategies.begin(), strategies.end(), [](Strategy s) {
    return s == Strategy::game || s == Strategy::greedy;
  });

  McOptions mc_opts;
  mc_opts.threads = cfg.threads;

  std::vector<ResultRow> rows;
  for (uint32_t sweep : default_sweep(cfg)) {
    uint32_t rumor_count = cfg.rumor_seed_count;
    uint32_t k = cfg.budget;
    if (cfg.experiment == 1) rumor_count = k = std::max(sweep, 1u);
    if (cfg.experiment == 2) k = std::max(sweep, 1u);

    NodeSet a_r = cfg.explicit_rumor_seeds.empty()
                      ? canonical_set(top_degree_nodes(net, rumor_count))
                      : cfg.explicit_rumor_seeds;

    std::unique_ptr<CrnGammaEvaluator> crn;
    if (needs_crn) {
      crn = std::make_unique<CrnGammaEvaluator>(net, a_r, crn_worlds,
                                                subseed(cfg.seed, sweep, 0, 0xC),
                                                cfg.threads, cfg.crn_ball_cap);
    }

    for (Strategy strat : strategies) {
      const auto t0 = std::chrono::steady_clock::now();
      const uint64_t ordinal = static_cast<uint64_t>(strat);

      FullAction actions;
      switch (strat) {
        case Strategy::none:
          break;
        case Strategy::random_pick: {
          Rng rng(subseed(cfg.seed, sweep, ordinal, 0xA));
          actions.push_back(baseline_seeds_simple(net, a_r, BaselineMethod::random_pick, k, &rng));
          break;
        }
        case Strategy::max_degree:
          actions.push_back(baseline_seeds_simple(net, a_r, BaselineMethod::max_degree, k));
          break;
        case Strategy::greedy:
          actions.push_back(baseline_seeds(*crn, BaselineMethod::greedy_social, k, nullptr));
          break;
        case Strategy::game: {
          EquilibriumReport rep = simple_game(*crn, k);
          actions = rep.final_action;
          break;
        }
      }

      Scenario sc;
      sc.rumor_seeds = a_r;
      for (auto& a : actions) sc.positive_actions.push_back(a);
      sc.require_disjoint_positive = true;

      ResultRow row;
      row.strategy = strategy_name(strat);
      row.trials = trials;
      row.experiment = cfg.experiment;
      const uint64_t est_seed = subseed(cfg.seed, sweep, 0, 0xE);  // paired across strategies

      if (cfg.experiment == 3) {
        auto series = mc_rumor_rounds(net, sc, trials, est_seed, mc_opts);
        const uint64_t wall = static_cast<uint64_t>(
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                  t0)
                .count());
        for (size_t r = 0; r < series.size(); ++r) {
          ResultRow round_row = row;
          round_row.sweep = static_cast<uint32_t>(r);
          round_row.rumor_active_mean = series[r];
          round_row.wall_ms = wall;
          rows.push_back(std::move(round_row));
        }
        continue;
      }

      Estimate est = mc_gamma(net, sc, trials, est_seed, mc_opts);
      row.sweep = sweep;
      row.rumor_active_mean = static_cast<double>(net.node_count()) - est.mean;
      row.std_error = est.std_error;
      row.wall_ms = static_cast<uint64_t>(
          std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                t0)
              .count());
      rows.push_back(std::move(row));
    }
  }

  // Rows are assembled sweep-major with strategies already name-sorted, but
  // experiment 3 interleaves rounds; normalize the declared order.
  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    if (a.sweep != b.sweep) return a.sweep < b.sweep;
    return a.strategy < b.strategy;
  });

  if (!cfg.out_path.empty()) {
    std::ofstream out(cfg.out_path);
    if (!out) throw Error("cannot write output: " + cfg.out_path);
    write_rows_csv(rows, out);
  }
  return rows;
}

void write_rows_csv(const std::vector<ResultRow>& rows, std::ostream& out, bool with_wall_ms) {
  out << "sweep,strategy,rumor_active_mean,stderr,trials,wall_ms\n";
  char buf[64];
  for (const ResultRow& r : rows) {
    out << r.sweep << "," << r.strategy << ",";
    std::snprintf(buf, sizeof buf, "%.6f", r.rumor_active_mean);
    out << buf << ",";
    std::snprintf(buf, sizeof buf, "%.6f", r.std_error);
    out << buf << "," << r.trials << "," << (with_wall_ms ? r.wall_ms : 0) << "\n";
  }
}

std::vector<ResultRow> parse_rows_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "sweep,strategy,rumor_active_mean,stderr,trials,wall_ms")
    throw Error("unexpected CSV header");
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string field;
    ResultRow r;
    std::getline(ss, field, ',');
    r.sweep = static_cast<uint32_t>(std::stoul(field));
    std::getline(ss, r.strategy, ',');
    std::getline(ss, field, ',');
    r.rumor_active_mean = std::stod(field);
    std::getline(ss, field, ',');
    r.std_error = std::stod(field);
    std::getline(ss, field, ',');
    r.trials = std::stoull(field);
    std::getline(ss, field, ',');
    r.wall_ms = std::stoull(field);
    rows.push_back(std::move(r));
  }
  return rows;
}

void emit_plot_data(const std::vector<ResultRow>& rows, const std::string& prefix) {
  if (rows.empty()) throw Error("emit_plot_data: no rows");
  for (const ResultRow& r : rows)
    if (r.experiment != rows.front().experiment)
      throw Error("emit_plot_data: rows from different experiments");

  std::vector<std::string> names;
  for (const ResultRow& r : rows)
    if (std::find(names.begin(), names.end(), r.strategy) == names.end())
      names.push_back(r.strategy);
  std::sort(names.begin(), names.end());

  char buf[64];
  for (const std::string& name : names) {
    std::ofstream out(prefix + name + ".dat");
    if (!out) throw Error("cannot write series file for " + name);
    std::vector<const ResultRow*> mine;
    for (const ResultRow& r : rows)
      if (r.strategy == name) mine.push_back(&r);
    std::sort(mine.begin(), mine.end(),
              [](const ResultRow* a, const ResultRow* b) { return a->sweep < b->sweep; });
    for (const ResultRow* r : mine) {
      std::snprintf(buf, sizeof buf, "%u %.6f\n", r->sweep, r->rumor_active_mean);
      out << buf;
    }
  }
  std::ofstream combined(prefix + "combined.csv");
  if (!combined) throw Error("cannot write combined CSV");
  write_rows_csv(rows, combined);
}

Network synthetic_social_graph(uint32_t nodes, uint64_t undirected_edges, uint64_t seed) {
  if (nodes < 3) throw Error("synthetic graph needs at least 3 nodes");
  const uint32_t ring = std::min<uint32_t>(nodes, 24);
  if (undirected_edges < ring) throw Error("synthetic graph needs at least as many edges as the seed ring");
  const uint64_t max_edges = static_cast<uint64_t>(nodes) * (nodes - 1) / 2;
  if (undirected_edges > max_edges) throw Error("more edges requested than a simple graph allows");

  Rng rng(seed);
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(undirected_edges);
  std::vector<NodeId> endpoints;  // preferential-attachment pool
  endpoints.reserve(undirected_edges * 2);

  auto add_edge = [&](NodeId a, NodeId b) {
    edges.emplace_back(a, b);
    endpoints.push_back(a);
    endpoints.push_back(b);
  };

  for (uint32_t v = 0; v < ring; ++v) add_edge(v, (v + 1) % ring);

  const uint64_t remaining = undirected_edges - ring;
  const uint32_t joiners = nodes - ring;
  if (joiners == 0 && remaining > 0)
    throw Error("synthetic graph: edge budget too large for the ring size");
  const uint64_t base = joiners ? remaining / joiners : 0;
  const uint64_t extra = joiners ? remaining % joiners : 0;

  std::vector<NodeId> picked;
  for (uint32_t v = ring; v < nodes; ++v) {
    const uint64_t quota = base + ((v - ring) < extra ? 1 : 0);
    if (quota > v) throw Error("synthetic graph: per-node quota exceeds available targets");
    picked.clear();
    while (picked.size() < quota) {
      NodeId t = endpoints[rng.below(static_cast<uint32_t>(endpoints.size()))];
      if (t == v || std::find(picked.begin(), picked.end(), t) != picked.end()) continue;
      picked.push_back(t);
      add_edge(v, t);
    }
  }

  std::vector<std::pair<NodeId, NodeId>> arcs;
  arcs.reserve(edges.size() * 2);
  for (const auto& [a, b] : edges) {
    arcs.emplace_back(a, b);
    arcs.emplace_back(b, a);
  }
  return Network::from_arcs(nodes, std::move(arcs));
}

}  // namespace rb
