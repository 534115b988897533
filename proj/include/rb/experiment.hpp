#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rb/graph.hpp"

namespace rb {

enum class Strategy { game, greedy, max_degree, random_pick, none };

std::string strategy_name(Strategy s);
Strategy parse_strategy(const std::string& name);

struct ExperimentConfig {
  std::string dataset_path;
  bool undirected = true;
  ProbabilityModel prob = ProbabilityModel::uniform(0.1);

  uint32_t rumor_seed_count = 10;  // |a_r|; experiment 1 sweeps it
  NodeSet explicit_rumor_seeds;    // overrides top-degree selection when set
  uint32_t budget = 10;            // k; experiments 1 and 2 sweep it

  std::vector<Strategy> strategies = {Strategy::none, Strategy::random_pick,
                                      Strategy::max_degree, Strategy::greedy, Strategy::game};
  uint64_t trials = 2000;
  uint64_t seed = 1;
  int experiment = 1;  // 1: sweep |a_r|=k; 2: sweep k; 3: per-round series
  std::string out_path;

  // Full-scale settings: 10,000 trials and the 1..30 sweep.
  bool full_fidelity = false;

  std::vector<uint32_t> sweep;     // explicit sweep points; empty = defaults
  uint32_t crn_realizations = 0;   // worlds for game/greedy selection; 0 = default
  uint32_t crn_ball_cap = 64;      // per-element savior-ball cap at scale; 0 = unbounded
  int threads = 0;
};

struct ResultRow {
  uint32_t sweep = 0;
  std::string strategy;
  double rumor_active_mean = 0.0;
  double std_error = 0.0;
  uint64_t trials = 0;
  uint64_t wall_ms = 0;
  int experiment = 1;  // not serialized; guards against mixing sweeps
};

// Loads the dataset, assigns probabilities and runs the configured sweep.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg);

// Same, on an already-built network (probabilities must be assigned).
std::vector<ResultRow> run_experiment_on(const Network& net, const ExperimentConfig& cfg);

// CSV with the fixed header: sweep,strategy,rumor_active_mean,stderr,trials,wall_ms.
// with_wall_ms=false zeroes the timing column, which is the only
// run-dependent value, so the output becomes byte-reproducible.
void write_rows_csv(const std::vector<ResultRow>& rows, std::ostream& out,
                    bool with_wall_ms = true);

std::vector<ResultRow> parse_rows_csv(std::istream& in);

// One "<prefix><strategy>.dat" two-column (sweep, mean) series per strategy
// plus "<prefix>combined.csv". Errors on empty input or mixed experiments.
void emit_plot_data(const std::vector<ResultRow>& rows, const std::string& prefix);

// Deterministic preferential-attachment stand-in used when a SNAP dataset is
// not on disk: exact node and undirected-edge counts, heavy-tailed degrees,
// every edge stored as two arcs.
Network synthetic_social_graph(uint32_t nodes, uint64_t undirected_edges, uint64_t seed);

}  // namespace rb
