// Command-line front end: experiment sweeps, one-off diffusion runs, the
// round-robin seeding game, structural checks and synthetic dataset
// generation.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "rb/crn.hpp"
#include "rb/diffusion.hpp"
#include "rb/experiment.hpp"
#include "rb/game.hpp"
#include "rb/graph.hpp"
#include "rb/montecarlo.hpp"
#include "rb/oracle.hpp"

namespace {

rb::ProbabilityModel parse_prob(const std::string& spec) {
  if (spec == "wcascade") return rb::ProbabilityModel::weighted_cascade();
  if (spec.rfind("uniform:", 0) == 0) {
    return rb::ProbabilityModel::uniform(std::stod(spec.substr(8)));
  }
  throw rb::Error("probability model must be uniform:<p> or wcascade");
}

std::vector<rb::NodeId> parse_node_list(const std::string& csv) {
  std::vector<rb::NodeId> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(static_cast<rb::NodeId>(std::stoul(tok)));
  return out;
}

int cmd_experiment(const rb::ExperimentConfig& cfg, const std::string& strategy,
                   const std::string& plot_prefix) {
  rb::ExperimentConfig run = cfg;
  if (strategy != "all") run.strategies = {rb::parse_strategy(strategy)};
  auto rows = rb::run_experiment(run);
  if (run.out_path.empty()) rb::write_rows_csv(rows, std::cout);
  if (!plot_prefix.empty()) rb::emit_plot_data(rows, plot_prefix);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Competitive rumor-blocking simulator and game runner"};
  app.require_subcommand(1);

  // ---- experiment
  auto* exp = app.add_subcommand("experiment", "Run a sweep and emit CSV rows");
  rb::ExperimentConfig cfg;
  std::string prob_spec = "uniform:0.1";
  std::string strategy = "all";
  std::string plot_prefix;
  bool directed = false;
  exp->add_option("--dataset", cfg.dataset_path, "SNAP-style edge list")->required();
  exp->add_option("--prob", prob_spec, "uniform:<p> or wcascade");
  exp->add_option("--rumor-seeds", cfg.rumor_seed_count, "number of top-degree rumor seeds");
  exp->add_option("--budget", cfg.budget, "number of positive seeds / agents");
  exp->add_option("--strategy", strategy, "game|greedy|max-degree|random|none|all");
  exp->add_option("--trials", cfg.trials, "Monte Carlo trials per estimate");
  exp->add_option("--seed", cfg.seed, "master seed");
  exp->add_option("--experiment", cfg.experiment, "1, 2 or 3")->check(CLI::Range(1, 3));
  exp->add_option("--out", cfg.out_path, "output CSV path");
  exp->add_flag("--full-fidelity", cfg.full_fidelity, "full-scale trials and sweep");
  exp->add_option("--sweep", cfg.sweep, "explicit sweep points");
  exp->add_option("--crn", cfg.crn_realizations, "worlds for game/greedy selection");
  exp->add_option("--threads", cfg.threads, "0 = all cores");
  exp->add_flag("--directed", directed, "treat the edge list as directed");
  exp->add_option("--plot-prefix", plot_prefix, "also emit <prefix><strategy>.dat series");

  // ---- simulate
  auto* sim = app.add_subcommand("simulate", "One diffusion run, exported per node and per round");
  std::string sim_dataset, sim_prob = "uniform:0.1", sim_positive, sim_rumor;
  std::string nodes_out, rounds_out, sim_model = "pic", sim_selection = "attempt-all";
  uint64_t sim_seed = 1;
  bool sim_realization = false, sim_directed = false;
  uint32_t sim_rumor_count = 1;
  sim->add_option("--dataset", sim_dataset)->required();
  sim->add_option("--prob", sim_prob);
  sim->add_option("--rumor-seeds", sim_rumor_count, "top-degree rumor seed count");
  sim->add_option("--rumor-list", sim_rumor, "explicit rumor seeds, comma separated");
  sim->add_option("--positive", sim_positive, "agent actions, '|'-separated comma lists");
  sim->add_option("--seed", sim_seed);
  sim->add_option("--model", sim_model, "pic|bic");
  sim->add_option("--selection", sim_selection, "attempt-all|inactive-only");
  sim->add_flag("--realization", sim_realization, "run deterministically on a sampled world");
  sim->add_flag("--directed", sim_directed);
  sim->add_option("--nodes-out", nodes_out, "per-node CSV path");
  sim->add_option("--rounds-out", rounds_out, "per-round CSV path");
  std::string id_map_out, world_out;
  sim->add_option("--id-map-out", id_map_out, "dense-to-original node id table");
  sim->add_option("--world-out", world_out, "dump of the sampled world (with --realization)");

  // ---- game
  auto* game = app.add_subcommand("game", "Round-robin seeding game to equilibrium");
  std::string game_dataset, game_prob = "uniform:0.1", game_out;
  uint32_t game_rumor = 10, game_k = 10, game_worlds = 200;
  uint64_t game_seed = 1;
  bool game_directed = false;
  game->add_option("--dataset", game_dataset)->required();
  game->add_option("--prob", game_prob);
  game->add_option("--rumor-seeds", game_rumor);
  game->add_option("--budget", game_k, "number of unit-budget agents");
  game->add_option("--crn", game_worlds, "sampled worlds for the evaluator");
  game->add_option("--seed", game_seed);
  game->add_option("--out", game_out, "equilibrium trace CSV");
  game->add_flag("--directed", game_directed);

  // ---- structure
  auto* structure = app.add_subcommand("structure", "Exhaustive structural checks (tiny graphs)");
  std::string st_dataset, st_rumor = "0", st_out;
  uint32_t st_agents = 2, st_budget = 1;
  bool st_directed = false;
  structure->add_option("--dataset", st_dataset)->required();
  structure->add_option("--rumor-list", st_rumor, "explicit rumor seeds");
  structure->add_option("--agents", st_agents);
  structure->add_option("--budget", st_budget);
  structure->add_option("--out", st_out, "report path (default stdout)");
  structure->add_flag("--directed", st_directed);

  // ---- gen
  auto* gen = app.add_subcommand("gen", "Write a synthetic preferential-attachment edge list");
  uint32_t gen_nodes = 4039;
  uint64_t gen_edges = 88234, gen_seed = 1;
  std::string gen_out;
  gen->add_option("--nodes", gen_nodes);
  gen->add_option("--edges", gen_edges, "undirected edge count");
  gen->add_option("--seed", gen_seed);
  gen->add_option("--out", gen_out)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (exp->parsed()) {
      cfg.prob = parse_prob(prob_spec);
      cfg.undirected = !directed;
      return cmd_experiment(cfg, strategy, plot_prefix);
    }

    if (sim->parsed()) {
      rb::Network net = rb::load_edge_list_file(sim_dataset, !sim_directed);
      rb::assign_probabilities(net, parse_prob(sim_prob));
      rb::Scenario sc;
      sc.rumor_seeds = sim_rumor.empty() ? rb::top_degree_nodes(net, sim_rumor_count)
                                         : parse_node_list(sim_rumor);
      std::stringstream agents(sim_positive);
      std::string part;
      while (std::getline(agents, part, '|')) sc.positive_actions.push_back(parse_node_list(part));
      if (sim_model == "bic") sc.semantics.model = rb::Model::bic;
      if (sim_selection == "inactive-only") sc.semantics.selection = rb::Selection::inactive_only;
      rb::Rng rng(sim_seed);
      rb::Outcome o;
      if (sim_realization) {
        rb::Realization world = rb::generate(net, rng);
        if (!world_out.empty()) {
          std::ofstream f(world_out);
          rb::dump_realization(world, f);
        }
        o = rb::run_deterministic(world, sc);
      } else {
        o = rb::run_stochastic(net, sc, rng);
      }
      if (!nodes_out.empty()) {
        std::ofstream f(nodes_out);
        rb::write_outcome_nodes_csv(o, f);
      }
      if (!rounds_out.empty()) {
        std::ofstream f(rounds_out);
        rb::write_outcome_rounds_csv(o, f);
      }
      if (!id_map_out.empty()) {
        std::ofstream f(id_map_out);
        rb::save_id_map(net, f);
      }
      std::cout << "rumor_active " << o.count(rb::kRumor) << " of " << net.node_count() << "\n";
      return 0;
    }

    if (game->parsed()) {
      rb::Network net = rb::load_edge_list_file(game_dataset, !game_directed);
      rb::assign_probabilities(net, parse_prob(game_prob));
      rb::NodeSet a_r = rb::canonical_set(rb::top_degree_nodes(net, game_rumor));
      rb::CrnGammaEvaluator eval(net, a_r, game_worlds, game_seed, 0, 64);
      rb::EquilibriumReport rep = rb::simple_game(eval, game_k);
      if (!game_out.empty()) {
        std::ofstream f(game_out);
        rb::write_equilibrium_csv(rep, f);
      } else {
        rb::write_equilibrium_csv(rep, std::cout);
      }
      return 0;
    }

    if (structure->parsed()) {
      rb::Network net = rb::load_edge_list_file(st_dataset, !st_directed);
      rb::StructureCheckConfig sc;
      sc.agents = st_agents;
      sc.budget = st_budget;
      rb::StructureReport report =
          rb::check_structure(net, rb::canonical_set(parse_node_list(st_rumor)), sc);
      if (!st_out.empty()) {
        std::ofstream f(st_out);
        rb::write_structure_report(report, f);
      } else {
        rb::write_structure_report(report, std::cout);
      }
      return report.all_passed() ? 0 : 2;
    }

    if (gen->parsed()) {
      rb::Network net = rb::synthetic_social_graph(gen_nodes, gen_edges, gen_seed);
      std::ofstream f(gen_out);
      if (!f) throw rb::Error("cannot write " + gen_out);
      // undirected listing: keep each symmetric pair once
      f << "# synthetic preferential-attachment graph, nodes " << gen_nodes << " edges "
        << gen_edges << " seed " << gen_seed << "\n";
      for (rb::NodeId u = 0; u < net.node_count(); ++u)
        for (rb::NodeId v : net.out_neighbors(u))
          if (u < v) f << u << " " << v << "\n";
      std::cout << "wrote " << gen_out << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
