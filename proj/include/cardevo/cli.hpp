#pragma once

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cardevo/arena.hpp"
#include "cardevo/config.hpp"
#include "cardevo/evolution.hpp"

namespace cardevo {

namespace detail {

inline std::string default_cards_path(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("CARDEVO_CARDS")) return env;
  return "data/cards.txt";
}

struct AgentPool {
  std::vector<std::unique_ptr<Agent>> owned;
  std::vector<const Agent*> ptrs;
  std::vector<std::string> labels;

  void build(const std::vector<std::string>& descriptors, const CardSet& cards,
             std::uint64_t seed) {
    for (std::size_t i = 0; i < descriptors.size(); ++i) {
      owned.push_back(make_agent(descriptors[i], cards, seed_combine(seed, 0xa6e27, i)));
      ptrs.push_back(owned.back().get());
      labels.push_back(descriptors[i]);
    }
  }
};

}  // namespace detail

// Single entry point for all subcommands. Returns 0 on success, 1 on usage
// errors, 2 on runtime errors.
inline int cli_main(int argc, const char* const* argv) {
  CLI::App app{"evolves and evaluates card-game evaluation functions"};
  app.require_subcommand(1);

  std::string cards_path;
  app.add_option("--cards", cards_path, "card-list file (default: $CARDEVO_CARDS or data/cards.txt)");

  // evolve
  auto* evolve_cmd = app.add_subcommand("evolve", "run an evolution");
  std::string evolve_config;
  std::uint64_t evolve_seed = 0;
  std::string evolve_out;
  int evolve_workers = 1;
  bool evolve_silent = false;
  int override_generations = -1, override_population = -1, override_drafts = -1,
      override_rounds = -1, override_elitism = -1;
  std::string override_repr, override_scheme, override_opponent;
  evolve_cmd->add_option("--config", evolve_config, "config file (key = value or JSON)")->required();
  evolve_cmd->add_option("--seed", evolve_seed, "master seed")->required();
  evolve_cmd->add_option("--out", evolve_out, "run output directory")->required();
  evolve_cmd->add_option("--workers", evolve_workers, "worker threads (never affects results)");
  evolve_cmd->add_flag("--silent", evolve_silent, "suppress status lines");
  evolve_cmd->add_option("--generations", override_generations, "override generations");
  evolve_cmd->add_option("--population", override_population, "override population size");
  evolve_cmd->add_option("--drafts", override_drafts, "override drafts");
  evolve_cmd->add_option("--rounds", override_rounds, "override rounds");
  evolve_cmd->add_option("--elitism", override_elitism, "override elitism");
  evolve_cmd->add_option("--representation", override_repr, "override representation");
  evolve_cmd->add_option("--scheme", override_scheme, "override fitness scheme");
  evolve_cmd->add_option("--opponent", override_opponent, "override fixed opponent descriptor");

  // tournament
  auto* tour_cmd = app.add_subcommand("tournament", "round-robin between agents");
  std::vector<std::string> tour_agents;
  int tour_drafts = 10, tour_rounds = 10, tour_workers = 1;
  std::uint64_t tour_seed = 0;
  std::string tour_out, tour_cumulative;
  tour_cmd->add_option("--agents", tour_agents, "agent descriptors: random, weakop, genome:<path>")
      ->required()
      ->expected(-2);
  tour_cmd->add_option("--drafts", tour_drafts, "shared drafts per pair");
  tour_cmd->add_option("--rounds", tour_rounds, "rounds per draft per side");
  tour_cmd->add_option("--seed", tour_seed, "tournament seed")->required();
  tour_cmd->add_option("--out", tour_out, "win-matrix CSV path")->required();
  tour_cmd->add_option("--cumulative", tour_cumulative, "also write per-round cumulative CSV");
  tour_cmd->add_option("--workers", tour_workers, "worker threads");

  // heatmap
  auto* heat_cmd = app.add_subcommand("heatmap", "cross-generation self-play heatmap of a run");
  std::string heat_run, heat_out;
  int heat_drafts = 2, heat_rounds = 2, heat_workers = 1;
  std::uint64_t heat_seed = 0;
  bool heat_gnuplot = false;
  heat_cmd->add_option("--run", heat_run, "evolution run directory")->required();
  heat_cmd->add_option("--out", heat_out, "output CSV path")->required();
  heat_cmd->add_option("--drafts", heat_drafts, "drafts per pair");
  heat_cmd->add_option("--rounds", heat_rounds, "rounds per draft per side");
  heat_cmd->add_option("--seed", heat_seed, "seed");
  heat_cmd->add_flag("--gnuplot", heat_gnuplot, "bare matrix output for gnuplot");
  heat_cmd->add_option("--workers", heat_workers, "worker threads");

  // progress
  auto* prog_cmd = app.add_subcommand("progress", "evolution-progress curve of a run");
  std::string prog_run, prog_out;
  int prog_drafts = 2, prog_rounds = 2, prog_workers = 1;
  std::uint64_t prog_seed = 0;
  prog_cmd->add_option("--run", prog_run, "evolution run directory")->required();
  prog_cmd->add_option("--out", prog_out, "output CSV path")->required();
  prog_cmd->add_option("--drafts", prog_drafts, "drafts per pair");
  prog_cmd->add_option("--rounds", prog_rounds, "rounds per draft per side");
  prog_cmd->add_option("--seed", prog_seed, "seed");
  prog_cmd->add_option("--workers", prog_workers, "worker threads");

  // play
  auto* play_cmd = app.add_subcommand("play", "single match between two agents");
  std::string play_p0, play_p1, play_transcript;
  std::uint64_t play_seed = 0;
  play_cmd->add_option("--p0", play_p0, "player 0 descriptor")->required();
  play_cmd->add_option("--p1", play_p1, "player 1 descriptor")->required();
  play_cmd->add_option("--seed", play_seed, "match seed");
  play_cmd->add_option("--transcript", play_transcript, "transcript output path");

  // translate
  auto* trans_cmd = app.add_subcommand("translate", "translate a linear genome to a tree form");
  std::string trans_in, trans_out, trans_repr;
  trans_cmd->add_option("--in", trans_in, "linear genome file")->required();
  trans_cmd->add_option("--repr", trans_repr, "target: linear, binarytree or tree")->required();
  trans_cmd->add_option("--out", trans_out, "output genome file")->required();

  // validate-cards
  auto* val_cmd = app.add_subcommand("validate-cards", "check a card-list file");
  std::string val_path;
  val_cmd->add_option("path", val_path, "card-list file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (val_cmd->parsed()) {
      CardSet cs = load_cardset_file(val_path);
      std::cout << cs.size() << " cards OK\n";
      return 0;
    }

    if (trans_cmd->parsed()) {
      Genome g = load_genome(trans_in);
      const auto* lin = std::get_if<LinearGenome>(&g.value);
      if (!lin) throw std::runtime_error("translate: input genome is not linear");
      save_genome(trans_out, translate_linear(*lin, representation_from_string(trans_repr)));
      return 0;
    }

    CardSet cards = load_cardset_file(detail::default_cards_path(cards_path));

    if (evolve_cmd->parsed()) {
      EvolutionConfig cfg = load_evolution_config(evolve_config);
      cfg.master_seed = evolve_seed;
      cfg.workers = evolve_workers;
      if (override_generations >= 0) cfg.generations = override_generations;
      if (override_population >= 0) cfg.population = override_population;
      if (override_drafts >= 0) cfg.drafts = override_drafts;
      if (override_rounds >= 0) cfg.rounds = override_rounds;
      if (override_elitism >= 0) cfg.elitism = override_elitism;
      if (!override_repr.empty()) cfg.representation = representation_from_string(override_repr);
      if (!override_scheme.empty()) detail::apply_config_entry(cfg, "scheme", override_scheme);
      if (!override_opponent.empty()) cfg.opponent = override_opponent;
      cfg.validate();

      save_run_manifest(evolve_out, cfg, cards);
      long long total_games = 0;
      auto started = std::chrono::steady_clock::now();
      evolve(cfg, cards, evolve_out, [&](const GenerationArchive& a) {
        total_games += a.games_simulated;
        if (evolve_silent) return;
        const auto& best = a.fitness[static_cast<std::size_t>(a.best_id)];
        double mean = 0.0;
        for (const auto& r : a.fitness) mean += r.win_rate;
        mean /= static_cast<double>(a.fitness.size());
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        std::printf("gen=%d best=%.4f mean=%.4f best_id=%d games=%lld total_games=%lld elapsed_s=%.1f\n",
                    a.generation, best.win_rate, mean, a.best_id, a.games_simulated, total_games,
                    elapsed);
        std::fflush(stdout);
      });
      if (!evolve_silent)
        std::printf("done generations=%d total_games=%lld expected_games=%lld\n", cfg.generations,
                    total_games, count_games(cfg));
      return 0;
    }

    if (tour_cmd->parsed()) {
      detail::AgentPool pool;
      pool.build(tour_agents, cards, tour_seed);
      WinMatrix m = round_robin(cards, pool.ptrs, pool.labels, tour_drafts, tour_rounds, tour_seed,
                                tour_workers);
      export_csv(m, tour_out);
      if (!tour_cumulative.empty()) {
        CumulativeTable t = cumulative_rounds(cards, pool.ptrs, pool.labels, tour_drafts,
                                              tour_rounds, tour_seed, tour_workers);
        export_csv(t, tour_cumulative);
      }
      for (std::size_t i = 0; i < m.labels.size(); ++i)
        std::printf("agent=%s global_win_rate=%.4f\n", m.labels[i].c_str(), m.global[i]);
      return 0;
    }

    if (heat_cmd->parsed()) {
      auto archives = load_run(heat_run);
      HeatmapGrid g = heatmap(cards, archives, heat_drafts, heat_rounds, heat_seed, heat_workers);
      export_csv(g, heat_out, heat_gnuplot);
      return 0;
    }

    if (prog_cmd->parsed()) {
      auto archives = load_run(prog_run);
      ProgressCurve c =
          progress_curve(cards, archives, prog_drafts, prog_rounds, prog_seed, prog_workers);
      export_csv(c, prog_out);
      // First-to-last improvement, reported for comparison against full-scale
      // runs (never asserted at desk scale).
      std::printf("generations=%zu first=%.4f last=%.4f improvement=%.4f\n", c.values.size(),
                  c.values.front(), c.values.back(), c.values.back() - c.values.front());
      return 0;
    }

    if (play_cmd->parsed()) {
      auto a0 = make_agent(play_p0, cards, seed_combine(play_seed, 0));
      auto a1 = make_agent(play_p1, cards, seed_combine(play_seed, 1));
      DraftSequence draft = generate_draft(seed_combine(play_seed, seed_tag::kDraft, 0), cards);
      MatchResult r =
          play_match(cards, *a0, *a1, draft, seed_combine(play_seed, seed_tag::kGame), true);
      if (!play_transcript.empty()) {
        std::ofstream f(play_transcript);
        if (!f) throw std::runtime_error("cannot write transcript '" + play_transcript + "'");
        f << transcript_text(r);
      }
      std::printf("winner=%s turns=%d actions=%zu%s\n",
                  r.winner == 0 ? play_p0.c_str() : r.winner == 1 ? play_p1.c_str() : "tie",
                  r.turns, r.transcript.size(), r.forfeit ? " forfeit=1" : "");
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace cardevo
