#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "cardevo/agents.hpp"
#include "cardevo/engine.hpp"
#include "cardevo/genome.hpp"
#include "cardevo/genome_text.hpp"
#include "cardevo/parallel.hpp"
#include "cardevo/rng.hpp"

namespace cardevo {

// Seed-stream tags so the draft, game, breeding and init streams never
// collide.
namespace seed_tag {
constexpr std::uint64_t kDraft = 0xd4af7;
constexpr std::uint64_t kGame = 0x6a3e;
constexpr std::uint64_t kBreed = 0xb4eed;
constexpr std::uint64_t kInit = 0x1417;
}  // namespace seed_tag

enum class FitnessScheme : std::uint8_t { Progressive, FixedOpponent, BestOfPrevious };

inline std::string to_string(FitnessScheme s) {
  switch (s) {
    case FitnessScheme::Progressive: return "progressive";
    case FitnessScheme::FixedOpponent: return "fixed";
    case FitnessScheme::BestOfPrevious: return "best_of_previous";
  }
  return "?";
}

enum class InitMode : std::uint8_t { Random, FromLinear };

struct EvolutionConfig {
  Representation representation = Representation::Linear;
  FitnessScheme scheme = FitnessScheme::Progressive;
  std::string opponent;  // agent descriptor, FixedOpponent only
  int generations = 50;
  int population = 50;
  int elitism = 5;
  int drafts = 10;
  int rounds = 10;
  GenomeParams genome;
  std::uint64_t master_seed = 0;
  InitMode init = InitMode::Random;
  std::string init_genome_path;
  int init_mutations = 5;
  bool use_crossover = true;
  int tournament_size = 3;
  bool resample_drafts = false;  // fresh draft seeds every generation
  int workers = 1;

  void validate() const {
    auto bad = [](const std::string& why) { throw std::runtime_error("evolution config: " + why); };
    if (generations < 1) bad("generations must be >= 1");
    if (population < 1) bad("population must be >= 1");
    if (scheme != FitnessScheme::FixedOpponent && population < 2)
      bad("population must be >= 2 for in-population fitness");
    if (elitism < 0 || elitism >= population) bad("elitism must be in [0, population)");
    if (drafts < 1) bad("drafts must be >= 1");
    if (rounds < 1) bad("rounds must be >= 1");
    if (scheme == FitnessScheme::FixedOpponent && opponent.empty())
      bad("fixed scheme needs an opponent descriptor");
    if (init == InitMode::FromLinear && init_genome_path.empty())
      bad("from_linear init needs a genome path");
    if (tournament_size < 1) bad("tournament size must be >= 1");
    if (workers < 1) bad("workers must be >= 1");
    if (genome.mutation_rate < 0.0 || genome.mutation_rate > 1.0)
      bad("mutation rate must be in [0,1]");
  }
};

struct FitnessRecord {
  int genome_id = 0;
  double wins = 0.0;  // ties count 0.5
  int games = 0;
  double win_rate = 0.0;
};

struct GenerationArchive {
  int generation = 0;
  std::vector<Genome> genomes;
  std::vector<FitnessRecord> fitness;
  int best_id = 0;
  std::vector<std::uint64_t> draft_seeds;
  long long games_simulated = 0;

  const Genome& best_genome() const { return genomes[static_cast<std::size_t>(best_id)]; }
};

// ---------------------------------------------------------------------------
// Game-count accounting
// ---------------------------------------------------------------------------

// Distinct games run to evaluate one generation.
inline long long games_per_generation(FitnessScheme scheme, int population, int drafts, int rounds,
                                      int generation = 1) {
  const long long p = population;
  const long long d = drafts;
  const long long r = rounds;
  switch (scheme) {
    case FitnessScheme::Progressive:
      return p * (p - 1) * d * r;  // C(p,2) pairs, both sides
    case FitnessScheme::FixedOpponent:
      return p * 2 * d * p * r;
    case FitnessScheme::BestOfPrevious:
      // Generation 0 has no predecessor; it is scored in-population.
      return generation == 0 ? p * (p - 1) * d * r : p * 2 * d * p * r;
  }
  return 0;
}

// Games credited to each individual's record per generation.
inline long long games_per_individual(FitnessScheme scheme, int population, int drafts, int rounds,
                                      int generation = 1) {
  const long long p = population;
  const long long d = drafts;
  const long long r = rounds;
  switch (scheme) {
    case FitnessScheme::Progressive:
      return 2 * (p - 1) * d * r;
    case FitnessScheme::FixedOpponent:
      return 2 * d * p * r;
    case FitnessScheme::BestOfPrevious:
      return generation == 0 ? 2 * (p - 1) * d * r : 2 * d * p * r;
  }
  return 0;
}

// Closed-form total for a whole run; the executed-game counters must match
// this exactly.
inline long long count_games(const EvolutionConfig& cfg) {
  long long total = 0;
  for (int g = 0; g < cfg.generations; ++g)
    total += games_per_generation(cfg.scheme, cfg.population, cfg.drafts, cfg.rounds, g);
  return total;
}

// ---------------------------------------------------------------------------
// Fitness schemes
// ---------------------------------------------------------------------------

namespace detail {

struct DeckCache {
  // decks[individual][draft]
  std::vector<std::vector<std::vector<int>>> decks;

  DeckCache(const CardSet& cards, const std::vector<GenomeAgent>& agents,
            const std::vector<DraftSequence>& drafts) {
    decks.resize(agents.size());
    for (std::size_t i = 0; i < agents.size(); ++i) {
      decks[i].reserve(drafts.size());
      for (const auto& d : drafts)
        decks[i].push_back(
            draft_deck(cards, d, [&](const CardTriple& t) { return agents[i].pick(t); }));
    }
  }
};

inline std::vector<FitnessRecord> records_from_wins(const std::vector<double>& wins,
                                                    long long games_each) {
  std::vector<FitnessRecord> out(wins.size());
  for (std::size_t i = 0; i < wins.size(); ++i) {
    out[i].genome_id = static_cast<int>(i);
    out[i].wins = wins[i];
    out[i].games = static_cast<int>(games_each);
    out[i].win_rate = wins[i] / static_cast<double>(games_each);
  }
  return out;
}

}  // namespace detail

// In-population round robin: every ordered pair (i,j) plays `rounds` games on
// each shared draft with i as player 0. Mirrored orderings share the shuffle
// seed, so a population of identical genomes scores exactly 0.5.
inline std::vector<FitnessRecord> fitness_progressive(const CardSet& cards,
                                                      const std::vector<Genome>& pop,
                                                      const std::vector<DraftSequence>& drafts,
                                                      int rounds, std::uint64_t seed_base,
                                                      int workers,
                                                      long long* games_executed = nullptr) {
  const int n = static_cast<int>(pop.size());
  if (n < 2) throw std::runtime_error("fitness_progressive: population must have >= 2 members");

  std::vector<GenomeAgent> agents;
  agents.reserve(pop.size());
  for (const auto& g : pop) agents.emplace_back(g, cards);
  detail::DeckCache cache(cards, agents, drafts);

  struct Game {
    int p0, p1, draft, round;
  };
  std::vector<Game> games;
  games.reserve(static_cast<std::size_t>(n) * (n - 1) * drafts.size() * rounds);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int d = 0; d < static_cast<int>(drafts.size()); ++d)
        for (int r = 0; r < rounds; ++r) games.push_back({i, j, d, r});
    }

  std::vector<double> results(games.size());
  parallel_for(games.size(), workers, [&](std::size_t k) {
    const Game& g = games[k];
    const int lo = std::min(g.p0, g.p1);
    const int hi = std::max(g.p0, g.p1);
    std::uint64_t seed = seed_combine(seed_base, seed_tag::kGame, lo, hi, g.draft, g.round);
    MatchResult m = play_battle(cards, agents[g.p0], agents[g.p1], cache.decks[g.p0][g.draft],
                                cache.decks[g.p1][g.draft], seed);
    results[k] = m.winner == 0 ? 1.0 : m.winner == 1 ? 0.0 : 0.5;
  });

  std::vector<double> wins(pop.size(), 0.0);
  for (std::size_t k = 0; k < games.size(); ++k) {
    wins[static_cast<std::size_t>(games[k].p0)] += results[k];
    wins[static_cast<std::size_t>(games[k].p1)] += 1.0 - results[k];
  }
  if (games_executed) *games_executed += static_cast<long long>(games.size());

  const long long per = 2ll * (n - 1) * static_cast<long long>(drafts.size()) * rounds;
  return detail::records_from_wins(wins, per);
}

// Fixed-opponent scheme: every individual plays population x rounds games per
// draft per side against the same opponent. Side-swapped games share the
// shuffle seed.
inline std::vector<FitnessRecord> fitness_fixed(const CardSet& cards,
                                                const std::vector<Genome>& pop,
                                                const Agent& opponent,
                                                const std::vector<DraftSequence>& drafts,
                                                int rounds, std::uint64_t seed_base, int workers,
                                                long long* games_executed = nullptr) {
  const int n = static_cast<int>(pop.size());
  if (n < 1) throw std::runtime_error("fitness_fixed: population is empty");

  std::vector<GenomeAgent> agents;
  agents.reserve(pop.size());
  for (const auto& g : pop) agents.emplace_back(g, cards);
  detail::DeckCache cache(cards, agents, drafts);

  std::vector<std::vector<int>> opp_decks;
  opp_decks.reserve(drafts.size());
  for (const auto& d : drafts)
    opp_decks.push_back(draft_deck(cards, d, [&](const CardTriple& t) { return opponent.pick(t); }));

  const int repeats = n * rounds;  // population x rounds per draft per side
  struct Game {
    int ind, draft, repeat, side;
  };
  std::vector<Game> games;
  games.reserve(static_cast<std::size_t>(n) * drafts.size() * repeats * 2);
  for (int i = 0; i < n; ++i)
    for (int d = 0; d < static_cast<int>(drafts.size()); ++d)
      for (int k = 0; k < repeats; ++k)
        for (int side = 0; side < 2; ++side) games.push_back({i, d, k, side});

  std::vector<double> results(games.size());
  parallel_for(games.size(), workers, [&](std::size_t idx) {
    const Game& g = games[idx];
    std::uint64_t seed = seed_combine(seed_base, seed_tag::kGame, g.ind, g.draft, g.repeat);
    MatchResult m;
    if (g.side == 0)
      m = play_battle(cards, agents[g.ind], opponent, cache.decks[g.ind][g.draft],
                      opp_decks[g.draft], seed);
    else
      m = play_battle(cards, opponent, agents[g.ind], opp_decks[g.draft],
                      cache.decks[g.ind][g.draft], seed);
    const int me = g.side;  // the individual's seat
    results[idx] = m.winner == me ? 1.0 : m.winner == 2 ? 0.5 : 0.0;
  });

  std::vector<double> wins(pop.size(), 0.0);
  for (std::size_t idx = 0; idx < games.size(); ++idx)
    wins[static_cast<std::size_t>(games[idx].ind)] += results[idx];
  if (games_executed) *games_executed += static_cast<long long>(games.size());

  const long long per = 2ll * static_cast<long long>(drafts.size()) * n * rounds;
  return detail::records_from_wins(wins, per);
}

// ---------------------------------------------------------------------------
// Population initialization
// ---------------------------------------------------------------------------

inline std::vector<Genome> init_random(Representation repr, const GenomeParams& params, int count,
                                       Rng& rng) {
  std::vector<Genome> pop;
  pop.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) pop.push_back(random_genome(repr, params, rng));
  return pop;
}

// Bootstraps a population from a pre-evolved linear genome: translate when
// the target is a tree representation, then mutate each copy n times.
inline std::vector<Genome> init_from_linear(const std::string& path, Representation target,
                                            int n_mutations, const GenomeParams& params, int count,
                                            Rng& rng) {
  Genome loaded = load_genome(path);
  const auto* lin = std::get_if<LinearGenome>(&loaded.value);
  if (!lin)
    throw std::runtime_error("init_from_linear: '" + path + "' holds a " +
                             to_string(loaded.repr()) + " genome, expected linear");
  Genome base = translate_linear(*lin, target);
  std::vector<Genome> pop;
  pop.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Genome g = base;
    for (int m = 0; m < n_mutations; ++m) g = mutate(g, params, rng);
    g.origin = GenomeOrigin::FromLinear;
    pop.push_back(std::move(g));
  }
  return pop;
}

// ---------------------------------------------------------------------------
// Archive persistence
// ---------------------------------------------------------------------------

namespace detail {

inline std::string gen_dir_name(int generation) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "gen_%03d", generation);
  return buf;
}

}  // namespace detail

inline void save_archive(const std::string& run_dir, const GenerationArchive& a) {
  namespace fs = std::filesystem;
  fs::path dir = fs::path(run_dir) / detail::gen_dir_name(a.generation);
  fs::create_directories(dir);

  std::ofstream genomes(dir / "genomes.txt");
  if (!genomes) throw std::runtime_error("cannot write " + (dir / "genomes.txt").string());
  for (const auto& g : a.genomes) genomes << serialize_genome(g) << "\n";

  std::ofstream fit(dir / "fitness.csv");
  fit << "id,wins,games,win_rate\n";
  char buf[64];
  for (const auto& r : a.fitness) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%d,%.17g\n", r.genome_id, r.wins, r.games, r.win_rate);
    fit << buf;
  }

  std::ofstream meta(dir / "meta.txt");
  meta << "generation = " << a.generation << "\n";
  meta << "best = " << a.best_id << "\n";
  meta << "games = " << a.games_simulated << "\n";
  meta << "draft_seeds =";
  for (auto s : a.draft_seeds) meta << " " << s;
  meta << "\n";
}

inline GenerationArchive load_archive(const std::string& run_dir, int generation) {
  namespace fs = std::filesystem;
  fs::path dir = fs::path(run_dir) / detail::gen_dir_name(generation);
  GenerationArchive a;
  a.generation = generation;

  std::ifstream genomes(dir / "genomes.txt");
  if (!genomes) throw std::runtime_error("cannot read " + (dir / "genomes.txt").string());
  std::string line;
  while (std::getline(genomes, line)) {
    if (detail::trim(line).empty()) continue;
    a.genomes.push_back(parse_genome(line));
  }

  std::ifstream fit(dir / "fitness.csv");
  if (!fit) throw std::runtime_error("cannot read " + (dir / "fitness.csv").string());
  std::getline(fit, line);  // header
  while (std::getline(fit, line)) {
    if (detail::trim(line).empty()) continue;
    FitnessRecord r;
    std::istringstream ls(line);
    std::string field;
    std::getline(ls, field, ',');
    r.genome_id = std::stoi(field);
    std::getline(ls, field, ',');
    r.wins = std::stod(field);
    std::getline(ls, field, ',');
    r.games = std::stoi(field);
    std::getline(ls, field, ',');
    r.win_rate = std::stod(field);
    a.fitness.push_back(r);
  }

  std::ifstream meta(dir / "meta.txt");
  if (!meta) throw std::runtime_error("cannot read " + (dir / "meta.txt").string());
  while (std::getline(meta, line)) {
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = detail::trim(line.substr(0, eq));
    std::string val = detail::trim(line.substr(eq + 1));
    if (key == "best") a.best_id = std::stoi(val);
    if (key == "games") a.games_simulated = std::stoll(val);
    if (key == "draft_seeds") {
      std::istringstream ss(val);
      std::uint64_t s;
      while (ss >> s) a.draft_seeds.push_back(s);
    }
  }
  return a;
}

inline std::vector<GenerationArchive> load_run(const std::string& run_dir) {
  namespace fs = std::filesystem;
  std::vector<GenerationArchive> archives;
  for (int g = 0;; ++g) {
    if (!fs::exists(fs::path(run_dir) / detail::gen_dir_name(g))) break;
    archives.push_back(load_archive(run_dir, g));
  }
  if (archives.empty())
    throw std::runtime_error("no generation archives under '" + run_dir + "'");
  return archives;
}

// ---------------------------------------------------------------------------
// The generational loop
// ---------------------------------------------------------------------------

using GenerationCallback = std::function<void(const GenerationArchive&)>;

namespace detail {

inline std::vector<int> fitness_ranking(const std::vector<FitnessRecord>& fitness) {
  std::vector<int> order(fitness.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& fa = fitness[static_cast<std::size_t>(a)];
    const auto& fb = fitness[static_cast<std::size_t>(b)];
    if (fa.win_rate != fb.win_rate) return fa.win_rate > fb.win_rate;
    return a < b;
  });
  return order;
}

inline int tournament_select(const std::vector<FitnessRecord>& fitness, int size, Rng& rng) {
  int best = -1;
  for (int k = 0; k < size; ++k) {
    int cand = static_cast<int>(rng.below(static_cast<std::uint32_t>(fitness.size())));
    if (best < 0 ||
        fitness[static_cast<std::size_t>(cand)].win_rate >
            fitness[static_cast<std::size_t>(best)].win_rate ||
        (fitness[static_cast<std::size_t>(cand)].win_rate ==
             fitness[static_cast<std::size_t>(best)].win_rate &&
         cand < best))
      best = cand;
  }
  return best;
}

}  // namespace detail

// Runs the full generational GA. Deterministic for a fixed config and master
// seed, independent of the worker count. When out_dir is nonempty every
// generation archive is persisted as soon as it is complete.
inline std::vector<GenerationArchive> evolve(const EvolutionConfig& cfg, const CardSet& cards,
                                             const std::string& out_dir = "",
                                             const GenerationCallback& on_generation = {}) {
  cfg.validate();

  // Fail before any simulation if the bootstrap file is unreadable.
  std::vector<Genome> population;
  {
    Rng init_rng(seed_combine(cfg.master_seed, seed_tag::kInit));
    if (cfg.init == InitMode::FromLinear)
      population = init_from_linear(cfg.init_genome_path, cfg.representation, cfg.init_mutations,
                                    cfg.genome, cfg.population, init_rng);
    else
      population = init_random(cfg.representation, cfg.genome, cfg.population, init_rng);
  }

  std::unique_ptr<Agent> fixed_opponent;
  if (cfg.scheme == FitnessScheme::FixedOpponent)
    fixed_opponent = make_agent(cfg.opponent, cards, seed_combine(cfg.master_seed, 0x0bb));

  std::vector<GenerationArchive> archives;
  archives.reserve(static_cast<std::size_t>(cfg.generations));

  for (int gen = 0; gen < cfg.generations; ++gen) {
    // Draft seeds are fixed across generations by default so fitness stays
    // comparable between generations.
    std::vector<DraftSequence> drafts;
    std::vector<std::uint64_t> draft_seeds;
    for (int d = 0; d < cfg.drafts; ++d) {
      std::uint64_t s =
          seed_combine(cfg.master_seed, seed_tag::kDraft, cfg.resample_drafts ? gen : 0, d);
      draft_seeds.push_back(s);
      drafts.push_back(generate_draft(s, cards));
    }

    long long executed = 0;
    std::uint64_t seed_base = seed_combine(cfg.master_seed, 0xf17, gen);
    std::vector<FitnessRecord> fitness;
    switch (cfg.scheme) {
      case FitnessScheme::Progressive:
        fitness = fitness_progressive(cards, population, drafts, cfg.rounds, seed_base,
                                      cfg.workers, &executed);
        break;
      case FitnessScheme::FixedOpponent:
        fitness = fitness_fixed(cards, population, *fixed_opponent, drafts, cfg.rounds, seed_base,
                                cfg.workers, &executed);
        break;
      case FitnessScheme::BestOfPrevious:
        if (gen == 0) {
          fitness = fitness_progressive(cards, population, drafts, cfg.rounds, seed_base,
                                        cfg.workers, &executed);
        } else {
          GenomeAgent previous_best(archives.back().best_genome(), cards);
          fitness = fitness_fixed(cards, population, previous_best, drafts, cfg.rounds, seed_base,
                                  cfg.workers, &executed);
        }
        break;
    }

    GenerationArchive archive;
    archive.generation = gen;
    archive.genomes = population;
    archive.fitness = fitness;
    archive.best_id = detail::fitness_ranking(fitness)[0];
    archive.draft_seeds = draft_seeds;
    archive.games_simulated = executed;
    if (!out_dir.empty()) save_archive(out_dir, archive);
    archives.push_back(std::move(archive));
    if (on_generation) on_generation(archives.back());

    if (gen + 1 == cfg.generations) break;

    // Breed the next generation: elites carried unchanged, the rest from
    // tournament-selected parents.
    std::vector<int> ranking = detail::fitness_ranking(fitness);
    std::vector<Genome> next;
    next.reserve(population.size());
    for (int e = 0; e < cfg.elitism; ++e)
      next.push_back(population[static_cast<std::size_t>(ranking[static_cast<std::size_t>(e)])]);

    Rng breed_rng(seed_combine(cfg.master_seed, seed_tag::kBreed, gen));
    while (static_cast<int>(next.size()) < cfg.population) {
      int pa = detail::tournament_select(fitness, cfg.tournament_size, breed_rng);
      Genome child;
      if (cfg.use_crossover) {
        int pb = detail::tournament_select(fitness, cfg.tournament_size, breed_rng);
        child = crossover(population[static_cast<std::size_t>(pa)],
                          population[static_cast<std::size_t>(pb)], cfg.genome, breed_rng);
      } else {
        child = population[static_cast<std::size_t>(pa)];
      }
      child = mutate(child, cfg.genome, breed_rng);
      child.generation = gen + 1;
      next.push_back(std::move(child));
    }
    population = std::move(next);
  }
  return archives;
}

}  // namespace cardevo
