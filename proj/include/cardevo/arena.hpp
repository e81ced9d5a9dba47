#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "cardevo/agents.hpp"
#include "cardevo/engine.hpp"
#include "cardevo/evolution.hpp"
#include "cardevo/parallel.hpp"

namespace cardevo {

// Pairwise win-rate statistics. The diagonal is undefined (NaN). Dispersion
// is the population standard deviation over per-draft win rates, drafts being
// the dominant variance source.
struct WinMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> mean;
  std::vector<std::vector<double>> stddev;
  std::vector<std::vector<int>> games;
  std::vector<double> global;
};

// cell(y, x) = win rate of best-of-generation y against best-of-generation x.
struct HeatmapGrid {
  std::vector<std::vector<double>> cells;
  std::size_t size() const { return cells.size(); }
};

// value[g] = average win rate of best-of-g against the bests of all
// generations of the same run (diagonal self-score included).
struct ProgressCurve {
  std::vector<double> values;
};

struct CumulativeTable {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;  // rows[round][agent]
};

namespace detail {

struct PairGame {
  int i, j, draft, round, side;
};

// Every pair plays `rounds` games per draft per side; the two sides of a
// (pair, draft, round) cell share one shuffle seed, which makes self-play
// exactly 0.5 and keeps cell(i,j) + cell(j,i) = 1.
struct PairwiseResults {
  std::vector<PairGame> games;
  std::vector<double> win_for_i;  // 1 / 0.5 / 0 from i's perspective
};

inline PairwiseResults run_pairwise_games(const CardSet& cards,
                                          const std::vector<const Agent*>& agents, int drafts,
                                          int rounds, std::uint64_t seed, bool include_diagonal,
                                          int workers) {
  const int n = static_cast<int>(agents.size());

  std::vector<DraftSequence> sequences;
  sequences.reserve(static_cast<std::size_t>(drafts));
  for (int d = 0; d < drafts; ++d)
    sequences.push_back(generate_draft(seed_combine(seed, seed_tag::kDraft, d), cards));

  // Decks are deterministic per (agent, draft); draft once.
  std::vector<std::vector<std::vector<int>>> decks(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a)
    for (int d = 0; d < drafts; ++d)
      decks[static_cast<std::size_t>(a)].push_back(draft_deck(
          cards, sequences[static_cast<std::size_t>(d)],
          [&](const CardTriple& t) { return agents[static_cast<std::size_t>(a)]->pick(t); }));

  PairwiseResults out;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      if (i == j && !include_diagonal) continue;
      for (int d = 0; d < drafts; ++d)
        for (int r = 0; r < rounds; ++r)
          for (int side = 0; side < 2; ++side) out.games.push_back({i, j, d, r, side});
    }

  out.win_for_i.resize(out.games.size());
  parallel_for(out.games.size(), workers, [&](std::size_t k) {
    const PairGame& g = out.games[k];
    std::uint64_t shuffle = seed_combine(seed, seed_tag::kGame, g.i, g.j, g.draft, g.round);
    const Agent* a0 = agents[static_cast<std::size_t>(g.side == 0 ? g.i : g.j)];
    const Agent* a1 = agents[static_cast<std::size_t>(g.side == 0 ? g.j : g.i)];
    const auto& d0 = decks[static_cast<std::size_t>(g.side == 0 ? g.i : g.j)]
                          [static_cast<std::size_t>(g.draft)];
    const auto& d1 = decks[static_cast<std::size_t>(g.side == 0 ? g.j : g.i)]
                          [static_cast<std::size_t>(g.draft)];
    MatchResult m = play_battle(cards, *a0, *a1, d0, d1, shuffle);
    double p0_win = m.winner == 0 ? 1.0 : m.winner == 1 ? 0.0 : 0.5;
    out.win_for_i[k] = g.side == 0 ? p0_win : 1.0 - p0_win;
  });
  return out;
}

inline double population_stddev(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  return std::sqrt(var / static_cast<double>(xs.size()));
}

}  // namespace detail

// Full round-robin tournament between labeled agents.
inline WinMatrix round_robin(const CardSet& cards, const std::vector<const Agent*>& agents,
                             const std::vector<std::string>& labels, int drafts, int rounds,
                             std::uint64_t seed, int workers = 1) {
  const int n = static_cast<int>(agents.size());
  if (n < 2) throw std::runtime_error("round_robin: need at least 2 agents");
  if (labels.size() != agents.size())
    throw std::runtime_error("round_robin: label count mismatch");
  {
    std::unordered_set<std::string> seen;
    for (const auto& l : labels)
      if (!seen.insert(l).second) throw std::runtime_error("round_robin: duplicate label '" + l + "'");
  }

  auto res = detail::run_pairwise_games(cards, agents, drafts, rounds, seed, false, workers);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  WinMatrix m;
  m.labels = labels;
  m.mean.assign(agents.size(), std::vector<double>(agents.size(), nan));
  m.stddev.assign(agents.size(), std::vector<double>(agents.size(), nan));
  m.games.assign(agents.size(), std::vector<int>(agents.size(), 0));
  m.global.assign(agents.size(), 0.0);

  // wins[i][j][d]: wins of i against j on draft d
  std::vector<std::vector<std::vector<double>>> wins(
      agents.size(), std::vector<std::vector<double>>(
                         agents.size(), std::vector<double>(static_cast<std::size_t>(drafts), 0.0)));
  for (std::size_t k = 0; k < res.games.size(); ++k) {
    const auto& g = res.games[k];
    wins[static_cast<std::size_t>(g.i)][static_cast<std::size_t>(g.j)]
        [static_cast<std::size_t>(g.draft)] += res.win_for_i[k];
  }

  const int games_per_pair = 2 * drafts * rounds;
  const int games_per_draft = 2 * rounds;
  for (int i = 0; i < n; ++i) {
    double total_wins = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto& w = i < j ? wins[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]
                            : wins[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
      std::vector<double> per_draft(static_cast<std::size_t>(drafts));
      double sum = 0.0;
      for (int d = 0; d < drafts; ++d) {
        double wi = i < j ? w[static_cast<std::size_t>(d)]
                          : games_per_draft - w[static_cast<std::size_t>(d)];
        per_draft[static_cast<std::size_t>(d)] = wi / games_per_draft;
        sum += wi;
      }
      m.mean[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = sum / games_per_pair;
      m.stddev[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          detail::population_stddev(per_draft);
      m.games[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = games_per_pair;
      total_wins += sum;
    }
    m.global[static_cast<std::size_t>(i)] =
        total_wins / (static_cast<double>(games_per_pair) * (n - 1));
  }
  return m;
}

// Cross-generation self-play grid over one run's best-of-generation genomes.
inline HeatmapGrid heatmap(const CardSet& cards, const std::vector<GenerationArchive>& archives,
                           int drafts, int rounds, std::uint64_t seed, int workers = 1) {
  if (archives.empty()) throw std::runtime_error("heatmap: no generation archives");
  std::vector<GenomeAgent> agents;
  agents.reserve(archives.size());
  for (const auto& a : archives) agents.emplace_back(a.best_genome(), cards);
  std::vector<const Agent*> ptrs;
  for (const auto& a : agents) ptrs.push_back(&a);

  auto res = detail::run_pairwise_games(cards, ptrs, drafts, rounds, seed, true, workers);

  const std::size_t n = agents.size();
  HeatmapGrid grid;
  grid.cells.assign(n, std::vector<double>(n, 0.0));
  std::vector<std::vector<double>> wins(n, std::vector<double>(n, 0.0));
  for (std::size_t k = 0; k < res.games.size(); ++k) {
    const auto& g = res.games[k];
    wins[static_cast<std::size_t>(g.i)][static_cast<std::size_t>(g.j)] += res.win_for_i[k];
  }
  const double games_per_pair = 2.0 * drafts * rounds;
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t x = y; x < n; ++x) {
      double rate = wins[y][x] / games_per_pair;
      grid.cells[y][x] = rate;
      grid.cells[x][y] = 1.0 - rate;
      if (x == y) grid.cells[y][y] = rate;  // exactly 0.5 by side-swapping
    }
  return grid;
}

inline ProgressCurve progress_curve(const CardSet& cards,
                                    const std::vector<GenerationArchive>& archives, int drafts,
                                    int rounds, std::uint64_t seed, int workers = 1) {
  HeatmapGrid grid = heatmap(cards, archives, drafts, rounds, seed, workers);
  ProgressCurve curve;
  curve.values.reserve(grid.size());
  for (const auto& row : grid.cells) {
    double sum = 0.0;
    for (double v : row) sum += v;
    curve.values.push_back(sum / static_cast<double>(row.size()));
  }
  return curve;
}

// Emits each agent's cumulative global win rate after every completed
// tournament round; the final row equals the round_robin averages.
inline CumulativeTable cumulative_rounds(const CardSet& cards,
                                         const std::vector<const Agent*>& agents,
                                         const std::vector<std::string>& labels, int drafts,
                                         int total_rounds, std::uint64_t seed, int workers = 1) {
  const int n = static_cast<int>(agents.size());
  if (n < 2) throw std::runtime_error("cumulative_rounds: need at least 2 agents");

  auto res = detail::run_pairwise_games(cards, agents, drafts, total_rounds, seed, false, workers);

  CumulativeTable table;
  table.labels = labels;
  std::vector<double> wins(agents.size(), 0.0);
  const double games_per_round = 2.0 * drafts * (n - 1);
  for (int r = 0; r < total_rounds; ++r) {
    for (std::size_t k = 0; k < res.games.size(); ++k) {
      if (res.games[k].round != r) continue;
      const auto& g = res.games[k];
      wins[static_cast<std::size_t>(g.i)] += res.win_for_i[k];
      wins[static_cast<std::size_t>(g.j)] += 1.0 - res.win_for_i[k];
    }
    std::vector<double> row(agents.size());
    for (std::size_t a = 0; a < agents.size(); ++a)
      row[a] = wins[a] / (games_per_round * (r + 1));
    table.rows.push_back(std::move(row));
  }
  return table;
}

// ---------------------------------------------------------------------------
// CSV export
// ---------------------------------------------------------------------------

namespace detail {

inline std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  return f;
}

}  // namespace detail

inline void export_csv(const WinMatrix& m, const std::string& path) {
  auto f = detail::open_out(path);
  f << "a,b,mean,std,games\n";
  for (std::size_t i = 0; i < m.labels.size(); ++i)
    for (std::size_t j = 0; j < m.labels.size(); ++j) {
      if (i == j) continue;
      f << m.labels[i] << ',' << m.labels[j] << ',' << detail::csv_number(m.mean[i][j]) << ','
        << detail::csv_number(m.stddev[i][j]) << ',' << m.games[i][j] << "\n";
    }
}

inline void export_csv(const HeatmapGrid& g, const std::string& path, bool gnuplot_matrix = false) {
  auto f = detail::open_out(path);
  if (gnuplot_matrix) {
    for (const auto& row : g.cells) {
      for (std::size_t x = 0; x < row.size(); ++x)
        f << (x ? " " : "") << detail::csv_number(row[x]);
      f << "\n";
    }
    return;
  }
  f << "gen";
  for (std::size_t x = 0; x < g.size(); ++x) f << ',' << x;
  f << "\n";
  for (std::size_t y = 0; y < g.size(); ++y) {
    f << y;
    for (std::size_t x = 0; x < g.size(); ++x) f << ',' << detail::csv_number(g.cells[y][x]);
    f << "\n";
  }
}

inline void export_csv(const ProgressCurve& c, const std::string& path) {
  auto f = detail::open_out(path);
  f << "generation,value\n";
  for (std::size_t g = 0; g < c.values.size(); ++g)
    f << g << ',' << detail::csv_number(c.values[g]) << "\n";
}

inline void export_csv(const CumulativeTable& t, const std::string& path) {
  auto f = detail::open_out(path);
  f << "round,agent,value\n";
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    for (std::size_t a = 0; a < t.labels.size(); ++a)
      f << (r + 1) << ',' << t.labels[a] << ',' << detail::csv_number(t.rows[r][a]) << "\n";
}

inline HeatmapGrid load_heatmap_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read '" + path + "'");
  HeatmapGrid g;
  std::string line;
  std::getline(f, line);  // header
  while (std::getline(f, line)) {
    if (detail::trim(line).empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string field;
    std::getline(ls, field, ',');  // row label
    while (std::getline(ls, field, ',')) row.push_back(std::stod(field));
    g.cells.push_back(std::move(row));
  }
  return g;
}

}  // namespace cardevo
