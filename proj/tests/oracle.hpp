#pragma once

// Test-only oracle: an independent, naive re-implementation of the composite
// state evaluation and the one-ply argmax. It shares the engine (legality and
// action application) with the production path but nothing of the evaluation
// composition, feature assembly or tree folding.

#include <numeric>
#include <vector>

#include "cardevo/engine.hpp"
#include "cardevo/genome.hpp"

namespace oracle {

inline double fold(const cardevo::ExprNode& n, const std::vector<double>& feats) {
  using cardevo::ExprOp;
  std::vector<double> vals;
  vals.reserve(n.children.size());
  for (const auto& ch : n.children) vals.push_back(fold(ch, feats));
  switch (n.op) {
    case ExprOp::Constant:
      return n.value;
    case ExprOp::Feature:
      return feats.at(static_cast<std::size_t>(cardevo::feature_slot(n.feature)));
    case ExprOp::Add:
      return std::accumulate(vals.begin(), vals.end(), 0.0);
    case ExprOp::Mul:
      return std::accumulate(vals.begin(), vals.end(), 1.0, std::multiplies<double>());
    case ExprOp::Sub:
      return vals.at(0) - vals.at(1);
    case ExprOp::Max:
      return *std::max_element(vals.begin(), vals.end());
    case ExprOp::Min:
      return *std::min_element(vals.begin(), vals.end());
    case ExprOp::Neg:
      return -vals.at(0);
  }
  return 0.0;
}

inline std::vector<double> state_features(const cardevo::PlayerView& v) {
  return {1.0 * v.own.current_mana,      1.0 * static_cast<double>(v.own.deck.size()),
          1.0 * v.own.health,            1.0 * v.own.max_mana,
          1.0 * v.own.draws_next_turn,   1.0 * v.own.next_rune,
          1.0 * v.opponent.current_mana, 1.0 * v.opponent.deck_count,
          1.0 * v.opponent.health,       1.0 * v.opponent.max_mana,
          1.0 * v.opponent.draws_next_turn, 1.0 * v.opponent.next_rune};
}

inline std::vector<double> card_features(const cardevo::CreatureInstance& c) {
  using namespace cardevo;
  return {1.0 * c.attack,
          1.0 * c.defense,
          c.has(kBreakthrough) ? 1.0 : 0.0,
          c.has(kCharge) ? 1.0 : 0.0,
          c.has(kDrain) ? 1.0 : 0.0,
          c.has(kGuard) ? 1.0 : 0.0,
          c.has(kLethal) ? 1.0 : 0.0,
          c.has(kWard) ? 1.0 : 0.0};
}

inline double eval_card(const cardevo::Genome& g, const std::vector<double>& cf) {
  using namespace cardevo;
  if (const auto* lin = std::get_if<LinearGenome>(&g.value)) {
    double s = 0.0;
    for (int i = 0; i < kCardFeatureCount; ++i)
      s += lin->weights.at(static_cast<std::size_t>(kStateFeatureCount + i)) *
           cf.at(static_cast<std::size_t>(i));
    return s;
  }
  if (const auto* bt = std::get_if<BinaryTreeGenome>(&g.value)) return fold(bt->card_tree, cf);
  return fold(std::get<TreeGenome>(g.value).card_tree, cf);
}

inline double evaluate(const cardevo::Genome& g, const cardevo::PlayerView& v) {
  using namespace cardevo;
  if (v.terminal) {
    if (*v.terminal == TerminalView::Won) return std::numeric_limits<double>::infinity();
    if (*v.terminal == TerminalView::Lost) return -std::numeric_limits<double>::infinity();
    return 0.0;
  }
  std::vector<double> sf = state_features(v);
  double total;
  if (const auto* lin = std::get_if<LinearGenome>(&g.value)) {
    total = 0.0;
    for (int i = 0; i < kStateFeatureCount; ++i)
      total += lin->weights.at(static_cast<std::size_t>(i)) * sf.at(static_cast<std::size_t>(i));
  } else if (const auto* bt = std::get_if<BinaryTreeGenome>(&g.value)) {
    total = fold(bt->state_tree, sf);
  } else {
    total = fold(std::get<TreeGenome>(g.value).state_tree, sf);
  }
  for (const auto& c : v.own.board) total += eval_card(g, card_features(c));
  for (const auto& c : v.opponent.board) total -= eval_card(g, card_features(c));
  return total;
}

// Naive exhaustive one-step argmax, same contract as genome_act.
inline cardevo::Action act(const cardevo::Genome& g, const cardevo::PlayerView& v,
                           const cardevo::CardSet& cards) {
  using namespace cardevo;
  GameState base = determinize(v);
  Action chosen = Action::pass();
  double best = oracle::evaluate(g, v);
  for (const Action& a : legal_actions(base, cards)) {
    if (a.type == ActionType::Pass) continue;
    GameState next = base;
    apply_action_in_place(next, cards, a);
    double value = oracle::evaluate(g, view_of(next, v.which_player));
    if (value > best) {
      best = value;
      chosen = a;
    }
  }
  return chosen;
}

}  // namespace oracle
