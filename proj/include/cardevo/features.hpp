#pragma once

#include <array>
#include <string>

#include "cardevo/game_state.hpp"

namespace cardevo {

constexpr int kStateFeatureCount = 12;
constexpr int kCardFeatureCount = 8;
constexpr int kFeatureCount = kStateFeatureCount + kCardFeatureCount;

// Gene/feature order: 12 state features (self block, then opponent block),
// followed by 8 card features. Keyword flags evaluate to 1.0 / 0.0.
enum class FeatureId : int {
  SelfCurrentMana = 0,
  SelfDeckSize,
  SelfHealth,
  SelfMaxMana,
  SelfDrawsNextTurn,
  SelfNextRune,
  OppCurrentMana,
  OppDeckSize,
  OppHealth,
  OppMaxMana,
  OppDrawsNextTurn,
  OppNextRune,
  CardAttack,
  CardDefense,
  CardBreakthrough,
  CardCharge,
  CardDrain,
  CardGuard,
  CardLethal,
  CardWard,
};

constexpr bool is_state_feature(FeatureId f) { return static_cast<int>(f) < kStateFeatureCount; }
constexpr bool is_card_feature(FeatureId f) { return !is_state_feature(f); }

// Index within the vector the feature is evaluated against: state features
// index a 12-vector, card features an 8-vector.
constexpr int feature_slot(FeatureId f) {
  int i = static_cast<int>(f);
  return is_state_feature(f) ? i : i - kStateFeatureCount;
}

inline const std::array<std::string, kFeatureCount>& feature_names() {
  static const std::array<std::string, kFeatureCount> names = {
      "self_current_mana", "self_deck_size", "self_health",     "self_max_mana",
      "self_draws_next_turn", "self_next_rune",
      "opp_current_mana",  "opp_deck_size",  "opp_health",      "opp_max_mana",
      "opp_draws_next_turn",  "opp_next_rune",
      "attack",            "defense",        "breakthrough",    "charge",
      "drain",             "guard",          "lethal",          "ward"};
  return names;
}

using StateFeatures = std::array<double, kStateFeatureCount>;
using CardFeatures = std::array<double, kCardFeatureCount>;

inline StateFeatures extract_state_features(const PlayerView& v) {
  return {static_cast<double>(v.own.current_mana),
          static_cast<double>(v.own.deck.size()),
          static_cast<double>(v.own.health),
          static_cast<double>(v.own.max_mana),
          static_cast<double>(v.own.draws_next_turn),
          static_cast<double>(v.own.next_rune),
          static_cast<double>(v.opponent.current_mana),
          static_cast<double>(v.opponent.deck_count),
          static_cast<double>(v.opponent.health),
          static_cast<double>(v.opponent.max_mana),
          static_cast<double>(v.opponent.draws_next_turn),
          static_cast<double>(v.opponent.next_rune)};
}

inline CardFeatures extract_card_features(const CreatureInstance& c) {
  return {static_cast<double>(c.attack),
          static_cast<double>(c.defense),
          c.has(kBreakthrough) ? 1.0 : 0.0,
          c.has(kCharge) ? 1.0 : 0.0,
          c.has(kDrain) ? 1.0 : 0.0,
          c.has(kGuard) ? 1.0 : 0.0,
          c.has(kLethal) ? 1.0 : 0.0,
          c.has(kWard) ? 1.0 : 0.0};
}

}  // namespace cardevo
