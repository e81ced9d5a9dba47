#pragma once

#include <string>
#include <vector>

#include "cardevo/agents.hpp"
#include "cardevo/engine.hpp"
#include "cardevo/genome.hpp"

namespace testutil {

inline const cardevo::CardSet& shipped_cards() {
  static cardevo::CardSet cs = cardevo::load_cardset_file(std::string(CARDEVO_DATA_DIR) + "/cards.txt");
  return cs;
}

// A minimal hand-built battle state: both players mid-game, ready to act.
// Tests mutate it to set up specific rules situations.
inline cardevo::GameState blank_battle(int active = 0) {
  cardevo::GameState s;
  for (auto& p : s.players) {
    p.health = 30;
    p.max_mana = 5;
    p.current_mana = 5;
    p.deck = {1, 2, 3, 4, 5};
    p.hand = {};
    p.next_rune = 25;
    p.draws_next_turn = 1;
  }
  s.turn_number = 5;
  s.active_player = active;
  s.turn_in_progress = true;
  s.next_instance_id = 100;
  return s;
}

inline cardevo::CreatureInstance creature(int instance_id, int attack, int defense,
                                          std::uint8_t keywords = 0, bool ready = true) {
  cardevo::CreatureInstance c;
  c.instance_id = instance_id;
  c.card_id = 3;  // vanilla creature; stats are overridden per instance
  c.attack = attack;
  c.defense = defense;
  c.keywords = keywords;
  c.can_attack = ready;
  c.has_attacked = false;
  return c;
}

// Plays seeded random-vs-random games and snapshots the active player's view
// at every decision point. Terminal views are excluded.
inline std::vector<cardevo::PlayerView> reachable_views(int games, std::uint64_t seed,
                                                        int max_views = 100000) {
  const auto& cards = shipped_cards();
  std::vector<cardevo::PlayerView> views;
  for (int g = 0; g < games; ++g) {
    cardevo::RandomAgent a0(cardevo::seed_combine(seed, g, 0), cards);
    cardevo::RandomAgent a1(cardevo::seed_combine(seed, g, 1), cards);
    const cardevo::Agent* agents[2] = {&a0, &a1};
    auto draft = cardevo::generate_draft(cardevo::seed_combine(seed, 0xd, g), cards);
    std::vector<int> decks[2];
    for (int i = 0; i < 2; ++i)
      decks[i] = cardevo::draft_deck(cards, draft, [&](const cardevo::CardTriple& t) {
        return agents[i]->pick(t);
      });
    auto s = cardevo::init_battle(cards, decks[0], decks[1], cardevo::seed_combine(seed, 0xb, g));
    cardevo::start_turn(s);
    while (!s.outcome) {
      const int player = s.active_player;
      views.push_back(cardevo::view_of(s, player));
      if (static_cast<int>(views.size()) >= max_views) return views;
      cardevo::Action a = agents[player]->act(cardevo::view_of(s, player));
      cardevo::apply_action_in_place(s, cards, a);
    }
  }
  return views;
}

}  // namespace testutil
