#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cardevo/cards.hpp"

namespace cardevo {

constexpr int kStartHealth = 30;
constexpr int kDeckSize = 30;
constexpr int kMaxMana = 12;
constexpr int kMaxHand = 8;
constexpr int kMaxBoard = 6;
constexpr int kTurnLimit = 50;  // rounds per player
constexpr int kFirstRune = 25;

struct CreatureInstance {
  int instance_id = 0;
  int card_id = 0;
  int attack = 0;
  int defense = 0;
  std::uint8_t keywords = 0;
  bool can_attack = false;   // false on the summon turn unless Charge
  bool has_attacked = false;

  bool has(Keyword k) const { return (keywords & k) != 0; }
  bool ready() const { return can_attack && !has_attacked; }
};

struct PlayerState {
  int health = kStartHealth;
  int max_mana = 0;
  int current_mana = 0;
  std::vector<int> deck;  // top of deck = back()
  std::vector<int> hand;  // card ids
  std::vector<CreatureInstance> board;
  int next_rune = kFirstRune;
  int draws_next_turn = 1;
  int cards_consumed = 0;  // drawn-and-played, discarded or burned; for the 30-card ledger
};

enum class Outcome : std::uint8_t { P0Win, P1Win, Tie };

struct GameState {
  PlayerState players[2];
  int turn_number = 0;  // round index; 1 on player 0's first turn
  int active_player = 0;
  std::uint64_t rng_seed = 0;  // shuffle seed this battle was started from
  std::optional<Outcome> outcome;
  int next_instance_id = 1;
  bool turn_in_progress = false;

  PlayerState& active() { return players[active_player]; }
  const PlayerState& active() const { return players[active_player]; }
  PlayerState& inactive() { return players[1 - active_player]; }
  const PlayerState& inactive() const { return players[1 - active_player]; }
  bool finished() const { return outcome.has_value(); }
};

// Targets for attacks and items. Creatures are addressed by instance id;
// kFaceTarget addresses the opposing player directly.
constexpr int kFaceTarget = -1;
constexpr int kNoTarget = -2;

enum class ActionType : std::uint8_t { Pass, Summon, UseItem, Attack };

struct Action {
  ActionType type = ActionType::Pass;
  int hand_index = -1;      // Summon / UseItem
  int attacker_id = -1;     // Attack: attacker instance id
  int target = kNoTarget;   // instance id, kFaceTarget, or kNoTarget

  static Action pass() { return {}; }
  static Action summon(int hand_index) {
    return {ActionType::Summon, hand_index, -1, kNoTarget};
  }
  static Action use_item(int hand_index, int target) {
    return {ActionType::UseItem, hand_index, -1, target};
  }
  static Action attack(int attacker_id, int target) {
    return {ActionType::Attack, -1, attacker_id, target};
  }

  friend auto operator<=>(const Action&, const Action&) = default;
};

inline std::string to_string(const Action& a) {
  switch (a.type) {
    case ActionType::Pass:
      return "PASS";
    case ActionType::Summon:
      return "SUMMON " + std::to_string(a.hand_index);
    case ActionType::UseItem:
      return "USE " + std::to_string(a.hand_index) + " " + std::to_string(a.target);
    case ActionType::Attack:
      return "ATTACK " + std::to_string(a.attacker_id) + " " + std::to_string(a.target);
  }
  return "?";
}

// What one player may legally know about the opponent: public counters and
// the board, but neither hand contents nor deck ordering.
struct OpponentView {
  int health = 0;
  int max_mana = 0;
  int current_mana = 0;
  int deck_count = 0;
  int hand_count = 0;
  int next_rune = 0;
  int draws_next_turn = 0;
  std::vector<CreatureInstance> board;
};

enum class TerminalView : std::uint8_t { Won, Lost, Tied };

struct PlayerView {
  PlayerState own;
  OpponentView opponent;
  int turn_number = 0;
  int which_player = 0;
  std::optional<TerminalView> terminal;
};

inline PlayerView view_of(const GameState& s, int player) {
  const PlayerState& me = s.players[player];
  const PlayerState& foe = s.players[1 - player];
  PlayerView v;
  v.own = me;
  v.opponent = OpponentView{foe.health,
                            foe.max_mana,
                            foe.current_mana,
                            static_cast<int>(foe.deck.size()),
                            static_cast<int>(foe.hand.size()),
                            foe.next_rune,
                            foe.draws_next_turn,
                            foe.board};
  v.turn_number = s.turn_number;
  v.which_player = player;
  if (s.outcome) {
    if (*s.outcome == Outcome::Tie)
      v.terminal = TerminalView::Tied;
    else if ((*s.outcome == Outcome::P0Win) == (player == 0))
      v.terminal = TerminalView::Won;
    else
      v.terminal = TerminalView::Lost;
  }
  return v;
}

}  // namespace cardevo
