#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cardevo/agent.hpp"
#include "cardevo/cards.hpp"
#include "cardevo/game_state.hpp"
#include "cardevo/rng.hpp"

namespace cardevo {

// ---------------------------------------------------------------------------
// Draft phase
// ---------------------------------------------------------------------------

struct DraftSequence {
  std::uint64_t seed = 0;
  std::array<std::array<int, 3>, kDeckSize> triples{};  // card ids
};

// 30 triples sampled without replacement within each triple (the same card
// may reappear in later triples). Both players of a match see the same
// sequence; picks stay secret.
inline DraftSequence generate_draft(std::uint64_t seed, const CardSet& cards) {
  const std::size_t n = cards.size();
  if (n < 3) throw std::runtime_error("generate_draft: need at least 3 cards");
  DraftSequence draft;
  draft.seed = seed;
  Rng rng(mix64(seed));
  std::vector<int> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = cards.cards()[i].id;
  for (auto& triple : draft.triples) {
    for (int k = 0; k < 3; ++k) {
      std::uint32_t j = k + rng.below(static_cast<std::uint32_t>(n - k));
      std::swap(pool[k], pool[j]);
      triple[k] = pool[k];
    }
  }
  return draft;
}

inline CardTriple resolve_triple(const CardSet& cards, const std::array<int, 3>& ids) {
  return {&cards.by_id(ids[0]), &cards.by_id(ids[1]), &cards.by_id(ids[2])};
}

// Runs a picker over the sequence; picker must return 0, 1 or 2.
inline std::vector<int> draft_deck(const CardSet& cards, const DraftSequence& draft,
                                   const std::function<int(const CardTriple&)>& picker) {
  std::vector<int> deck;
  deck.reserve(kDeckSize);
  for (const auto& ids : draft.triples) {
    int choice = picker(resolve_triple(cards, ids));
    if (choice < 0 || choice > 2)
      throw std::runtime_error("draft_deck: picker returned " + std::to_string(choice) +
                               ", expected 0..2");
    deck.push_back(ids[static_cast<std::size_t>(choice)]);
  }
  return deck;
}

// ---------------------------------------------------------------------------
// Battle phase
// ---------------------------------------------------------------------------

namespace detail {

// Health loss with rune resolution: every threshold the health falls strictly
// below grants +1 draw next turn and advances the rune.
inline void lose_health(PlayerState& p, int amount) {
  if (amount <= 0) return;
  p.health -= amount;
  while (p.next_rune > 0 && p.health < p.next_rune) {
    p.next_rune -= 5;
    p.draws_next_turn += 1;
  }
}

inline void gain_health(PlayerState& p, int amount) {
  if (amount > 0) p.health += amount;
}

inline void apply_hp_delta(PlayerState& p, int delta) {
  if (delta >= 0)
    gain_health(p, delta);
  else
    lose_health(p, -delta);
}

// Draws one card; handles hand-cap burn and empty-deck fatigue.
inline void draw_card(PlayerState& p) {
  if (p.deck.empty()) {
    lose_health(p, 1);  // fatigue
    return;
  }
  int id = p.deck.back();
  p.deck.pop_back();
  if (static_cast<int>(p.hand.size()) >= kMaxHand) {
    p.cards_consumed += 1;  // burned
  } else {
    p.hand.push_back(id);
  }
}

inline CreatureInstance* find_creature(PlayerState& p, int instance_id) {
  for (auto& c : p.board)
    if (c.instance_id == instance_id) return &c;
  return nullptr;
}

inline void remove_creature(PlayerState& p, int instance_id) {
  std::erase_if(p.board, [&](const CreatureInstance& c) { return c.instance_id == instance_id; });
}

// Non-combat damage instance to a creature (red/blue items). Ward absorbs the
// instance. Returns true if the creature died.
inline bool damage_creature(CreatureInstance& c, int amount) {
  if (amount <= 0) return false;
  if (c.has(kWard)) {
    c.keywords &= static_cast<std::uint8_t>(~kWard);
    return false;
  }
  c.defense -= amount;
  return c.defense <= 0;
}

inline bool enemy_has_guard(const PlayerState& enemy) {
  return std::any_of(enemy.board.begin(), enemy.board.end(),
                     [](const CreatureInstance& c) { return c.has(kGuard); });
}

inline void check_outcome_after_action(GameState& s) {
  if (s.outcome) return;
  const bool own_dead = s.active().health <= 0;
  const bool enemy_dead = s.inactive().health <= 0;
  if (enemy_dead) {
    s.outcome = s.active_player == 0 ? Outcome::P0Win : Outcome::P1Win;  // active wins ties
  } else if (own_dead) {
    s.outcome = s.active_player == 0 ? Outcome::P1Win : Outcome::P0Win;
  }
}

}  // namespace detail

// Begins the active player's turn: mana growth, board refresh, card draws,
// and (for player 0) the round counter with its 50-round limit.
inline void start_turn(GameState& s) {
  if (s.outcome) throw std::logic_error("start_turn: game is finished");
  if (s.turn_in_progress) throw std::logic_error("start_turn: turn already in progress");

  if (s.active_player == 0) {
    s.turn_number += 1;
    if (s.turn_number > kTurnLimit) {
      const int h0 = s.players[0].health;
      const int h1 = s.players[1].health;
      s.outcome = h0 > h1 ? Outcome::P0Win : h1 > h0 ? Outcome::P1Win : Outcome::Tie;
      return;
    }
  }

  PlayerState& p = s.active();
  p.max_mana = std::min(kMaxMana, p.max_mana + 1);
  p.current_mana = p.max_mana;
  for (auto& c : p.board) {
    c.can_attack = true;
    c.has_attacked = false;
  }

  const int draws = p.draws_next_turn;
  p.draws_next_turn = 1;  // rune breaks during the draws accumulate for next turn
  for (int i = 0; i < draws; ++i) detail::draw_card(p);

  if (p.health <= 0) {
    s.outcome = s.active_player == 0 ? Outcome::P1Win : Outcome::P0Win;
    return;
  }
  s.turn_in_progress = true;
}

// Deterministic battle setup: seeded shuffles, 4/5 opening hands, turn 0
// pending the first start_turn.
inline GameState init_battle(const CardSet& cards, const std::vector<int>& deck0,
                             const std::vector<int>& deck1, std::uint64_t shuffle_seed) {
  GameState s;
  s.rng_seed = shuffle_seed;
  const std::vector<int>* decks[2] = {&deck0, &deck1};
  for (int i = 0; i < 2; ++i) {
    if (decks[i]->size() != kDeckSize)
      throw std::runtime_error("init_battle: deck " + std::to_string(i) + " has " +
                               std::to_string(decks[i]->size()) + " cards, expected 30");
    for (int id : *decks[i])
      if (!cards.contains(id) ) throw std::runtime_error("init_battle: unknown card id " + std::to_string(id));
    s.players[i].deck = *decks[i];
    Rng rng(seed_combine(shuffle_seed, i));
    rng.shuffle(s.players[i].deck);
  }
  for (int i = 0; i < 4; ++i) detail::draw_card(s.players[0]);
  for (int i = 0; i < 5; ++i) detail::draw_card(s.players[1]);  // second-player compensation
  return s;
}

// All actions the active player may take right now, in a fixed enumeration
// order: Pass, summons by hand index, item plays by hand index then target,
// attacks by board index then target (face before creatures; Guards narrow
// the target set while any are alive).
inline std::vector<Action> legal_actions(const GameState& s, const CardSet& cards) {
  if (s.outcome) throw std::logic_error("legal_actions: game is finished");
  if (!s.turn_in_progress) throw std::logic_error("legal_actions: no turn in progress");

  const PlayerState& me = s.active();
  const PlayerState& foe = s.inactive();
  std::vector<Action> out;
  out.push_back(Action::pass());

  for (int h = 0; h < static_cast<int>(me.hand.size()); ++h) {
    const Card& c = cards.by_id(me.hand[static_cast<std::size_t>(h)]);
    if (c.cost > me.current_mana) continue;
    switch (c.kind) {
      case CardKind::Creature:
        if (static_cast<int>(me.board.size()) < kMaxBoard) out.push_back(Action::summon(h));
        break;
      case CardKind::GreenItem:
        for (const auto& t : me.board) out.push_back(Action::use_item(h, t.instance_id));
        break;
      case CardKind::RedItem:
        for (const auto& t : foe.board) out.push_back(Action::use_item(h, t.instance_id));
        break;
      case CardKind::BlueItem:
        out.push_back(Action::use_item(h, kFaceTarget));
        for (const auto& t : foe.board) out.push_back(Action::use_item(h, t.instance_id));
        break;
    }
  }

  const bool guarded = detail::enemy_has_guard(foe);
  for (const auto& a : me.board) {
    if (!a.ready()) continue;
    if (guarded) {
      for (const auto& t : foe.board)
        if (t.has(kGuard)) out.push_back(Action::attack(a.instance_id, t.instance_id));
    } else {
      out.push_back(Action::attack(a.instance_id, kFaceTarget));
      for (const auto& t : foe.board) out.push_back(Action::attack(a.instance_id, t.instance_id));
    }
  }
  return out;
}

namespace detail {

inline void validate_action(const GameState& s, const CardSet& cards, const Action& a) {
  auto fail = [&](const std::string& why) {
    throw std::runtime_error("illegal action " + to_string(a) + ": " + why);
  };
  const PlayerState& me = s.active();
  const PlayerState& foe = s.inactive();
  switch (a.type) {
    case ActionType::Pass:
      return;
    case ActionType::Summon: {
      if (a.hand_index < 0 || a.hand_index >= static_cast<int>(me.hand.size()))
        fail("hand index out of range");
      const Card& c = cards.by_id(me.hand[static_cast<std::size_t>(a.hand_index)]);
      if (c.kind != CardKind::Creature) fail("not a creature");
      if (c.cost > me.current_mana) fail("not enough mana");
      if (static_cast<int>(me.board.size()) >= kMaxBoard) fail("board is full");
      return;
    }
    case ActionType::UseItem: {
      if (a.hand_index < 0 || a.hand_index >= static_cast<int>(me.hand.size()))
        fail("hand index out of range");
      const Card& c = cards.by_id(me.hand[static_cast<std::size_t>(a.hand_index)]);
      if (c.kind == CardKind::Creature) fail("not an item");
      if (c.cost > me.current_mana) fail("not enough mana");
      if (c.kind == CardKind::GreenItem) {
        if (a.target == kFaceTarget) fail("green item cannot target a face");
        bool found = false;
        for (const auto& t : me.board) found |= t.instance_id == a.target;
        if (!found) fail("green item target is not an own creature");
      } else {
        if (a.target == kFaceTarget) {
          if (c.kind == CardKind::RedItem) fail("red item cannot target a face");
          return;
        }
        bool found = false;
        for (const auto& t : foe.board) found |= t.instance_id == a.target;
        if (!found) fail("item target is not an enemy creature");
      }
      return;
    }
    case ActionType::Attack: {
      const CreatureInstance* attacker = nullptr;
      for (const auto& c : me.board)
        if (c.instance_id == a.attacker_id) attacker = &c;
      if (!attacker) fail("attacker is not on the board");
      if (!attacker->ready()) fail("attacker cannot attack");
      const bool guarded = enemy_has_guard(foe);
      if (a.target == kFaceTarget) {
        if (guarded) fail("a Guard is in the way");
        return;
      }
      const CreatureInstance* target = nullptr;
      for (const auto& c : foe.board)
        if (c.instance_id == a.target) target = &c;
      if (!target) fail("attack target is not an enemy creature");
      if (guarded && !target->has(kGuard)) fail("a Guard is in the way");
      return;
    }
  }
  fail("unknown action type");
}

// Effects every card play shares: hp deltas and the next-turn draw bonus.
inline void apply_play_effects(GameState& s, const Card& c) {
  apply_hp_delta(s.active(), c.player_hp_delta);
  apply_hp_delta(s.inactive(), c.enemy_hp_delta);
  s.active().draws_next_turn = std::max(1, s.active().draws_next_turn + c.card_draw);
}

inline void resolve_combat(GameState& s, CreatureInstance& attacker, CreatureInstance& defender) {
  PlayerState& me = s.active();
  PlayerState& foe = s.inactive();

  const int a_atk = attacker.attack;
  const int d_atk = defender.attack;
  const bool a_ward = attacker.has(kWard);
  const bool d_ward = defender.has(kWard);
  const int d_def_before = defender.defense;

  bool defender_dies = false;
  if (a_atk > 0) {
    if (d_ward) {
      defender.keywords &= static_cast<std::uint8_t>(~kWard);
    } else {
      defender.defense -= a_atk;
      defender_dies = attacker.has(kLethal) || defender.defense <= 0;
      if (attacker.has(kDrain)) gain_health(me, a_atk);
      if (defender_dies && attacker.has(kBreakthrough)) {
        int excess = a_atk - d_def_before;
        if (excess > 0) lose_health(foe, excess);
      }
    }
  }

  bool attacker_dies = false;
  if (d_atk > 0) {
    if (a_ward) {
      attacker.keywords &= static_cast<std::uint8_t>(~kWard);
    } else {
      attacker.defense -= d_atk;
      attacker_dies = defender.has(kLethal) || attacker.defense <= 0;
    }
  }

  attacker.has_attacked = true;
  const int attacker_id = attacker.instance_id;
  const int defender_id = defender.instance_id;
  if (defender_dies) remove_creature(foe, defender_id);
  if (attacker_dies) remove_creature(me, attacker_id);
}

}  // namespace detail

// Applies a validated action in place. Pass runs end-of-turn and the
// opponent's start-of-turn, so the returned state is always ready for the
// next decision (or finished).
inline void apply_action_in_place(GameState& s, const CardSet& cards, const Action& a) {
  if (s.outcome) throw std::logic_error("apply_action: game is finished");
  if (!s.turn_in_progress) throw std::logic_error("apply_action: no turn in progress");
  detail::validate_action(s, cards, a);

  PlayerState& me = s.active();
  PlayerState& foe = s.inactive();

  switch (a.type) {
    case ActionType::Pass: {
      s.turn_in_progress = false;
      s.active_player = 1 - s.active_player;
      start_turn(s);
      return;
    }
    case ActionType::Summon: {
      const Card& c = cards.by_id(me.hand[static_cast<std::size_t>(a.hand_index)]);
      me.current_mana -= c.cost;
      me.hand.erase(me.hand.begin() + a.hand_index);
      me.cards_consumed += 1;
      CreatureInstance inst;
      inst.instance_id = s.next_instance_id++;
      inst.card_id = c.id;
      inst.attack = c.attack;
      inst.defense = c.defense;
      inst.keywords = c.keywords;
      inst.can_attack = c.has(kCharge);
      me.board.push_back(inst);
      detail::apply_play_effects(s, c);
      break;
    }
    case ActionType::UseItem: {
      const Card& c = cards.by_id(me.hand[static_cast<std::size_t>(a.hand_index)]);
      me.current_mana -= c.cost;
      me.hand.erase(me.hand.begin() + a.hand_index);
      me.cards_consumed += 1;
      if (c.kind == CardKind::GreenItem) {
        CreatureInstance* t = detail::find_creature(me, a.target);
        t->attack += c.attack;
        t->defense += c.defense;
        t->keywords |= c.keywords;
        if (t->defense <= 0) detail::remove_creature(me, a.target);
      } else if (a.target == kFaceTarget) {
        detail::apply_hp_delta(foe, c.defense);
      } else {
        CreatureInstance* t = detail::find_creature(foe, a.target);
        t->keywords &= static_cast<std::uint8_t>(~c.keywords);
        t->attack = std::max(0, t->attack + c.attack);
        if (c.defense < 0) {
          if (detail::damage_creature(*t, -c.defense)) detail::remove_creature(foe, a.target);
        } else {
          t->defense += c.defense;
        }
      }
      detail::apply_play_effects(s, c);
      break;
    }
    case ActionType::Attack: {
      CreatureInstance* attacker = detail::find_creature(me, a.attacker_id);
      if (a.target == kFaceTarget) {
        detail::lose_health(foe, attacker->attack);
        if (attacker->has(kDrain)) detail::gain_health(me, attacker->attack);
        attacker->has_attacked = true;
      } else {
        CreatureInstance* defender = detail::find_creature(foe, a.target);
        detail::resolve_combat(s, *attacker, *defender);
      }
      break;
    }
  }
  detail::check_outcome_after_action(s);
  if (s.outcome) s.turn_in_progress = false;
}

inline GameState apply_action(GameState s, const CardSet& cards, const Action& a) {
  apply_action_in_place(s, cards, a);
  return s;
}

// ---------------------------------------------------------------------------
// Views and determinization
// ---------------------------------------------------------------------------

// Rebuilds a playable state from one player's view. Hidden zones are filled
// with placeholder card id 0 so sizes (and therefore features) survive; the
// placeholders are never touched while simulating the viewer's own actions,
// because draws only resolve at turn boundaries.
inline GameState determinize(const PlayerView& v) {
  GameState s;
  s.players[v.which_player] = v.own;
  PlayerState& foe = s.players[1 - v.which_player];
  foe.health = v.opponent.health;
  foe.max_mana = v.opponent.max_mana;
  foe.current_mana = v.opponent.current_mana;
  foe.deck.assign(static_cast<std::size_t>(v.opponent.deck_count), 0);
  foe.hand.assign(static_cast<std::size_t>(v.opponent.hand_count), 0);
  foe.board = v.opponent.board;
  foe.next_rune = v.opponent.next_rune;
  foe.draws_next_turn = v.opponent.draws_next_turn;
  s.turn_number = v.turn_number;
  s.active_player = v.which_player;
  s.turn_in_progress = !v.terminal.has_value();
  int max_id = 0;
  for (int p = 0; p < 2; ++p)
    for (const auto& c : s.players[p].board) max_id = std::max(max_id, c.instance_id);
  s.next_instance_id = max_id + 1;
  if (v.terminal) {
    const bool p0_pov = v.which_player == 0;
    switch (*v.terminal) {
      case TerminalView::Won: s.outcome = p0_pov ? Outcome::P0Win : Outcome::P1Win; break;
      case TerminalView::Lost: s.outcome = p0_pov ? Outcome::P1Win : Outcome::P0Win; break;
      case TerminalView::Tied: s.outcome = Outcome::Tie; break;
    }
  }
  return s;
}

inline std::vector<Action> legal_actions(const PlayerView& v, const CardSet& cards) {
  return legal_actions(determinize(v), cards);
}

// ---------------------------------------------------------------------------
// Hashing and match execution
// ---------------------------------------------------------------------------

// Stable 64-bit digest of the full state; identical states hash identically
// on every platform (plain FNV-1a over a canonical field order).
inline std::uint64_t state_hash(const GameState& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto feed = [&h](std::int64_t v) {
    auto u = static_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
      h ^= (u >> (8 * i)) & 0xff;
      h *= 0x00000100000001b3ull;
    }
  };
  feed(s.turn_number);
  feed(s.active_player);
  feed(s.turn_in_progress ? 1 : 0);
  feed(s.outcome ? static_cast<int>(*s.outcome) + 1 : 0);
  for (const PlayerState& p : s.players) {
    feed(p.health);
    feed(p.max_mana);
    feed(p.current_mana);
    feed(p.next_rune);
    feed(p.draws_next_turn);
    feed(p.cards_consumed);
    feed(static_cast<std::int64_t>(p.deck.size()));
    for (int id : p.deck) feed(id);
    feed(static_cast<std::int64_t>(p.hand.size()));
    for (int id : p.hand) feed(id);
    feed(static_cast<std::int64_t>(p.board.size()));
    for (const auto& c : p.board) {
      feed(c.instance_id);
      feed(c.card_id);
      feed(c.attack);
      feed(c.defense);
      feed(c.keywords);
      feed((c.can_attack ? 1 : 0) | (c.has_attacked ? 2 : 0));
    }
  }
  return h;
}

struct TranscriptEntry {
  int turn = 0;
  int player = 0;
  std::string action;
  std::uint64_t hash = 0;
};

struct MatchResult {
  int winner = 2;  // 0, 1, or 2 for a tie
  int turns = 0;
  bool forfeit = false;
  std::vector<TranscriptEntry> transcript;
};

inline std::string transcript_text(const MatchResult& r) {
  std::string out;
  char buf[32];
  for (const auto& e : r.transcript) {
    out += std::to_string(e.turn);
    out += ';';
    out += std::to_string(e.player);
    out += ';';
    out += e.action;
    out += ';';
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(e.hash));
    out += buf;
    out += '\n';
  }
  return out;
}

// Runs a battle between two pre-drafted decks. An agent returning an illegal
// action forfeits on the spot.
inline MatchResult play_battle(const CardSet& cards, const Agent& agent0, const Agent& agent1,
                               const std::vector<int>& deck0, const std::vector<int>& deck1,
                               std::uint64_t shuffle_seed, bool with_transcript = false) {
  const Agent* agents[2] = {&agent0, &agent1};
  GameState s = init_battle(cards, deck0, deck1, shuffle_seed);
  start_turn(s);

  MatchResult result;
  constexpr int kActionCap = 64;  // a turn cannot legally exceed hand+board actions
  while (!s.outcome) {
    const int player = s.active_player;
    int actions_this_turn = 0;
    while (!s.outcome && s.active_player == player) {
      const int turn = s.turn_number;
      Action a = agents[player]->act(view_of(s, player));
      try {
        apply_action_in_place(s, cards, a);
      } catch (const std::runtime_error&) {
        result.forfeit = true;
        s.outcome = player == 0 ? Outcome::P1Win : Outcome::P0Win;
        s.turn_in_progress = false;
        if (with_transcript)
          result.transcript.push_back({turn, player, "FORFEIT " + to_string(a), state_hash(s)});
        break;
      }
      if (with_transcript)
        result.transcript.push_back({turn, player, to_string(a), state_hash(s)});
      if (++actions_this_turn > kActionCap)
        throw std::logic_error("play_match: action cap exceeded, rules bug");
    }
  }
  result.winner = *s.outcome == Outcome::P0Win ? 0 : *s.outcome == Outcome::P1Win ? 1 : 2;
  result.turns = s.turn_number;
  return result;
}

// Plays a full match: both secret drafts on the shared sequence, then the
// battle to completion. Deterministic given (agents, draft, shuffle seed).
inline MatchResult play_match(const CardSet& cards, const Agent& agent0, const Agent& agent1,
                              const DraftSequence& draft, std::uint64_t shuffle_seed,
                              bool with_transcript = false) {
  const Agent* agents[2] = {&agent0, &agent1};
  std::vector<int> decks[2];
  for (int i = 0; i < 2; ++i)
    decks[i] = draft_deck(cards, draft, [&](const CardTriple& t) { return agents[i]->pick(t); });
  return play_battle(cards, agent0, agent1, decks[0], decks[1], shuffle_seed, with_transcript);
}

}  // namespace cardevo
