#pragma once

#include <memory>
#include <string>

#include "cardevo/agent.hpp"
#include "cardevo/engine.hpp"
#include "cardevo/genome.hpp"
#include "cardevo/genome_text.hpp"
#include "cardevo/rng.hpp"

namespace cardevo {

// ---------------------------------------------------------------------------
// Genome-driven greedy agent
// ---------------------------------------------------------------------------

// Draft pick: argmax of evalCard over the three options, ties to the lowest
// index.
inline int genome_pick(const Genome& g, const CardTriple& triple) {
  int best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    const Card& c = *triple[static_cast<std::size_t>(i)];
    CardFeatures f = {static_cast<double>(c.attack),
                      static_cast<double>(c.defense),
                      c.has(kBreakthrough) ? 1.0 : 0.0,
                      c.has(kCharge) ? 1.0 : 0.0,
                      c.has(kDrain) ? 1.0 : 0.0,
                      c.has(kGuard) ? 1.0 : 0.0,
                      c.has(kLethal) ? 1.0 : 0.0,
                      c.has(kWard) ? 1.0 : 0.0};
    double v = eval_card(g, f);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  return best;
}

// Greedy one-ply battle policy: simulate every legal action on the
// visible-information determinization, score the resulting view, take the
// argmax. Pass scores the state as it stands, so the agent stops acting once
// no action improves the position.
inline Action genome_act(const Genome& g, const PlayerView& view, const CardSet& cards) {
  GameState base = determinize(view);
  std::vector<Action> actions = legal_actions(base, cards);

  Action best = Action::pass();
  double best_value = evaluate(g, view);
  for (const Action& a : actions) {
    if (a.type == ActionType::Pass) continue;
    GameState next = base;
    apply_action_in_place(next, cards, a);
    double v = evaluate(g, view_of(next, view.which_player));
    if (v > best_value) {
      best_value = v;
      best = a;
    }
  }
  return best;
}

class GenomeAgent : public Agent {
 public:
  GenomeAgent(Genome genome, const CardSet& cards)
      : genome_(std::move(genome)), cards_(&cards) {}

  int pick(const CardTriple& triple) const override { return genome_pick(genome_, triple); }

  Action act(const PlayerView& view) const override {
    try {
      return genome_act(genome_, view, *cards_);
    } catch (const EvaluationError&) {
      // Degenerate genome: forfeit the game, which floors its fitness.
      return Action::attack(-1, kFaceTarget);
    }
  }

  const Genome& genome() const { return genome_; }

 private:
  Genome genome_;
  const CardSet* cards_;
};

// ---------------------------------------------------------------------------
// WeakOp baseline (Baseline2)
// ---------------------------------------------------------------------------

// Picks the creature with the highest attack; the leftmost card if the triple
// holds no creature. Ties go to the lowest index.
inline int weakop_pick(const CardTriple& triple) {
  int best = -1;
  int best_attack = -1;
  for (int i = 0; i < 3; ++i) {
    const Card& c = *triple[static_cast<std::size_t>(i)];
    if (c.is_creature() && c.attack > best_attack) {
      best = i;
      best_attack = c.attack;
    }
  }
  return best >= 0 ? best : 0;
}

// One action per call, in priority order: summon the strongest affordable
// creature, then attack with the strongest ready creature (face when no Guard
// stands, otherwise the highest-defense Guard), then pass.
inline Action weakop_act(const PlayerView& view, const CardSet& cards) {
  const PlayerState& me = view.own;

  if (static_cast<int>(me.board.size()) < kMaxBoard) {
    int best_hand = -1;
    int best_attack = -1;
    for (int h = 0; h < static_cast<int>(me.hand.size()); ++h) {
      const Card& c = cards.by_id(me.hand[static_cast<std::size_t>(h)]);
      if (c.is_creature() && c.cost <= me.current_mana && c.attack > best_attack) {
        best_hand = h;
        best_attack = c.attack;
      }
    }
    if (best_hand >= 0) return Action::summon(best_hand);
  }

  const CreatureInstance* attacker = nullptr;
  for (const auto& c : me.board)
    if (c.ready() && (!attacker || c.attack > attacker->attack)) attacker = &c;
  if (attacker) {
    const CreatureInstance* guard = nullptr;
    for (const auto& t : view.opponent.board)
      if (t.has(kGuard) && (!guard || t.defense > guard->defense)) guard = &t;
    if (guard) return Action::attack(attacker->instance_id, guard->instance_id);
    return Action::attack(attacker->instance_id, kFaceTarget);
  }

  return Action::pass();
}

class WeakOpAgent : public Agent {
 public:
  explicit WeakOpAgent(const CardSet& cards) : cards_(&cards) {}
  int pick(const CardTriple& triple) const override { return weakop_pick(triple); }
  Action act(const PlayerView& view) const override { return weakop_act(view, *cards_); }

 private:
  const CardSet* cards_;
};

// ---------------------------------------------------------------------------
// Uniform-random baseline
// ---------------------------------------------------------------------------

// Stateless randomness: each decision is a pure function of (seed, inputs),
// so matches replay identically and one instance may serve many games.
class RandomAgent : public Agent {
 public:
  RandomAgent(std::uint64_t seed, const CardSet& cards) : seed_(seed), cards_(&cards) {}

  int pick(const CardTriple& triple) const override {
    std::uint64_t h = seed_combine(seed_, 0x9d5c);
    for (const Card* c : triple) h = seed_combine(h, c->id);
    return static_cast<int>(h % 3);
  }

  Action act(const PlayerView& view) const override {
    std::vector<Action> actions = legal_actions(view, *cards_);
    std::uint64_t h = seed_combine(seed_, state_hash(determinize(view)));
    return actions[h % actions.size()];
  }

 private:
  std::uint64_t seed_;
  const CardSet* cards_;
};

// ---------------------------------------------------------------------------
// Agent descriptors
// ---------------------------------------------------------------------------

// Builds an agent from a descriptor: "random", "weakop" or "genome:<path>".
inline std::unique_ptr<Agent> make_agent(const std::string& descriptor, const CardSet& cards,
                                         std::uint64_t random_seed = 0) {
  if (descriptor == "random") return std::make_unique<RandomAgent>(random_seed, cards);
  if (descriptor == "weakop") return std::make_unique<WeakOpAgent>(cards);
  if (descriptor.rfind("genome:", 0) == 0)
    return std::make_unique<GenomeAgent>(load_genome(descriptor.substr(7)), cards);
  throw std::runtime_error("unknown agent descriptor '" + descriptor +
                           "' (expected random, weakop or genome:<path>)");
}

}  // namespace cardevo
