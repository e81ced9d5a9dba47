#include <catch2/catch_amalgamated.hpp>

#include "cardevo/agents.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace cardevo;
using testutil::blank_battle;
using testutil::creature;
using testutil::shipped_cards;

namespace {

Card plain_creature(int id, int attack, int defense = 1, int cost = 1) {
  Card c;
  c.id = id;
  c.kind = CardKind::Creature;
  c.cost = cost;
  c.attack = attack;
  c.defense = defense;
  return c;
}

Card plain_item(int id) {
  Card c;
  c.id = id;
  c.kind = CardKind::BlueItem;
  return c;
}

Genome attack_only_genome() {
  LinearGenome lin{};
  lin.weights[static_cast<int>(FeatureId::CardAttack)] = 1.0;
  Genome g;
  g.value = lin;
  return g;
}

}  // namespace

TEST_CASE("genome_pick takes the evalCard argmax, ties to the left") {
  Card a = plain_creature(1, 1), b = plain_creature(2, 5), c = plain_creature(3, 3);
  CHECK(genome_pick(attack_only_genome(), CardTriple{&a, &b, &c}) == 1);

  Card same = plain_creature(4, 2);
  CHECK(genome_pick(attack_only_genome(), CardTriple{&same, &same, &same}) == 0);

  Genome zero;
  zero.value = LinearGenome{};
  CHECK(genome_pick(zero, CardTriple{&a, &b, &c}) == 0);
}

TEST_CASE("weakop_pick prefers the highest-attack creature") {
  Card a = plain_creature(1, 2), b = plain_creature(2, 7), c = plain_creature(3, 7);
  CHECK(weakop_pick(CardTriple{&a, &b, &c}) == 1);  // tie broken to the lower index

  Card i1 = plain_item(4), i2 = plain_item(5), i3 = plain_item(6);
  CHECK(weakop_pick(CardTriple{&i1, &i2, &i3}) == 0);  // leftmost fallback

  Card weak = plain_creature(7, 0);
  CHECK(weakop_pick(CardTriple{&i1, &weak, &i3}) == 1);  // any creature beats items
}

TEST_CASE("weakop_act summons the strongest affordable creature first") {
  const CardSet& cards = shipped_cards();
  GameState s = blank_battle();
  s.players[0].current_mana = 4;
  s.players[0].hand = {13, 30, 92};  // Grime Gnasher 4atk/2c, Snowsaur 5atk/3c, Hedge Demon 10atk/7c
  Action a = weakop_act(view_of(s, 0), cards);
  CHECK(a == Action::summon(1));  // Snowsaur: highest attack among the affordable
}

TEST_CASE("weakop_act attacks the face with its strongest ready creature") {
  const CardSet& cards = shipped_cards();
  GameState s = blank_battle();
  s.players[0].board.push_back(creature(1, 2, 2));
  s.players[0].board.push_back(creature(2, 4, 2));
  Action a = weakop_act(view_of(s, 0), cards);
  CHECK(a == Action::attack(2, kFaceTarget));
}

TEST_CASE("weakop_act hits the highest-defense guard while one stands") {
  const CardSet& cards = shipped_cards();
  GameState s = blank_battle();
  s.players[0].board.push_back(creature(1, 4, 4));
  s.players[1].board.push_back(creature(2, 1, 3, kGuard));
  s.players[1].board.push_back(creature(3, 1, 5, kGuard));
  s.players[1].board.push_back(creature(4, 9, 9));
  Action a = weakop_act(view_of(s, 0), cards);
  CHECK(a == Action::attack(1, 3));
}

TEST_CASE("weakop_act passes with no mana and no ready attackers") {
  const CardSet& cards = shipped_cards();
  GameState s = blank_battle();
  s.players[0].current_mana = 0;
  s.players[0].hand = {13};
  s.players[0].board.push_back(creature(1, 4, 4, 0, false));
  CHECK(weakop_act(view_of(s, 0), cards) == Action::pass());
}

TEST_CASE("weakop never attacks a non-guard creature") {
  const CardSet& cards = shipped_cards();
  WeakOpAgent weakop(cards);
  RandomAgent rnd(99, cards);
  for (int g = 0; g < 20; ++g) {
    DraftSequence d = generate_draft(seed_combine(1000, g), cards);
    std::vector<int> dw = draft_deck(cards, d, [&](const CardTriple& t) { return weakop.pick(t); });
    std::vector<int> dr = draft_deck(cards, d, [&](const CardTriple& t) { return rnd.pick(t); });
    GameState s = init_battle(cards, dw, dr, seed_combine(1001, g));
    start_turn(s);
    while (!s.outcome) {
      if (s.active_player == 0) {
        Action a = weakop.act(view_of(s, 0));
        if (a.type == ActionType::Attack && a.target != kFaceTarget) {
          const auto& foe = s.players[1];
          bool target_is_guard = false;
          for (const auto& c : foe.board)
            if (c.instance_id == a.target) target_is_guard = c.has(kGuard);
          CHECK(target_is_guard);
        }
        apply_action_in_place(s, cards, a);
      } else {
        apply_action_in_place(s, cards, rnd.act(view_of(s, 1)));
      }
    }
  }
}

TEST_CASE("genome_act takes a winning face attack") {
  const CardSet& cards = shipped_cards();
  GameState s = blank_battle();
  s.players[1].health = 2;
  s.players[0].board.push_back(creature(1, 3, 3));
  Rng rng(5);
  GenomeParams p;
  Genome g = random_genome(Representation::Linear, p, rng);
  Action a = genome_act(g, view_of(s, 0), cards);
  CHECK(a == Action::attack(1, kFaceTarget));  // the +inf sentinel dominates
}

TEST_CASE("genome_act passes when nothing helps") {
  const CardSet& cards = shipped_cards();
  GameState s = blank_battle();  // only Pass is legal
  Genome zero;
  zero.value = LinearGenome{};
  CHECK(genome_act(zero, view_of(s, 0), cards) == Action::pass());
}

TEST_CASE("genome agents are deterministic per (genome, view)") {
  const CardSet& cards = shipped_cards();
  auto views = testutil::reachable_views(2, 55, 40);
  Rng rng(6);
  GenomeParams p;
  Genome g = random_genome(Representation::BinaryTree, p, rng);
  for (const auto& v : views) CHECK(genome_act(g, v, cards) == genome_act(g, v, cards));
}

TEST_CASE("greedy choice dominates every legal alternative") {
  const CardSet& cards = shipped_cards();
  auto views = testutil::reachable_views(3, 77, 80);
  Rng rng(8);
  GenomeParams p;
  for (auto repr : {Representation::Linear, Representation::BinaryTree, Representation::Tree}) {
    Genome g = random_genome(repr, p, rng);
    for (const auto& v : views) {
      Action chosen = genome_act(g, v, cards);
      GameState base = determinize(v);
      double chosen_value;
      if (chosen.type == ActionType::Pass) {
        chosen_value = evaluate(g, v);
      } else {
        GameState next = base;
        apply_action_in_place(next, cards, chosen);
        chosen_value = evaluate(g, view_of(next, v.which_player));
      }
      for (const Action& a : legal_actions(base, cards)) {
        double value;
        if (a.type == ActionType::Pass) {
          value = evaluate(g, v);
        } else {
          GameState next = base;
          apply_action_in_place(next, cards, a);
          value = evaluate(g, view_of(next, v.which_player));
        }
        CHECK(chosen_value >= value - 1e-12);
      }
    }
  }
}

TEST_CASE("genome_act agrees with the naive oracle") {
  const CardSet& cards = shipped_cards();
  auto views = testutil::reachable_views(4, 31, 150);
  Rng rng(12);
  GenomeParams p;
  for (auto repr : {Representation::Linear, Representation::BinaryTree, Representation::Tree}) {
    Genome g = random_genome(repr, p, rng);
    for (const auto& v : views) {
      Action fast = genome_act(g, v, cards);
      Action naive = oracle::act(g, v, cards);
      if (fast == naive) continue;
      // Both must then be evaluation ties.
      GameState base = determinize(v);
      auto value_of = [&](const Action& a) {
        if (a.type == ActionType::Pass) return oracle::evaluate(g, v);
        GameState next = base;
        apply_action_in_place(next, cards, a);
        return oracle::evaluate(g, view_of(next, v.which_player));
      };
      CHECK(std::abs(value_of(fast) - value_of(naive)) <= 1e-12);
    }
  }
}

TEST_CASE("oracle choice never loses to a pass-only state") {
  const CardSet& cards = shipped_cards();
  GameState s = blank_battle();
  Genome zero;
  zero.value = LinearGenome{};
  CHECK(oracle::act(zero, view_of(s, 0), cards) == Action::pass());
}

TEST_CASE("a degenerate genome forfeits its games") {
  const CardSet& cards = shipped_cards();
  TreeGenome t;
  t.state_tree = make_op(ExprOp::Mul, {make_const(1e300), make_const(1e300)});
  t.card_tree = make_const(0.0);
  Genome g;
  g.value = t;
  GenomeAgent bad(g, cards);
  WeakOpAgent good(cards);
  DraftSequence d = generate_draft(2, cards);
  MatchResult r = play_match(cards, bad, good, d, 9, true);
  CHECK(r.winner == 1);
  CHECK(r.forfeit);
}

TEST_CASE("agent descriptors build the right agents") {
  const CardSet& cards = shipped_cards();
  CHECK(dynamic_cast<RandomAgent*>(make_agent("random", cards, 1).get()) != nullptr);
  CHECK(dynamic_cast<WeakOpAgent*>(make_agent("weakop", cards).get()) != nullptr);
  CHECK_THROWS_WITH(make_agent("mcts", cards),
                    Catch::Matchers::ContainsSubstring("unknown agent descriptor"));
}
