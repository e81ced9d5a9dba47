#include <catch2/catch_amalgamated.hpp>

#include "cardevo/cards.hpp"
#include "test_util.hpp"

using namespace cardevo;

TEST_CASE("parses a creature line") {
  // Hand-parsed against the field layout: id;name;kind;cost;atk;def;keywords;php;ehp;draw
  CardSet cs = load_cardset("1 ; Slimer ; creature ; 1 ; 2 ; 1 ; ------ ; 1 ; 0 ; 0");
  REQUIRE(cs.size() == 1);
  const Card& c = cs.by_id(1);
  CHECK(c.name == "Slimer");
  CHECK(c.kind == CardKind::Creature);
  CHECK(c.cost == 1);
  CHECK(c.attack == 2);
  CHECK(c.defense == 1);
  CHECK(c.keywords == 0);
  CHECK(c.player_hp_delta == 1);
  CHECK(c.enemy_hp_delta == 0);
  CHECK(c.card_draw == 0);
}

TEST_CASE("keyword string maps letter positions to flags") {
  CardSet cs = load_cardset("7 ; Warded Brute ; creature ; 3 ; 2 ; 2 ; B----W ; 0 ; 0 ; 0");
  const Card& c = cs.by_id(7);
  CHECK(c.has(kBreakthrough));
  CHECK(c.has(kWard));
  CHECK_FALSE(c.has(kCharge));
  CHECK_FALSE(c.has(kDrain));
  CHECK_FALSE(c.has(kGuard));
  CHECK_FALSE(c.has(kLethal));
}

TEST_CASE("empty document is rejected") {
  CHECK_THROWS_WITH(load_cardset(""), Catch::Matchers::ContainsSubstring("no cards"));
  CHECK_THROWS_WITH(load_cardset("# only a comment\n\n"),
                    Catch::Matchers::ContainsSubstring("no cards"));
}

TEST_CASE("malformed lines report the line number") {
  CHECK_THROWS_WITH(load_cardset("1 ; A ; creature ; 1 ; 1 ; 1 ; ------ ; 0 ; 0 ; 0\n"
                                 "2 ; B ; creature ; x ; 1 ; 1 ; ------ ; 0 ; 0 ; 0"),
                    Catch::Matchers::ContainsSubstring("line 2"));
  CHECK_THROWS_WITH(load_cardset("1 ; A ; creature ; 1 ; 1"),
                    Catch::Matchers::ContainsSubstring("expected 10 fields"));
  CHECK_THROWS_WITH(load_cardset("1 ; A ; sorcery ; 1 ; 1 ; 1 ; ------ ; 0 ; 0 ; 0"),
                    Catch::Matchers::ContainsSubstring("unknown card kind"));
  CHECK_THROWS_WITH(load_cardset("1 ; A ; creature ; 1 ; 1 ; 1 ; -W---- ; 0 ; 0 ; 0"),
                    Catch::Matchers::ContainsSubstring("position 1"));
}

TEST_CASE("duplicate and non-increasing ids are rejected") {
  CHECK_THROWS_WITH(load_cardset("1 ; A ; creature ; 1 ; 1 ; 1 ; ------ ; 0 ; 0 ; 0\n"
                                 "1 ; B ; creature ; 1 ; 1 ; 1 ; ------ ; 0 ; 0 ; 0"),
                    Catch::Matchers::ContainsSubstring("duplicate"));
  CHECK_THROWS_WITH(load_cardset("2 ; A ; creature ; 1 ; 1 ; 1 ; ------ ; 0 ; 0 ; 0\n"
                                 "1 ; B ; creature ; 1 ; 1 ; 1 ; ------ ; 0 ; 0 ; 0"),
                    Catch::Matchers::ContainsSubstring("strictly increasing"));
}

TEST_CASE("creature defense must be positive at definition time") {
  CHECK_THROWS_WITH(load_cardset("1 ; A ; creature ; 1 ; 1 ; 0 ; ------ ; 0 ; 0 ; 0"),
                    Catch::Matchers::ContainsSubstring("defense"));
}

TEST_CASE("shipped card list has 160 cards with increasing ids") {
  const CardSet& cs = testutil::shipped_cards();
  REQUIRE(cs.size() == 160);
  int last = 0;
  for (const Card& c : cs.cards()) {
    CHECK(c.id > last);
    last = c.id;
    CHECK(c.cost >= 0);
    if (c.is_creature()) CHECK(c.defense >= 1);
  }
  CHECK(cs.by_id(1).name == "Slimer");
}

TEST_CASE("cardset digest is stable and content-sensitive") {
  const CardSet& cs = testutil::shipped_cards();
  CHECK(cardset_digest(cs) == cardset_digest(cs));
  CardSet small = load_cardset("1 ; A ; creature ; 1 ; 1 ; 1 ; ------ ; 0 ; 0 ; 0");
  CardSet small2 = load_cardset("1 ; A ; creature ; 1 ; 1 ; 2 ; ------ ; 0 ; 0 ; 0");
  CHECK(cardset_digest(small) != cardset_digest(small2));
}
