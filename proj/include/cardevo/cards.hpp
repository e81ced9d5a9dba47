#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace cardevo {

enum class CardKind : std::uint8_t { Creature, GreenItem, RedItem, BlueItem };

// Keyword flags, bit order B,C,D,G,L,W (matching the card-list column).
enum Keyword : std::uint8_t {
  kBreakthrough = 1 << 0,
  kCharge = 1 << 1,
  kDrain = 1 << 2,
  kGuard = 1 << 3,
  kLethal = 1 << 4,
  kWard = 1 << 5,
};

constexpr int kKeywordCount = 6;
constexpr const char* kKeywordLetters = "BCDGLW";

struct Card {
  int id = 0;
  std::string name;
  CardKind kind = CardKind::Creature;
  int cost = 0;
  int attack = 0;
  int defense = 0;
  std::uint8_t keywords = 0;
  int player_hp_delta = 0;
  int enemy_hp_delta = 0;
  int card_draw = 0;

  bool has(Keyword k) const { return (keywords & k) != 0; }
  bool is_creature() const { return kind == CardKind::Creature; }
};

class CardSet {
 public:
  CardSet() = default;
  explicit CardSet(std::vector<Card> cards) : cards_(std::move(cards)) {
    index_.assign(max_id() + 1, -1);
    for (std::size_t i = 0; i < cards_.size(); ++i) index_[cards_[i].id] = static_cast<int>(i);
  }

  const std::vector<Card>& cards() const { return cards_; }
  std::size_t size() const { return cards_.size(); }

  const Card& by_id(int id) const {
    if (id < 0 || id >= static_cast<int>(index_.size()) || index_[id] < 0)
      throw std::runtime_error("unknown card id " + std::to_string(id));
    return cards_[index_[id]];
  }

  bool contains(int id) const {
    return id >= 0 && id < static_cast<int>(index_.size()) && index_[id] >= 0;
  }

 private:
  int max_id() const {
    int m = 0;
    for (const Card& c : cards_) m = std::max(m, c.id);
    return m;
  }

  std::vector<Card> cards_;
  std::vector<int> index_;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline int parse_int_field(const std::string& field, int line_no, const char* what) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(field, &pos);
    if (pos != field.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("card list line " + std::to_string(line_no) + ": bad " +
                             std::string(what) + " '" + field + "'");
  }
}

inline CardKind parse_kind(const std::string& field, int line_no) {
  std::string k;
  for (char c : field) k += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (k == "creature") return CardKind::Creature;
  if (k == "itemgreen" || k == "greenitem") return CardKind::GreenItem;
  if (k == "itemred" || k == "reditem") return CardKind::RedItem;
  if (k == "itemblue" || k == "blueitem") return CardKind::BlueItem;
  throw std::runtime_error("card list line " + std::to_string(line_no) + ": unknown card kind '" +
                           field + "'");
}

inline std::uint8_t parse_keywords(const std::string& field, int line_no) {
  if (field.size() != kKeywordCount)
    throw std::runtime_error("card list line " + std::to_string(line_no) +
                             ": keyword string must have 6 characters, got '" + field + "'");
  std::uint8_t flags = 0;
  for (int i = 0; i < kKeywordCount; ++i) {
    char c = field[static_cast<std::size_t>(i)];
    if (c == '-') continue;
    if (c == kKeywordLetters[i]) {
      flags |= static_cast<std::uint8_t>(1 << i);
    } else {
      throw std::runtime_error("card list line " + std::to_string(line_no) +
                               ": keyword char at position " + std::to_string(i) + " must be '" +
                               kKeywordLetters[i] + "' or '-', got '" + std::string(1, c) + "'");
    }
  }
  return flags;
}

}  // namespace detail

// Parses a card-list document: one card per line, ten ';'-separated fields
//   id ; name ; kind ; cost ; attack ; defense ; keywords ; playerHP ; enemyHP ; cardDraw
// '#'-prefixed lines and blank lines are ignored.
inline CardSet load_cardset(const std::string& text) {
  std::vector<Card> cards;
  std::unordered_set<int> seen;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;

    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(t);
    while (std::getline(ls, field, ';')) fields.push_back(detail::trim(field));
    if (fields.size() != 10)
      throw std::runtime_error("card list line " + std::to_string(line_no) + ": expected 10 fields, got " +
                               std::to_string(fields.size()));

    Card c;
    c.id = detail::parse_int_field(fields[0], line_no, "id");
    c.name = fields[1];
    c.kind = detail::parse_kind(fields[2], line_no);
    c.cost = detail::parse_int_field(fields[3], line_no, "cost");
    c.attack = detail::parse_int_field(fields[4], line_no, "attack");
    c.defense = detail::parse_int_field(fields[5], line_no, "defense");
    c.keywords = detail::parse_keywords(fields[6], line_no);
    c.player_hp_delta = detail::parse_int_field(fields[7], line_no, "player hp delta");
    c.enemy_hp_delta = detail::parse_int_field(fields[8], line_no, "enemy hp delta");
    c.card_draw = detail::parse_int_field(fields[9], line_no, "card draw");

    if (c.cost < 0)
      throw std::runtime_error("card list line " + std::to_string(line_no) + ": negative cost");
    if (c.kind == CardKind::Creature && c.defense < 1)
      throw std::runtime_error("card list line " + std::to_string(line_no) +
                               ": creature defense must be >= 1");
    if (!seen.insert(c.id).second)
      throw std::runtime_error("card list line " + std::to_string(line_no) + ": duplicate card id " +
                               std::to_string(c.id));
    if (!cards.empty() && c.id <= cards.back().id)
      throw std::runtime_error("card list line " + std::to_string(line_no) +
                               ": card ids must be strictly increasing");
    cards.push_back(std::move(c));
  }
  if (cards.empty()) throw std::runtime_error("card list: no cards");
  return CardSet(std::move(cards));
}

inline CardSet load_cardset_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open card list '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return load_cardset(ss.str());
}

// FNV-1a digest of the card definitions; recorded in run manifests so a run
// can be tied to the exact card pool it used.
inline std::uint64_t cardset_digest(const CardSet& cs) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto feed = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 0x00000100000001b3ull;
    }
  };
  for (const Card& c : cs.cards()) {
    feed(static_cast<std::uint64_t>(c.id));
    feed(static_cast<std::uint64_t>(c.kind));
    feed(static_cast<std::uint64_t>(static_cast<std::int64_t>(c.cost)));
    feed(static_cast<std::uint64_t>(static_cast<std::int64_t>(c.attack)));
    feed(static_cast<std::uint64_t>(static_cast<std::int64_t>(c.defense)));
    feed(c.keywords);
    feed(static_cast<std::uint64_t>(static_cast<std::int64_t>(c.player_hp_delta)));
    feed(static_cast<std::uint64_t>(static_cast<std::int64_t>(c.enemy_hp_delta)));
    feed(static_cast<std::uint64_t>(static_cast<std::int64_t>(c.card_draw)));
  }
  return h;
}

}  // namespace cardevo
