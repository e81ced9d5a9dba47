#pragma once

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cardevo/genome.hpp"

namespace cardevo {

// ---------------------------------------------------------------------------
// Serialization: one genome per line.
//   linear: w1 w2 ... w20
//   binarytree: state: (expr) card: (expr)
//   tree: state: (expr) card: (expr)
// Expressions are prefix s-expressions; constants are bare numbers, features
// are (feat name).
// ---------------------------------------------------------------------------

namespace detail {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline const char* op_name(ExprOp op) {
  switch (op) {
    case ExprOp::Add: return "add";
    case ExprOp::Mul: return "mul";
    case ExprOp::Sub: return "sub";
    case ExprOp::Max: return "max";
    case ExprOp::Min: return "min";
    case ExprOp::Neg: return "neg";
    default: return "?";
  }
}

inline void write_expr(std::string& out, const ExprNode& n) {
  switch (n.op) {
    case ExprOp::Constant:
      out += format_double(n.value);
      return;
    case ExprOp::Feature:
      out += "(feat ";
      out += feature_names()[static_cast<std::size_t>(n.feature)];
      out += ')';
      return;
    default:
      out += '(';
      out += op_name(n.op);
      for (const auto& ch : n.children) {
        out += ' ';
        write_expr(out, ch);
      }
      out += ')';
  }
}

}  // namespace detail

inline std::string serialize_genome(const Genome& g) {
  std::string out;
  if (const auto* lin = std::get_if<LinearGenome>(&g.value)) {
    out = "linear:";
    for (double w : lin->weights) {
      out += ' ';
      out += detail::format_double(w);
    }
    return out;
  }
  const bool nary = g.repr() == Representation::Tree;
  const ExprNode* state;
  const ExprNode* card;
  if (nary) {
    const auto& t = std::get<TreeGenome>(g.value);
    state = &t.state_tree;
    card = &t.card_tree;
  } else {
    const auto& t = std::get<BinaryTreeGenome>(g.value);
    state = &t.state_tree;
    card = &t.card_tree;
  }
  out = nary ? "tree: state: " : "binarytree: state: ";
  detail::write_expr(out, *state);
  out += " card: ";
  detail::write_expr(out, *card);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace detail {

struct Token {
  enum Kind { LParen, RParen, Atom, End } kind = End;
  std::string text;
  std::size_t pos = 0;
};

class GenomeParser {
 public:
  explicit GenomeParser(const std::string& text) : text_(text) { tokenize(); }

  Genome parse() {
    Token head = next();
    if (head.kind != Token::Atom) fail(head, "representation header");
    Genome g;
    if (head.text == "linear:") {
      LinearGenome lin;
      for (std::size_t i = 0; i < lin.weights.size(); ++i) {
        Token t = next();
        if (t.kind != Token::Atom)
          fail(t, "weight " + std::to_string(i + 1) + " of " +
                      std::to_string(lin.weights.size()));
        lin.weights[i] = parse_number(t);
      }
      expect_end();
      g.value = lin;
      return g;
    }
    Representation repr;
    if (head.text == "binarytree:")
      repr = Representation::BinaryTree;
    else if (head.text == "tree:")
      repr = Representation::Tree;
    else
      fail(head, "'linear:', 'binarytree:' or 'tree:'");

    expect_atom("state:");
    ExprNode state = parse_expr(repr, TreeDomain::State);
    expect_atom("card:");
    ExprNode card = parse_expr(repr, TreeDomain::Card);
    expect_end();
    if (repr == Representation::Tree)
      g.value = TreeGenome{std::move(state), std::move(card)};
    else
      g.value = BinaryTreeGenome{std::move(state), std::move(card)};
    return g;
  }

 private:
  [[noreturn]] void fail(const Token& t, const std::string& expected) {
    std::string got = t.kind == Token::End ? "end of input" : "'" + t.text + "'";
    if (t.kind == Token::LParen) got = "'('";
    if (t.kind == Token::RParen) got = "')'";
    throw std::runtime_error("genome parse error at position " + std::to_string(t.pos) +
                             ": expected " + expected + ", got " + got);
  }

  void tokenize() {
    std::size_t i = 0;
    while (i < text_.size()) {
      char c = text_[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      if (c == '(' || c == ')') {
        tokens_.push_back({c == '(' ? Token::LParen : Token::RParen, std::string(1, c), i});
        ++i;
        continue;
      }
      std::size_t start = i;
      while (i < text_.size() && !std::isspace(static_cast<unsigned char>(text_[i])) &&
             text_[i] != '(' && text_[i] != ')')
        ++i;
      tokens_.push_back({Token::Atom, text_.substr(start, i - start), start});
    }
    tokens_.push_back({Token::End, "", text_.size()});
  }

  Token next() { return tokens_[std::min(cursor_++, tokens_.size() - 1)]; }
  Token peek() const { return tokens_[std::min(cursor_, tokens_.size() - 1)]; }

  void expect_atom(const std::string& text) {
    Token t = next();
    if (t.kind != Token::Atom || t.text != text) fail(t, "'" + text + "'");
  }

  void expect_end() {
    Token t = next();
    if (t.kind != Token::End) fail(t, "end of input");
  }

  double parse_number(const Token& t) {
    const char* begin = t.text.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end != begin + t.text.size()) fail(t, "a number");
    return v;
  }

  FeatureId parse_feature(const Token& t, TreeDomain dom) {
    const auto& names = feature_names();
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == t.text) {
        auto f = static_cast<FeatureId>(i);
        bool ok = dom == TreeDomain::State ? is_state_feature(f) : is_card_feature(f);
        if (!ok)
          fail(t, std::string(dom == TreeDomain::State ? "a state" : "a card") + " feature");
        return f;
      }
    }
    fail(t, "a feature name");
  }

  ExprNode parse_expr(Representation repr, TreeDomain dom) {
    Token t = next();
    if (t.kind == Token::Atom) return make_const(parse_number(t));
    if (t.kind != Token::LParen) fail(t, "an expression");

    Token op_tok = next();
    if (op_tok.kind != Token::Atom) fail(op_tok, "an operator or 'feat'");
    if (op_tok.text == "feat") {
      Token name = next();
      if (name.kind != Token::Atom) fail(name, "a feature name");
      FeatureId f = parse_feature(name, dom);
      Token close = next();
      if (close.kind != Token::RParen) fail(close, "')'");
      return make_feature(f);
    }

    ExprOp op;
    if (op_tok.text == "add") op = ExprOp::Add;
    else if (op_tok.text == "mul") op = ExprOp::Mul;
    else if (op_tok.text == "sub") op = ExprOp::Sub;
    else if (op_tok.text == "max") op = ExprOp::Max;
    else if (op_tok.text == "min") op = ExprOp::Min;
    else if (op_tok.text == "neg") op = ExprOp::Neg;
    else fail(op_tok, "an operator");

    const bool nary = repr == Representation::Tree;
    if (nary && op == ExprOp::Sub) fail(op_tok, "an n-ary operator (sub is binary-only)");
    if (!nary && op == ExprOp::Neg) fail(op_tok, "a binary operator (neg is n-ary-only)");

    std::vector<ExprNode> children;
    while (peek().kind != Token::RParen) {
      if (peek().kind == Token::End) fail(peek(), "')'");
      children.push_back(parse_expr(repr, dom));
    }
    Token close = next();  // the ')'
    if (children.empty()) fail(close, "a nonempty child list");
    if (op == ExprOp::Neg && children.size() != 1)
      fail(close, "exactly one operand for neg");
    if (!nary && children.size() != 2)
      fail(close, "exactly two operands for a binary operator");
    return make_op(op, std::move(children));
  }

  const std::string& text_;
  std::vector<Token> tokens_;
  std::size_t cursor_ = 0;
};

}  // namespace detail

inline Genome parse_genome(const std::string& text) {
  return detail::GenomeParser(text).parse();
}

inline void save_genome(const std::string& path, const Genome& g) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write genome file '" + path + "'");
  f << serialize_genome(g) << "\n";
}

inline Genome load_genome(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read genome file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_genome(ss.str());
}

}  // namespace cardevo
