#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "cardevo/features.hpp"
#include "cardevo/game_state.hpp"
#include "cardevo/rng.hpp"

namespace cardevo {

// Signals a degenerate genome whose evaluation left the finite range; callers
// treat such a genome's fitness as minimal.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Representation : std::uint8_t { Linear, BinaryTree, Tree };

inline std::string to_string(Representation r) {
  switch (r) {
    case Representation::Linear: return "linear";
    case Representation::BinaryTree: return "binarytree";
    case Representation::Tree: return "tree";
  }
  return "?";
}

inline Representation representation_from_string(const std::string& s) {
  if (s == "linear") return Representation::Linear;
  if (s == "binarytree") return Representation::BinaryTree;
  if (s == "tree") return Representation::Tree;
  throw std::runtime_error("unknown representation '" + s + "'");
}

// ---------------------------------------------------------------------------
// Expression trees
// ---------------------------------------------------------------------------

enum class ExprOp : std::uint8_t { Constant, Feature, Add, Mul, Sub, Max, Min, Neg };

struct ExprNode {
  ExprOp op = ExprOp::Constant;
  double value = 0.0;                    // Constant payload
  FeatureId feature = FeatureId{0};      // Feature payload
  std::vector<ExprNode> children;

  bool is_leaf() const { return op == ExprOp::Constant || op == ExprOp::Feature; }
  bool operator==(const ExprNode&) const = default;
};

inline ExprNode make_const(double v) {
  ExprNode n;
  n.op = ExprOp::Constant;
  n.value = v;
  return n;
}

inline ExprNode make_feature(FeatureId f) {
  ExprNode n;
  n.op = ExprOp::Feature;
  n.feature = f;
  return n;
}

inline ExprNode make_op(ExprOp op, std::vector<ExprNode> children) {
  ExprNode n;
  n.op = op;
  n.children = std::move(children);
  return n;
}

inline int node_count(const ExprNode& n) {
  int c = 1;
  for (const auto& ch : n.children) c += node_count(ch);
  return c;
}

inline double eval_expr(const ExprNode& n, std::span<const double> feats) {
  switch (n.op) {
    case ExprOp::Constant:
      return n.value;
    case ExprOp::Feature:
      return feats[static_cast<std::size_t>(feature_slot(n.feature))];
    case ExprOp::Add: {
      double s = 0.0;
      for (const auto& ch : n.children) s += eval_expr(ch, feats);
      return s;
    }
    case ExprOp::Mul: {
      double p = 1.0;
      for (const auto& ch : n.children) p *= eval_expr(ch, feats);
      return p;
    }
    case ExprOp::Sub:
      return eval_expr(n.children[0], feats) - eval_expr(n.children[1], feats);
    case ExprOp::Max: {
      double m = eval_expr(n.children[0], feats);
      for (std::size_t i = 1; i < n.children.size(); ++i)
        m = std::max(m, eval_expr(n.children[i], feats));
      return m;
    }
    case ExprOp::Min: {
      double m = eval_expr(n.children[0], feats);
      for (std::size_t i = 1; i < n.children.size(); ++i)
        m = std::min(m, eval_expr(n.children[i], feats));
      return m;
    }
    case ExprOp::Neg:
      return -eval_expr(n.children[0], feats);
  }
  throw std::logic_error("eval_expr: bad op");
}

// ---------------------------------------------------------------------------
// Genome representations
// ---------------------------------------------------------------------------

// 20 weights, one per feature: genes 0..11 state, 12..19 card.
struct LinearGenome {
  std::array<double, kFeatureCount> weights{};
  bool operator==(const LinearGenome&) const = default;
};

// Pair of strictly binary expression trees over {+, *, -, max, min}.
struct BinaryTreeGenome {
  ExprNode state_tree;
  ExprNode card_tree;
  bool operator==(const BinaryTreeGenome&) const = default;
};

// Pair of n-ary trees over {+, *, max, min} with nonempty child lists, plus
// unary negation.
struct TreeGenome {
  ExprNode state_tree;
  ExprNode card_tree;
  bool operator==(const TreeGenome&) const = default;
};

enum class GenomeOrigin : std::uint8_t { Random, FromLinear };

struct Genome {
  std::variant<LinearGenome, BinaryTreeGenome, TreeGenome> value;
  GenomeOrigin origin = GenomeOrigin::Random;
  int generation = 0;

  Representation repr() const { return static_cast<Representation>(value.index()); }

  // Identity is the evaluation function itself; bookkeeping metadata does not
  // participate.
  bool operator==(const Genome& o) const { return value == o.value; }
};

struct GenomeParams {
  int init_depth_min = 2;
  int init_depth_max = 4;
  int max_nodes = 64;  // per tree
  double constant_min = -10.0;
  double constant_max = 10.0;
  double feature_leaf_probability = 0.7;
  double linear_weight_min = -1.0;
  double linear_weight_max = 1.0;
  double mutation_rate = 0.05;
};

enum class TreeDomain : std::uint8_t { State, Card };

namespace detail {

inline FeatureId random_feature(Rng& rng, TreeDomain dom) {
  if (dom == TreeDomain::State) return static_cast<FeatureId>(rng.below(kStateFeatureCount));
  return static_cast<FeatureId>(kStateFeatureCount + rng.below(kCardFeatureCount));
}

inline ExprNode random_leaf(Rng& rng, const GenomeParams& p, TreeDomain dom) {
  if (rng.chance(p.feature_leaf_probability)) return make_feature(random_feature(rng, dom));
  return make_const(rng.range(p.constant_min, p.constant_max));
}

// Grow-style construction under a node budget; each subtree stays within its
// share so the whole tree respects max_nodes by construction.
inline ExprNode grow_tree(Rng& rng, const GenomeParams& p, TreeDomain dom, bool nary, int depth,
                          int target_depth, int min_depth, int budget) {
  if (budget <= 1 || depth >= target_depth ||
      (depth >= min_depth && rng.chance(0.25)))
    return random_leaf(rng, p, dom);

  ExprOp op;
  int arity;
  if (nary) {
    constexpr ExprOp ops[] = {ExprOp::Add, ExprOp::Mul, ExprOp::Max, ExprOp::Min, ExprOp::Neg};
    op = ops[rng.below(5)];
    arity = op == ExprOp::Neg ? 1 : 2 + static_cast<int>(rng.below(3));
  } else {
    constexpr ExprOp ops[] = {ExprOp::Add, ExprOp::Mul, ExprOp::Sub, ExprOp::Max, ExprOp::Min};
    op = ops[rng.below(5)];
    arity = 2;
  }
  if (budget - 1 < arity) return random_leaf(rng, p, dom);

  std::vector<ExprNode> children;
  children.reserve(static_cast<std::size_t>(arity));
  int remaining = budget - 1;
  for (int i = 0; i < arity; ++i) {
    int share = remaining / (arity - i);
    children.push_back(
        grow_tree(rng, p, dom, nary, depth + 1, target_depth, min_depth, share));
    remaining -= node_count(children.back());
  }
  return make_op(op, std::move(children));
}

inline ExprNode random_tree(Rng& rng, const GenomeParams& p, TreeDomain dom, bool nary) {
  int target = p.init_depth_min +
               static_cast<int>(rng.below(
                   static_cast<std::uint32_t>(p.init_depth_max - p.init_depth_min + 1)));
  return grow_tree(rng, p, dom, nary, 0, target, p.init_depth_min, p.max_nodes);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace detail {

inline void validate_tree(const ExprNode& n, TreeDomain dom, bool nary, const char* label) {
  auto fail = [&](const std::string& why) {
    throw std::runtime_error(std::string("invalid ") + label + " tree: " + why);
  };
  switch (n.op) {
    case ExprOp::Constant:
      if (!std::isfinite(n.value)) fail("non-finite constant");
      if (!n.children.empty()) fail("leaf with children");
      return;
    case ExprOp::Feature: {
      bool ok = dom == TreeDomain::State ? is_state_feature(n.feature) : is_card_feature(n.feature);
      if (!ok) fail("feature outside tree domain");
      if (!n.children.empty()) fail("leaf with children");
      return;
    }
    case ExprOp::Sub:
      if (nary) fail("sub not allowed in n-ary trees");
      break;
    case ExprOp::Neg:
      if (!nary) fail("neg not allowed in binary trees");
      if (n.children.size() != 1) fail("neg must have exactly one child");
      break;
    case ExprOp::Add:
    case ExprOp::Mul:
    case ExprOp::Max:
    case ExprOp::Min:
      break;
  }
  if (n.op != ExprOp::Neg) {
    if (nary) {
      if (n.children.empty()) fail("empty child list");
    } else if (n.children.size() != 2) {
      fail("binary operator must have exactly two children");
    }
  }
  for (const auto& ch : n.children) validate_tree(ch, dom, nary, label);
}

}  // namespace detail

inline void validate_genome(const Genome& g, const GenomeParams& p) {
  if (const auto* lin = std::get_if<LinearGenome>(&g.value)) {
    for (double w : lin->weights)
      if (!std::isfinite(w)) throw std::runtime_error("invalid linear genome: non-finite weight");
    return;
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
  detail::validate_tree(*state, TreeDomain::State, nary, "state");
  detail::validate_tree(*card, TreeDomain::Card, nary, "card");
  if (node_count(*state) > p.max_nodes || node_count(*card) > p.max_nodes)
    throw std::runtime_error("invalid genome: node cap exceeded");
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace detail {

inline double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw EvaluationError(std::string(what) + " evaluated to a non-finite value");
  return v;
}

}  // namespace detail

inline double eval_card(const Genome& g, const CardFeatures& f) {
  if (const auto* lin = std::get_if<LinearGenome>(&g.value)) {
    double s = 0.0;
    for (int i = 0; i < kCardFeatureCount; ++i)
      s += lin->weights[static_cast<std::size_t>(kStateFeatureCount + i)] *
           f[static_cast<std::size_t>(i)];
    return detail::checked(s, "evalCard");
  }
  const ExprNode& tree = g.repr() == Representation::Tree
                             ? std::get<TreeGenome>(g.value).card_tree
                             : std::get<BinaryTreeGenome>(g.value).card_tree;
  return detail::checked(eval_expr(tree, f), "evalCard");
}

inline double eval_state_only(const Genome& g, const StateFeatures& f) {
  if (const auto* lin = std::get_if<LinearGenome>(&g.value)) {
    double s = 0.0;
    for (int i = 0; i < kStateFeatureCount; ++i)
      s += lin->weights[static_cast<std::size_t>(i)] * f[static_cast<std::size_t>(i)];
    return detail::checked(s, "evalState");
  }
  const ExprNode& tree = g.repr() == Representation::Tree
                             ? std::get<TreeGenome>(g.value).state_tree
                             : std::get<BinaryTreeGenome>(g.value).state_tree;
  return detail::checked(eval_expr(tree, f), "evalState");
}

constexpr double kWonValue = std::numeric_limits<double>::infinity();
constexpr double kLostValue = -std::numeric_limits<double>::infinity();

// Composite state value: evalState plus evalCard summed over the own board
// minus evalCard over the opponent board. Terminal views short-circuit to
// +/-infinity so greedy play always prefers winning lines.
inline double evaluate(const Genome& g, const PlayerView& v) {
  if (v.terminal) {
    switch (*v.terminal) {
      case TerminalView::Won: return kWonValue;
      case TerminalView::Lost: return kLostValue;
      case TerminalView::Tied: return 0.0;
    }
  }
  double total = eval_state_only(g, extract_state_features(v));
  for (const auto& c : v.own.board) total += eval_card(g, extract_card_features(c));
  for (const auto& c : v.opponent.board) total -= eval_card(g, extract_card_features(c));
  return detail::checked(total, "evaluate");
}

// ---------------------------------------------------------------------------
// Construction and variation
// ---------------------------------------------------------------------------

inline Genome random_genome(Representation repr, const GenomeParams& p, Rng& rng) {
  Genome g;
  switch (repr) {
    case Representation::Linear: {
      LinearGenome lin;
      for (double& w : lin.weights) w = rng.range(p.linear_weight_min, p.linear_weight_max);
      g.value = lin;
      break;
    }
    case Representation::BinaryTree: {
      BinaryTreeGenome t;
      t.state_tree = detail::random_tree(rng, p, TreeDomain::State, false);
      t.card_tree = detail::random_tree(rng, p, TreeDomain::Card, false);
      g.value = std::move(t);
      break;
    }
    case Representation::Tree: {
      TreeGenome t;
      t.state_tree = detail::random_tree(rng, p, TreeDomain::State, true);
      t.card_tree = detail::random_tree(rng, p, TreeDomain::Card, true);
      g.value = std::move(t);
      break;
    }
  }
  return g;
}

namespace detail {

// Preorder walk; one structural replacement at most, constants perturbed by a
// unit gaussian whenever they trigger.
inline void mutate_walk(ExprNode& n, Rng& rng, const GenomeParams& p, TreeDomain dom, bool nary,
                        bool& structural_done) {
  if (rng.chance(p.mutation_rate)) {
    if (n.op == ExprOp::Constant) {
      n.value += rng.gauss();
    } else if (!structural_done) {
      structural_done = true;
      int target = static_cast<int>(rng.below(3));  // fresh subtree of depth <= 2
      n = grow_tree(rng, p, dom, nary, 0, target, 0, 16);
      return;
    }
  }
  for (auto& ch : n.children) mutate_walk(ch, rng, p, dom, nary, structural_done);
}

inline ExprNode mutate_tree(const ExprNode& tree, Rng& rng, const GenomeParams& p, TreeDomain dom,
                            bool nary) {
  // Oversized mutants are discarded and re-rolled from the original.
  while (true) {
    ExprNode out = tree;
    bool structural_done = false;
    mutate_walk(out, rng, p, dom, nary, structural_done);
    if (node_count(out) <= p.max_nodes) return out;
  }
}

}  // namespace detail

inline Genome mutate(const Genome& g, const GenomeParams& p, Rng& rng) {
  Genome out = g;
  if (auto* lin = std::get_if<LinearGenome>(&out.value)) {
    for (double& w : lin->weights)
      if (rng.chance(p.mutation_rate)) w = rng.range(p.linear_weight_min, p.linear_weight_max);
    return out;
  }
  const bool nary = g.repr() == Representation::Tree;
  ExprNode* state;
  ExprNode* card;
  if (nary) {
    auto& t = std::get<TreeGenome>(out.value);
    state = &t.state_tree;
    card = &t.card_tree;
  } else {
    auto& t = std::get<BinaryTreeGenome>(out.value);
    state = &t.state_tree;
    card = &t.card_tree;
  }
  *state = detail::mutate_tree(*state, rng, p, TreeDomain::State, nary);
  *card = detail::mutate_tree(*card, rng, p, TreeDomain::Card, nary);
  return out;
}

namespace detail {

// Preorder addressing.
inline const ExprNode* nth_node(const ExprNode& root, int index) {
  struct Walker {
    int remaining;
    const ExprNode* found = nullptr;
    void visit(const ExprNode& n) {
      if (found) return;
      if (remaining == 0) {
        found = &n;
        return;
      }
      --remaining;
      for (const auto& ch : n.children) {
        visit(ch);
        if (found) return;
      }
    }
  } w{index};
  w.visit(root);
  return w.found;
}

inline ExprNode* nth_node(ExprNode& root, int index) {
  return const_cast<ExprNode*>(nth_node(static_cast<const ExprNode&>(root), index));
}

// One shared draw addresses both parents, so identical parents reproduce
// themselves exactly.
inline ExprNode crossover_tree(const ExprNode& a, const ExprNode& b, Rng& rng,
                               const GenomeParams& p) {
  const int na = node_count(a);
  const int nb = node_count(b);
  while (true) {
    double r = rng.real();
    int ia = std::min(na - 1, static_cast<int>(r * na));
    int ib = std::min(nb - 1, static_cast<int>(r * nb));
    ExprNode out = a;
    ExprNode donor = *nth_node(b, ib);
    *nth_node(out, ia) = std::move(donor);
    if (node_count(out) <= p.max_nodes) return out;
  }
}

}  // namespace detail

inline Genome crossover(const Genome& a, const Genome& b, const GenomeParams& p, Rng& rng) {
  if (a.repr() != b.repr())
    throw std::runtime_error("crossover: representation mismatch (" + to_string(a.repr()) + " vs " +
                             to_string(b.repr()) + ")");
  Genome out = a;
  if (const auto* la = std::get_if<LinearGenome>(&a.value)) {
    const auto& lb = std::get<LinearGenome>(b.value);
    LinearGenome child;
    for (std::size_t i = 0; i < child.weights.size(); ++i)
      child.weights[i] = rng.chance(0.5) ? la->weights[i] : lb.weights[i];
    out.value = child;
    return out;
  }
  if (a.repr() == Representation::Tree) {
    const auto& ta = std::get<TreeGenome>(a.value);
    const auto& tb = std::get<TreeGenome>(b.value);
    TreeGenome child;
    child.state_tree = detail::crossover_tree(ta.state_tree, tb.state_tree, rng, p);
    child.card_tree = detail::crossover_tree(ta.card_tree, tb.card_tree, rng, p);
    out.value = std::move(child);
  } else {
    const auto& ta = std::get<BinaryTreeGenome>(a.value);
    const auto& tb = std::get<BinaryTreeGenome>(b.value);
    BinaryTreeGenome child;
    child.state_tree = detail::crossover_tree(ta.state_tree, tb.state_tree, rng, p);
    child.card_tree = detail::crossover_tree(ta.card_tree, tb.card_tree, rng, p);
    out.value = std::move(child);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Linear-to-tree translation
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<ExprNode> weighted_feature_terms(const LinearGenome& lin, TreeDomain dom) {
  std::vector<ExprNode> terms;
  const int begin = dom == TreeDomain::State ? 0 : kStateFeatureCount;
  const int count = dom == TreeDomain::State ? kStateFeatureCount : kCardFeatureCount;
  terms.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    terms.push_back(make_op(
        ExprOp::Mul, {make_const(lin.weights[static_cast<std::size_t>(begin + i)]),
                      make_feature(static_cast<FeatureId>(begin + i))}));
  }
  return terms;
}

inline ExprNode fold_add_right(std::vector<ExprNode> terms) {
  ExprNode acc = std::move(terms.back());
  for (int i = static_cast<int>(terms.size()) - 2; i >= 0; --i)
    acc = make_op(ExprOp::Add, {std::move(terms[static_cast<std::size_t>(i)]), std::move(acc)});
  return acc;
}

}  // namespace detail

// Encodes a linear genome as the equivalent tree: an Add root with one
// Mul(weight, feature) subtree per feature. The binary target folds the sum
// rightward into a chain of two-child Adds.
inline Genome translate_linear(const LinearGenome& lin, Representation target) {
  Genome g;
  g.origin = GenomeOrigin::FromLinear;
  switch (target) {
    case Representation::Linear:
      g.value = lin;
      break;
    case Representation::Tree: {
      TreeGenome t;
      t.state_tree = make_op(ExprOp::Add, detail::weighted_feature_terms(lin, TreeDomain::State));
      t.card_tree = make_op(ExprOp::Add, detail::weighted_feature_terms(lin, TreeDomain::Card));
      g.value = std::move(t);
      break;
    }
    case Representation::BinaryTree: {
      BinaryTreeGenome t;
      t.state_tree =
          detail::fold_add_right(detail::weighted_feature_terms(lin, TreeDomain::State));
      t.card_tree = detail::fold_add_right(detail::weighted_feature_terms(lin, TreeDomain::Card));
      g.value = std::move(t);
      break;
    }
  }
  return g;
}

}  // namespace cardevo
