#pragma once

// Closed-form scalar expressions over chart coordinates.
//
// An Expr is an immutable, reference-counted DAG node. Construction goes
// through simplifying builders (constant folding, 0/1 absorption, like-term
// collection, power merging) so structurally equal inputs tend to produce
// structurally equal trees, but no result here ever depends on that:
// identities are decided numerically by the zero tester in eval.hpp.
//
// Negation and quotients have no node kinds of their own: -e is stored as
// the product (-1)*e and a/b as a*b^(-1). The printer renders both back in
// infix form.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace warpcurv {

namespace mp = boost::multiprecision;

/// Exact rational constant.
using Rational = mp::mpq_rational;
/// Working precision for numeric evaluation (50 significant decimal digits).
using Real = mp::number<mp::mpfr_float_backend<50, mp::allocate_stack>, mp::et_off>;

enum class Kind : std::uint8_t {
  constant,
  parameter,
  variable,
  sum,
  product,
  power,
  exp,
  log,
  sin,
  cos,
};

class Node;

class Expr {
 public:
  /// The constant 0.
  Expr();
  Expr(int value);  // NOLINT(google-explicit-constructor)
  Expr(long value);  // NOLINT(google-explicit-constructor)
  Expr(const Rational& value);  // NOLINT(google-explicit-constructor)

  static Expr variable(const std::string& name);
  static Expr parameter(const std::string& name);

  Kind kind() const;
  /// Value of a constant node.
  const Rational& value() const;
  /// Exponent of a power node.
  const Rational& exponent() const;
  /// Name of a variable or parameter node.
  const std::string& name() const;
  std::span<const Expr> args() const;

  std::size_t hash() const;
  /// Bloom mask of the symbols appearing in the tree.
  std::uint64_t symbol_mask() const;
  /// True when the tree uses only rational operations (sums, products,
  /// integer powers) over constants and symbols.
  bool is_rational() const;

  bool is_constant() const { return kind() == Kind::constant; }
  bool is_zero_literal() const;
  bool is_one_literal() const;

  /// Node identity, stable for the lifetime of the tree.
  const Node* id() const { return node_.get(); }
  /// Number of Expr handles sharing this node.
  long use_count() const { return node_.use_count(); }

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  friend class Node;
  friend Expr make_node(Kind, Rational, std::string, std::vector<Expr>);

  std::shared_ptr<const Node> node_;
};

class Node {
 public:
  Kind kind;
  bool rational;
  std::uint64_t mask;
  std::size_t hash;
  Rational number;  // constant value or power exponent
  std::string name;  // variable or parameter name
  std::vector<Expr> args;
};

/// Structural equality (pointer-equal nodes short-circuit).
bool structurally_equal(const Expr& a, const Expr& b);
/// Total structural order used to canonicalize sums and products.
int compare(const Expr& a, const Expr& b);

struct ExprHash {
  std::size_t operator()(const Expr& e) const { return e.hash(); }
};
struct ExprEqual {
  bool operator()(const Expr& a, const Expr& b) const { return structurally_equal(a, b); }
};

Expr sum(std::span<const Expr> terms);
Expr product(std::span<const Expr> factors);
Expr pow(const Expr& base, const Rational& exponent);
Expr exp(const Expr& arg);
Expr log(const Expr& arg);
Expr sin(const Expr& arg);
Expr cos(const Expr& arg);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr& operator+=(Expr& a, const Expr& b);
Expr& operator-=(Expr& a, const Expr& b);
Expr& operator*=(Expr& a, const Expr& b);

/// Infix rendering accepted back by parse().
std::string to_string(const Expr& e);

/// Exact partial derivative with respect to the variable `var`.
Expr diff(const Expr& e, const std::string& var);

/// Memoizing differentiator; reuse one instance when differentiating many
/// expressions that share subtrees.
class Differentiator {
 public:
  explicit Differentiator(std::string var);
  Expr operator()(const Expr& e);
  const std::string& variable() const { return var_; }

 private:
  std::string var_;
  std::uint64_t bit_;
  std::unordered_map<const Node*, Expr> memo_;
};

/// Replace variables and parameters by the given expressions.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& replacement);

/// Names of all variables and parameters occurring in `e`.
std::set<std::string> free_symbols(const Expr& e);

/// Number of distinct nodes in the DAG rooted at `e`.
std::size_t node_count(const Expr& e);

std::uint64_t symbol_bit(const std::string& name);

}  // namespace warpcurv
