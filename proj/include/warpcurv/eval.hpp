#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "warpcurv/expr.hpp"

namespace warpcurv {

class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class UnboundVariable : public EvaluationError {
 public:
  using EvaluationError::EvaluationError;
};
class DomainError : public EvaluationError {
 public:
  using EvaluationError::EvaluationError;
};
/// Every sampled point hit a domain violation.
class Inconclusive : public EvaluationError {
 public:
  using EvaluationError::EvaluationError;
};

struct Point {
  std::map<std::string, Rational> coordinates;
  std::map<std::string, Rational> parameters;
};

std::string to_string(const Point& p);

/// Value together with the largest magnitude met while computing it, used
/// to scale the zero threshold.
struct Valued {
  Real value;
  Real scale;
};

/// Evaluates expressions at one point. Shared subtrees are cached, so
/// evaluating many expressions built from common pieces costs little more
/// than evaluating their union once.
class Evaluator {
 public:
  explicit Evaluator(Point point);

  Real operator()(const Expr& e) { return evaluate(e).value; }
  Valued evaluate(const Expr& e);
  /// Exact value of a rational tree (e.is_rational() must hold).
  Rational exact(const Expr& e);

  const Point& point() const { return point_; }
  void clear_cache();

 private:
  Valued compute(const Expr& e);
  Rational compute_exact(const Expr& e);
  const Rational& lookup(const Expr& e) const;

  Point point_;
  std::unordered_map<const Node*, std::pair<Expr, Valued>> cache_;
  std::unordered_map<const Node*, std::pair<Expr, Rational>> exact_cache_;
};

/// High-precision value; exact for rational trees.
Real eval(const Expr& e, const Point& p);
/// Exact value, or nullopt when the tree is not rational.
std::optional<Rational> eval_exact(const Expr& e, const Point& p);

/// |value| <= 1e-30 * (1 + scale).
bool negligible(const Valued& v);
const Real& zero_threshold();

struct Interval {
  Rational lo;
  Rational hi;
};

/// Sampling region: an interval per coordinate, and a value or interval per
/// parameter (fixed parameters use lo == hi).
struct SampleBox {
  std::map<std::string, Interval> coordinates;
  std::map<std::string, Interval> parameters;

  static Interval default_interval();
};

inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;
inline constexpr int kDefaultTrials = 8;

/// Deterministic rational points drawn uniformly from the box on a 2^-20
/// grid.
std::vector<Point> sample_points(const SampleBox& box, int count, std::uint64_t seed);

/// Randomized identity test at high precision. Draws candidate points once
/// and keeps one evaluator per point, so repeated queries on related
/// expressions reuse cached subtrees.
class ZeroTester {
 public:
  explicit ZeroTester(const SampleBox& box, int trials = kDefaultTrials,
                      std::uint64_t seed = kDefaultSeed);

  bool is_zero(const Expr& e);
  bool all_zero(std::span<const Expr> es);
  /// Index of the first expression that is not identically zero.
  std::optional<std::size_t> first_nonzero(std::span<const Expr> es);
  /// Points used so far for decisions (at most `trials`).
  std::vector<Point> points() const;
  int trials() const { return trials_; }

 private:
  int trials_;
  std::vector<Evaluator> evaluators_;
};

bool is_zero(const Expr& e, const SampleBox& box, int trials = kDefaultTrials,
             std::uint64_t seed = kDefaultSeed);

}  // namespace warpcurv
