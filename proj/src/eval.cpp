#include "warpcurv/eval.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace warpcurv {

namespace {

constexpr std::size_t kCacheLimit = 200000;

Real to_real(const Rational& q) { return Real(q); }

Real max_of(const Real& a, const Real& b) { return a < b ? b : a; }

}  // namespace

std::string to_string(const Point& p) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  auto emit = [&](const auto& map) {
    for (const auto& [name, value] : map) {
      if (!first) os << ", ";
      first = false;
      os << name << '=' << value;
    }
  };
  emit(p.coordinates);
  emit(p.parameters);
  os << '}';
  return os.str();
}

const Real& zero_threshold() {
  static const Real t = Real(Rational(1, mp::mpz_int(mp::pow(mp::mpz_int(10), 30))));
  return t;
}

bool negligible(const Valued& v) { return abs(v.value) <= zero_threshold() * (1 + v.scale); }

Evaluator::Evaluator(Point point) : point_(std::move(point)) {}

void Evaluator::clear_cache() {
  cache_.clear();
  exact_cache_.clear();
}

const Rational& Evaluator::lookup(const Expr& e) const {
  if (e.kind() == Kind::variable) {
    auto it = point_.coordinates.find(e.name());
    if (it != point_.coordinates.end()) return it->second;
    throw UnboundVariable("unbound coordinate '" + e.name() + "'");
  }
  auto it = point_.parameters.find(e.name());
  if (it != point_.parameters.end()) return it->second;
  throw UnboundVariable("unbound parameter '" + e.name() + "'");
}

Valued Evaluator::evaluate(const Expr& e) {
  if (e.is_constant() || e.kind() == Kind::variable || e.kind() == Kind::parameter) {
    Real v = to_real(e.is_constant() ? e.value() : lookup(e));
    Real s = abs(v);
    return {std::move(v), std::move(s)};
  }
  auto it = cache_.find(e.id());
  if (it != cache_.end()) return it->second.second;
  Valued v = compute(e);
  if (e.use_count() > 1) {
    if (cache_.size() >= kCacheLimit) cache_.clear();
    cache_.emplace(e.id(), std::make_pair(e, v));
  }
  return v;
}

Valued Evaluator::compute(const Expr& e) {
  switch (e.kind()) {
    case Kind::sum: {
      Real total = 0;
      Real scale = 0;
      for (const Expr& t : e.args()) {
        Valued v = evaluate(t);
        total += v.value;
        scale = max_of(scale, max_of(v.scale, abs(v.value)));
      }
      return {std::move(total), std::move(scale)};
    }
    case Kind::product: {
      Real total = 1;
      Real scale = 1;
      for (const Expr& f : e.args()) {
        Valued v = evaluate(f);
        total *= v.value;
        scale *= max_of(v.scale, abs(v.value));
      }
      return {std::move(total), std::move(scale)};
    }
    case Kind::power: {
      Valued b = evaluate(e.args().front());
      const Rational& k = e.exponent();
      if (b.value == 0 && k < 0) throw DomainError("division by zero");
      if (mp::denominator(k) != 1 && b.value < 0) {
        throw DomainError("fractional power of a negative value");
      }
      Real v = b.value == 0 ? Real(0) : pow(b.value, to_real(k));
      Real ratio = b.value == 0 ? Real(1) : max_of(Real(1), b.scale / abs(b.value));
      Real s = abs(v) * ratio * max_of(Real(1), abs(to_real(k)));
      return {std::move(v), std::move(s)};
    }
    case Kind::exp: {
      Valued u = evaluate(e.args().front());
      Real v = exp(u.value);
      Real s = abs(v) * max_of(Real(1), u.scale);
      return {std::move(v), std::move(s)};
    }
    case Kind::log: {
      Valued u = evaluate(e.args().front());
      if (u.value <= 0) throw DomainError("log of a non-positive value");
      Real v = log(u.value);
      Real s = max_of(abs(v), u.scale / u.value);
      return {std::move(v), std::move(s)};
    }
    case Kind::sin:
    case Kind::cos: {
      Valued u = evaluate(e.args().front());
      Real v = e.kind() == Kind::sin ? sin(u.value) : cos(u.value);
      Real s = max_of(abs(v), u.scale);
      return {std::move(v), std::move(s)};
    }
    default:
      break;
  }
  Real v = to_real(e.is_constant() ? e.value() : lookup(e));
  Real s = abs(v);
  return {std::move(v), std::move(s)};
}

Rational Evaluator::exact(const Expr& e) {
  if (!e.is_rational()) throw EvaluationError("exact evaluation of a non-rational expression");
  if (e.is_constant()) return e.value();
  if (e.kind() == Kind::variable || e.kind() == Kind::parameter) return lookup(e);
  auto it = exact_cache_.find(e.id());
  if (it != exact_cache_.end()) return it->second.second;
  Rational v = compute_exact(e);
  if (e.use_count() > 1) {
    if (exact_cache_.size() >= kCacheLimit) exact_cache_.clear();
    exact_cache_.emplace(e.id(), std::make_pair(e, v));
  }
  return v;
}

Rational Evaluator::compute_exact(const Expr& e) {
  switch (e.kind()) {
    case Kind::sum: {
      Rational total = 0;
      for (const Expr& t : e.args()) total += exact(t);
      return total;
    }
    case Kind::product: {
      Rational total = 1;
      for (const Expr& f : e.args()) {
        total *= exact(f);
        if (total == 0) return total;
      }
      return total;
    }
    case Kind::power: {
      Rational b = exact(e.args().front());
      const long k = mp::numerator(e.exponent()).convert_to<long>();
      if (b == 0 && k < 0) throw DomainError("division by zero");
      Rational v = 1;
      Rational base = k < 0 ? Rational(1) / b : b;
      for (unsigned long n = static_cast<unsigned long>(k < 0 ? -k : k); n; n >>= 1) {
        if (n & 1) v *= base;
        if (n > 1) base *= base;
      }
      return v;
    }
    default:
      throw EvaluationError("exact evaluation of a non-rational expression");
  }
}

Real eval(const Expr& e, const Point& p) {
  Evaluator ev(p);
  if (e.is_rational()) return to_real(ev.exact(e));
  return ev(e);
}

std::optional<Rational> eval_exact(const Expr& e, const Point& p) {
  if (!e.is_rational()) return std::nullopt;
  Evaluator ev(p);
  return ev.exact(e);
}

Interval SampleBox::default_interval() { return {Rational(1, 3), Rational(2)}; }

std::vector<Point> sample_points(const SampleBox& box, int count, std::uint64_t seed) {
  constexpr std::uint64_t kGrid = std::uint64_t{1} << 20;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> step(0, kGrid);
  auto draw = [&](const Interval& iv) {
    if (iv.lo == iv.hi) return iv.lo;
    const Rational t(mp::mpz_int(step(rng)), mp::mpz_int(kGrid));
    return Rational(iv.lo + (iv.hi - iv.lo) * t);
  };
  std::vector<Point> points;
  points.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    Point p;
    for (const auto& [name, iv] : box.coordinates) p.coordinates[name] = draw(iv);
    for (const auto& [name, iv] : box.parameters) p.parameters[name] = draw(iv);
    points.push_back(std::move(p));
  }
  return points;
}

ZeroTester::ZeroTester(const SampleBox& box, int trials, std::uint64_t seed) : trials_(trials) {
  if (trials < 1) throw std::invalid_argument("zero test needs at least one trial");
  for (Point& p : sample_points(box, 2 * trials, seed)) evaluators_.emplace_back(std::move(p));
}

bool ZeroTester::is_zero(const Expr& e) {
  if (e.is_constant()) return e.is_zero_literal();
  int valid = 0;
  for (Evaluator& ev : evaluators_) {
    try {
      if (e.is_rational()) {
        if (ev.exact(e) != 0) return false;
      } else if (!negligible(ev.evaluate(e))) {
        return false;
      }
    } catch (const DomainError&) {
      continue;
    }
    if (++valid == trials_) return true;
  }
  if (valid == 0) throw Inconclusive("every sample point violates the expression's domain");
  return true;
}

bool ZeroTester::all_zero(std::span<const Expr> es) { return !first_nonzero(es).has_value(); }

std::optional<std::size_t> ZeroTester::first_nonzero(std::span<const Expr> es) {
  for (std::size_t i = 0; i < es.size(); ++i) {
    if (!is_zero(es[i])) return i;
  }
  return std::nullopt;
}

std::vector<Point> ZeroTester::points() const {
  std::vector<Point> out;
  for (std::size_t i = 0; i < evaluators_.size() && out.size() < static_cast<std::size_t>(trials_);
       ++i) {
    out.push_back(evaluators_[i].point());
  }
  return out;
}

bool is_zero(const Expr& e, const SampleBox& box, int trials, std::uint64_t seed) {
  ZeroTester t(box, trials, seed);
  return t.is_zero(e);
}

}  // namespace warpcurv
