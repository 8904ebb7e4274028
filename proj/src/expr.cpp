#include "warpcurv/expr.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace warpcurv {

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_rational(const Rational& q) {
  const mpq_t& raw = q.backend().data();
  std::uint64_t h = mpz_get_ui(mpq_numref(raw));
  h = mix(h ^ (static_cast<std::uint64_t>(mpz_size(mpq_numref(raw))) << 1));
  h = mix(h ^ static_cast<std::uint64_t>(mpz_sgn(mpq_numref(raw)) + 2));
  h = mix(h ^ mpz_get_ui(mpq_denref(raw)));
  return h;
}

bool is_integer(const Rational& q) { return mp::denominator(q) == 1; }

Rational rational_pow(const Rational& base, long exponent) {
  if (exponent == 0) return Rational(1);
  if (base == 0 && exponent < 0) throw std::domain_error("division by zero in constant expression");
  mp::mpz_int num = mp::numerator(base);
  mp::mpz_int den = mp::denominator(base);
  const unsigned long k = static_cast<unsigned long>(exponent < 0 ? -exponent : exponent);
  mp::mpz_int pn = mp::pow(num, static_cast<unsigned>(k));
  mp::mpz_int pd = mp::pow(den, static_cast<unsigned>(k));
  return exponent < 0 ? Rational(pd, pn) : Rational(pn, pd);
}

// Exact q-th root of a non-negative integer, if it exists.
bool exact_root(const mp::mpz_int& value, unsigned long q, mp::mpz_int& root) {
  mpz_t r;
  mpz_init(r);
  const int exact = mpz_root(r, value.backend().data(), q);
  root = mp::mpz_int(r);
  mpz_clear(r);
  return exact != 0;
}

int kind_rank(Kind k) { return static_cast<int>(k); }

}  // namespace

std::uint64_t symbol_bit(const std::string& name) {
  return std::uint64_t{1} << (std::hash<std::string>{}(name) % 64);
}

Expr make_node(Kind kind, Rational number, std::string name, std::vector<Expr> args) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  std::uint64_t h = mix(static_cast<std::uint64_t>(kind) + 1);
  std::uint64_t mask = 0;
  bool rational = true;
  switch (kind) {
    case Kind::constant:
      h = mix(h ^ hash_rational(number));
      break;
    case Kind::variable:
    case Kind::parameter:
      h = mix(h ^ std::hash<std::string>{}(name));
      mask = symbol_bit(name);
      break;
    case Kind::power:
      h = mix(h ^ hash_rational(number));
      rational = is_integer(number);
      break;
    case Kind::exp:
    case Kind::log:
    case Kind::sin:
    case Kind::cos:
      rational = false;
      break;
    default:
      break;
  }
  for (const Expr& a : args) {
    h = mix(h ^ a.hash()) + 0x632be59bd9b4e019ULL;
    mask |= a.symbol_mask();
    rational = rational && a.is_rational();
  }
  node->hash = h;
  node->mask = mask;
  node->rational = rational;
  node->number = std::move(number);
  node->name = std::move(name);
  node->args = std::move(args);
  return Expr(std::shared_ptr<const Node>(std::move(node)));
}

namespace {

Expr make_constant(const Rational& q) { return make_node(Kind::constant, q, {}, {}); }

const Expr& zero_expr() {
  static const Expr z = make_constant(Rational(0));
  return z;
}
const Expr& one_expr() {
  static const Expr o = make_constant(Rational(1));
  return o;
}

Expr symbol(Kind kind, const std::string& name) {
  static std::mutex mutex;
  static std::map<std::pair<Kind, std::string>, Expr> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_pair(kind, name);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  Expr e = make_node(kind, Rational(0), name, {});
  cache.emplace(key, e);
  return e;
}

bool less_expr(const Expr& a, const Expr& b) { return compare(a, b) < 0; }

Expr raw_product(std::vector<Expr> args) {
  if (args.empty()) return one_expr();
  if (args.size() == 1) return args.front();
  return make_node(Kind::product, Rational(0), {}, std::move(args));
}

// coefficient * rest, where rest carries no coefficient of its own.
Expr scaled(const Rational& coef, const Expr& rest) {
  if (coef == 0) return zero_expr();
  if (coef == 1) return rest;
  if (rest.is_constant()) return Expr(coef * rest.value());
  std::vector<Expr> args;
  if (rest.kind() == Kind::product && rest.args().front().is_constant()) {
    const Rational c = coef * rest.args().front().value();
    if (c == 0) return zero_expr();
    if (c != 1) args.push_back(Expr(c));
    args.insert(args.end(), rest.args().begin() + 1, rest.args().end());
    if (args.size() == 1) return args.front();
    return make_node(Kind::product, Rational(0), {}, std::move(args));
  }
  args.push_back(Expr(coef));
  if (rest.kind() == Kind::product) {
    args.insert(args.end(), rest.args().begin(), rest.args().end());
  } else if (rest.kind() == Kind::sum) {
    std::vector<Expr> terms;
    for (const Expr& t : rest.args()) terms.push_back(scaled(coef, t));
    return sum(terms);
  } else {
    args.push_back(rest);
  }
  return make_node(Kind::product, Rational(0), {}, std::move(args));
}

Expr raw_power(const Expr& base, const Rational& exponent) {
  return make_node(Kind::power, exponent, {}, {base});
}

// Power of an atomic (non-product, non-power, non-exp) base.
Expr power_of_atom(const Expr& base, const Rational& e) {
  if (e == 0) return one_expr();
  if (e == 1) return base;
  if (base.is_constant()) {
    const Rational& b = base.value();
    if (is_integer(e)) return Expr(rational_pow(b, mp::numerator(e).convert_to<long>()));
    if (b > 0) {
      const unsigned long q = mp::denominator(e).convert_to<unsigned long>();
      mp::mpz_int rn;
      mp::mpz_int rd;
      if (exact_root(mp::numerator(b), q, rn) && exact_root(mp::denominator(b), q, rd)) {
        return Expr(rational_pow(Rational(rn, rd), mp::numerator(e).convert_to<long>()));
      }
    }
    if (b == 0 && e > 0) return zero_expr();
    if (b == 0) throw std::domain_error("division by zero in constant expression");
    return raw_power(base, e);
  }
  return raw_power(base, e);
}

class SumBuilder {
 public:
  void add(const Expr& term, const Rational& scale) {
    switch (term.kind()) {
      case Kind::constant:
        constant_ += scale * term.value();
        return;
      case Kind::sum:
        for (const Expr& t : term.args()) add(t, scale);
        return;
      case Kind::product: {
        auto args = term.args();
        if (args.front().is_constant()) {
          const Rational c = scale * args.front().value();
          if (args.size() == 2 && args[1].kind() == Kind::sum) {
            for (const Expr& t : args[1].args()) add(t, c);
            return;
          }
          accumulate(args.size() == 2 ? args[1] : raw_product(std::vector<Expr>(args.begin() + 1, args.end())), c);
          return;
        }
        accumulate(term, scale);
        return;
      }
      default:
        accumulate(term, scale);
        return;
    }
  }

  Expr build() {
    std::vector<std::pair<Expr, Rational>> live;
    live.reserve(terms_.size());
    for (auto& t : terms_) {
      if (t.second != 0) live.push_back(std::move(t));
    }
    std::sort(live.begin(), live.end(),
              [](const auto& a, const auto& b) { return less_expr(a.first, b.first); });
    std::vector<Expr> out;
    out.reserve(live.size() + 1);
    for (const auto& [rest, coef] : live) out.push_back(scaled(coef, rest));
    if (constant_ != 0) out.push_back(Expr(constant_));
    if (out.empty()) return zero_expr();
    if (out.size() == 1) return out.front();
    return make_node(Kind::sum, Rational(0), {}, std::move(out));
  }

 private:
  void accumulate(const Expr& rest, const Rational& coef) {
    auto [it, inserted] = index_.try_emplace(rest, terms_.size());
    if (inserted) {
      terms_.emplace_back(rest, coef);
    } else {
      terms_[it->second].second += coef;
    }
  }

  Rational constant_{0};
  std::vector<std::pair<Expr, Rational>> terms_;
  std::unordered_map<Expr, std::size_t, ExprHash, ExprEqual> index_;
};

class ProductBuilder {
 public:
  void add(const Expr& factor, const Rational& e) {
    if (zero_) return;
    switch (factor.kind()) {
      case Kind::constant:
        if (factor.is_zero_literal()) {
          if (e <= 0) throw std::domain_error("division by zero in constant expression");
          zero_ = true;
          return;
        }
        if (is_integer(e)) {
          coef_ *= rational_pow(factor.value(), mp::numerator(e).convert_to<long>());
          return;
        }
        accumulate(factor, e);
        return;
      case Kind::product:
        if (is_integer(e)) {
          for (const Expr& f : factor.args()) add(f, e);
          return;
        }
        accumulate(factor, e);
        return;
      case Kind::power:
        if (is_integer(e)) {
          add(factor.args().front(), factor.exponent() * e);
          return;
        }
        accumulate(factor, e);
        return;
      case Kind::exp:
        exp_terms_.push_back(scaled(e, factor.args().front()));
        return;
      default:
        accumulate(factor, e);
        return;
    }
  }

  Expr build() {
    if (zero_) return zero_expr();
    std::vector<Expr> out;
    out.reserve(factors_.size() + 2);
    for (const auto& [base, e] : factors_) {
      if (e == 0) continue;
      Expr f = power_of_atom(base, e);
      if (f.is_constant()) {
        coef_ *= f.value();
      } else {
        out.push_back(std::move(f));
      }
    }
    if (!exp_terms_.empty()) {
      Expr u = sum(exp_terms_);
      if (u.is_constant() && u.is_zero_literal()) {
        // exp(0) == 1
      } else {
        out.push_back(make_node(Kind::exp, Rational(0), {}, {u}));
      }
    }
    if (coef_ == 0) return zero_expr();
    std::sort(out.begin(), out.end(), less_expr);
    if (out.empty()) return Expr(coef_);
    if (coef_ == 1 && out.size() == 1) return out.front();
    if (coef_ != 1) out.insert(out.begin(), Expr(coef_));
    return make_node(Kind::product, Rational(0), {}, std::move(out));
  }

 private:
  void accumulate(const Expr& base, const Rational& e) {
    auto [it, inserted] = index_.try_emplace(base, factors_.size());
    if (inserted) {
      factors_.emplace_back(base, e);
    } else {
      factors_[it->second].second += e;
    }
  }

  bool zero_ = false;
  Rational coef_{1};
  std::vector<std::pair<Expr, Rational>> factors_;
  std::unordered_map<Expr, std::size_t, ExprHash, ExprEqual> index_;
  std::vector<Expr> exp_terms_;
};

}  // namespace

Expr::Expr() : Expr(zero_expr()) {}
Expr::Expr(int value) : Expr(Rational(value)) {}
Expr::Expr(long value) : Expr(Rational(value)) {}
Expr::Expr(const Rational& value) {
  if (value == 0) {
    node_ = zero_expr().node_;
  } else if (value == 1) {
    node_ = one_expr().node_;
  } else {
    node_ = make_constant(value).node_;
  }
}

Expr Expr::variable(const std::string& name) { return symbol(Kind::variable, name); }
Expr Expr::parameter(const std::string& name) { return symbol(Kind::parameter, name); }

Kind Expr::kind() const { return node_->kind; }
const Rational& Expr::value() const { return node_->number; }
const Rational& Expr::exponent() const { return node_->number; }
const std::string& Expr::name() const { return node_->name; }
std::span<const Expr> Expr::args() const { return node_->args; }
std::size_t Expr::hash() const { return node_->hash; }
std::uint64_t Expr::symbol_mask() const { return node_->mask; }
bool Expr::is_rational() const { return node_->rational; }
bool Expr::is_zero_literal() const { return kind() == Kind::constant && node_->number == 0; }
bool Expr::is_one_literal() const { return kind() == Kind::constant && node_->number == 1; }

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.id() == b.id()) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Kind::constant:
      return a.value() == b.value();
    case Kind::variable:
    case Kind::parameter:
      return a.name() == b.name();
    case Kind::power:
      if (a.exponent() != b.exponent()) return false;
      break;
    default:
      break;
  }
  auto aa = a.args();
  auto ba = b.args();
  if (aa.size() != ba.size()) return false;
  for (std::size_t i = 0; i < aa.size(); ++i) {
    if (!structurally_equal(aa[i], ba[i])) return false;
  }
  return true;
}

int compare(const Expr& a, const Expr& b) {
  if (a.id() == b.id()) return 0;
  if (a.kind() != b.kind()) return kind_rank(a.kind()) < kind_rank(b.kind()) ? -1 : 1;
  switch (a.kind()) {
    case Kind::constant:
      return a.value() < b.value() ? -1 : (b.value() < a.value() ? 1 : 0);
    case Kind::variable:
    case Kind::parameter:
      return a.name().compare(b.name()) < 0 ? -1 : (a.name() == b.name() ? 0 : 1);
    default:
      break;
  }
  if (a.hash() != b.hash()) return a.hash() < b.hash() ? -1 : 1;
  if (a.kind() == Kind::power && a.exponent() != b.exponent()) {
    return a.exponent() < b.exponent() ? -1 : 1;
  }
  auto aa = a.args();
  auto ba = b.args();
  if (aa.size() != ba.size()) return aa.size() < ba.size() ? -1 : 1;
  for (std::size_t i = 0; i < aa.size(); ++i) {
    const int c = compare(aa[i], ba[i]);
    if (c != 0) return c;
  }
  return 0;
}

Expr sum(std::span<const Expr> terms) {
  if (terms.empty()) return zero_expr();
  if (terms.size() == 1) return terms.front();
  SumBuilder b;
  for (const Expr& t : terms) b.add(t, Rational(1));
  return b.build();
}

Expr product(std::span<const Expr> factors) {
  if (factors.empty()) return one_expr();
  if (factors.size() == 1) return factors.front();
  ProductBuilder b;
  for (const Expr& f : factors) b.add(f, Rational(1));
  return b.build();
}

Expr pow(const Expr& base, const Rational& exponent) {
  if (exponent == 0) return one_expr();
  if (exponent == 1) return base;
  switch (base.kind()) {
    case Kind::constant:
      return power_of_atom(base, exponent);
    case Kind::product:
    case Kind::power:
    case Kind::exp:
      if (is_integer(exponent) || base.kind() == Kind::exp) {
        ProductBuilder b;
        b.add(base, exponent);
        return b.build();
      }
      return raw_power(base, exponent);
    default:
      return raw_power(base, exponent);
  }
}

Expr exp(const Expr& arg) {
  if (arg.is_zero_literal()) return one_expr();
  if (arg.kind() == Kind::log) return make_node(Kind::exp, Rational(0), {}, {arg});
  return make_node(Kind::exp, Rational(0), {}, {arg});
}

Expr log(const Expr& arg) {
  if (arg.is_one_literal()) return zero_expr();
  if (arg.kind() == Kind::exp) return arg.args().front();
  if (arg.is_constant() && arg.value() <= 0) {
    throw std::domain_error("log of non-positive constant");
  }
  return make_node(Kind::log, Rational(0), {}, {arg});
}

Expr sin(const Expr& arg) {
  if (arg.is_zero_literal()) return zero_expr();
  return make_node(Kind::sin, Rational(0), {}, {arg});
}

Expr cos(const Expr& arg) {
  if (arg.is_zero_literal()) return one_expr();
  return make_node(Kind::cos, Rational(0), {}, {arg});
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero_literal()) return b;
  if (b.is_zero_literal()) return a;
  const Expr terms[] = {a, b};
  return sum(terms);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_zero_literal()) return a;
  SumBuilder s;
  s.add(a, Rational(1));
  s.add(b, Rational(-1));
  return s.build();
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero_literal() || b.is_zero_literal()) return zero_expr();
  if (a.is_one_literal()) return b;
  if (b.is_one_literal()) return a;
  const Expr factors[] = {a, b};
  return product(factors);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_zero_literal()) throw std::domain_error("division by zero in constant expression");
  if (a.is_zero_literal()) return zero_expr();
  ProductBuilder p;
  p.add(a, Rational(1));
  p.add(b, Rational(-1));
  return p.build();
}

Expr operator-(const Expr& a) {
  if (a.is_constant()) return Expr(Rational(-a.value()));
  return Expr(-1) * a;
}

Expr& operator+=(Expr& a, const Expr& b) { return a = a + b; }
Expr& operator-=(Expr& a, const Expr& b) { return a = a - b; }
Expr& operator*=(Expr& a, const Expr& b) { return a = a * b; }

// ---------------------------------------------------------------------------
// Printing

namespace {

enum Precedence { kSum = 1, kProduct = 2, kUnary = 3, kPower = 4, kAtom = 5 };

std::string rational_string(const Rational& q) {
  std::ostringstream os;
  os << mp::numerator(q);
  if (mp::denominator(q) != 1) os << '/' << mp::denominator(q);
  return os.str();
}

void print(const Expr& e, int parent, std::string& out);

void print_factor_list(const std::vector<std::pair<Expr, Rational>>& factors, std::string& out) {
  bool first = true;
  for (const auto& [base, k] : factors) {
    if (!first) out += '*';
    first = false;
    if (k == 1) {
      print(base, kProduct + 1, out);
    } else {
      print(base, kPower + 1, out);
      out += '^';
      if (is_integer(k) && k > 0) {
        out += rational_string(k);
      } else {
        out += '(' + rational_string(k) + ')';
      }
    }
  }
}

// Renders a product with non-negative coefficient `coef`.
void print_product(const Rational& coef, std::span<const Expr> factors, int parent, std::string& out) {
  std::vector<std::pair<Expr, Rational>> num;
  std::vector<std::pair<Expr, Rational>> den;
  for (const Expr& f : factors) {
    if (f.kind() == Kind::power && f.exponent() < 0) {
      den.emplace_back(f.args().front(), Rational(-f.exponent()));
    } else if (f.kind() == Kind::power) {
      num.emplace_back(f.args().front(), f.exponent());
    } else {
      num.emplace_back(f, Rational(1));
    }
  }
  const mp::mpz_int cn = mp::numerator(coef);
  const mp::mpz_int cd = mp::denominator(coef);
  const bool need_parens = parent > kProduct;
  if (need_parens) out += '(';
  std::string top;
  if (cn != 1 || num.empty()) {
    std::ostringstream os;
    os << cn;
    top = os.str();
    if (!num.empty()) top += '*';
  }
  print_factor_list(num, top);
  out += top;
  const std::size_t den_count = den.size() + (cd != 1 ? 1 : 0);
  if (den_count > 0) {
    out += '/';
    std::string bottom;
    if (cd != 1) {
      std::ostringstream os;
      os << cd;
      bottom = os.str();
      if (!den.empty()) bottom += '*';
    }
    print_factor_list(den, bottom);
    if (den_count > 1) {
      out += '(' + bottom + ')';
    } else {
      out += bottom;
    }
  }
  if (need_parens) out += ')';
}

// Splits e into a sign and a magnitude rendering for use inside sums.
bool is_negative_term(const Expr& e) {
  if (e.is_constant()) return e.value() < 0;
  if (e.kind() == Kind::product && e.args().front().is_constant()) {
    return e.args().front().value() < 0;
  }
  return false;
}

void print_magnitude(const Expr& e, int parent, std::string& out) {
  if (e.is_constant()) {
    const Rational q = mp::abs(e.value());
    const bool frac = mp::denominator(q) != 1;
    if (frac && parent > kProduct) out += '(';
    out += rational_string(q);
    if (frac && parent > kProduct) out += ')';
    return;
  }
  if (e.kind() == Kind::product && e.args().front().is_constant()) {
    print_product(mp::abs(e.args().front().value()), e.args().subspan(1), parent, out);
    return;
  }
  print(e, parent, out);
}

void print(const Expr& e, int parent, std::string& out) {
  switch (e.kind()) {
    case Kind::constant: {
      const bool neg = e.value() < 0;
      const bool frac = mp::denominator(e.value()) != 1;
      const bool parens = (neg && parent > kSum) || (frac && parent > kProduct);
      if (parens) out += '(';
      out += rational_string(e.value());
      if (parens) out += ')';
      return;
    }
    case Kind::variable:
    case Kind::parameter:
      out += e.name();
      return;
    case Kind::sum: {
      const bool parens = parent > kSum;
      if (parens) out += '(';
      bool first = true;
      for (const Expr& t : e.args()) {
        const bool neg = is_negative_term(t);
        if (first) {
          if (neg) out += '-';
        } else {
          out += neg ? " - " : " + ";
        }
        first = false;
        print_magnitude(t, kSum + 1, out);
      }
      if (parens) out += ')';
      return;
    }
    case Kind::product: {
      auto args = e.args();
      if (args.front().is_constant()) {
        const Rational& c = args.front().value();
        if (c < 0) {
          const bool parens = parent > kSum;
          if (parens) out += '(';
          out += '-';
          print_product(-c, args.subspan(1), kProduct, out);
          if (parens) out += ')';
          return;
        }
        print_product(c, args.subspan(1), parent, out);
        return;
      }
      print_product(Rational(1), args, parent, out);
      return;
    }
    case Kind::power: {
      const Expr base = e.args().front();
      if (e.exponent() < 0) {
        print_product(Rational(1), std::span<const Expr>(&e, 1), parent, out);
        return;
      }
      const bool parens = parent > kPower;
      if (parens) out += '(';
      print(base, kPower + 1, out);
      out += '^';
      if (is_integer(e.exponent())) {
        out += rational_string(e.exponent());
      } else {
        out += '(' + rational_string(e.exponent()) + ')';
      }
      if (parens) out += ')';
      return;
    }
    case Kind::exp:
    case Kind::log:
    case Kind::sin:
    case Kind::cos: {
      static const char* names[] = {"exp", "log", "sin", "cos"};
      out += names[static_cast<int>(e.kind()) - static_cast<int>(Kind::exp)];
      out += '(';
      print(e.args().front(), 0, out);
      out += ')';
      return;
    }
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print(e, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Differentiation

Differentiator::Differentiator(std::string var) : var_(std::move(var)), bit_(symbol_bit(var_)) {}

Expr Differentiator::operator()(const Expr& e) {
  if ((e.symbol_mask() & bit_) == 0) return zero_expr();
  auto it = memo_.find(e.id());
  if (it != memo_.end()) return it->second;
  Expr d;
  switch (e.kind()) {
    case Kind::constant:
    case Kind::parameter:
      d = zero_expr();
      break;
    case Kind::variable:
      d = e.name() == var_ ? one_expr() : zero_expr();
      break;
    case Kind::sum: {
      std::vector<Expr> terms;
      terms.reserve(e.args().size());
      for (const Expr& t : e.args()) {
        Expr dt = (*this)(t);
        if (!dt.is_zero_literal()) terms.push_back(std::move(dt));
      }
      d = sum(terms);
      break;
    }
    case Kind::product: {
      auto args = e.args();
      std::vector<Expr> terms;
      for (std::size_t i = 0; i < args.size(); ++i) {
        Expr di = (*this)(args[i]);
        if (di.is_zero_literal()) continue;
        std::vector<Expr> factors(args.begin(), args.end());
        factors[i] = di;
        terms.push_back(product(factors));
      }
      d = sum(terms);
      break;
    }
    case Kind::power: {
      const Expr& base = e.args().front();
      Expr db = (*this)(base);
      const Rational& k = e.exponent();
      d = Expr(k) * pow(base, k - 1) * db;
      break;
    }
    case Kind::exp:
      d = e * (*this)(e.args().front());
      break;
    case Kind::log:
      d = (*this)(e.args().front()) / e.args().front();
      break;
    case Kind::sin:
      d = cos(e.args().front()) * (*this)(e.args().front());
      break;
    case Kind::cos:
      d = -(sin(e.args().front()) * (*this)(e.args().front()));
      break;
  }
  memo_.emplace(e.id(), d);
  return d;
}

Expr diff(const Expr& e, const std::string& var) {
  Differentiator d(var);
  return d(e);
}

// ---------------------------------------------------------------------------
// Traversals

namespace {

class Substituter {
 public:
  explicit Substituter(const std::map<std::string, Expr>& map) : map_(map) {
    for (const auto& [name, _] : map) mask_ |= symbol_bit(name);
  }

  Expr operator()(const Expr& e) {
    if ((e.symbol_mask() & mask_) == 0) return e;
    auto it = memo_.find(e.id());
    if (it != memo_.end()) return it->second;
    Expr r;
    switch (e.kind()) {
      case Kind::variable:
      case Kind::parameter: {
        auto m = map_.find(e.name());
        r = m == map_.end() ? e : m->second;
        break;
      }
      case Kind::constant:
        r = e;
        break;
      case Kind::sum:
      case Kind::product: {
        std::vector<Expr> args;
        args.reserve(e.args().size());
        for (const Expr& a : e.args()) args.push_back((*this)(a));
        r = e.kind() == Kind::sum ? sum(args) : product(args);
        break;
      }
      case Kind::power:
        r = pow((*this)(e.args().front()), e.exponent());
        break;
      case Kind::exp:
        r = exp((*this)(e.args().front()));
        break;
      case Kind::log:
        r = log((*this)(e.args().front()));
        break;
      case Kind::sin:
        r = sin((*this)(e.args().front()));
        break;
      case Kind::cos:
        r = cos((*this)(e.args().front()));
        break;
    }
    memo_.emplace(e.id(), r);
    return r;
  }

 private:
  const std::map<std::string, Expr>& map_;
  std::uint64_t mask_ = 0;
  std::unordered_map<const Node*, Expr> memo_;
};

template <class Visit>
void walk(const Expr& root, Visit&& visit) {
  std::unordered_set<const Node*> seen;
  std::vector<Expr> stack{root};
  while (!stack.empty()) {
    Expr e = std::move(stack.back());
    stack.pop_back();
    if (!seen.insert(e.id()).second) continue;
    visit(e);
    for (const Expr& a : e.args()) stack.push_back(a);
  }
}

}  // namespace

Expr substitute(const Expr& e, const std::map<std::string, Expr>& replacement) {
  Substituter s(replacement);
  return s(e);
}

std::set<std::string> free_symbols(const Expr& e) {
  std::set<std::string> names;
  walk(e, [&](const Expr& n) {
    if (n.kind() == Kind::variable || n.kind() == Kind::parameter) names.insert(n.name());
  });
  return names;
}

std::size_t node_count(const Expr& e) {
  std::size_t count = 0;
  walk(e, [&](const Expr&) { ++count; });
  return count;
}

}  // namespace warpcurv
