#include "warpcurv/parse.hpp"

#include <cctype>

namespace warpcurv {

ParseError::ParseError(const std::string& message, std::size_t offset)
    : std::runtime_error("syntax error at offset " + std::to_string(offset) + ": " + message),
      offset_(offset),
      detail_(message) {}

namespace {

bool is_default_coordinate(std::string_view name) {
  if (name.size() < 2 || name[0] != 'x') return false;
  for (std::size_t i = 1; i < name.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return false;
  }
  return true;
}

class Parser {
 public:
  Parser(std::string_view text, const Symbols& symbols) : text_(text), symbols_(symbols) {}

  Expr run() {
    Expr e = expression();
    skip_space();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' before end of input");
      fail(std::string("expected '") + c + "'");
    }
  }

  Expr expression() {
    Expr e = term();
    for (;;) {
      if (accept('+')) {
        e = e + term();
      } else if (accept('-')) {
        e = e - term();
      } else {
        return e;
      }
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) {
        e = e * unary();
      } else if (accept('/')) {
        const std::size_t at = pos_;
        Expr d = unary();
        if (d.is_zero_literal()) {
          pos_ = at;
          fail("division by zero");
        }
        e = e / d;
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr b = base();
    if (!accept('^')) return b;
    skip_space();
    const std::size_t at = pos_;
    Expr k = exponent();
    if (!k.is_constant()) {
      pos_ = at;
      fail("exponent must be a rational constant");
    }
    try {
      return pow(b, k.value());
    } catch (const std::domain_error& err) {
      pos_ = at;
      fail(err.what());
    }
  }

  // Right-associative: a^b^c == a^(b^c).
  Expr exponent() {
    if (accept('-')) return -exponent();
    if (accept('+')) return exponent();
    Expr b = base();
    if (!accept('^')) return b;
    skip_space();
    const std::size_t at = pos_;
    Expr k = exponent();
    if (!k.is_constant() || !b.is_constant()) {
      pos_ = at;
      fail("exponent must be a rational constant");
    }
    return pow(b, k.value());
  }

  Rational integer() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return Rational(mp::mpz_int(std::string(text_.substr(start, pos_ - start))));
  }

  Expr base() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      Rational value = integer();
      if (pos_ < text_.size() && text_[pos_] == '.') fail("decimal literals are not supported");
      return Expr(value);
    }
    if (c == '(') {
      ++pos_;
      Expr e = expression();
      expect(')');
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      const std::string name(text_.substr(start, pos_ - start));
      if (name == "exp" || name == "log" || name == "sin" || name == "cos") {
        expect('(');
        const std::size_t at = pos_;
        Expr arg = expression();
        expect(')');
        if (name == "exp") return exp(arg);
        if (name == "sin") return sin(arg);
        if (name == "cos") return cos(arg);
        try {
          return log(arg);
        } catch (const std::domain_error& err) {
          pos_ = at;
          fail(err.what());
        }
      }
      if (symbols_.parameters.count(name)) return Expr::parameter(name);
      const bool coordinate = symbols_.coordinates.empty() ? is_default_coordinate(name)
                                                           : symbols_.coordinates.count(name) > 0;
      if (coordinate) return Expr::variable(name);
      pos_ = start;
      fail("unknown identifier '" + name + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  const Symbols& symbols_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text, const Symbols& symbols) { return Parser(text, symbols).run(); }

}  // namespace warpcurv
