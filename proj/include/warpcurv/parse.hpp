#pragma once

#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include "warpcurv/expr.hpp"

namespace warpcurv {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t offset);
  /// Byte offset of the offending token in the input.
  std::size_t offset() const { return offset_; }
  /// Message without the offset prefix.
  const std::string& detail() const { return detail_; }

 private:
  std::size_t offset_;
  std::string detail_;
};

/// Names an expression may refer to. When `coordinates` is empty any
/// identifier of the form x<digits> is accepted as a coordinate.
struct Symbols {
  std::set<std::string> coordinates;
  std::set<std::string> parameters;
};

/// Parses infix text: + - * / ^, unary minus, parentheses, exp/log/sin/cos
/// and integer literals. Exponents must fold to rational constants and bind
/// tighter than '/', so a fractional power is written `x1^(1/2)`.
Expr parse(std::string_view text, const Symbols& symbols = {});

}  // namespace warpcurv
