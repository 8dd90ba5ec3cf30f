#pragma once

#include <memory>
#include <span>
#include <string>

namespace fraclab::expr {

/// A parsed scalar expression over point coordinates. Supported grammar:
/// numbers, x / y (coordinates), pi / e, + - * / ^, unary minus, parentheses,
/// and the one-argument functions sin cos exp log sqrt abs.
class Expression {
 public:
  virtual ~Expression() = default;
  virtual double eval(std::span<const double> point) const = 0;
};

/// Parses the expression or throws std::invalid_argument with a position
/// diagnostic.
std::shared_ptr<const Expression> parse(const std::string& text);

}  // namespace fraclab::expr
