#pragma once

// Small expression language for fields on the unit torus.
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' unary)?
//   atom   := number | 'pi' | 'e' | variable | func '(' expr ')' | '(' expr ')'
//   variable: x, y, z or x1, x2, x3;  func: cos, sin, exp, sqrt, log, abs

#include <memory>
#include <span>
#include <string>
#include <string_view>

namespace edpflow {

class Expr {
 public:
  struct Node;

  /// Throws ConfigError with the position of the first syntax error.
  static Expr parse(std::string_view source);
  static Expr constant(double value);

  /// Evaluates at x; coordinates beyond x.size() read as 0.
  double operator()(std::span<const double> x) const;

  const std::string& source() const noexcept { return source_; }
  bool is_constant() const noexcept;

 private:
  std::shared_ptr<const Node> root_;
  std::string source_;
};

}  // namespace edpflow
