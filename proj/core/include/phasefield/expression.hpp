#pragma once

#include <memory>
#include <string>

namespace phasefield {

/// Closed-form scalar expression over the spatial coordinates x, y, z.
///
/// Grammar: decimal literals, the variables x y z, the constants pi and e,
/// the operators + - * / ^ (powers bind right), parentheses, and the
/// one-argument functions sin cos tan exp log sqrt tanh abs.
///
/// Used for initial-datum descriptors such as "1 + 0.5*cos(pi*x)".
class Expression {
public:
  Expression();  // constant zero

  /// Parses `text`; throws std::invalid_argument with a position diagnostic
  /// on malformed input.
  static Expression parse(const std::string& text);

  double operator()(double x, double y = 0.0, double z = 0.0) const;

  const std::string& text() const { return text_; }

  struct Node;  // parse-tree node; an implementation detail of the .cpp

private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace phasefield
