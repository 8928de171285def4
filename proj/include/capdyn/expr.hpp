#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace capdyn {

/// Lexical or syntax error. `position` is a 0-based offset into the parsed
/// text.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : std::runtime_error("at " + std::to_string(position) + ": " + message), message_(message), position_(position) {}
  std::size_t position() const { return position_; }
  const std::string& message() const { return message_; }

 private:
  std::string message_;
  std::size_t position_;
};

/// Coordinates visible to an expression. Both forms are filled in whatever
/// the coordinate mode.
struct Vars {
  double x = 0, y = 0, r = 0, theta = 0;

  static Vars cartesian(double x, double y);
  static Vars polar(double r, double theta);
};

/// Immutable syntax tree of a real-valued expression.
///
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := number | ident | '(' expr ')' | func '(' expr (',' expr)* ')'
///
/// Unary minus is accepted in front of a factor. Functions are sin, cos, exp,
/// sqrt, abs and mod2pi, each of one argument. Constants are pi and phi.
class Expr {
 public:
  struct Node;

  double eval(const Vars& v) const;
  /// Fully parenthesized form, stable across parses of equivalent text.
  std::string to_string() const;

  explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

 private:
  std::shared_ptr<const Node> root_;
};

/// Parses a whole string. `constants` adds named values (from `let:` lines).
Expr parse_expr(std::string_view text, const std::map<std::string, double>& constants = {});

}  // namespace capdyn
