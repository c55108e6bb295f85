#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace katu::expr {

// Grammar, loosest binding first:
//
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | t | x | u | func '(' args ')' | '(' sum ')'
//   func    := pow/2 | exp | log | sin | cos | abs | sqrt | gamma
//
// So -x^2 is -(x^2) and 2^3^2 is 2^9.

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t offset, std::string expected);
  std::size_t offset() const { return offset_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

class EvalError : public std::runtime_error {
 public:
  EvalError(const std::string& message, std::string subexpression);
  const std::string& subexpression() const { return subexpression_; }

 private:
  std::string subexpression_;
};

enum class Kind { Number, VarT, VarX, VarU, Neg, Add, Sub, Mul, Div, Pow, Call };

enum class Func { Pow, Exp, Log, Sin, Cos, Abs, Sqrt, Gamma };

struct Node {
  Kind kind = Kind::Number;
  double value = 0.0;               // Number
  Func func = Func::Exp;            // Call
  std::vector<std::shared_ptr<const Node>> args;  // operands / call arguments
};

/// Values for the three variables an expression may reference.
struct Env {
  double t = 0.0;
  double x = 0.0;
  double u = 0.0;
};

/// Immutable parsed expression. Cheap to copy (shares the tree).
class Expr {
 public:
  Expr() = default;
  explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

  const Node& root() const { return *root_; }
  double eval(const Env& env) const;
  /// Fully parenthesized text that parses back to the same tree.
  std::string print() const;

  bool uses_x() const;

  friend bool operator==(const Expr& l, const Expr& r);

 private:
  std::shared_ptr<const Node> root_;
};

Expr parse(std::string_view text);

inline double eval(const Expr& e, const Env& env) { return e.eval(env); }
inline std::string print(const Expr& e) { return e.print(); }

}  // namespace katu::expr
