#include "katu/expr.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "katu/special_fn.hpp"

namespace katu::expr {

ParseError::ParseError(const std::string& message, std::size_t offset, std::string expected)
    : std::runtime_error(message + " at offset " + std::to_string(offset) +
                         (expected.empty() ? "" : " (expected " + expected + ")")),
      offset_(offset),
      expected_(std::move(expected)) {}

EvalError::EvalError(const std::string& message, std::string subexpression)
    : std::runtime_error(message + " in '" + subexpression + "'"),
      subexpression_(std::move(subexpression)) {}

namespace {

using NodePtr = std::shared_ptr<const Node>;

struct FuncInfo {
  std::string_view name;
  Func func;
  std::size_t arity;
};

constexpr FuncInfo kFuncs[] = {
    {"pow", Func::Pow, 2}, {"exp", Func::Exp, 1},   {"log", Func::Log, 1},
    {"sin", Func::Sin, 1}, {"cos", Func::Cos, 1},   {"abs", Func::Abs, 1},
    {"sqrt", Func::Sqrt, 1}, {"gamma", Func::Gamma, 1},
};

std::string_view func_name(Func f) {
  for (const auto& info : kFuncs) {
    if (info.func == f) return info.name;
  }
  return "?";
}

NodePtr make(Kind k, std::vector<NodePtr> args = {}) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->args = std::move(args);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  NodePtr parse_all() {
    skip_ws();
    if (pos_ == s_.size()) throw ParseError("empty expression", pos_, "an expression");
    NodePtr n = sum();
    skip_ws();
    if (pos_ != s_.size()) {
      throw ParseError("unexpected '" + std::string(1, s_[pos_]) + "'", pos_, "operator or end of input");
    }
    return n;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' || s_[pos_] == '\r')) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      throw ParseError(pos_ < s_.size() ? "unexpected '" + std::string(1, s_[pos_]) + "'"
                                        : std::string("unexpected end of input"),
                       pos_, "'" + std::string(1, c) + "'");
    }
  }

  NodePtr sum() {
    NodePtr lhs = product();
    for (;;) {
      if (accept('+')) {
        lhs = make(Kind::Add, {lhs, product()});
      } else if (accept('-')) {
        lhs = make(Kind::Sub, {lhs, product()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr product() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(Kind::Mul, {lhs, unary()});
      } else if (accept('/')) {
        lhs = make(Kind::Div, {lhs, unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Kind::Neg, {unary()});
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Kind::Pow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ == s_.size()) throw ParseError("unexpected end of input", pos_, "a number, variable or '('");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = sum();
      expect(')');
      return inner;
    }
    if ((c >= '0' && c <= '9') || c == '.') return number();
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') return identifier();
    throw ParseError("unexpected '" + std::string(1, c) + "'", pos_, "a number, variable or '('");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    std::size_t end = pos_;
    while (end < s_.size() && ((s_[end] >= '0' && s_[end] <= '9') || s_[end] == '.')) ++end;
    if (end < s_.size() && (s_[end] == 'e' || s_[end] == 'E')) {
      std::size_t k = end + 1;
      if (k < s_.size() && (s_[k] == '+' || s_[k] == '-')) ++k;
      if (k < s_.size() && s_[k] >= '0' && s_[k] <= '9') {
        end = k;
        while (end < s_.size() && s_[end] >= '0' && s_[end] <= '9') ++end;
      }
    }
    double v = 0.0;
    const auto res = std::from_chars(s_.data() + start, s_.data() + end, v);
    if (res.ec != std::errc() || res.ptr != s_.data() + end) {
      throw ParseError("malformed number '" + std::string(s_.substr(start, end - start)) + "'", start,
                       "a finite decimal literal");
    }
    pos_ = end;
    auto n = std::make_shared<Node>();
    n->kind = Kind::Number;
    n->value = v;
    return n;
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && ((s_[pos_] >= 'a' && s_[pos_] <= 'z') || (s_[pos_] >= 'A' && s_[pos_] <= 'Z') ||
                                (s_[pos_] >= '0' && s_[pos_] <= '9') || s_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = s_.substr(start, pos_ - start);
    if (name == "t") return make(Kind::VarT);
    if (name == "x") return make(Kind::VarX);
    if (name == "u") return make(Kind::VarU);
    for (const auto& info : kFuncs) {
      if (name != info.name) continue;
      expect('(');
      auto n = std::make_shared<Node>();
      n->kind = Kind::Call;
      n->func = info.func;
      n->args.push_back(sum());
      while (accept(',')) n->args.push_back(sum());
      const std::size_t close = pos_;
      expect(')');
      if (n->args.size() != info.arity) {
        throw ParseError(std::string(info.name) + " takes " + std::to_string(info.arity) + " argument(s), got " +
                             std::to_string(n->args.size()),
                         close, "");
      }
      return n;
    }
    throw ParseError("unknown identifier '" + std::string(name) + "'", start,
                     "t, x, u or one of pow, exp, log, sin, cos, abs, sqrt, gamma");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print_node(const Node& n, std::string& out) {
  auto binary = [&](const char* op) {
    out += '(';
    print_node(*n.args[0], out);
    out += op;
    print_node(*n.args[1], out);
    out += ')';
  };
  switch (n.kind) {
    case Kind::Number: out += format_number(n.value); break;
    case Kind::VarT: out += 't'; break;
    case Kind::VarX: out += 'x'; break;
    case Kind::VarU: out += 'u'; break;
    case Kind::Neg:
      out += "(-";
      print_node(*n.args[0], out);
      out += ')';
      break;
    case Kind::Add: binary(" + "); break;
    case Kind::Sub: binary(" - "); break;
    case Kind::Mul: binary(" * "); break;
    case Kind::Div: binary(" / "); break;
    case Kind::Pow: binary("^"); break;
    case Kind::Call:
      out += func_name(n.func);
      out += '(';
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) out += ", ";
        print_node(*n.args[i], out);
      }
      out += ')';
      break;
  }
}

std::string text_of(const Node& n) {
  std::string s;
  print_node(n, s);
  return s;
}

double power_checked(double base, double expo, const Node& n) {
  if (base < 0.0 && std::floor(expo) != expo) {
    throw EvalError("negative base with non-integer exponent", text_of(n));
  }
  if (base == 0.0 && expo < 0.0) throw EvalError("zero raised to a negative power", text_of(n));
  return std::pow(base, expo);
}

double eval_node(const Node& n, const Env& env) {
  switch (n.kind) {
    case Kind::Number: return n.value;
    case Kind::VarT: return env.t;
    case Kind::VarX: return env.x;
    case Kind::VarU: return env.u;
    case Kind::Neg: return -eval_node(*n.args[0], env);
    case Kind::Add: return eval_node(*n.args[0], env) + eval_node(*n.args[1], env);
    case Kind::Sub: return eval_node(*n.args[0], env) - eval_node(*n.args[1], env);
    case Kind::Mul: return eval_node(*n.args[0], env) * eval_node(*n.args[1], env);
    case Kind::Div: {
      const double num = eval_node(*n.args[0], env);
      const double den = eval_node(*n.args[1], env);
      if (den == 0.0) throw EvalError("division by zero", text_of(n));
      return num / den;
    }
    case Kind::Pow: return power_checked(eval_node(*n.args[0], env), eval_node(*n.args[1], env), n);
    case Kind::Call: {
      const double a = eval_node(*n.args[0], env);
      switch (n.func) {
        case Func::Pow: return power_checked(a, eval_node(*n.args[1], env), n);
        case Func::Exp: return std::exp(a);
        case Func::Log:
          if (!(a > 0.0)) throw EvalError("log of nonpositive value", text_of(n));
          return std::log(a);
        case Func::Sin: return std::sin(a);
        case Func::Cos: return std::cos(a);
        case Func::Abs: return std::abs(a);
        case Func::Sqrt:
          if (a < 0.0) throw EvalError("sqrt of negative value", text_of(n));
          return std::sqrt(a);
        case Func::Gamma:
          if (!(a > 0.0)) throw EvalError("gamma of nonpositive value", text_of(n));
          try {
            return katu::gamma(a);
          } catch (const std::overflow_error&) {
            throw EvalError("gamma overflows", text_of(n));
          }
      }
    }
  }
  throw EvalError("corrupt expression tree", "");
}

bool same_tree(const Node& l, const Node& r) {
  if (l.kind != r.kind || l.args.size() != r.args.size()) return false;
  if (l.kind == Kind::Number && l.value != r.value) return false;
  if (l.kind == Kind::Call && l.func != r.func) return false;
  for (std::size_t i = 0; i < l.args.size(); ++i) {
    if (!same_tree(*l.args[i], *r.args[i])) return false;
  }
  return true;
}

bool mentions_x(const Node& n) {
  if (n.kind == Kind::VarX) return true;
  for (const auto& a : n.args) {
    if (mentions_x(*a)) return true;
  }
  return false;
}

}  // namespace

double Expr::eval(const Env& env) const { return eval_node(*root_, env); }

std::string Expr::print() const { return text_of(*root_); }

bool Expr::uses_x() const { return mentions_x(*root_); }

bool operator==(const Expr& l, const Expr& r) {
  if (!l.root_ || !r.root_) return l.root_ == r.root_;
  return same_tree(*l.root_, *r.root_);
}

Expr parse(std::string_view text) { return Expr(Parser(text).parse_all()); }

}  // namespace katu::expr
