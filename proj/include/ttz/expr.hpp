// Coefficient expressions: complex-valued functions of a real variable x in [0, 1].
//
// Grammar (whitespace between tokens is ignored):
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := unary ('^' factor)?
//   unary  := '-'? atom
//   atom   := decimal-number | 'i' | 'x' | fname '(' expr ')' | '(' expr ')'
//   fname  := sqrt | sin | cos | exp | log
//
// '^' is right-associative and its exponent must be a constant integer.
// Implicit multiplication ("2x") is a syntax error.  sqrt and log use
// principal branches.
#pragma once

#include <cctype>
#include <cmath>
#include <complex>
#include <cstdio>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ttz/errors.hpp"

namespace ttz {

using cplx = std::complex<double>;

struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

enum class NodeKind { Number, ImagUnit, Variable, Negate, Binary, Call };
enum class BinaryOp : char { Add = '+', Sub = '-', Mul = '*', Div = '/', Pow = '^' };
enum class Function { Sqrt, Sin, Cos, Exp, Log };

inline const char* function_name(Function f) {
  switch (f) {
    case Function::Sqrt: return "sqrt";
    case Function::Sin: return "sin";
    case Function::Cos: return "cos";
    case Function::Exp: return "exp";
    case Function::Log: return "log";
  }
  return "?";
}

struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  NodeKind kind = NodeKind::Number;
  double number = 0.0;              // Number
  BinaryOp op = BinaryOp::Add;      // Binary
  Function fn = Function::Sqrt;     // Call
  long exponent = 0;                // Binary Pow: folded integer exponent
  NodePtr lhs;                      // Negate, Call: operand; Binary: left
  NodePtr rhs;                      // Binary: right
  SourceSpan span;
};

namespace detail {

inline cplx integer_power(cplx base, long e) {
  if (e < 0) {
    if (base == cplx(0.0, 0.0)) throw DomainError("division by zero (negative power of zero)");
    return cplx(1.0, 0.0) / integer_power(base, -e);
  }
  cplx result(1.0, 0.0);
  while (e > 0) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

inline cplx eval_node(const ExprNode& node, double x) {
  switch (node.kind) {
    case NodeKind::Number: return {node.number, 0.0};
    case NodeKind::ImagUnit: return {0.0, 1.0};
    case NodeKind::Variable: return {x, 0.0};
    case NodeKind::Negate: return cplx{} - eval_node(*node.lhs, x);
    case NodeKind::Call: {
      cplx arg = eval_node(*node.lhs, x);
      // -0 imaginary parts would select the lower side of the branch cut
      arg.imag(arg.imag() + 0.0);
      switch (node.fn) {
        case Function::Sqrt: return std::sqrt(arg);
        case Function::Sin: return std::sin(arg);
        case Function::Cos: return std::cos(arg);
        case Function::Exp: return std::exp(arg);
        case Function::Log:
          if (arg == cplx(0.0, 0.0)) throw DomainError("log of zero");
          return std::log(arg);
      }
      break;
    }
    case NodeKind::Binary: {
      const cplx a = eval_node(*node.lhs, x);
      if (node.op == BinaryOp::Pow) return integer_power(a, node.exponent);
      const cplx b = eval_node(*node.rhs, x);
      switch (node.op) {
        case BinaryOp::Add: return a + b;
        case BinaryOp::Sub: return a - b;
        case BinaryOp::Mul: return a * b;
        case BinaryOp::Div:
          if (b == cplx(0.0, 0.0)) throw DomainError("division by zero");
          return a / b;
        case BinaryOp::Pow: break;
      }
      break;
    }
  }
  throw std::logic_error("malformed expression node");
}

inline bool depends_on_x(const ExprNode& node) {
  if (node.kind == NodeKind::Variable) return true;
  return (node.lhs && depends_on_x(*node.lhs)) || (node.rhs && depends_on_x(*node.rhs));
}

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Fully parenthesized so that printing and reparsing preserves the tree shape.
inline void print_node(const ExprNode& node, std::string& out) {
  switch (node.kind) {
    case NodeKind::Number: out += format_number(node.number); return;
    case NodeKind::ImagUnit: out += 'i'; return;
    case NodeKind::Variable: out += 'x'; return;
    case NodeKind::Negate:
      out += "(-";
      print_node(*node.lhs, out);
      out += ')';
      return;
    case NodeKind::Call:
      out += function_name(node.fn);
      out += '(';
      print_node(*node.lhs, out);
      out += ')';
      return;
    case NodeKind::Binary:
      out += '(';
      print_node(*node.lhs, out);
      out += static_cast<char>(node.op);
      print_node(*node.rhs, out);
      out += ')';
      return;
  }
}

inline bool same_structure(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::Number: return a.number == b.number;
    case NodeKind::ImagUnit:
    case NodeKind::Variable: return true;
    case NodeKind::Negate: return same_structure(*a.lhs, *b.lhs);
    case NodeKind::Call: return a.fn == b.fn && same_structure(*a.lhs, *b.lhs);
    case NodeKind::Binary:
      return a.op == b.op && same_structure(*a.lhs, *b.lhs) && same_structure(*a.rhs, *b.rhs);
  }
  return false;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse() {
    NodePtr root = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) fail(pos_, std::string("unexpected '") + src_[pos_] + "'");
    return root;
  }

 private:
  [[noreturn]] void fail(std::size_t at, const std::string& what) const { throw ParseError(what, at); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < src_.size() && src_[pos_] == c;
  }

  static NodePtr make_binary(BinaryOp op, NodePtr lhs, NodePtr rhs) {
    auto node = std::make_shared<ExprNode>();
    node->kind = NodeKind::Binary;
    node->op = op;
    node->span = {lhs->span.begin, rhs->span.end};
    node->lhs = std::move(lhs);
    node->rhs = std::move(rhs);
    return node;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    while (true) {
      skip_ws();
      if (pos_ >= src_.size() || (src_[pos_] != '+' && src_[pos_] != '-')) return lhs;
      const auto op = static_cast<BinaryOp>(src_[pos_++]);
      lhs = make_binary(op, std::move(lhs), parse_term());
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    while (true) {
      skip_ws();
      if (pos_ >= src_.size() || (src_[pos_] != '*' && src_[pos_] != '/')) return lhs;
      const auto op = static_cast<BinaryOp>(src_[pos_++]);
      lhs = make_binary(op, std::move(lhs), parse_factor());
    }
  }

  NodePtr parse_factor() {
    NodePtr base = parse_unary();
    if (!peek('^')) return base;
    ++pos_;
    skip_ws();
    const std::size_t exp_at = pos_;
    NodePtr exponent = parse_factor();
    if (depends_on_x(*exponent)) fail(exp_at, "non-integer exponent (exponent depends on x)");
    cplx value;
    try {
      value = eval_node(*exponent, 0.0);
    } catch (const DomainError&) {
      fail(exp_at, "non-integer exponent");
    }
    if (value.imag() != 0.0 || value.real() != std::round(value.real()) ||
        std::abs(value.real()) > 1e9) {
      fail(exp_at, "non-integer exponent");
    }
    auto node = std::make_shared<ExprNode>(*make_binary(BinaryOp::Pow, std::move(base), std::move(exponent)));
    node->exponent = static_cast<long>(value.real());
    return node;
  }

  NodePtr parse_unary() {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == '-') {
      const std::size_t at = pos_++;
      NodePtr operand = parse_atom();
      auto node = std::make_shared<ExprNode>();
      node->kind = NodeKind::Negate;
      node->span = {at, operand->span.end};
      node->lhs = std::move(operand);
      return node;
    }
    return parse_atom();
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos_ >= src_.size()) fail(pos_, "unexpected end of input");
    const std::size_t start = pos_;
    const char c = src_[pos_];

    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();

    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      if (!peek(')')) fail(pos_, "expected ')'");
      ++pos_;
      return inner;
    }

    if (std::isalpha(static_cast<unsigned char>(c))) {
      while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      const std::string_view name = src_.substr(start, pos_ - start);
      auto node = std::make_shared<ExprNode>();
      node->span = {start, pos_};
      if (name == "i" || name == "x") {
        node->kind = name == "i" ? NodeKind::ImagUnit : NodeKind::Variable;
        return node;
      }
      Function fn;
      if (name == "sqrt") fn = Function::Sqrt;
      else if (name == "sin") fn = Function::Sin;
      else if (name == "cos") fn = Function::Cos;
      else if (name == "exp") fn = Function::Exp;
      else if (name == "log") fn = Function::Log;
      else if (peek('(')) fail(start, "unknown function '" + std::string(name) + "'");
      else fail(start, "unknown identifier '" + std::string(name) + "'");
      if (!peek('(')) fail(pos_, "expected '(' after function name");
      ++pos_;
      NodePtr arg = parse_expr();
      if (!peek(')')) fail(pos_, "expected ')'");
      ++pos_;
      node->kind = NodeKind::Call;
      node->fn = fn;
      node->lhs = std::move(arg);
      node->span.end = pos_;
      return node;
    }

    fail(pos_, std::string("unexpected '") + c + "'");
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t count = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_, ++count;
      return count;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) fail(start, "malformed number");
    // Scientific suffix only when digits follow; otherwise 'e' starts an identifier.
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        pos_ = look;
        digits();
      }
    }
    auto node = std::make_shared<ExprNode>();
    node->kind = NodeKind::Number;
    node->number = std::stod(std::string(src_.substr(start, pos_ - start)));
    node->span = {start, pos_};
    return node;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Immutable parsed expression.  Copies share the tree; safe to evaluate concurrently.
class Expr {
 public:
  Expr() : Expr(constant(0.0)) {}

  static Expr parse(std::string_view src) {
    for (std::size_t k = 0; k < src.size(); ++k) {
      if (static_cast<unsigned char>(src[k]) > 127) throw ParseError("non-ASCII character", k);
    }
    return Expr(detail::Parser(src).parse(), std::string(src));
  }

  static Expr constant(double value) {
    auto node = std::make_shared<ExprNode>();
    node->kind = NodeKind::Number;
    node->number = value;
    return Expr(std::move(node), detail::format_number(value));
  }

  cplx operator()(double x) const { return detail::eval_node(*root_, x); }
  cplx eval(double x) const { return (*this)(x); }

  const ExprNode& root() const { return *root_; }
  const std::string& source() const { return source_; }
  bool depends_on_x() const { return detail::depends_on_x(*root_); }

  std::string to_string() const {
    std::string out;
    detail::print_node(*root_, out);
    return out;
  }

  bool same_structure(const Expr& other) const { return detail::same_structure(*root_, *other.root_); }

  bool is_zero_literal() const { return root_->kind == NodeKind::Number && root_->number == 0.0; }

 private:
  Expr(NodePtr root, std::string source) : root_(std::move(root)), source_(std::move(source)) {}

  NodePtr root_;
  std::string source_;
};

inline Expr parse_expr(std::string_view src) { return Expr::parse(src); }

inline cplx eval_expr(const Expr& e, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("expression evaluated outside [0, 1]");
  return e(x);
}

}  // namespace ttz
