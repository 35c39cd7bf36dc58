#include "edpflow/expr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "edpflow/errors.hpp"

namespace edpflow {

struct Expr::Node {
  enum class Op { number, variable, neg, add, sub, mul, div, pow, func };
  Op op = Op::number;
  double value = 0.0;
  int var = 0;
  double (*fn)(double) = nullptr;
  std::shared_ptr<const Node> lhs, rhs;

  double eval(std::span<const double> x) const {
    switch (op) {
      case Op::number: return value;
      case Op::variable: return static_cast<std::size_t>(var) < x.size() ? x[var] : 0.0;
      case Op::neg: return -lhs->eval(x);
      case Op::add: return lhs->eval(x) + rhs->eval(x);
      case Op::sub: return lhs->eval(x) - rhs->eval(x);
      case Op::mul: return lhs->eval(x) * rhs->eval(x);
      case Op::div: return lhs->eval(x) / rhs->eval(x);
      case Op::pow: return std::pow(lhs->eval(x), rhs->eval(x));
      case Op::func: return fn(lhs->eval(x));
    }
    return 0.0;
  }

  bool constant() const {
    switch (op) {
      case Op::number: return true;
      case Op::variable: return false;
      default: return (!lhs || lhs->constant()) && (!rhs || rhs->constant());
    }
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;
using Op = Expr::Node::Op;

NodePtr make_number(double v) {
  auto n = std::make_shared<Expr::Node>();
  n->op = Op::number;
  n->value = v;
  return n;
}

NodePtr make_binary(Op op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Expr::Node>();
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (pos_ != src_.size()) fail("unexpected trailing input");
    return n;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("", "expression '" + std::string(src_) + "' at offset " + std::to_string(pos_) + ": " + what);
  }

  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr n = term();
    for (;;) {
      if (accept('+')) n = make_binary(Op::add, n, term());
      else if (accept('-')) n = make_binary(Op::sub, n, term());
      else return n;
    }
  }

  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      if (accept('*')) n = make_binary(Op::mul, n, unary());
      else if (accept('/')) n = make_binary(Op::div, n, unary());
      else return n;
    }
  }

  NodePtr unary() {
    if (accept('-')) {
      auto n = std::make_shared<Expr::Node>();
      n->op = Op::neg;
      n->lhs = unary();
      return n;
    }
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) return make_binary(Op::pow, base, unary());
    return base;
  }

  NodePtr atom() {
    skip();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr n = expr();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    const std::string rest(src_.substr(pos_));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(rest, &used);
    } catch (const std::exception&) {
      fail("malformed number");
    }
    pos_ += used;
    return make_number(v);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::string_view id = src_.substr(start, pos_ - start);
    if (id == "pi") return make_number(std::numbers::pi);
    if (id == "e") return make_number(std::numbers::e);
    int var = -1;
    if (id == "x" || id == "x1") var = 0;
    else if (id == "y" || id == "x2") var = 1;
    else if (id == "z" || id == "x3") var = 2;
    if (var >= 0) {
      auto n = std::make_shared<Expr::Node>();
      n->op = Op::variable;
      n->var = var;
      return n;
    }
    double (*fn)(double) = nullptr;
    if (id == "cos") fn = [](double v) { return std::cos(v); };
    else if (id == "sin") fn = [](double v) { return std::sin(v); };
    else if (id == "exp") fn = [](double v) { return std::exp(v); };
    else if (id == "sqrt") fn = [](double v) { return std::sqrt(v); };
    else if (id == "log") fn = [](double v) { return std::log(v); };
    else if (id == "abs") fn = [](double v) { return std::fabs(v); };
    if (!fn) {
      pos_ = start;
      fail("unknown identifier '" + std::string(id) + "'");
    }
    if (!accept('(')) fail("expected '(' after function name");
    auto n = std::make_shared<Expr::Node>();
    n->op = Op::func;
    n->fn = fn;
    n->lhs = expr();
    if (!accept(')')) fail("expected ')'");
    return n;
  }
};

}  // namespace

Expr Expr::parse(std::string_view source) {
  Expr e;
  e.root_ = Parser(source).parse();
  e.source_ = std::string(source);
  return e;
}

Expr Expr::constant(double value) {
  Expr e;
  e.root_ = make_number(value);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  e.source_ = buf;
  return e;
}

double Expr::operator()(std::span<const double> x) const { return root_->eval(x); }

bool Expr::is_constant() const noexcept { return root_->constant(); }

}  // namespace edpflow
