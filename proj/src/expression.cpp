#include "bemlab/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <type_traits>
#include <utility>
#include <vector>

namespace bem::expr {

enum class Op { constant, var_t, var_y, add, sub, mul, div, neg, fn_exp, fn_sin, fn_cos, fn_tanh, fn_pow };

struct Node {
  Op op;
  double constant = 0.0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

NodePtr make_const(double c) {
  auto n = std::make_shared<Node>();
  n->op = Op::constant;
  n->constant = c;
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr run() {
    NodePtr e = expression();
    skip_space();
    if (pos_ != text_.size()) throw ParseError(pos_, "unexpected trailing input");
    return e;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    if (!accept(c)) throw ParseError(pos_, std::string("expected ") + what);
  }

  NodePtr expression() {
    NodePtr e = term();
    for (;;) {
      if (accept('+')) {
        e = make(Op::add, e, term());
      } else if (accept('-')) {
        e = make(Op::sub, e, term());
      } else {
        return e;
      }
    }
  }

  NodePtr term() {
    NodePtr e = unary();
    for (;;) {
      if (accept('*')) {
        e = make(Op::mul, e, unary());
      } else if (accept('/')) {
        e = make(Op::div, e, unary());
      } else {
        return e;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Op::neg, unary());
    return primary();
  }

  NodePtr primary() {
    const char c = peek();
    if (c == '\0') throw ParseError(pos_, "unexpected end of input");
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    if (accept('(')) {
      NodePtr e = expression();
      expect(')', "')'");
      return e;
    }
    throw ParseError(pos_, std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    std::size_t end = pos_;
    while (end < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[end])) || text_[end] == '.')) {
      ++end;
    }
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      std::size_t e = end + 1;
      if (e < text_.size() && (text_[e] == '+' || text_[e] == '-')) ++e;
      if (e < text_.size() && std::isdigit(static_cast<unsigned char>(text_[e]))) {
        while (e < text_.size() && std::isdigit(static_cast<unsigned char>(text_[e]))) ++e;
        end = e;
      }
    }
    double out = 0.0;
    const auto res = std::from_chars(text_.data() + start, text_.data() + end, out);
    if (res.ec != std::errc() || res.ptr != text_.data() + end) {
      throw ParseError(start, "malformed number");
    }
    pos_ = end;
    return make_const(out);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    std::size_t end = pos_;
    while (end < text_.size() && std::isalnum(static_cast<unsigned char>(text_[end]))) ++end;
    const std::string_view name = text_.substr(start, end - start);
    pos_ = end;
    if (name == "t") return make(Op::var_t);
    if (name == "y") return make(Op::var_y);
    Op fn;
    if (name == "exp") {
      fn = Op::fn_exp;
    } else if (name == "sin") {
      fn = Op::fn_sin;
    } else if (name == "cos") {
      fn = Op::fn_cos;
    } else if (name == "tanh") {
      fn = Op::fn_tanh;
    } else if (name == "pow") {
      fn = Op::fn_pow;
    } else {
      throw ParseError(start, "unknown identifier '" + std::string(name) + "'");
    }
    expect('(', "'(' after function name");
    NodePtr a = expression();
    NodePtr b;
    if (fn == Op::fn_pow) {
      expect(',', "',' between pow arguments");
      b = expression();
    }
    expect(')', "')'");
    return make(fn, a, b);
  }
};

template <class T>
T eval_node(const Node& n, const T& t, const T& y);

template <class T>
T eval_child(const NodePtr& p, const T& t, const T& y) {
  return eval_node<T>(*p, t, y);
}

template <class T>
T lift_constant(double c) {
  if constexpr (std::is_same_v<T, double>) {
    return c;
  } else {
    return T::constant(c);
  }
}

template <class T>
T eval_node(const Node& n, const T& t, const T& y) {
  using std::cos;
  using std::exp;
  using std::pow;
  using std::sin;
  using std::tanh;
  switch (n.op) {
    case Op::constant:
      return lift_constant<T>(n.constant);
    case Op::var_t:
      return t;
    case Op::var_y:
      return y;
    case Op::add:
      return eval_child(n.lhs, t, y) + eval_child(n.rhs, t, y);
    case Op::sub:
      return eval_child(n.lhs, t, y) - eval_child(n.rhs, t, y);
    case Op::mul:
      return eval_child(n.lhs, t, y) * eval_child(n.rhs, t, y);
    case Op::div:
      return eval_child(n.lhs, t, y) / eval_child(n.rhs, t, y);
    case Op::neg:
      return -eval_child(n.lhs, t, y);
    case Op::fn_exp:
      return exp(eval_child(n.lhs, t, y));
    case Op::fn_sin:
      return sin(eval_child(n.lhs, t, y));
    case Op::fn_cos:
      return cos(eval_child(n.lhs, t, y));
    case Op::fn_tanh:
      return tanh(eval_child(n.lhs, t, y));
    case Op::fn_pow:
      return pow(eval_child(n.lhs, t, y), eval_child(n.rhs, t, y));
  }
  throw EvalError("corrupt expression node");
}

bool depends_on(const Node& n, Op var) {
  if (n.op == var) return true;
  if (n.lhs && depends_on(*n.lhs, var)) return true;
  if (n.rhs && depends_on(*n.rhs, var)) return true;
  return false;
}

}  // namespace

Expression Expression::parse(std::string_view text) {
  Parser p(text);
  Expression e;
  e.root_ = p.run();
  e.text_ = std::string(text);
  return e;
}

double Expression::value(double t, double y) const {
  if (!root_) throw EvalError("empty expression");
  return eval_node<double>(*root_, t, y);
}

Jet2 Expression::jet(double t, double y) const {
  if (!root_) throw EvalError("empty expression");
  return eval_node<Jet2>(*root_, Jet2::var_t(t), Jet2::var_y(y));
}

bool Expression::depends_on_t() const { return root_ && depends_on(*root_, Op::var_t); }
bool Expression::depends_on_y() const { return root_ && depends_on(*root_, Op::var_y); }

}  // namespace bem::expr
