#ifndef BEMLAB_EXPRESSION_HPP_
#define BEMLAB_EXPRESSION_HPP_

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include "bemlab/jet.hpp"

namespace bem::expr {

// Thrown on malformed input; `position` is the 0-based character offset
// into the source text.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : std::runtime_error(message + " at position " + std::to_string(position)),
        position_(position),
        message_(message) {}
  std::size_t position() const { return position_; }
  const std::string& bare_message() const { return message_; }

 private:
  std::size_t position_;
  std::string message_;
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Node;

// A parsed closed-form expression in the variables t and y.
//
// Grammar:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | primary
//   primary := number | 't' | 'y' | fn '(' expr (',' expr)? ')' | '(' expr ')'
//   fn      := exp | sin | cos | tanh | pow
class Expression {
 public:
  Expression() = default;

  static Expression parse(std::string_view text);

  double value(double t, double y = 0.0) const;
  Jet2 jet(double t, double y = 0.0) const;

  bool depends_on_t() const;
  bool depends_on_y() const;
  bool empty() const { return root_ == nullptr; }
  const std::string& text() const { return text_; }

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace bem::expr

#endif  // BEMLAB_EXPRESSION_HPP_
