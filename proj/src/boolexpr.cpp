#include "pbnq/boolexpr.hpp"

#include <cctype>
#include <memory>
#include <utility>

namespace pbnq {

BooleanExpr BooleanExpr::constant(bool value) {
  BooleanExpr e;
  e.kind_ = Kind::Constant;
  e.constant_value_ = value;
  return e;
}

BooleanExpr BooleanExpr::variable(int index) {
  BooleanExpr e;
  e.kind_ = Kind::Variable;
  e.variable_index_ = index;
  return e;
}

BooleanExpr BooleanExpr::negation(BooleanExpr operand) {
  BooleanExpr e;
  e.kind_ = Kind::Not;
  e.lhs_ = std::make_shared<BooleanExpr>(std::move(operand));
  return e;
}

BooleanExpr BooleanExpr::conjunction(BooleanExpr lhs, BooleanExpr rhs) {
  BooleanExpr e;
  e.kind_ = Kind::And;
  e.lhs_ = std::make_shared<BooleanExpr>(std::move(lhs));
  e.rhs_ = std::make_shared<BooleanExpr>(std::move(rhs));
  return e;
}

BooleanExpr BooleanExpr::disjunction(BooleanExpr lhs, BooleanExpr rhs) {
  BooleanExpr e;
  e.kind_ = Kind::Or;
  e.lhs_ = std::make_shared<BooleanExpr>(std::move(lhs));
  e.rhs_ = std::make_shared<BooleanExpr>(std::move(rhs));
  return e;
}

bool BooleanExpr::eval(const std::vector<bool>& values) const {
  switch (kind_) {
    case Kind::Constant:
      return constant_value_;
    case Kind::Variable:
      return values[static_cast<std::size_t>(variable_index_)];
    case Kind::Not:
      return !lhs_->eval(values);
    case Kind::And:
      return lhs_->eval(values) && rhs_->eval(values);
    case Kind::Or:
      return lhs_->eval(values) || rhs_->eval(values);
  }
  return false;  // unreachable
}

namespace {

// Recursive-descent parser for the declared grammar.
class Parser {
 public:
  Parser(const std::string& text, const std::vector<std::string>& vocabulary)
      : text_(text), vocabulary_(vocabulary) {}

  BooleanExpr parse() {
    BooleanExpr e = parse_or();
    skip_ws();
    if (pos_ != text_.size()) {
      throw ParseError("unexpected character '" + std::string(1, text_[pos_]) +
                       "' at offset " + std::to_string(pos_),
                       pos_);
    }
    return e;
  }

 private:
  BooleanExpr parse_or() {
    BooleanExpr e = parse_and();
    while (peek() == '|') {
      ++pos_;
      e = BooleanExpr::disjunction(std::move(e), parse_and());
    }
    return e;
  }

  BooleanExpr parse_and() {
    BooleanExpr e = parse_unary();
    while (peek() == '&') {
      ++pos_;
      e = BooleanExpr::conjunction(std::move(e), parse_unary());
    }
    return e;
  }

  BooleanExpr parse_unary() {
    char c = peek();
    if (c == '!' || c == '~') {
      ++pos_;
      return BooleanExpr::negation(parse_unary());
    }
    return parse_atom();
  }

  BooleanExpr parse_atom() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      BooleanExpr e = parse_or();
      if (peek() != ')') {
        throw ParseError("expected ')' at offset " + std::to_string(pos_), pos_);
      }
      ++pos_;
      return e;
    }
    if (c == '0' || c == '1') {
      ++pos_;
      return BooleanExpr::constant(c == '1');
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      std::string name = text_.substr(start, pos_ - start);
      for (std::size_t i = 0; i < vocabulary_.size(); ++i) {
        if (vocabulary_[i] == name) return BooleanExpr::variable(static_cast<int>(i));
      }
      throw ParseError("undeclared identifier '" + name + "' at offset " +
                       std::to_string(start),
                       start);
    }
    if (c == '\0') {
      throw ParseError("unexpected end of expression", pos_);
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "' at offset " +
                     std::to_string(pos_),
                     pos_);
  }

  // Returns the next non-whitespace character without consuming it, or
  // '\0' at end of input.
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  const std::string& text_;
  const std::vector<std::string>& vocabulary_;
  std::size_t pos_ = 0;
};

}  // namespace

BooleanExpr parse_bool_expr(const std::string& text,
                            const std::vector<std::string>& vocabulary) {
  return Parser(text, vocabulary).parse();
}

}  // namespace pbnq
