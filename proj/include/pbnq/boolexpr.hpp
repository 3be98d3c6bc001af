#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pbnq/errors.hpp"

namespace pbnq {

// Immutable AST over NOT/AND/OR, constants 0/1, and declared variables.
// Variables are stored as indices into the vocabulary the expression was
// parsed against.
class BooleanExpr {
 public:
  enum class Kind { Constant, Variable, Not, And, Or };

  static BooleanExpr constant(bool value);
  static BooleanExpr variable(int index);  // 0-based vocabulary slot
  static BooleanExpr negation(BooleanExpr operand);
  static BooleanExpr conjunction(BooleanExpr lhs, BooleanExpr rhs);
  static BooleanExpr disjunction(BooleanExpr lhs, BooleanExpr rhs);

  Kind kind() const { return kind_; }
  bool constant_value() const { return constant_value_; }
  int variable_index() const { return variable_index_; }
  const BooleanExpr& lhs() const { return *lhs_; }
  const BooleanExpr& rhs() const { return *rhs_; }

  // values[i] is the current value of vocabulary slot i.
  bool eval(const std::vector<bool>& values) const;

 private:
  BooleanExpr() = default;
  Kind kind_ = Kind::Constant;
  bool constant_value_ = false;
  int variable_index_ = 0;
  std::shared_ptr<const BooleanExpr> lhs_;
  std::shared_ptr<const BooleanExpr> rhs_;
};

// Grammar: identifiers [A-Za-z_][A-Za-z0-9_]*, NOT as `!` or `~`, AND as
// `&`, OR as `|`, constants `0`/`1`, parentheses; precedence NOT > AND >
// OR, AND/OR left-associative. Throws ParseError (with byte offset) on
// syntax errors and on identifiers missing from the vocabulary.
BooleanExpr parse_bool_expr(const std::string& text,
                            const std::vector<std::string>& vocabulary);

}  // namespace pbnq
