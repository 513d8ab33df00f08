#pragma once

// Coordinate-expression DSL.
//
// Grammar (no unary minus; exponents are unsigned integer literals):
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := base ('^' integer)?
//   base   := number | variable | function '(' expr ')' | '(' expr ')'
// Variables are x1, x2, ...; functions are sin cos tan exp log sqrt atan.

#include <memory>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "kropina/jet.hpp"

namespace kropina {

enum class Func { sin, cos, tan, exp, log, sqrt, atan };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { number, var, add, sub, mul, div, pow, call };
  Kind kind{};
  double number = 0.0;  // kind == number
  int var = 0;          // kind == var: 0-based coordinate index
  int exponent = 0;     // kind == pow
  Func func{};          // kind == call
  ExprPtr a, b;         // operands; pow and call use only a
};

// Throws ParseError (1-based line:column) on malformed input.
ExprPtr parse_expr(std::string_view text);

// Canonical text; parse_expr(print_expr(e)) is structurally equal to e.
std::string print_expr(const Expr& e);

bool expr_equal(const Expr& a, const Expr& b);

// Smallest dimension in which the expression makes sense (max variable + 1).
int expr_dimension(const Expr& e);

double eval_value(const Expr& e, const Eigen::VectorXd& x);

// Taylor expansion at x over the given table; coordinate i reads table
// variable i, so t.nvars() may exceed expr_dimension(e).  Domain failures
// throw DomainError naming the offending subexpression and the point.
Jet eval_jet(const Expr& e, const JetTable& t, const Eigen::VectorXd& x);

}  // namespace kropina
