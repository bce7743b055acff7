#pragma once

// Scalar field expressions over chart coordinates.
//
// Grammar (whitespace insignificant):
//   expr   := term (("+"|"-") term)* ;
//   term   := factor (("*"|"/") factor)* ;
//   factor := "-" factor | power ;
//   power  := atom ("^" integer)? ;
//   atom   := number | ident | ident "(" expr ")" | "(" expr ")" ;
// Function identifiers: exp, sin, cos, sqrt.  Exponents are integer
// literals, optionally signed.  There is no implicit multiplication.
//
// parse() produces identifier leaves; resolve() binds each identifier to a
// coordinate slot or a named parameter.  Only resolved expressions can be
// evaluated positionally.

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gkv/jet.hpp"

namespace gkv {

using ParamTable = std::map<std::string, double>;

enum class NodeKind { number, identifier, variable, parameter, negate, function, binary, power };
enum class Function { exp, sin, cos, sqrt };
enum class BinaryOp { add, sub, mul, div };

struct ExprNode {
  NodeKind kind = NodeKind::number;
  double number = 0.0;       // number literal, or bound parameter value
  std::string name;          // identifier / variable / parameter name
  int slot = -1;             // coordinate slot of a variable
  Function function = Function::exp;
  BinaryOp op = BinaryOp::add;
  int exponent = 0;
  std::shared_ptr<const ExprNode> lhs, rhs;  // rhs unused for unary nodes
};

class Expr {
 public:
  Expr();  // the number 0
  explicit Expr(std::shared_ptr<const ExprNode> root);

  static Expr number(double value);
  static Expr identifier(std::string name);
  static Expr variable(std::string name, int slot);
  static Expr parameter(std::string name, double value);
  static Expr call(Function f, Expr arg);
  static Expr power(Expr base, int exponent);

  const ExprNode& root() const { return *root_; }
  const std::shared_ptr<const ExprNode>& root_ptr() const { return root_; }

  bool is_number(double v) const;
  bool is_resolved() const;
  bool structurally_equal(const Expr& other) const;

  // Text that parses back to a structurally identical tree.
  std::string to_string() const;

  // Identifier-level builders.  The arithmetic operators fold literal
  // zeros and ones so that frame conversions stay compact.
  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);

 private:
  std::shared_ptr<const ExprNode> root_;
};

Expr exp(const Expr& a);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr sqrt(const Expr& a);

Expr parse(std::string_view text);

// Binds identifiers: names in `coords` become variables (slot = position),
// names in `params` become parameters.  Coordinates win over parameters.
// Throws ResolveError naming the first unknown identifier.
Expr resolve(const Expr& expr, std::span<const std::string> coords,
             const ParamTable& params);

// Evaluation of resolved expressions; env[slot] supplies each coordinate.
double evaluate(const Expr& expr, std::span<const double> env);
Jet evaluate(const Expr& expr, std::span<const Jet> env);

// Name-based evaluation (identifiers looked up in env, then params).
Jet evaluate(const Expr& expr, const std::map<std::string, Jet>& env,
             const ParamTable& params);
double evaluate(const Expr& expr, const std::map<std::string, double>& env,
                const ParamTable& params);

// Identifier names appearing in an unresolved tree (sorted, unique).
std::vector<std::string> identifiers(const Expr& expr);

}  // namespace gkv
