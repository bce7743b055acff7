#include "gkv/expr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cctype>
#include <cstdio>
#include <set>

#include "gkv/error.hpp"

namespace gkv {

SyntaxError::SyntaxError(std::string message, std::size_t offset,
                         std::vector<std::string> expected)
    : Error([&] {
        std::string m = "syntax error at offset " + std::to_string(offset) +
                        ": " + message;
        if (!expected.empty()) {
          m += " (expected ";
          for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i) m += ", ";
            m += expected[i];
          }
          m += ")";
        }
        return m;
      }()),
      offset_(offset),
      expected_(std::move(expected)) {}

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make(ExprNode node) { return std::make_shared<const ExprNode>(std::move(node)); }

NodePtr make_binary(BinaryOp op, NodePtr a, NodePtr b) {
  ExprNode n;
  n.kind = NodeKind::binary;
  n.op = op;
  n.lhs = std::move(a);
  n.rhs = std::move(b);
  return make(std::move(n));
}

NodePtr make_unary(NodeKind kind, NodePtr a) {
  ExprNode n;
  n.kind = kind;
  n.lhs = std::move(a);
  return make(std::move(n));
}

const char* function_name(Function f) {
  switch (f) {
    case Function::exp: return "exp";
    case Function::sin: return "sin";
    case Function::cos: return "cos";
    case Function::sqrt: return "sqrt";
  }
  return "?";
}

bool lookup_function(std::string_view name, Function& f) {
  if (name == "exp") f = Function::exp;
  else if (name == "sin") f = Function::sin;
  else if (name == "cos") f = Function::cos;
  else if (name == "sqrt") f = Function::sqrt;
  else return false;
  return true;
}

// --------------------------------------------------------------------------
// Lexer + recursive descent parser

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
  Tok kind;
  std::size_t offset;
  std::string_view text;
  double number = 0.0;
};

const std::vector<std::string> kOperandStart{"number", "identifier", "'('", "'-'"};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) { advance(); }

  NodePtr parse_all() {
    NodePtr e = parse_expr();
    if (tok_.kind != Tok::end)
      throw SyntaxError("unexpected '" + std::string(tok_.text) + "'", tok_.offset,
                        {"operator", "end of input"});
    return e;
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::size_t start = pos_;
    if (pos_ >= text_.size()) {
      tok_ = {Tok::end, start, {}};
      return;
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t end = pos_;
      while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
      if (end < text_.size() && text_[end] == '.') {
        ++end;
        while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
      }
      if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
        std::size_t e = end + 1;
        if (e < text_.size() && (text_[e] == '+' || text_[e] == '-')) ++e;
        if (e < text_.size() && std::isdigit(static_cast<unsigned char>(text_[e]))) {
          while (e < text_.size() && std::isdigit(static_cast<unsigned char>(text_[e]))) ++e;
          end = e;
        }
      }
      double value = 0.0;
      const auto res = std::from_chars(text_.data() + pos_, text_.data() + end, value);
      if (res.ec != std::errc() || res.ptr != text_.data() + end)
        throw SyntaxError("malformed number", start, {"number"});
      tok_ = {Tok::number, start, text_.substr(start, end - start), value};
      pos_ = end;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = pos_ + 1;
      while (end < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
        ++end;
      tok_ = {Tok::ident, start, text_.substr(start, end - start)};
      pos_ = end;
      return;
    }
    Tok kind;
    switch (c) {
      case '+': kind = Tok::plus; break;
      case '-': kind = Tok::minus; break;
      case '*': kind = Tok::star; break;
      case '/': kind = Tok::slash; break;
      case '^': kind = Tok::caret; break;
      case '(': kind = Tok::lparen; break;
      case ')': kind = Tok::rparen; break;
      default:
        throw SyntaxError("unexpected character '" + std::string(1, c) + "'", start,
                          kOperandStart);
    }
    tok_ = {kind, start, text_.substr(start, 1)};
    ++pos_;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    while (tok_.kind == Tok::plus || tok_.kind == Tok::minus) {
      const BinaryOp op = tok_.kind == Tok::plus ? BinaryOp::add : BinaryOp::sub;
      advance();
      lhs = make_binary(op, lhs, parse_term());
    }
    return lhs;
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    while (tok_.kind == Tok::star || tok_.kind == Tok::slash) {
      const BinaryOp op = tok_.kind == Tok::star ? BinaryOp::mul : BinaryOp::div;
      advance();
      lhs = make_binary(op, lhs, parse_factor());
    }
    return lhs;
  }

  NodePtr parse_factor() {
    if (tok_.kind == Tok::minus) {
      advance();
      return make_unary(NodeKind::negate, parse_factor());
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (tok_.kind != Tok::caret) return base;
    advance();
    int sign = 1;
    if (tok_.kind == Tok::minus) {
      sign = -1;
      advance();
    }
    if (tok_.kind != Tok::number)
      throw SyntaxError("exponent must be an integer literal", tok_.offset, {"integer"});
    const double v = tok_.number;
    if (v != std::floor(v) || v > 1e6 ||
        tok_.text.find_first_of(".eE") != std::string_view::npos)
      throw SyntaxError("exponent must be an integer literal", tok_.offset, {"integer"});
    ExprNode n;
    n.kind = NodeKind::power;
    n.exponent = sign * static_cast<int>(v);
    n.lhs = std::move(base);
    advance();
    return make(std::move(n));
  }

  NodePtr parse_atom() {
    switch (tok_.kind) {
      case Tok::number: {
        ExprNode n;
        n.kind = NodeKind::number;
        n.number = tok_.number;
        advance();
        return make(std::move(n));
      }
      case Tok::ident: {
        const Token id = tok_;
        advance();
        Function f;
        if (lookup_function(id.text, f)) {
          if (tok_.kind != Tok::lparen)
            throw SyntaxError("function '" + std::string(id.text) + "' needs an argument",
                              tok_.offset, {"'('"});
          advance();
          NodePtr arg = parse_expr();
          expect_rparen();
          ExprNode n;
          n.kind = NodeKind::function;
          n.function = f;
          n.lhs = std::move(arg);
          return make(std::move(n));
        }
        if (tok_.kind == Tok::lparen)
          throw SyntaxError("unknown function '" + std::string(id.text) + "'", id.offset,
                            {"exp", "sin", "cos", "sqrt"});
        ExprNode n;
        n.kind = NodeKind::identifier;
        n.name = std::string(id.text);
        return make(std::move(n));
      }
      case Tok::lparen: {
        advance();
        NodePtr e = parse_expr();
        expect_rparen();
        return e;
      }
      case Tok::end:
        throw SyntaxError("unexpected end of input", tok_.offset, kOperandStart);
      default:
        throw SyntaxError("unexpected '" + std::string(tok_.text) + "'", tok_.offset,
                          kOperandStart);
    }
  }

  void expect_rparen() {
    if (tok_.kind != Tok::rparen)
      throw SyntaxError(tok_.kind == Tok::end ? "unexpected end of input"
                                              : "unexpected '" + std::string(tok_.text) + "'",
                        tok_.offset, {"')'", "operator"});
    advance();
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token tok_{Tok::end, 0, {}};
};

// --------------------------------------------------------------------------
// Printing

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // shortest representation that still round-trips
  for (int prec = 1; prec < 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    double back = 0.0;
    std::from_chars(buf, buf + std::char_traits<char>::length(buf), back);
    if (back == v) {
      s = buf;
      break;
    }
  }
  if (v < 0) s = "(" + s + ")";
  return s;
}

bool is_atom(const ExprNode& n) {
  return n.kind == NodeKind::number || n.kind == NodeKind::identifier ||
         n.kind == NodeKind::variable || n.kind == NodeKind::parameter ||
         n.kind == NodeKind::function;
}

void print(const ExprNode& n, std::string& out);

void print_wrapped(const ExprNode& n, bool wrap, std::string& out) {
  if (wrap) out += '(';
  print(n, out);
  if (wrap) out += ')';
}

bool is_additive(const ExprNode& n) {
  return n.kind == NodeKind::binary && (n.op == BinaryOp::add || n.op == BinaryOp::sub);
}
bool is_multiplicative(const ExprNode& n) {
  return n.kind == NodeKind::binary && (n.op == BinaryOp::mul || n.op == BinaryOp::div);
}

void print(const ExprNode& n, std::string& out) {
  switch (n.kind) {
    case NodeKind::number: out += format_number(n.number); break;
    case NodeKind::identifier:
    case NodeKind::variable:
    case NodeKind::parameter: out += n.name; break;
    case NodeKind::negate:
      out += '-';
      print_wrapped(*n.lhs, is_additive(*n.lhs) || is_multiplicative(*n.lhs), out);
      break;
    case NodeKind::function:
      out += function_name(n.function);
      out += '(';
      print(*n.lhs, out);
      out += ')';
      break;
    case NodeKind::power:
      print_wrapped(*n.lhs, !is_atom(*n.lhs) || (n.lhs->kind == NodeKind::number && n.lhs->number < 0), out);
      out += '^';
      out += std::to_string(n.exponent);
      break;
    case NodeKind::binary: {
      const bool additive = n.op == BinaryOp::add || n.op == BinaryOp::sub;
      if (additive) {
        print(*n.lhs, out);
        out += n.op == BinaryOp::add ? " + " : " - ";
        print_wrapped(*n.rhs, is_additive(*n.rhs), out);
      } else {
        print_wrapped(*n.lhs, is_additive(*n.lhs), out);
        out += n.op == BinaryOp::mul ? "*" : "/";
        print_wrapped(*n.rhs, is_additive(*n.rhs) || is_multiplicative(*n.rhs), out);
      }
      break;
    }
  }
}

bool equal(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::number: return a.number == b.number;
    case NodeKind::identifier: return a.name == b.name;
    case NodeKind::variable: return a.name == b.name && a.slot == b.slot;
    case NodeKind::parameter: return a.name == b.name && a.number == b.number;
    case NodeKind::negate: return equal(*a.lhs, *b.lhs);
    case NodeKind::function: return a.function == b.function && equal(*a.lhs, *b.lhs);
    case NodeKind::power: return a.exponent == b.exponent && equal(*a.lhs, *b.lhs);
    case NodeKind::binary: return a.op == b.op && equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
  }
  return false;
}

bool resolved(const ExprNode& n) {
  switch (n.kind) {
    case NodeKind::identifier: return false;
    case NodeKind::number:
    case NodeKind::variable:
    case NodeKind::parameter: return true;
    case NodeKind::binary: return resolved(*n.lhs) && resolved(*n.rhs);
    default: return resolved(*n.lhs);
  }
}

NodePtr resolve_node(const NodePtr& n, std::span<const std::string> coords,
                     const ParamTable& params) {
  switch (n->kind) {
    case NodeKind::number:
    case NodeKind::variable:
    case NodeKind::parameter: return n;
    case NodeKind::identifier: {
      const auto it = std::find(coords.begin(), coords.end(), n->name);
      ExprNode r;
      r.name = n->name;
      if (it != coords.end()) {
        r.kind = NodeKind::variable;
        r.slot = static_cast<int>(it - coords.begin());
      } else if (const auto p = params.find(n->name); p != params.end()) {
        r.kind = NodeKind::parameter;
        r.number = p->second;
      } else {
        throw ResolveError("unknown identifier '" + n->name + "'");
      }
      return make(std::move(r));
    }
    case NodeKind::binary: {
      ExprNode r = *n;
      r.lhs = resolve_node(n->lhs, coords, params);
      r.rhs = resolve_node(n->rhs, coords, params);
      return make(std::move(r));
    }
    default: {
      ExprNode r = *n;
      r.lhs = resolve_node(n->lhs, coords, params);
      return make(std::move(r));
    }
  }
}

// --------------------------------------------------------------------------
// Evaluation

double apply_function(Function f, double x) {
  switch (f) {
    case Function::exp: return std::exp(x);
    case Function::sin: return std::sin(x);
    case Function::cos: return std::cos(x);
    case Function::sqrt:
      if (!(x >= 0.0)) throw DomainError("sqrt of negative value " + std::to_string(x));
      return std::sqrt(x);
  }
  return 0.0;
}

Jet apply_function(Function f, const Jet& x) {
  switch (f) {
    case Function::exp: return exp(x);
    case Function::sin: return sin(x);
    case Function::cos: return cos(x);
    case Function::sqrt: return sqrt(x);
  }
  return x;
}

double divide(double a, double b) {
  if (std::abs(b) < kSingularThreshold) throw SingularValueError("division by zero");
  return a / b;
}
Jet divide(const Jet& a, const Jet& b) { return a / b; }

double integer_power(double x, int k) {
  if (k < 0) return divide(1.0, integer_power(x, -k));
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}
Jet integer_power(const Jet& x, int k) { return pow(x, k); }

std::string describe(const ExprNode& n) {
  std::string s;
  print(n, s);
  return s;
}

// Rethrows numeric failures with the failing subexpression attached.
template <class F>
auto tagged(const ExprNode& n, F&& f) {
  try {
    return f();
  } catch (const SingularValueError& e) {
    throw SingularValueError(std::string(e.what()) + " in '" + describe(n) + "'");
  } catch (const DomainError& e) {
    throw DomainError(std::string(e.what()) + " in '" + describe(n) + "'");
  }
}

template <class T, class Lookup>
T eval_node(const ExprNode& n, const Lookup& lookup) {
  switch (n.kind) {
    case NodeKind::number: return T(n.number);
    case NodeKind::parameter: return T(n.number);
    case NodeKind::identifier:
    case NodeKind::variable: return lookup(n);
    case NodeKind::negate: return -eval_node<T>(*n.lhs, lookup);
    case NodeKind::function: {
      const T arg = eval_node<T>(*n.lhs, lookup);
      return tagged(n, [&] { return T(apply_function(n.function, arg)); });
    }
    case NodeKind::power: {
      const T base = eval_node<T>(*n.lhs, lookup);
      return tagged(n, [&] { return T(integer_power(base, n.exponent)); });
    }
    case NodeKind::binary: {
      const T a = eval_node<T>(*n.lhs, lookup);
      const T b = eval_node<T>(*n.rhs, lookup);
      switch (n.op) {
        case BinaryOp::add: return a + b;
        case BinaryOp::sub: return a - b;
        case BinaryOp::mul: return a * b;
        case BinaryOp::div: return tagged(n, [&] { return T(divide(a, b)); });
      }
    }
  }
  return T(0.0);
}

template <class T>
T eval_positional(const Expr& expr, std::span<const T> env) {
  return eval_node<T>(expr.root(), [&](const ExprNode& n) -> T {
    if (n.kind != NodeKind::variable)
      throw ResolveError("identifier '" + n.name + "' is not resolved");
    if (n.slot < 0 || static_cast<std::size_t>(n.slot) >= env.size())
      throw InvalidArgument("variable '" + n.name + "' has no binding");
    return env[n.slot];
  });
}

template <class T>
T eval_named(const Expr& expr, const std::map<std::string, T>& env, const ParamTable& params) {
  return eval_node<T>(expr.root(), [&](const ExprNode& n) -> T {
    if (const auto it = env.find(n.name); it != env.end()) return it->second;
    if (const auto p = params.find(n.name); p != params.end()) return T(p->second);
    throw ResolveError("unbound identifier '" + n.name + "'");
  });
}

void collect_identifiers(const ExprNode& n, std::set<std::string>& out) {
  switch (n.kind) {
    case NodeKind::identifier:
    case NodeKind::variable:
    case NodeKind::parameter: out.insert(n.name); break;
    case NodeKind::number: break;
    case NodeKind::binary:
      collect_identifiers(*n.lhs, out);
      collect_identifiers(*n.rhs, out);
      break;
    default: collect_identifiers(*n.lhs, out);
  }
}

}  // namespace

// --------------------------------------------------------------------------

Expr::Expr() : root_(make(ExprNode{})) {}
Expr::Expr(std::shared_ptr<const ExprNode> root) : root_(std::move(root)) {}

Expr Expr::number(double value) {
  ExprNode n;
  n.kind = NodeKind::number;
  n.number = value;
  return Expr(make(std::move(n)));
}

Expr Expr::identifier(std::string name) {
  ExprNode n;
  n.kind = NodeKind::identifier;
  n.name = std::move(name);
  return Expr(make(std::move(n)));
}

Expr Expr::variable(std::string name, int slot) {
  ExprNode n;
  n.kind = NodeKind::variable;
  n.name = std::move(name);
  n.slot = slot;
  return Expr(make(std::move(n)));
}

Expr Expr::parameter(std::string name, double value) {
  ExprNode n;
  n.kind = NodeKind::parameter;
  n.name = std::move(name);
  n.number = value;
  return Expr(make(std::move(n)));
}

Expr Expr::call(Function f, Expr arg) {
  ExprNode n;
  n.kind = NodeKind::function;
  n.function = f;
  n.lhs = arg.root_;
  return Expr(make(std::move(n)));
}

Expr Expr::power(Expr base, int exponent) {
  ExprNode n;
  n.kind = NodeKind::power;
  n.exponent = exponent;
  n.lhs = base.root_;
  return Expr(make(std::move(n)));
}

bool Expr::is_number(double v) const {
  return root_->kind == NodeKind::number && root_->number == v;
}

bool Expr::is_resolved() const { return resolved(*root_); }

bool Expr::structurally_equal(const Expr& other) const { return equal(*root_, *other.root_); }

std::string Expr::to_string() const { return describe(*root_); }

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_number(0.0)) return b;
  if (b.is_number(0.0)) return a;
  return Expr(make_binary(BinaryOp::add, a.root_, b.root_));
}

Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_number(0.0)) return a;
  if (a.is_number(0.0)) return -b;
  return Expr(make_binary(BinaryOp::sub, a.root_, b.root_));
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_number(0.0) || b.is_number(0.0)) return Expr::number(0.0);
  if (a.is_number(1.0)) return b;
  if (b.is_number(1.0)) return a;
  if (a.is_number(-1.0)) return -b;
  if (b.is_number(-1.0)) return -a;
  return Expr(make_binary(BinaryOp::mul, a.root_, b.root_));
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_number(0.0) && !b.is_number(0.0)) return Expr::number(0.0);
  if (b.is_number(1.0)) return a;
  return Expr(make_binary(BinaryOp::div, a.root_, b.root_));
}

Expr operator-(const Expr& a) {
  if (a.is_number(0.0)) return a;
  if (a.root_->kind == NodeKind::negate) return Expr(a.root_->lhs);
  return Expr(make_unary(NodeKind::negate, a.root_));
}

Expr exp(const Expr& a) { return Expr::call(Function::exp, a); }
Expr sin(const Expr& a) { return Expr::call(Function::sin, a); }
Expr cos(const Expr& a) { return Expr::call(Function::cos, a); }
Expr sqrt(const Expr& a) { return Expr::call(Function::sqrt, a); }

Expr parse(std::string_view text) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos)
    throw SyntaxError("empty expression", 0, kOperandStart);
  return Expr(Parser(text).parse_all());
}

Expr resolve(const Expr& expr, std::span<const std::string> coords, const ParamTable& params) {
  return Expr(resolve_node(expr.root_ptr(), coords, params));
}

double evaluate(const Expr& expr, std::span<const double> env) {
  return eval_positional<double>(expr, env);
}

Jet evaluate(const Expr& expr, std::span<const Jet> env) { return eval_positional<Jet>(expr, env); }

Jet evaluate(const Expr& expr, const std::map<std::string, Jet>& env, const ParamTable& params) {
  return eval_named<Jet>(expr, env, params);
}

double evaluate(const Expr& expr, const std::map<std::string, double>& env,
                const ParamTable& params) {
  return eval_named<double>(expr, env, params);
}

std::vector<std::string> identifiers(const Expr& expr) {
  std::set<std::string> names;
  collect_identifiers(expr.root(), names);
  return {names.begin(), names.end()};
}

}  // namespace gkv
