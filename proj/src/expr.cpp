#include "kropina/expr.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cmath>
#include <optional>
#include <vector>

namespace kropina {

namespace {

struct Token {
  enum class Kind { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };
  Kind kind{};
  double number = 0.0;
  bool number_is_integer = false;
  std::string text;
  int line = 1, col = 1;
};

class Lexer {
public:
  explicit Lexer(std::string_view text) : s_(text) {}

  Token next() {
    skip_ws();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= s_.size()) {
      t.kind = Token::Kind::end;
      return t;
    }
    char c = s_[pos_];
    auto single = [&](Token::Kind k) {
      t.kind = k;
      t.text = c;
      advance();
      return t;
    };
    switch (c) {
      case '+': return single(Token::Kind::plus);
      case '-': return single(Token::Kind::minus);
      case '*': return single(Token::Kind::star);
      case '/': return single(Token::Kind::slash);
      case '^': return single(Token::Kind::caret);
      case '(': return single(Token::Kind::lparen);
      case ')': return single(Token::Kind::rparen);
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return lex_number(t);
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        advance();
      t.kind = Token::Kind::ident;
      t.text = std::string(s_.substr(start, pos_ - start));
      return t;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
  }

private:
  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      advance();
  }

  Token lex_number(Token& t) {
    std::size_t start = pos_;
    bool integer = true;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
      advance();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      integer = false;
      advance();
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
        advance();
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      integer = false;
      advance();
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) advance();
      if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
        throw ParseError("malformed number literal", t.line, t.col);
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
        advance();
    }
    std::string_view body = s_.substr(start, pos_ - start);
    double v = 0.0;
    auto res = std::from_chars(body.data(), body.data() + body.size(), v);
    if (res.ec != std::errc{} || res.ptr != body.data() + body.size())
      throw ParseError("malformed number literal", t.line, t.col);
    t.kind = Token::Kind::number;
    t.number = v;
    t.number_is_integer = integer;
    t.text = std::string(body);
    return t;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

std::optional<Func> func_by_name(std::string_view name) {
  if (name == "sin") return Func::sin;
  if (name == "cos") return Func::cos;
  if (name == "tan") return Func::tan;
  if (name == "exp") return Func::exp;
  if (name == "log") return Func::log;
  if (name == "sqrt") return Func::sqrt;
  if (name == "atan") return Func::atan;
  return std::nullopt;
}

std::string_view func_name(Func f) {
  switch (f) {
    case Func::sin: return "sin";
    case Func::cos: return "cos";
    case Func::tan: return "tan";
    case Func::exp: return "exp";
    case Func::log: return "log";
    case Func::sqrt: return "sqrt";
    case Func::atan: return "atan";
  }
  return "?";
}

std::shared_ptr<Expr> make(Expr::Kind k, ExprPtr a = nullptr,
                           ExprPtr b = nullptr) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

class Parser {
public:
  explicit Parser(std::string_view text) : lex_(text) { cur_ = lex_.next(); }

  ExprPtr parse() {
    ExprPtr e = expr();
    if (cur_.kind != Token::Kind::end)
      throw ParseError("syntax error: unexpected '" + describe(cur_) + "'",
                       cur_.line, cur_.col);
    return e;
  }

private:
  static std::string describe(const Token& t) {
    return t.kind == Token::Kind::end ? "end of input" : t.text;
  }

  void bump() { cur_ = lex_.next(); }

  ExprPtr expr() {
    ExprPtr e = term();
    while (cur_.kind == Token::Kind::plus || cur_.kind == Token::Kind::minus) {
      bool plus = cur_.kind == Token::Kind::plus;
      bump();
      ExprPtr rhs = term();
      e = make(plus ? Expr::Kind::add : Expr::Kind::sub, e, rhs);
    }
    return e;
  }

  ExprPtr term() {
    ExprPtr e = factor();
    while (cur_.kind == Token::Kind::star || cur_.kind == Token::Kind::slash) {
      bool star = cur_.kind == Token::Kind::star;
      bump();
      ExprPtr rhs = factor();
      e = make(star ? Expr::Kind::mul : Expr::Kind::div, e, rhs);
    }
    return e;
  }

  ExprPtr factor() {
    ExprPtr e = base();
    if (cur_.kind == Token::Kind::caret) {
      bump();
      if (cur_.kind != Token::Kind::number || !cur_.number_is_integer)
        throw ParseError("exponent must be an unsigned integer literal",
                         cur_.line, cur_.col);
      auto p = make(Expr::Kind::pow, e);
      p->exponent = static_cast<int>(cur_.number);
      bump();
      return p;
    }
    return e;
  }

  ExprPtr base() {
    if (cur_.kind == Token::Kind::number) {
      auto e = make(Expr::Kind::number);
      e->number = cur_.number;
      bump();
      return e;
    }
    if (cur_.kind == Token::Kind::ident) {
      Token name = cur_;
      bump();
      if (auto f = func_by_name(name.text)) {
        if (cur_.kind != Token::Kind::lparen)
          throw ParseError("expected '(' after '" + name.text + "'", cur_.line,
                           cur_.col);
        bump();
        ExprPtr arg = expr();
        expect_rparen();
        auto e = make(Expr::Kind::call, arg);
        e->func = *f;
        return e;
      }
      if (name.text.size() >= 2 && name.text[0] == 'x' && name.text[1] != '0' &&
          std::all_of(name.text.begin() + 1, name.text.end(), [](char c) {
            return std::isdigit(static_cast<unsigned char>(c));
          })) {
        auto e = make(Expr::Kind::var);
        e->var = std::stoi(name.text.substr(1)) - 1;
        return e;
      }
      throw ParseError("unknown identifier '" + name.text + "'", name.line,
                       name.col);
    }
    if (cur_.kind == Token::Kind::lparen) {
      bump();
      ExprPtr e = expr();
      expect_rparen();
      return e;
    }
    throw ParseError("syntax error: unexpected '" + describe(cur_) + "'",
                     cur_.line, cur_.col);
  }

  void expect_rparen() {
    if (cur_.kind != Token::Kind::rparen)
      throw ParseError("expected ')'", cur_.line, cur_.col);
    bump();
  }

  Lexer lex_;
  Token cur_;
};

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void print_rec(const Expr& e, std::string& out) {
  switch (e.kind) {
    case Expr::Kind::number:
      out += format_number(e.number);
      return;
    case Expr::Kind::var:
      out += "x" + std::to_string(e.var + 1);
      return;
    case Expr::Kind::add:
    case Expr::Kind::sub:
    case Expr::Kind::mul:
    case Expr::Kind::div: {
      const char* op = e.kind == Expr::Kind::add   ? " + "
                       : e.kind == Expr::Kind::sub ? " - "
                       : e.kind == Expr::Kind::mul ? " * "
                                                   : " / ";
      out += "(";
      print_rec(*e.a, out);
      out += op;
      print_rec(*e.b, out);
      out += ")";
      return;
    }
    case Expr::Kind::pow: {
      bool atom = e.a->kind == Expr::Kind::number ||
                  e.a->kind == Expr::Kind::var || e.a->kind == Expr::Kind::call;
      if (!atom) out += "(";
      print_rec(*e.a, out);
      if (!atom) out += ")";
      out += "^" + std::to_string(e.exponent);
      return;
    }
    case Expr::Kind::call:
      out += std::string(func_name(e.func)) + "(";
      print_rec(*e.a, out);
      out += ")";
      return;
  }
}

std::string point_to_string(const Eigen::VectorXd& x) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i) s += ", ";
    s += format_number(x[i]);
  }
  return s + ")";
}

Jet eval_rec(const Expr& e, const JetTable& t, const Eigen::VectorXd& x) {
  switch (e.kind) {
    case Expr::Kind::number:
      return Jet::constant(t, e.number);
    case Expr::Kind::var:
      if (e.var >= t.nvars() || e.var >= x.size())
        throw DomainError("variable x" + std::to_string(e.var + 1) +
                          " exceeds the chart dimension");
      return Jet::variable(t, e.var, x[e.var]);
    case Expr::Kind::add:
      return eval_rec(*e.a, t, x) + eval_rec(*e.b, t, x);
    case Expr::Kind::sub:
      return eval_rec(*e.a, t, x) - eval_rec(*e.b, t, x);
    case Expr::Kind::mul:
      return eval_rec(*e.a, t, x) * eval_rec(*e.b, t, x);
    case Expr::Kind::div: {
      Jet num = eval_rec(*e.a, t, x);
      Jet den = eval_rec(*e.b, t, x);
      if (den.value() == 0.0)
        throw DomainError("division by zero in '" + print_expr(*e.b) + "'");
      return num * recip(den);
    }
    case Expr::Kind::pow: {
      Jet b = eval_rec(*e.a, t, x);
      return pow(b, e.exponent);
    }
    case Expr::Kind::call: {
      Jet u = eval_rec(*e.a, t, x);
      switch (e.func) {
        case Func::sin: return sin(u);
        case Func::cos: return cos(u);
        case Func::tan: return tan(u);
        case Func::exp: return exp(u);
        case Func::log:
          if (!(u.value() > 0.0))
            throw DomainError("log of non-positive argument in '" +
                              print_expr(e) + "'");
          return log(u);
        case Func::sqrt:
          if (!(u.value() > 0.0))
            throw DomainError("sqrt of non-positive argument in '" +
                              print_expr(e) + "'");
          return sqrt(u);
        case Func::atan: return atan(u);
      }
      throw DomainError("unreachable function kind");
    }
  }
  throw DomainError("unreachable expression kind");
}

}  // namespace

ExprPtr parse_expr(std::string_view text) { return Parser(text).parse(); }

std::string print_expr(const Expr& e) {
  std::string out;
  print_rec(e, out);
  return out;
}

bool expr_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::number: return a.number == b.number;
    case Expr::Kind::var: return a.var == b.var;
    case Expr::Kind::pow:
      return a.exponent == b.exponent && expr_equal(*a.a, *b.a);
    case Expr::Kind::call: return a.func == b.func && expr_equal(*a.a, *b.a);
    default: return expr_equal(*a.a, *b.a) && expr_equal(*a.b, *b.b);
  }
}

int expr_dimension(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::number: return 0;
    case Expr::Kind::var: return e.var + 1;
    case Expr::Kind::pow:
    case Expr::Kind::call: return expr_dimension(*e.a);
    default:
      return std::max(expr_dimension(*e.a), expr_dimension(*e.b));
  }
}

double eval_value(const Expr& e, const Eigen::VectorXd& x) {
  // Order-0 jets carry exactly the value arithmetic.
  return eval_jet(e, JetTable::get(std::max<int>(1, x.size()), 0), x).value();
}

Jet eval_jet(const Expr& e, const JetTable& t, const Eigen::VectorXd& x) {
  try {
    return eval_rec(e, t, x);
  } catch (const DomainError& err) {
    throw DomainError(std::string(err.what()) + " at x = " + point_to_string(x));
  }
}

}  // namespace kropina
