#include "capdyn/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <vector>

#include "capdyn/point.hpp"

namespace capdyn {

Vars Vars::cartesian(double x, double y) { return {x, y, std::hypot(x, y), std::atan2(y, x)}; }

Vars Vars::polar(double r, double theta) { return {r * std::cos(theta), r * std::sin(theta), r, theta}; }

enum class Op { number, var_x, var_y, var_r, var_theta, neg, add, sub, mul, div, sin, cos, exp, sqrt, abs, mod2pi };

struct Expr::Node {
  Op op;
  double value = 0;
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr, double value = 0) {
  return std::make_shared<const Expr::Node>(Expr::Node{op, value, std::move(a), std::move(b)});
}

double eval_node(const Expr::Node& n, const Vars& v) {
  switch (n.op) {
    case Op::number: return n.value;
    case Op::var_x: return v.x;
    case Op::var_y: return v.y;
    case Op::var_r: return v.r;
    case Op::var_theta: return v.theta;
    case Op::neg: return -eval_node(*n.a, v);
    case Op::add: return eval_node(*n.a, v) + eval_node(*n.b, v);
    case Op::sub: return eval_node(*n.a, v) - eval_node(*n.b, v);
    case Op::mul: return eval_node(*n.a, v) * eval_node(*n.b, v);
    case Op::div: return eval_node(*n.a, v) / eval_node(*n.b, v);
    case Op::sin: return std::sin(eval_node(*n.a, v));
    case Op::cos: return std::cos(eval_node(*n.a, v));
    case Op::exp: return std::exp(eval_node(*n.a, v));
    case Op::sqrt: return std::sqrt(eval_node(*n.a, v));
    case Op::abs: return std::abs(eval_node(*n.a, v));
    case Op::mod2pi: return mod2pi(eval_node(*n.a, v));
  }
  return 0.0;
}

const char* op_name(Op op) {
  switch (op) {
    case Op::sin: return "sin";
    case Op::cos: return "cos";
    case Op::exp: return "exp";
    case Op::sqrt: return "sqrt";
    case Op::abs: return "abs";
    case Op::mod2pi: return "mod2pi";
    case Op::add: return "+";
    case Op::sub: return "-";
    case Op::mul: return "*";
    case Op::div: return "/";
    default: return "";
  }
}

void print(std::ostringstream& os, const Expr::Node& n) {
  switch (n.op) {
    case Op::number: {
      char buf[32];
      auto res = std::to_chars(buf, buf + sizeof buf, n.value);
      os.write(buf, res.ptr - buf);
      return;
    }
    case Op::var_x: os << 'x'; return;
    case Op::var_y: os << 'y'; return;
    case Op::var_r: os << 'r'; return;
    case Op::var_theta: os << "theta"; return;
    case Op::neg: os << "(-"; print(os, *n.a); os << ')'; return;
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div:
      os << '(';
      print(os, *n.a);
      os << ' ' << op_name(n.op) << ' ';
      print(os, *n.b);
      os << ')';
      return;
    default: os << op_name(n.op) << '('; print(os, *n.a); os << ')'; return;
  }
}

enum class Tok { number, ident, plus, minus, star, slash, lparen, rparen, comma, end };

struct Token {
  Tok kind;
  std::size_t pos;
  std::string text;
  double value = 0;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::end: return "end of input";
    case Tok::number:
    case Tok::ident: return "'" + t.text + "'";
    default: return "'" + t.text + "'";
  }
}

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.')) ++i;
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
        if (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
          i = j;
          while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        }
      }
      const std::string text(s.substr(start, i - start));
      double value = 0;
      auto res = std::from_chars(text.data(), text.data() + text.size(), value);
      if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw ParseError("malformed number '" + text + "'", start);
      out.push_back({Tok::number, start, text, value});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      out.push_back({Tok::ident, start, std::string(s.substr(start, i - start))});
      continue;
    }
    Tok kind;
    switch (c) {
      case '+': kind = Tok::plus; break;
      case '-': kind = Tok::minus; break;
      case '*': kind = Tok::star; break;
      case '/': kind = Tok::slash; break;
      case '(': kind = Tok::lparen; break;
      case ')': kind = Tok::rparen; break;
      case ',': kind = Tok::comma; break;
      default: throw ParseError(std::string("unexpected character '") + c + "'", start);
    }
    out.push_back({kind, start, std::string(1, c)});
    ++i;
  }
  out.push_back({Tok::end, s.size(), ""});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, const std::map<std::string, double>& constants)
      : toks_(std::move(toks)), constants_(constants) {}

  NodePtr parse() {
    auto e = expr();
    if (peek().kind != Tok::end) throw ParseError("expected operator or end of input, found " + describe(peek()), peek().pos);
    return e;
  }

 private:
  static constexpr int kMaxDepth = 200;

  const Token& peek() const { return toks_[i_]; }
  const Token& next() { return toks_[i_++]; }

  NodePtr expr() {
    if (++depth_ > kMaxDepth) throw ParseError("expression nested too deeply", peek().pos);
    auto lhs = term();
    while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
      const Op op = next().kind == Tok::plus ? Op::add : Op::sub;
      lhs = make(op, lhs, term());
    }
    --depth_;
    return lhs;
  }

  NodePtr term() {
    auto lhs = factor();
    while (peek().kind == Tok::star || peek().kind == Tok::slash) {
      const Op op = next().kind == Tok::star ? Op::mul : Op::div;
      lhs = make(op, lhs, factor());
    }
    return lhs;
  }

  NodePtr factor() {
    const Token& t = next();
    switch (t.kind) {
      case Tok::number: return make(Op::number, nullptr, nullptr, t.value);
      case Tok::minus: {
        if (++depth_ > kMaxDepth) throw ParseError("expression nested too deeply", t.pos);
        auto inner = factor();
        --depth_;
        return make(Op::neg, inner);
      }
      case Tok::lparen: {
        auto inner = expr();
        close(t);
        return inner;
      }
      case Tok::ident: return ident(t);
      default: throw ParseError("expected number, name or '(', found " + describe(t), t.pos);
    }
  }

  void close(const Token& open) {
    const Token& t = peek();
    if (t.kind == Tok::rparen) {
      ++i_;
      return;
    }
    if (t.kind == Tok::end)
      throw ParseError("unexpected end of input: unclosed '(' opened at " + std::to_string(open.pos), t.pos);
    throw ParseError("expected ')' to close '(' at " + std::to_string(open.pos) + ", found " + describe(t), t.pos);
  }

  NodePtr ident(const Token& t) {
    static const std::map<std::string, Op> funcs{{"sin", Op::sin}, {"cos", Op::cos},   {"exp", Op::exp},
                                                 {"sqrt", Op::sqrt}, {"abs", Op::abs}, {"mod2pi", Op::mod2pi}};
    static const std::map<std::string, Op> vars{
        {"x", Op::var_x}, {"y", Op::var_y}, {"r", Op::var_r}, {"theta", Op::var_theta}};
    if (auto f = funcs.find(t.text); f != funcs.end()) {
      const Token& open = next();
      if (open.kind != Tok::lparen) throw ParseError("expected '(' after " + t.text + ", found " + describe(open), open.pos);
      auto arg = expr();
      if (peek().kind == Tok::comma) throw ParseError(t.text + " takes one argument", peek().pos);
      close(open);
      return make(f->second, arg);
    }
    if (auto v = vars.find(t.text); v != vars.end()) return make(v->second);
    if (t.text == "pi") return make(Op::number, nullptr, nullptr, std::numbers::pi);
    if (t.text == "phi") return make(Op::number, nullptr, nullptr, kGoldenRatio);
    if (auto c = constants_.find(t.text); c != constants_.end()) return make(Op::number, nullptr, nullptr, c->second);
    throw ParseError("unknown name '" + t.text + "'", t.pos);
  }

  std::vector<Token> toks_;
  const std::map<std::string, double>& constants_;
  std::size_t i_ = 0;
  int depth_ = 0;
};

}  // namespace

double Expr::eval(const Vars& v) const { return eval_node(*root_, v); }

std::string Expr::to_string() const {
  std::ostringstream os;
  print(os, *root_);
  return os.str();
}

Expr parse_expr(std::string_view text, const std::map<std::string, double>& constants) {
  return Expr(Parser(lex(text), constants).parse());
}

}  // namespace capdyn
