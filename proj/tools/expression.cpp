#include "expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "plandis/errors.hpp"
#include "plandis/serialize.hpp"

namespace plandis::tools {

namespace {

enum class Tok { Number, X, Plus, Minus, Mul, Div, Pow, LParen, RParen, End };

struct Token {
  Tok kind;
  double value = 0.0;
};

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '|') {
      if (i + 2 < s.size() && s[i + 1] == 'x' && s[i + 2] == '|') {
        out.push_back({Tok::X});
        i += 3;
        continue;
      }
      throw ParseError("expected |x| at position " + std::to_string(i));
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      char* end = nullptr;
      const double v = std::strtod(s.c_str() + i, &end);
      if (end == s.c_str() + i) throw ParseError("bad number at position " + std::to_string(i));
      out.push_back({Tok::Number, v});
      i = static_cast<std::size_t>(end - s.c_str());
      continue;
    }
    switch (c) {
      case '+': out.push_back({Tok::Plus}); break;
      case '-': out.push_back({Tok::Minus}); break;
      case '*': out.push_back({Tok::Mul}); break;
      case '/': out.push_back({Tok::Div}); break;
      case '^': out.push_back({Tok::Pow}); break;
      case '(': out.push_back({Tok::LParen}); break;
      case ')': out.push_back({Tok::RParen}); break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "' in radial expression");
    }
    ++i;
  }
  // implicit multiplication: value-like followed by value-like
  std::vector<Token> glued;
  const auto value_end = [](Tok k) { return k == Tok::Number || k == Tok::X || k == Tok::RParen; };
  const auto value_begin = [](Tok k) { return k == Tok::Number || k == Tok::X || k == Tok::LParen; };
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (!glued.empty() && value_end(glued.back().kind) && value_begin(out[j].kind)) {
      glued.push_back({Tok::Mul});
    }
    glued.push_back(out[j]);
  }
  glued.push_back({Tok::End});
  return glued;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, double r) : toks_(std::move(toks)), r_(r) {}

  double parse() {
    const double v = expr();
    expect(Tok::End, "trailing input");
    return v;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  Token next() { return toks_[pos_++]; }
  void expect(Tok k, const std::string& what) {
    if (peek().kind != k) throw ParseError("radial expression: expected " + what);
    ++pos_;
  }

  double expr() {
    double v = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const Tok op = next().kind;
      const double w = term();
      v = (op == Tok::Plus) ? v + w : v - w;
    }
    return v;
  }

  double term() {
    double v = unary();
    while (peek().kind == Tok::Mul || peek().kind == Tok::Div) {
      const Tok op = next().kind;
      const double w = unary();
      v = (op == Tok::Mul) ? v * w : v / w;
    }
    return v;
  }

  double unary() {
    if (peek().kind == Tok::Minus) {
      ++pos_;
      return -unary();
    }
    return power();
  }

  double power() {
    const double base = atom();
    if (peek().kind == Tok::Pow) {
      ++pos_;
      const double e = unary();  // right associative, allows a^-2|x|
      return std::pow(base, e);
    }
    return base;
  }

  double atom() {
    const Token t = next();
    switch (t.kind) {
      case Tok::Number: return t.value;
      case Tok::X: return r_;
      case Tok::LParen: {
        const double v = expr();
        expect(Tok::RParen, ")");
        return v;
      }
      default: throw ParseError("radial expression: unexpected token");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  double r_;
};

}  // namespace

double evaluate_radial_expression(const std::string& expr, double radius) {
  return Parser(tokenize(expr), radius).parse();
}

std::vector<double> evaluate_radial_profile(const std::string& expr, int max_radius) {
  std::vector<double> out;
  for (int r = 0; r <= max_radius; ++r) {
    out.push_back(evaluate_radial_expression(expr, static_cast<double>(r)));
  }
  return out;
}

std::string substitute_symbol(const std::string& expr, const std::string& name, double value) {
  const std::string literal = "(" + format_double(value) + ")";
  std::string out;
  std::size_t i = 0;
  while (i < expr.size()) {
    if (expr.compare(i, name.size(), name) == 0) {
      const bool left_ok = (i == 0) || !std::isalnum(static_cast<unsigned char>(expr[i - 1]));
      const std::size_t after = i + name.size();
      const bool right_ok =
          (after >= expr.size()) || !std::isalnum(static_cast<unsigned char>(expr[after]));
      if (left_ok && right_ok) {
        out += literal;
        i = after;
        continue;
      }
    }
    out += expr[i];
    ++i;
  }
  return out;
}

}  // namespace plandis::tools
