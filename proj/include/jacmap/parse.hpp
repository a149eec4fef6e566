#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jacmap/error.hpp"
#include "jacmap/laurent.hpp"
#include "jacmap/polynomial.hpp"

namespace jacmap {

// Grammar (whitespace is insignificant):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := atom ('^' ['+' | '-'] integer)?
//   atom    := number | identifier | '(' expr ')'
//
// so -x^2 is -(x^2).  Juxtaposition ("2x") is a syntax error.  The identifier
// `i` is the imaginary unit.
namespace detail {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

inline std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      bool dot = false;
      while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.')) {
        if (s[i] == '.') {
          if (dot) throw ParseError("malformed number", i);
          dot = true;
        }
        ++i;
      }
      std::string text(s.substr(start, i - start));
      if (text == ".") throw ParseError("malformed number", start);
      out.push_back({Tok::Number, std::move(text), start});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      out.push_back({Tok::Ident, std::string(s.substr(start, i - start)), start});
      continue;
    }
    Tok k;
    switch (c) {
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '/': k = Tok::Slash; break;
      case '^': k = Tok::Caret; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      default: throw ParseError(std::string("unexpected character '") + c + "'", i);
    }
    out.push_back({k, std::string(1, c), i});
    ++i;
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

inline Rational parse_number(const std::string& text) {
  auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(mpz_class(text));
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  if (digits.empty()) digits = "0";
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, text.size() - dot - 1);
  Rational q(mpz_class(digits), den);
  q.canonicalize();
  return q;
}

template <class Algebra>
class ExpressionParser {
 public:
  using Value = typename Algebra::Value;

  ExpressionParser(const Algebra& algebra, std::string_view text) : alg_(algebra), toks_(tokenize(text)) {}

  Value parse() {
    if (peek().kind == Tok::End) throw ParseError("empty expression", 0);
    Value v = expr();
    if (peek().kind != Tok::End) throw ParseError("unexpected '" + peek().text + "'", peek().pos);
    return v;
  }

 private:
  const Token& peek() const { return toks_[at_]; }
  const Token& next() { return toks_[at_++]; }

  Value expr() {
    Value acc = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      bool minus = next().kind == Tok::Minus;
      Value rhs = term();
      if (minus)
        acc = acc - rhs;
      else
        acc = acc + rhs;
    }
    return acc;
  }

  Value term() {
    Value acc = unary();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      const Token& op = next();
      Value rhs = unary();
      if (op.kind == Tok::Star)
        acc = acc * rhs;
      else
        acc = alg_.divide(acc, rhs, op.pos);
    }
    return acc;
  }

  Value unary() {
    if (peek().kind == Tok::Minus) {
      next();
      return -unary();
    }
    if (peek().kind == Tok::Plus) {
      next();
      return unary();
    }
    return power();
  }

  Value power() {
    Value base = atom();
    if (peek().kind != Tok::Caret) return base;
    std::size_t caret = next().pos;
    bool negative = false;
    if (peek().kind == Tok::Minus || peek().kind == Tok::Plus) negative = next().kind == Tok::Minus;
    const Token& t = next();
    if (t.kind != Tok::Number || t.text.find('.') != std::string::npos)
      throw ParseError("exponent must be an integer literal", t.pos);
    if (t.text.size() > 6) throw ParseError("exponent too large", t.pos);
    int e = std::stoi(t.text);
    if (peek().kind == Tok::Caret) throw ParseError("chained exponents need parentheses", peek().pos);
    return alg_.power(base, negative ? -e : e, caret);
  }

  Value atom() {
    const Token& t = next();
    switch (t.kind) {
      case Tok::Number: return alg_.constant(Scalar(parse_number(t.text)));
      case Tok::Ident:
        if (t.text == "i") return alg_.constant(Scalar::i());
        return alg_.identifier(t.text, t.pos);
      case Tok::LParen: {
        Value v = expr();
        if (peek().kind != Tok::RParen) throw ParseError("expected ')'", peek().pos);
        next();
        return v;
      }
      case Tok::End: throw ParseError("unexpected end of expression", t.pos);
      default: throw ParseError("unexpected '" + t.text + "'", t.pos);
    }
  }

  const Algebra& alg_;
  std::vector<Token> toks_;
  std::size_t at_ = 0;
};

struct PolynomialAlgebra {
  using Value = Polynomial;
  Vars vars;

  Value constant(const Scalar& c) const { return Polynomial::constant(vars, c); }
  Value identifier(const std::string& name, std::size_t pos) const {
    auto idx = vars.find(name);
    if (!idx) throw ParseError("unknown identifier '" + name + "'", pos);
    return Polynomial::variable(vars, *idx);
  }
  Value power(const Value& base, int e, std::size_t pos) const {
    if (e >= 0) return base.pow(static_cast<unsigned>(e));
    if (!base.is_constant() || base.is_zero()) throw ParseError("negative exponent on a non-constant", pos);
    return constant((Scalar(1) / base.constant_term()).pow(static_cast<unsigned>(-e)));
  }
  Value divide(const Value& a, const Value& b, std::size_t pos) const {
    if (!b.is_constant()) throw ParseError("division by a non-constant", pos);
    if (b.is_zero()) throw ParseError("division by zero", pos);
    return a * (Scalar(1) / b.constant_term());
  }
};

struct LaurentAlgebra {
  using Value = LaurentPoly;
  std::string var = "t";

  Value constant(const Scalar& c) const { return LaurentPoly::constant(c); }
  Value identifier(const std::string& name, std::size_t pos) const {
    if (name != var) throw ParseError("unknown identifier '" + name + "'", pos);
    return LaurentPoly::monomial(1);
  }
  Value power(const Value& base, int e, std::size_t pos) const {
    if (e < 0 && !base.is_monomial()) throw ParseError("negative exponent on a multi-term expression", pos);
    return base.pow(e);
  }
  Value divide(const Value& a, const Value& b, std::size_t pos) const {
    if (!b.is_monomial()) throw ParseError("division by a multi-term expression", pos);
    return a * b.pow(-1);
  }
};

}  // namespace detail

inline Polynomial parse_poly(std::string_view text, const Vars& vars) {
  for (const std::string& v : vars.names())
    if (v == "i") throw DimensionError("'i' is reserved for the imaginary unit");
  detail::PolynomialAlgebra alg{vars};
  return detail::ExpressionParser<detail::PolynomialAlgebra>(alg, text).parse();
}

inline LaurentPoly parse_laurent(std::string_view text, const std::string& var = "t") {
  detail::LaurentAlgebra alg{var};
  return detail::ExpressionParser<detail::LaurentAlgebra>(alg, text).parse();
}

// Comma-separated coordinate list, e.g. "t, t^-2, 0" or "1/t, t^2, 1/t^3".
inline LaurentPath parse_path(std::string_view text, const std::string& var = "t") {
  LaurentPath path;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = text.find(',', start);
    std::string_view piece = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    try {
      path.coords.push_back(parse_laurent(piece, var));
    } catch (const ParseError& e) {
      throw ParseError(std::string("path coordinate ") + std::to_string(path.coords.size() + 1) + ": " +
                           e.what(),
                       start + e.position());
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return path;
}

}  // namespace jacmap
