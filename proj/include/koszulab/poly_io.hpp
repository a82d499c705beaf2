#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "koszulab/polynomial.hpp"

namespace koszulab {

// Grammar (whitespace ignored):
//   poly   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := INT ['/' INT] | NAME ['^' INT] | '(' poly ')' ['^' INT]
namespace detail {

template <FieldElement K>
class PolyParser {
 public:
  PolyParser(std::string_view text, const Ring<K>& ring, std::size_t offset)
      : text_(text), ring_(ring), offset_(offset) {}

  Poly<K> parse_all() {
    Poly<K> p = parse_poly();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, offset_ + pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string digits() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::uint32_t exponent() {
    std::string d = digits();
    if (d.size() > 6 || std::stoul(d) > kMaxExponent) throw DegreeOverflow("exponent " + d + " exceeds 65535");
    return static_cast<std::uint32_t>(std::stoul(d));
  }

  Poly<K> parse_poly() {
    skip_ws();
    bool negate = false;
    if (accept('-')) negate = true;
    else accept('+');
    Poly<K> acc = parse_term();
    if (negate) acc = -acc;
    while (true) {
      if (accept('+')) acc += parse_term();
      else if (accept('-')) acc -= parse_term();
      else break;
    }
    return acc;
  }

  Poly<K> parse_term() {
    Poly<K> acc = parse_factor();
    while (accept('*')) acc = acc * parse_factor();
    return acc;
  }

  Poly<K> parse_factor() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mpz_class num(digits());
      mpz_class den(1);
      if (accept('/')) den = mpz_class(digits());
      if (den == 0) throw DivisionByZero("zero denominator at position " + std::to_string(offset_ + pos_));
      return ring_.constant(K::from_fraction(ring_.field(), num, den));
    }
    if (c == '(') {
      ++pos_;
      Poly<K> inner = parse_poly();
      if (!accept(')')) fail("expected ')'");
      if (accept('^')) inner = inner.pow(exponent());
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      std::string name(text_.substr(start, pos_ - start));
      auto idx = ring_.descriptor()->index_of(name);
      if (!idx) throw UnknownVariable("'" + name + "' at position " + std::to_string(offset_ + start));
      std::uint32_t e = 1;
      if (accept('^')) e = exponent();
      return ring_.variable(*idx, e);
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  const Ring<K>& ring_;
  std::size_t offset_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a polynomial; `offset` shifts reported error positions when the text is a slice.
template <FieldElement K>
Poly<K> parse_poly(std::string_view text, const Ring<K>& ring, std::size_t offset = 0) {
  return detail::PolyParser<K>(text, ring, offset).parse_all();
}

inline std::string format_monomial(const Monomial& m, const RingDescriptor& ring) {
  std::string out;
  for (std::size_t i = 0; i < ring.num_variables(); ++i) {
    if (m[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += ring.variables()[i];
    if (m[i] > 1) out += '^' + std::to_string(m[i]);
  }
  return out.empty() ? "1" : out;
}

template <FieldElement K>
std::string format_poly(const Poly<K>& f) {
  if (f.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : f.terms()) {
    std::string c = t.coeff.to_string();
    const bool negative = !c.empty() && c[0] == '-';
    if (negative) c.erase(0, 1);
    if (first) {
      if (negative) out += '-';
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    if (t.monomial.is_one()) {
      out += c;
    } else {
      if (c != "1") out += c + '*';
      out += format_monomial(t.monomial, *f.ring());
    }
  }
  return out;
}

/// Splits on top-level commas (outside brackets/parentheses), recording each slice's offset.
inline std::vector<std::pair<std::string, std::size_t>> split_top_level(std::string_view text, char sep = ',') {
  std::vector<std::pair<std::string, std::size_t>> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || (text[i] == sep && depth == 0)) {
      out.emplace_back(std::string(text.substr(start, i - start)), start);
      start = i + 1;
    } else if (text[i] == '(' || text[i] == '[') {
      ++depth;
    } else if (text[i] == ')' || text[i] == ']') {
      --depth;
    }
  }
  return out;
}

template <FieldElement K>
std::vector<Poly<K>> parse_poly_list(std::string_view text, const Ring<K>& ring, std::size_t offset = 0) {
  std::vector<Poly<K>> out;
  bool all_blank = true;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) all_blank = false;
  }
  if (all_blank) return out;
  for (auto& [piece, off] : split_top_level(text)) out.push_back(parse_poly(piece, ring, offset + off));
  return out;
}

}  // namespace koszulab
