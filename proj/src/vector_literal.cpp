#include "owshift/vector_literal.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>

namespace ows {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  std::vector<LiteralSlot> literal() {
    expect('[');
    std::vector<LiteralSlot> out;
    skip();
    if (peek() != ']') {
      out.push_back(entry());
      while (accept(',')) out.push_back(entry());
    }
    expect(']');
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    std::sort(out.begin(), out.end(), [](const LiteralSlot& a, const LiteralSlot& b) { return a.slot < b.slot; });
    for (std::size_t i = 1; i < out.size(); ++i)
      if (out[i].slot == out[i - 1].slot) fail("duplicate slot " + std::to_string(out[i].slot));
    return out;
  }

 private:
  LiteralSlot entry() {
    skip();
    LiteralSlot e;
    e.slot = digits();
    expect(':');
    e.terms = sum();
    return e;
  }

  std::vector<LiteralTerm> sum() {
    std::vector<LiteralTerm> out;
    skip();
    double sign = 1.0;
    if (accept('-'))
      sign = -1.0;
    else
      accept('+');
    out.push_back(term(sign));
    for (;;) {
      skip();
      if (accept('+'))
        out.push_back(term(1.0));
      else if (accept('-'))
        out.push_back(term(-1.0));
      else
        break;
    }
    return out;
  }

  LiteralTerm term(double sign) {
    skip();
    LiteralTerm t;
    if (peek() == 'e') {
      t.basis = basis();
      t.coeff = sign;
      return t;
    }
    t.coeff = sign * coeff();
    skip();
    if (accept('*')) {
      skip();
      if (peek() != 'e') fail("expected a basis vector after '*'");
      t.basis = basis();
    }
    return t;
  }

  Complex coeff() {
    if (accept('(')) {
      skip();
      double sign = 1.0;
      if (accept('-'))
        sign = -1.0;
      else
        accept('+');
      Complex c = sign * part();
      skip();
      if (peek() == '+' || peek() == '-') {
        const double s2 = get() == '-' ? -1.0 : 1.0;
        skip();
        c += s2 * part();
      }
      expect(')');
      return c;
    }
    return part();
  }

  // real [ "i" ]
  Complex part() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
                                s_[pos_] == 'E' ||
                                ((s_[pos_] == '+' || s_[pos_] == '-') && pos_ > start && s_[pos_ - 1] == 'E')))
      ++pos_;
    if (pos_ == start) fail("expected a number");
    double v = 0.0;
    const auto r = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (r.ec != std::errc() || r.ptr != s_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    if (pos_ < s_.size() && s_[pos_] == 'i') {
      ++pos_;
      return Complex(0.0, v);
    }
    return Complex(v, 0.0);
  }

  Index basis() {
    expect('e');
    if (accept('(')) {
      skip();
      const bool neg = accept('-');
      const Index v = digits();
      expect(')');
      return neg ? -v : v;
    }
    return digits();
  }

  Index digits() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == start) fail("expected an integer");
    Index v = 0;
    const auto r = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (r.ec != std::errc()) {
      pos_ = start;
      fail("integer out of range");
    }
    return v;
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  char get() { return pos_ < s_.size() ? s_[pos_++] : '\0'; }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  [[noreturn]] void fail(const std::string& what) const { throw VectorLiteralError(pos_, what); }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<LiteralSlot> parse_vector_literal(std::string_view text) { return Parser(text).literal(); }

EmbeddedVector embed_literal(const std::vector<LiteralSlot>& slots, const WeightSpec& spec) {
  const Index d = spec.dim();
  Index lo = 0, hi = 0;
  if (d == 0) {
    const auto op = std::get<ShiftOperator>(weight_at(spec, 0));
    lo = op.lo;
    hi = op.hi;
  }
  std::vector<SlotEntry> out;
  for (const auto& s : slots) {
    std::map<Index, Complex> coords;
    for (const auto& t : s.terms) {
      if (d > 0 && (t.basis < 0 || t.basis >= d))
        throw VectorLiteralError(0, "basis index e" + std::to_string(t.basis) + " outside dimension " +
                                        std::to_string(d) + " (slot " + std::to_string(s.slot) + ")");
      if (d == 0 && (t.basis < lo || t.basis >= hi))
        throw VectorLiteralError(0, "basis index e(" + std::to_string(t.basis) + ") outside the stored range [" +
                                        std::to_string(lo) + ", " + std::to_string(hi) + ")");
      coords[t.basis] += t.coeff;
    }
    if (d > 0) {
      Vector v = Vector::Zero(d);
      for (const auto& [i, c] : coords) v(i) = c;
      out.push_back({s.slot, HVector(std::move(v))});
    } else {
      const Index first = coords.begin()->first;
      const Index last = coords.rbegin()->first;
      Vector v = Vector::Zero(last - first + 1);
      for (const auto& [i, c] : coords) v(i - first) = c;
      out.push_back({s.slot, HVector(std::move(v), first)});
    }
  }
  return EmbeddedVector(std::move(out));
}

EmbeddedVector parse_embedded_vector(std::string_view text, const WeightSpec& spec) {
  return embed_literal(parse_vector_literal(text), spec);
}

}  // namespace ows
