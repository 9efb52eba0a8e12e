#pragma once

// Recursive-descent parsers for the scalar, domain, point and map grammars.
//
//   scalar := ["-"] INT ["/" INT] [("+"|"-") INT ["/" INT] "*s2"]
//   domain := "E(" scalar {"," scalar} ")" | "F(" scalar ";" scalar {"," scalar} ")"
//   point  := "[" cplx {"," cplx} "]"
//   cplx   := FLOAT [("+"|"-") FLOAT "i"]
//   map    := "pow(" nat {"," nat} ")" | "perm(" nat {"," nat} ")"
//           | "ballaut(a=[cplx...],U=[[cplx...]...])"
//           | "eaut(p=[scalar...],sigma=[nat...],H=ballaut(...),zeta=[cplx...])"
//           | "h2prop(zeta=cplx,xi=cplx,kp=nat0,l=nat,b=int,pp=nat0,qp=nat0,B=[cplx...])"
//           | "h2aut(xi=cplx,s=(nat|none),theta=FLOAT,alpha=cplx)"
//           | "hfps(zeta=cplx,k=nat,h=map)"
//           | "compose(" [map {"," map}] ")"
//
// Whitespace is allowed between tokens but not inside scalars or numbers.

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "holomap/domains.hpp"
#include "holomap/error.hpp"
#include "holomap/exactnum.hpp"
#include "holomap/maps.hpp"

namespace holomap {

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  void finish() {
    skip_ws();
    if (!at_end()) fail("end of input");
  }

  ExactScalar scalar() {
    skip_ws();
    Rational u = rational(true);
    if (at_end() || (peek() != '+' && peek() != '-')) return ExactScalar(u);
    const bool negative = peek() == '-';
    ++pos_;
    Rational v = rational(false);
    expect_literal("*s2");
    return ExactScalar(u, negative ? -v : v);
  }

  Domain domain() {
    skip_ws();
    if (accept_word("E")) {
      expect('(');
      std::vector<ExactScalar> p = scalar_list(')');
      return Ellipsoid(std::move(p));
    }
    if (accept_word("F")) {
      expect('(');
      ExactScalar p = scalar();
      expect(';');
      std::vector<ExactScalar> q = scalar_list(')');
      return HartogsTriangle(std::move(p), std::move(q));
    }
    fail("domain 'E(' or 'F('");
  }

  ComplexPoint point() {
    expect('[');
    skip_ws();
    auto at = pos_;
    auto xs = complex_list(']');
    if (xs.empty()) fail_at(at, "at least one coordinate", found_at(at));
    return xs;
  }

  MapExpr map() {
    skip_ws();
    if (accept_word("pow")) {
      expect('(');
      auto xs = natural_list(')');
      return make_power_map(std::move(xs));
    }
    if (accept_word("perm")) {
      expect('(');
      auto at = pos_;
      auto xs = natural_list(')');
      std::vector<std::size_t> img(xs.begin(), xs.end());
      try {
        return make_permute(Permutation::from_one_based(img));
      } catch (const Error&) {
        fail_at(at, "a permutation of 1..n", "perm images");
      }
    }
    if (accept_word("ballaut")) {
      expect('(');
      auto h = ball_body();
      return make_ball_map(std::move(h));
    }
    if (accept_word("eaut")) return eaut();
    if (accept_word("h2prop")) return h2prop();
    if (accept_word("h2aut")) return h2aut();
    if (accept_word("hfps")) return hfps();
    if (accept_word("compose")) {
      expect('(');
      Compose c;
      skip_ws();
      if (!accept(')')) {
        do {
          c.maps.push_back(map());
        } while (accept(','));
        expect(')');
      }
      return MapExpr::make(std::move(c));
    }
    fail("map constructor");
  }

 private:
  // ---- positions and failures
  SourcePosition position_of(std::size_t at) const {
    SourcePosition p;
    for (std::size_t i = 0; i < at && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++p.line;
        p.column = 1;
      } else {
        ++p.column;
      }
    }
    return p;
  }

  std::string found_at(std::size_t at) const {
    if (at >= text_.size()) return "end of input";
    std::size_t end = at;
    while (end < text_.size() && end - at < 12 && !std::isspace(static_cast<unsigned char>(text_[end]))) ++end;
    if (end == at) end = at + 1;
    return "'" + std::string(text_.substr(at, end - at)) + "'";
  }

  [[noreturn]] void fail(const std::string& expected) const { fail_at(pos_, expected, found_at(pos_)); }
  [[noreturn]] void fail_at(std::size_t at, const std::string& expected, const std::string& found) const {
    throw ParseError(position_of(at), expected, found);
  }

  // ---- lexing
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (!at_end() && peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("'") + c + "'");
  }

  void expect_literal(std::string_view lit) {
    if (text_.substr(pos_, lit.size()) != lit) fail("'" + std::string(lit) + "'");
    pos_ += lit.size();
  }

  bool accept_word(std::string_view word) {
    skip_ws();
    if (text_.substr(pos_, word.size()) != word) return false;
    std::size_t next = pos_ + word.size();
    if (next < text_.size() && std::isalnum(static_cast<unsigned char>(text_[next]))) return false;
    pos_ = next;
    return true;
  }

  void expect_key(std::string_view key) {
    skip_ws();
    if (text_.substr(pos_, key.size()) != key) fail("key '" + std::string(key) + "='");
    pos_ += key.size();
    expect('=');
  }

  BigInt digits() {
    std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) fail("digit");
    return BigInt(std::string(text_.substr(start, pos_ - start)));
  }

  Rational rational(bool allow_sign) {
    bool negative = false;
    if (allow_sign && !at_end() && peek() == '-') {
      negative = true;
      ++pos_;
    }
    BigInt num = digits();
    BigInt den = 1;
    if (!at_end() && peek() == '/') {
      ++pos_;
      auto at = pos_;
      den = digits();
      if (den == 0) fail_at(at, "nonzero denominator", "0");
    }
    return Rational(negative ? BigInt(-num) : num, den);
  }

  std::uint64_t natural0() {
    skip_ws();
    auto at = pos_;
    BigInt n = digits();
    auto v = to_u64(n);
    if (!v) fail_at(at, "64-bit natural number", n.str());
    return *v;
  }

  std::uint64_t natural() {
    skip_ws();
    auto at = pos_;
    auto v = natural0();
    if (v == 0) fail_at(at, "natural number >= 1", "0");
    return v;
  }

  std::int64_t integer() {
    skip_ws();
    auto at = pos_;
    bool negative = false;
    if (!at_end() && peek() == '-') {
      negative = true;
      ++pos_;
    }
    BigInt n = digits();
    if (negative) n = -n;
    auto v = to_i64(n);
    if (!v) fail_at(at, "64-bit integer", n.str());
    return *v;
  }

  double real() {
    skip_ws();
    double x = 0.0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    if (pos_ < text_.size() && (peek() == 'i' || peek() == 'n' || peek() == 'I' || peek() == 'N')) fail("number");
    auto res = std::from_chars(first, last, x);
    if (res.ec != std::errc() || !std::isfinite(x)) fail("number");
    pos_ += static_cast<std::size_t>(res.ptr - first);
    return x;
  }

  cplx complex() {
    double re = real();
    if (!at_end() && (peek() == '+' || peek() == '-')) {
      const bool negative = peek() == '-';
      ++pos_;
      if (at_end() || !(std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.')) fail("imaginary part");
      double im = real();
      expect_literal("i");
      return {re, negative ? -im : im};
    }
    return {re, 0.0};
  }

  template <class F>
  auto list(char close, F&& item) {
    std::vector<decltype(item())> out;
    skip_ws();
    if (accept(close)) return out;
    do {
      out.push_back(item());
    } while (accept(','));
    expect(close);
    return out;
  }

  std::vector<ExactScalar> scalar_list(char close) {
    skip_ws();
    auto at = pos_;
    auto xs = list(close, [&] { return scalar(); });
    if (xs.empty()) fail_at(at, "at least one exponent", found_at(at));
    return xs;
  }
  std::vector<cplx> complex_list(char close) {
    return list(close, [&] { return complex(); });
  }
  std::vector<std::uint64_t> natural_list(char close) {
    return list(close, [&] { return natural(); });
  }

  // ---- map bodies
  BallAutomorphism ball_body() {
    expect_key("a");
    expect('[');
    auto a = complex_list(']');
    expect(',');
    expect_key("U");
    expect('[');
    auto rows = list(']', [&] {
      expect('[');
      return complex_list(']');
    });
    expect(')');
    const auto k = static_cast<Eigen::Index>(a.size());
    CMatrix u(k, k);
    if (static_cast<Eigen::Index>(rows.size()) != k) fail_at(pos_ - 1, "U with one row per center coordinate", "mismatched U");
    for (Eigen::Index i = 0; i < k; ++i) {
      if (static_cast<Eigen::Index>(rows[i].size()) != k) fail_at(pos_ - 1, "square U", "mismatched U");
      for (Eigen::Index j = 0; j < k; ++j) u(i, j) = rows[i][j];
    }
    CVector av(k);
    for (Eigen::Index i = 0; i < k; ++i) av[i] = a[i];
    return make_ball_aut(std::move(av), std::move(u));
  }

  MapExpr eaut() {
    expect('(');
    expect_key("p");
    expect('[');
    auto p = scalar_list(']');
    expect(',');
    expect_key("sigma");
    expect('[');
    auto at = pos_;
    auto sig = natural_list(']');
    Permutation sigma;
    try {
      sigma = Permutation::from_one_based(std::vector<std::size_t>(sig.begin(), sig.end()));
    } catch (const Error&) {
      fail_at(at, "a permutation of 1..n", "sigma");
    }
    expect(',');
    expect_key("H");
    skip_ws();
    if (!accept_word("ballaut")) fail("'ballaut('");
    expect('(');
    auto h = ball_body();
    expect(',');
    expect_key("zeta");
    expect('[');
    auto zetas = complex_list(']');
    expect(')');
    return make_ellipsoid_aut(std::move(p), std::move(sigma), std::move(h), std::move(zetas));
  }

  MapExpr h2prop() {
    expect('(');
    H2Proper n;
    expect_key("zeta");
    n.zeta = complex();
    expect(',');
    expect_key("xi");
    n.xi = complex();
    expect(',');
    expect_key("kp");
    n.kprime = natural0();
    expect(',');
    expect_key("l");
    n.l = natural();
    expect(',');
    expect_key("b");
    n.b = integer();
    expect(',');
    expect_key("pp");
    n.pprime = natural0();
    expect(',');
    expect_key("qp");
    n.qprime = natural0();
    expect(',');
    expect_key("B");
    expect('[');
    n.blaschke.zeros = complex_list(']');
    expect(')');
    return MapExpr::make(std::move(n));
  }

  MapExpr h2aut() {
    expect('(');
    H2Aut n;
    expect_key("xi");
    n.xi = complex();
    expect(',');
    expect_key("s");
    if (!accept_word("none")) n.s = natural();
    expect(',');
    expect_key("theta");
    n.theta = real();
    expect(',');
    expect_key("alpha");
    n.alpha = complex();
    expect(')');
    return MapExpr::make(std::move(n));
  }

  MapExpr hfps() {
    expect('(');
    expect_key("zeta");
    cplx zeta = complex();
    expect(',');
    expect_key("k");
    auto k = natural();
    expect(',');
    expect_key("h");
    MapExpr inner = map();
    expect(')');
    return MapExpr::make(HFpsProper{zeta, k, std::move(inner)});
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline ExactScalar parse_scalar(std::string_view text) {
  detail::Parser p(text);
  auto x = p.scalar();
  p.finish();
  return x;
}

inline Domain parse_domain(std::string_view text) {
  detail::Parser p(text);
  auto d = p.domain();
  p.finish();
  return d;
}

inline ComplexPoint parse_point(std::string_view text) {
  detail::Parser p(text);
  auto x = p.point();
  p.finish();
  return x;
}

inline MapExpr parse_map(std::string_view text) {
  detail::Parser p(text);
  auto f = p.map();
  p.finish();
  return f;
}

inline std::string format_point(const ComplexPoint& x) { return detail::format_list(x, detail::format_complex); }

}  // namespace holomap
