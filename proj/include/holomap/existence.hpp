#pragma once

// Exact deciders for the existence of proper holomorphic maps between
// ellipsoids and between Hartogs triangles, with certifying witnesses.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <variant>
#include <vector>

#include "holomap/error.hpp"
#include "holomap/exactnum.hpp"

namespace holomap {

using ExponentVector = std::vector<ExactScalar>;

/// A bijection of {0, ..., n-1}. Acting on vectors, sigma(z) = z_sigma with
/// (z_sigma)_j = z_{sigma(j)}. Text and JSON forms are 1-based.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<std::size_t> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size(), false);
    for (auto i : images_) {
      if (i >= images_.size() || seen[i]) throw Error(ErrorCode::precondition_violated, "not a bijection");
      seen[i] = true;
    }
  }

  static Permutation identity(std::size_t n) {
    std::vector<std::size_t> img(n);
    for (std::size_t i = 0; i < n; ++i) img[i] = i;
    return Permutation(std::move(img));
  }

  static Permutation from_one_based(const std::vector<std::size_t>& images) {
    std::vector<std::size_t> img;
    img.reserve(images.size());
    for (auto i : images) {
      if (i == 0) throw Error(ErrorCode::precondition_violated, "permutation images are 1-based");
      img.push_back(i - 1);
    }
    return Permutation(std::move(img));
  }

  std::size_t size() const { return images_.size(); }
  std::size_t operator()(std::size_t j) const { return images_[j]; }
  const std::vector<std::size_t>& images() const { return images_; }

  std::vector<std::size_t> one_based() const {
    std::vector<std::size_t> out(images_);
    for (auto& i : out) ++i;
    return out;
  }

  bool is_identity() const {
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (images_[i] != i) return false;
    return true;
  }

  /// (a * b)(j) = a(b(j)).
  friend Permutation operator*(const Permutation& a, const Permutation& b) {
    if (a.size() != b.size()) throw Error(ErrorCode::dimension_mismatch, "composing permutations of different size");
    std::vector<std::size_t> img(a.size());
    for (std::size_t j = 0; j < img.size(); ++j) img[j] = a(b(j));
    return Permutation(std::move(img));
  }

  Permutation inverse() const {
    std::vector<std::size_t> img(size());
    for (std::size_t j = 0; j < size(); ++j) img[images_[j]] = j;
    return Permutation(std::move(img));
  }

  template <class T>
  std::vector<T> apply(const std::vector<T>& z) const {
    if (z.size() != size()) throw Error(ErrorCode::dimension_mismatch, "permuting a vector of the wrong length");
    std::vector<T> out;
    out.reserve(z.size());
    for (std::size_t j = 0; j < size(); ++j) out.push_back(z[images_[j]]);
    return out;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> images_;
};

struct EllipsoidWitness {
  Permutation sigma;
  friend bool operator==(const EllipsoidWitness&, const EllipsoidWitness&) = default;
};
struct Hartogs11Witness {
  std::uint64_t k = 0;
  std::uint64_t l = 0;
  friend bool operator==(const Hartogs11Witness&, const Hartogs11Witness&) = default;
};
struct Hartogs1mWitness {
  std::uint64_t k = 0;
  Permutation sigma;
  friend bool operator==(const Hartogs1mWitness&, const Hartogs1mWitness&) = default;
};
struct NonExistence {
  std::string reason;
  friend bool operator==(const NonExistence&, const NonExistence&) = default;
};

using ExistenceWitness = std::variant<EllipsoidWitness, Hartogs11Witness, Hartogs1mWitness, NonExistence>;

inline bool exists(const ExistenceWitness& w) { return !std::holds_alternative<NonExistence>(w); }

namespace detail {
inline void require_same_length(const ExponentVector& p, const ExponentVector& q) {
  if (p.size() != q.size())
    throw Error(ErrorCode::dimension_mismatch,
                "exponent vectors of length " + std::to_string(p.size()) + " and " + std::to_string(q.size()));
}

inline void require_all_positive(const ExponentVector& p) {
  for (const auto& x : p)
    if (x.sign() <= 0) throw Error(ErrorCode::non_positive_parameter, "exponent " + x.to_string() + " is not positive");
}

/// Hopcroft-Karp on a left-to-right adjacency list; returns match of each left vertex or npos.
class HopcroftKarp {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  HopcroftKarp(std::size_t left, std::size_t right, std::vector<std::vector<std::size_t>> adjacency)
      : adj_(std::move(adjacency)), match_left_(left, npos), match_right_(right, npos), dist_(left) {}

  std::size_t run() {
    std::size_t size = 0;
    while (bfs()) {
      for (std::size_t u = 0; u < adj_.size(); ++u)
        if (match_left_[u] == npos && dfs(u)) ++size;
    }
    return size;
  }

  const std::vector<std::size_t>& match_left() const { return match_left_; }

 private:
  bool bfs() {
    std::queue<std::size_t> queue;
    bool found = false;
    for (std::size_t u = 0; u < adj_.size(); ++u) {
      if (match_left_[u] == npos) {
        dist_[u] = 0;
        queue.push(u);
      } else {
        dist_[u] = npos;
      }
    }
    while (!queue.empty()) {
      auto u = queue.front();
      queue.pop();
      for (auto v : adj_[u]) {
        auto w = match_right_[v];
        if (w == npos) {
          found = true;
        } else if (dist_[w] == npos) {
          dist_[w] = dist_[u] + 1;
          queue.push(w);
        }
      }
    }
    return found;
  }

  bool dfs(std::size_t u) {
    for (auto v : adj_[u]) {
      auto w = match_right_[v];
      if (w == npos || (dist_[w] == dist_[u] + 1 && dfs(w))) {
        match_left_[u] = v;
        match_right_[v] = u;
        return true;
      }
    }
    dist_[u] = npos;
    return false;
  }

  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::size_t> match_left_;
  std::vector<std::size_t> match_right_;
  std::vector<std::size_t> dist_;
};
}  // namespace detail

/// Entry (i, j) holds p_i / q_j when that quotient is a natural number.
inline std::vector<std::vector<std::optional<std::uint64_t>>> natural_ratio_matrix(const ExponentVector& p,
                                                                                  const ExponentVector& q) {
  detail::require_same_length(p, q);
  detail::require_all_positive(p);
  detail::require_all_positive(q);
  const std::size_t n = p.size();
  std::vector<std::vector<std::optional<std::uint64_t>>> m(n, std::vector<std::optional<std::uint64_t>>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = (p[i] / q[j]).as_natural();
  return m;
}

namespace detail {
/// Perfect-matching test for "slot j takes source index i" restricted by fixed choices.
inline bool has_perfect_matching(const std::vector<std::vector<bool>>& allowed) {
  const std::size_t n = allowed.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      if (allowed[j][i]) adj[j].push_back(i);
  HopcroftKarp hk(n, n, std::move(adj));
  return hk.run() == n;
}
}  // namespace detail

/// Lexicographically smallest sigma with p_{sigma(j)} / q_j natural for all j, if any.
inline std::optional<Permutation> find_matching(const ExponentVector& p, const ExponentVector& q) {
  auto ratios = natural_ratio_matrix(p, q);
  const std::size_t n = p.size();
  // allowed[j][i]: slot j may take p_i
  std::vector<std::vector<bool>> allowed(n, std::vector<bool>(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) allowed[j][i] = ratios[i][j].has_value();
  if (!detail::has_perfect_matching(allowed)) return std::nullopt;

  // Fix slots in order, always keeping a perfect matching available.
  std::vector<std::size_t> images(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<bool> row = allowed[j];
    for (std::size_t i = 0; i < n; ++i) {
      if (!row[i]) continue;
      auto trial = allowed;
      trial[j].assign(n, false);
      trial[j][i] = true;
      for (std::size_t jj = 0; jj < n; ++jj)
        if (jj != j) trial[jj][i] = false;
      if (detail::has_perfect_matching(trial)) {
        allowed = std::move(trial);
        images[j] = i;
        break;
      }
    }
  }
  return Permutation(std::move(images));
}

/// All valid sigma in lexicographic order, truncated at cap.
inline std::vector<Permutation> enumerate_matchings(const ExponentVector& p, const ExponentVector& q, std::size_t cap) {
  auto ratios = natural_ratio_matrix(p, q);
  const std::size_t n = p.size();
  if (n > 10) throw Error(ErrorCode::instance_too_large, "matching enumeration is limited to n <= 10");
  std::vector<Permutation> out;
  std::vector<std::size_t> images(n);
  std::vector<bool> used(n, false);
  auto recurse = [&](auto&& self, std::size_t j) -> void {
    if (out.size() >= cap) return;
    if (j == n) {
      out.emplace_back(images);
      return;
    }
    for (std::size_t i = 0; i < n && out.size() < cap; ++i) {
      if (used[i] || !ratios[i][j]) continue;
      used[i] = true;
      images[j] = i;
      self(self, j + 1);
      used[i] = false;
    }
  };
  recurse(recurse, 0);
  return out;
}

inline ExistenceWitness decide_ellipsoid(const ExponentVector& p, const ExponentVector& q) {
  detail::require_same_length(p, q);
  if (p.size() < 2) throw Error(ErrorCode::dimension_mismatch, "ellipsoid existence needs n >= 2");
  if (auto sigma = find_matching(p, q)) return EllipsoidWitness{*sigma};
  return NonExistence{"no sigma with p_sigma/q in N^n"};
}

namespace detail {
/// Inverse of a modulo m for gcd(a, m) = 1, m >= 1.
inline BigInt mod_inverse(const BigInt& a, const BigInt& m) {
  BigInt old_r = ((a % m) + m) % m, r = m;
  BigInt old_s = 1, s = 0;
  while (r != 0) {
    BigInt quot = old_r / r;
    BigInt tmp = old_r - quot * r;
    old_r = r;
    r = tmp;
    tmp = old_s - quot * s;
    old_s = s;
    s = tmp;
  }
  return ((old_s % m) + m) % m;
}

inline std::uint64_t require_u64(const BigInt& x, const char* what) {
  auto v = to_u64(x);
  if (!v) throw Error(ErrorCode::precondition_violated, std::string(what) + " exceeds the 64-bit range");
  return *v;
}
}  // namespace detail

/// Smallest (l, k) in lexicographic order with k, l >= 1 and l*qt/pt - k*q/p in Z.
///
/// Writing q/p = u + v sqrt2 and qt/pt = u' + v' sqrt2, the condition splits into
/// l v' = k v and l u' - k u in Z. If exactly one of v, v' vanishes there is no
/// solution; if both are nonzero the ratio l/k = v/v' is forced; if both vanish
/// the rational congruence k a d = l c b (mod b d) is solved in closed form.
inline ExistenceWitness decide_hartogs_1_1(const ExactScalar& p, const ExactScalar& q, const ExactScalar& pt,
                                          const ExactScalar& qt) {
  for (const auto* x : {&p, &q, &pt, &qt})
    if (x->sign() <= 0) throw Error(ErrorCode::non_positive_parameter, "parameter " + x->to_string() + " is not positive");
  const ExactScalar rho = q / p;
  const ExactScalar rho_t = qt / pt;
  const Rational& v = rho.v();
  const Rational& vt = rho_t.v();

  if (v.is_zero() != vt.is_zero()) {
    return NonExistence{v.is_zero() ? "sqrt2-part: l*v' = 0 forces l = 0"
                                    : "sqrt2-part: k*v = 0 forces k = 0"};
  }
  if (!v.is_zero()) {
    Rational ratio = v / vt;  // l / k
    if (ratio.sign() <= 0) return NonExistence{"sqrt2-part: l/k = v/v' is not positive"};
    const BigInt num = ratio.num();
    const BigInt den = ratio.den();
    Rational rest = Rational(num) * rho_t.u() - Rational(den) * rho.u();
    const BigInt t = rest.den();
    return Hartogs11Witness{detail::require_u64(t * den, "k"), detail::require_u64(t * num, "l")};
  }

  // rho = a/b, rho_t = c/d in lowest terms, a, c > 0.
  const BigInt a = rho.u().num(), b = rho.u().den();
  const BigInt c = rho_t.u().num(), d = rho_t.u().den();
  const BigInt l = d / boost::multiprecision::gcd(b, d);
  // k a = l c b / d (mod b)
  BigInt rhs = (l * c * b / d) % b;
  BigInt k = (rhs * detail::mod_inverse(a, b)) % b;
  if (k == 0) k = b;
  return Hartogs11Witness{detail::require_u64(k, "k"), detail::require_u64(l, "l")};
}

inline ExistenceWitness decide_hartogs_1_m(const ExactScalar& p, const ExponentVector& q, const ExactScalar& pt,
                                          const ExponentVector& qt) {
  detail::require_same_length(q, qt);
  if (q.size() < 2) throw Error(ErrorCode::dimension_mismatch, "the w-block needs m >= 2");
  if (p.sign() <= 0 || pt.sign() <= 0) throw Error(ErrorCode::non_positive_parameter, "z exponent is not positive");
  auto k = (p / pt).as_natural();
  if (!k) return NonExistence{"p/p~ = " + (p / pt).to_string() + " is not a natural number"};
  auto sigma = find_matching(q, qt);
  if (!sigma) return NonExistence{"no sigma with q_sigma/q~ in N^m"};
  return Hartogs1mWitness{*k, *sigma};
}

/// The sigma with p_sigma = p. Lists the whole group for n <= 10; above that
/// returns generators (adjacent transpositions inside blocks of equal entries).
inline std::vector<Permutation> stabilizer(const ExponentVector& p) {
  const std::size_t n = p.size();
  std::vector<Permutation> out;
  if (n > 10) {
    out.push_back(Permutation::identity(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!(p[i] == p[j])) continue;
        bool adjacent = true;  // no equal entry strictly between i and j
        for (std::size_t t = i + 1; t < j; ++t)
          if (p[t] == p[i]) adjacent = false;
        if (!adjacent) continue;
        auto img = Permutation::identity(n).images();
        std::swap(img[i], img[j]);
        out.emplace_back(std::move(img));
      }
    return out;
  }
  std::vector<std::size_t> images(n);
  std::vector<bool> used(n, false);
  auto recurse = [&](auto&& self, std::size_t j) -> void {
    if (j == n) {
      out.emplace_back(images);
      return;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i] || !(p[i] == p[j])) continue;
      used[i] = true;
      images[j] = i;
      self(self, j + 1);
      used[i] = false;
    }
  };
  recurse(recurse, 0);
  return out;
}

inline bool stabilizes(const Permutation& sigma, const ExponentVector& p) {
  return sigma.size() == p.size() && sigma.apply(p) == p;
}

}  // namespace holomap
