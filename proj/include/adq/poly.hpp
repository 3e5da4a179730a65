#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "adq/rational.hpp"

namespace adq {

// The unknown f(p^e), one per prime power reachable by the equation.
struct Sym {
  std::uint64_t p = 0;
  std::uint32_t e = 1;

  // Canonical type order: by p, then e.
  friend auto operator<=>(const Sym&, const Sym&) = default;

  // The integer p^e the symbol stands for.
  std::uint64_t value() const {
    std::uint64_t v = 1;
    for (std::uint32_t i = 0; i < e; ++i) v *= p;
    return v;
  }

  std::string to_string() const {
    return e == 1 ? std::to_string(p)
                  : std::to_string(p) + "^" + std::to_string(e);
  }

  // Accepts "p" or "p^e".
  static Sym parse(const std::string& s) {
    const auto caret = s.find('^');
    std::size_t used = 0;
    Sym out;
    if (caret == std::string::npos) {
      out.p = std::stoull(s, &used);
      if (used != s.size()) throw std::invalid_argument("Sym: bad base");
      out.e = 1;
    } else {
      out.p = std::stoull(s.substr(0, caret), &used);
      if (used != caret) throw std::invalid_argument("Sym: bad base");
      const std::string es = s.substr(caret + 1);
      const unsigned long ev = std::stoul(es, &used);
      if (used != es.size() || ev == 0) throw std::invalid_argument("Sym: bad exponent");
      out.e = static_cast<std::uint32_t>(ev);
    }
    if (out.p < 2) throw std::invalid_argument("Sym: base must be >= 2");
    return out;
  }
};

// Order by the integer denoted: f(2) < f(3) < f(4) < f(5) < f(7) < f(8) < ...
// Distinct symbols denote distinct integers (prime bases), but keep the
// comparison total anyway.
struct SymValueLess {
  bool operator()(const Sym& a, const Sym& b) const {
    const std::uint64_t va = a.value(), vb = b.value();
    return va != vb ? va < vb : a < b;
  }
};

// Product of symbol powers; the empty monomial is 1.
using Monomial = std::map<Sym, std::uint32_t>;

// Multivariate polynomial over Syms with exact-rational coefficients.
// Terms are kept in canonical monomial order and never store a zero
// coefficient, so the zero polynomial is the unique empty map.
class Poly {
 public:
  using Terms = std::map<Monomial, Rational>;

  Poly() = default;

  static Poly constant(const Rational& c) {
    Poly out;
    if (!c.is_zero()) out.terms_[Monomial{}] = c;
    return out;
  }

  static Poly symbol(const Sym& s) {
    Poly out;
    out.terms_[Monomial{{s, 1}}] = Rational(1);
    return out;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  bool is_constant() const {
    return terms_.empty() ||
           (terms_.size() == 1 && terms_.begin()->first.empty());
  }

  Rational constant_value() const {
    if (!is_constant())
      throw std::logic_error("constant_value: polynomial has symbols");
    return terms_.empty() ? Rational(0) : terms_.begin()->second;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    Poly out = a;
    for (const auto& [m, c] : b.terms_) out.add_term(m, c);
    return out;
  }

  friend Poly operator-(const Poly& a, const Poly& b) {
    Poly out = a;
    for (const auto& [m, c] : b.terms_) out.add_term(m, -c);
    return out;
  }

  Poly operator-() const {
    Poly out;
    for (const auto& [m, c] : terms_) out.terms_[m] = -c;
    return out;
  }

  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        Monomial m = ma;
        for (const auto& [s, k] : mb) m[s] += k;
        out.add_term(m, ca * cb);
      }
    }
    return out;
  }

  friend bool operator==(const Poly&, const Poly&) = default;

  std::set<Sym> syms() const {
    std::set<Sym> out;
    for (const auto& [m, c] : terms_)
      for (const auto& [s, k] : m) out.insert(s);
    return out;
  }

  std::uint32_t degree_in(const Sym& s) const {
    std::uint32_t d = 0;
    for (const auto& [m, c] : terms_) {
      const auto it = m.find(s);
      if (it != m.end()) d = std::max(d, it->second);
    }
    return d;
  }

  // Terms where s occurs with exponent exactly k, with s removed.
  Poly coeff_of_power(const Sym& s, std::uint32_t k) const {
    Poly out;
    for (const auto& [m, c] : terms_) {
      const auto it = m.find(s);
      const std::uint32_t have = it == m.end() ? 0 : it->second;
      if (have != k) continue;
      Monomial rest = m;
      rest.erase(s);
      out.add_term(rest, c);
    }
    return out;
  }

  // Replaces every assigned Sym by its value. A zero value annihilates its
  // whole monomial regardless of the other (possibly unknown) factors.
  Poly substitute(const std::map<Sym, Rational>& assign) const {
    Poly out;
    for (const auto& [m, c] : terms_) {
      Rational factor = c;
      Monomial rest;
      for (const auto& [s, k] : m) {
        const auto it = assign.find(s);
        if (it == assign.end()) {
          rest[s] = k;
        } else {
          factor *= it->second.pow(k);
          if (factor.is_zero()) break;
        }
      }
      if (!factor.is_zero()) out.add_term(rest, factor);
    }
    return out;
  }

  Poly substitute_sym(const Sym& s, const Poly& repl) const {
    Poly out;
    for (const auto& [m, c] : terms_) {
      Monomial rest = m;
      std::uint32_t k = 0;
      const auto it = rest.find(s);
      if (it != rest.end()) {
        k = it->second;
        rest.erase(it);
      }
      Poly term;
      term.add_term(rest, c);
      for (std::uint32_t i = 0; i < k; ++i) term = term * repl;
      out = out + term;
    }
    return out;
  }

  // Dense coefficient vector (index = power) when the only symbol is s;
  // the zero polynomial gives an empty vector.
  std::vector<Rational> univariate_in(const Sym& s) const {
    std::vector<Rational> out;
    for (const auto& [m, c] : terms_) {
      std::uint32_t k = 0;
      if (!m.empty()) {
        if (m.size() != 1 || m.begin()->first != s)
          throw std::logic_error("univariate_in: other symbols present");
        k = m.begin()->second;
      }
      if (out.size() <= k) out.resize(k + 1);
      out[k] = c;
    }
    return out;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [m, c] : terms_) {
      if (!out.empty()) out += " + ";
      out += c.to_string();
      for (const auto& [s, k] : m) {
        out += "*f(" + s.to_string() + ")";
        if (k > 1) out += "^" + std::to_string(k);
      }
    }
    return out;
  }

 private:
  void add_term(const Monomial& m, const Rational& c) {
    if (c.is_zero()) return;
    const auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_[m] = c;
    } else {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  Terms terms_;
};

inline Poly poly_pow(const Poly& p, std::uint32_t k) {
  Poly acc = Poly::constant(Rational(1));
  for (std::uint32_t i = 0; i < k; ++i) acc = acc * p;
  return acc;
}

// --- univariate helpers (dense vector<Rational>, index = power) ---

inline void upoly_trim(std::vector<Rational>& v) {
  while (!v.empty() && v.back().is_zero()) v.pop_back();
}

// Degree, or -1 for the zero polynomial.
inline int upoly_degree(const std::vector<Rational>& v) {
  for (std::size_t i = v.size(); i-- > 0;)
    if (!v[i].is_zero()) return static_cast<int>(i);
  return -1;
}

inline Rational upoly_eval(const std::vector<Rational>& v, const Rational& x) {
  Rational acc(0);
  for (std::size_t i = v.size(); i-- > 0;) acc = acc * x + v[i];
  return acc;
}

// Canonical form: integer coefficients with content 1 and a positive leading
// coefficient. The zero polynomial canonicalizes to the empty vector.
inline std::vector<Rational> upoly_canonical(std::vector<Rational> v) {
  upoly_trim(v);
  if (v.empty()) return v;
  std::int64_t den_lcm = 1;
  for (const Rational& c : v) {
    const std::int64_t g = std::gcd(den_lcm, c.den());
    den_lcm = den_lcm / g * c.den();
  }
  std::int64_t content = 0;
  for (Rational& c : v) {
    c *= Rational(den_lcm);
    content = std::gcd(content, c.num());
  }
  if (v.back() < Rational(0)) content = -content;
  for (Rational& c : v) c /= Rational(content);
  return v;
}

inline std::vector<Rational> upoly_rem(std::vector<Rational> a,
                                       const std::vector<Rational>& b) {
  const int db = upoly_degree(b);
  if (db < 0) throw std::domain_error("upoly_rem: division by zero polynomial");
  int da = upoly_degree(a);
  while (da >= db) {
    const Rational q = a[da] / b[db];
    for (int i = 0; i <= db; ++i) a[da - db + i] -= q * b[i];
    da = upoly_degree(a);
  }
  upoly_trim(a);
  return a;
}

// Euclidean gcd in canonical form; gcd(0, 0) is empty.
inline std::vector<Rational> upoly_gcd(std::vector<Rational> a,
                                       std::vector<Rational> b) {
  upoly_trim(a);
  upoly_trim(b);
  while (!b.empty()) {
    std::vector<Rational> r = upoly_rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return upoly_canonical(std::move(a));
}

// Rational roots of a univariate polynomial, plus the degree of the cofactor
// that has none (0 when the polynomial splits completely over the rationals).
struct RootResult {
  std::vector<Rational> roots;
  int leftover_degree = 0;
};

namespace detail {

inline std::vector<std::int64_t> positive_divisors(std::int64_t n) {
  n = std::abs(n);
  std::vector<std::int64_t> out;
  for (std::int64_t d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    out.push_back(d);
    if (d != n / d) out.push_back(n / d);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

inline RootResult rational_roots(std::vector<Rational> coeffs) {
  RootResult out;
  coeffs = upoly_canonical(std::move(coeffs));
  if (upoly_degree(coeffs) < 1) return out;

  // Strip the power of x first: 0 is a root iff the constant term vanishes.
  std::size_t low = 0;
  while (low < coeffs.size() && coeffs[low].is_zero()) ++low;
  if (low > 0) {
    out.roots.push_back(Rational(0));
    coeffs.erase(coeffs.begin(), coeffs.begin() + static_cast<long>(low));
  }

  // Candidates +/- (divisor of constant)/(divisor of leading), tested
  // exactly; each hit is deflated out, so multiplicities cannot hide the
  // remaining factor's degree.
  while (upoly_degree(coeffs) >= 1) {
    const std::vector<std::int64_t> ps = detail::positive_divisors(coeffs.front().num());
    const std::vector<std::int64_t> qs = detail::positive_divisors(coeffs.back().num());
    bool hit = false;
    for (const std::int64_t p : ps) {
      for (const std::int64_t q : qs) {
        for (const int sign : {+1, -1}) {
          const Rational r(sign * p, q);
          if (!upoly_eval(coeffs, r).is_zero()) continue;
          out.roots.push_back(r);  // deduped after the loop
          // Synthetic division by (x - r).
          std::vector<Rational> next(coeffs.size() - 1);
          Rational carry = coeffs.back();
          for (std::size_t i = coeffs.size() - 1; i-- > 0;) {
            next[i] = carry;
            carry = coeffs[i] + carry * r;
          }
          coeffs = upoly_canonical(std::move(next));
          hit = true;
          break;
        }
        if (hit) break;
      }
      if (hit) break;
    }
    if (!hit) break;
  }
  out.leftover_degree = std::max(0, upoly_degree(coeffs));
  std::sort(out.roots.begin(), out.roots.end());
  out.roots.erase(std::unique(out.roots.begin(), out.roots.end()),
                  out.roots.end());
  return out;
}

// Resultant of a and b with respect to s: the determinant of the Sylvester
// matrix of their coefficients in s. Callers ensure both degrees in s are
// >= 1 (otherwise elimination is meaningless).
inline Poly sylvester_resultant(const Poly& a, const Poly& b, const Sym& s) {
  const std::uint32_t m = a.degree_in(s), n = b.degree_in(s);
  if (m == 0 || n == 0)
    throw std::logic_error("sylvester_resultant: degree 0 operand");
  const std::size_t size = m + n;
  std::vector<std::vector<Poly>> mat(size, std::vector<Poly>(size));
  for (std::uint32_t row = 0; row < n; ++row)
    for (std::uint32_t i = 0; i <= m; ++i)
      mat[row][row + i] = a.coeff_of_power(s, m - i);
  for (std::uint32_t row = 0; row < m; ++row)
    for (std::uint32_t i = 0; i <= n; ++i)
      mat[n + row][row + i] = b.coeff_of_power(s, n - i);

  // Cofactor expansion; matrices stay tiny (degree cap 2 each side).
  struct Det {
    static Poly run(const std::vector<std::vector<Poly>>& m,
                    std::vector<std::size_t> cols, std::size_t row) {
      if (cols.size() == 1) return m[row][cols[0]];
      Poly acc;
      for (std::size_t i = 0; i < cols.size(); ++i) {
        if (m[row][cols[i]].is_zero()) continue;
        std::vector<std::size_t> rest;
        rest.reserve(cols.size() - 1);
        for (std::size_t j = 0; j < cols.size(); ++j)
          if (j != i) rest.push_back(cols[j]);
        const Poly sub = run(m, std::move(rest), row + 1);
        const Poly piece = m[row][cols[i]] * sub;
        acc = (i % 2 == 0) ? acc + piece : acc - piece;
      }
      return acc;
    }
  };
  std::vector<std::size_t> cols(size);
  for (std::size_t i = 0; i < size; ++i) cols[i] = i;
  return Det::run(mat, std::move(cols), 0);
}

}  // namespace adq
