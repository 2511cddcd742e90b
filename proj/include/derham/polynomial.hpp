// Multivariate polynomials over Q in 1, 2 or 3 variables.
//
// Provides:
//  - Polynomial with exact arithmetic, differentiation, evaluation,
//    composition with polynomial (in particular affine) substitutions
//  - exact single-divisor division, the workhorse behind canonical
//    cancellation of registered denominator factors

#ifndef DERHAM_POLYNOMIAL_HPP
#define DERHAM_POLYNOMIAL_HPP

#include <algorithm>
#include <array>
#include <cassert>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "derham/rational.hpp"

namespace derham {

using Exps = std::array<int, 3>;  // exponents of x, y, z; unused axes stay 0

inline Exps exps_add(const Exps& a, const Exps& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

class Polynomial {
 public:
  explicit Polynomial(int dim = 1) : dim_(dim) { assert(dim >= 1 && dim <= 3); }

  static Polynomial constant(int dim, const Rational& c) {
    Polynomial p(dim);
    if (!derham::is_zero(c)) p.terms_[{0, 0, 0}] = c;
    return p;
  }
  static Polynomial monomial(int dim, const Exps& e, const Rational& c = Rational(1)) {
    Polynomial p(dim);
    for (int a = dim; a < 3; ++a) assert(e[a] == 0);
    if (!derham::is_zero(c)) p.terms_[e] = c;
    return p;
  }
  static Polynomial variable(int dim, int axis) {
    Exps e{0, 0, 0};
    e[axis] = 1;
    return monomial(dim, e);
  }

  int dim() const { return dim_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Exps, Rational>& terms() const { return terms_; }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Exps{0, 0, 0});
  }
  Rational constant_value() const {
    assert(is_constant());
    return terms_.empty() ? Rational(0) : terms_.begin()->second;
  }

  int degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, e[0] + e[1] + e[2]);
    return d;  // -1 for the zero polynomial
  }

  Rational coeff(const Exps& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add_term(const Exps& e, const Rational& c) {
    if (derham::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (derham::is_zero(it->second)) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& o) {
    assert(dim_ == o.dim_);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    assert(dim_ == o.dim_);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(const Polynomial& a) {
    Polynomial r(a.dim_);
    for (const auto& [e, c] : a.terms_) r.terms_[e] = -c;
    return r;
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    assert(a.dim_ == b.dim_);
    Polynomial r(a.dim_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) r.add_term(exps_add(ea, eb), ca * cb);
    return r;
  }
  friend Polynomial operator*(const Rational& c, const Polynomial& a) {
    Polynomial r(a.dim_);
    if (derham::is_zero(c)) return r;
    for (const auto& [e, k] : a.terms_) r.terms_[e] = c * k;
    return r;
  }
  bool operator==(const Polynomial& o) const { return dim_ == o.dim_ && terms_ == o.terms_; }

  Polynomial pow(unsigned n) const {
    Polynomial r = constant(dim_, Rational(1));
    Polynomial b = *this;
    while (n) {
      if (n & 1u) r = r * b;
      b = b * b;
      n >>= 1u;
    }
    return r;
  }

  Polynomial differentiate(int axis) const {
    assert(axis >= 0 && axis < dim_);
    Polynomial r(dim_);
    for (const auto& [e, c] : terms_) {
      if (e[axis] == 0) continue;
      Exps d = e;
      d[axis] -= 1;
      r.add_term(d, c * e[axis]);
    }
    return r;
  }

  Rational eval(const std::vector<Rational>& x) const {
    assert(static_cast<int>(x.size()) == dim_);
    Rational total(0);
    for (const auto& [e, c] : terms_) {
      Rational t = c;
      for (int a = 0; a < dim_; ++a)
        if (e[a] > 0) t *= rat_pow(x[a], static_cast<unsigned>(e[a]));
      total += t;
    }
    return total;
  }

  // f(g_0, ..., g_{dim-1}) where the g_a live in a common target space.
  Polynomial substitute(const std::vector<Polynomial>& args) const {
    assert(static_cast<int>(args.size()) == dim_);
    const int out_dim = args.empty() ? dim_ : args[0].dim();
    // cache powers of each argument up to the needed exponent
    std::array<std::vector<Polynomial>, 3> powers;
    for (int a = 0; a < dim_; ++a)
      powers[a].push_back(Polynomial::constant(out_dim, Rational(1)));
    Polynomial result(out_dim);
    for (const auto& [e, c] : terms_) {
      Polynomial term = Polynomial::constant(out_dim, c);
      for (int a = 0; a < dim_; ++a) {
        while (static_cast<int>(powers[a].size()) <= e[a])
          powers[a].push_back(powers[a].back() * args[a]);
        if (e[a] > 0) term = term * powers[a][e[a]];
      }
      result += term;
    }
    return result;
  }

  // Exact division: returns *this / q if the division leaves no remainder.
  std::optional<Polynomial> divide_exact(const Polynomial& q) const {
    assert(dim_ == q.dim_);
    assert(!q.is_zero());
    Polynomial rem = *this;
    Polynomial quot(dim_);
    const auto& qlead = *q.terms_.rbegin();  // lex-largest term of the divisor
    while (!rem.is_zero()) {
      const auto& rlead = *rem.terms_.rbegin();
      Exps d;
      for (int a = 0; a < 3; ++a) {
        d[a] = rlead.first[a] - qlead.first[a];
        if (d[a] < 0) return std::nullopt;
      }
      const Rational c = rlead.second / qlead.second;
      quot.add_term(d, c);
      rem -= Polynomial::monomial(dim_, d, c) * q;
    }
    return quot;
  }

  // Reinterprets the polynomial in a higher-dimensional space (extra axes unused).
  Polynomial lifted(int new_dim) const {
    assert(new_dim >= dim_);
    Polynomial r(new_dim);
    r.terms_ = terms_;
    return r;
  }

 private:
  int dim_;
  std::map<Exps, Rational> terms_;
};

// x = A s + b as data for substitutions: row i of `linear` gives the
// coefficients of output coordinate i in the domain variables.
struct AffineMap {
  int dom_dim = 0, cod_dim = 0;
  std::vector<std::vector<Rational>> linear;  // cod_dim x dom_dim
  std::vector<Rational> offset;               // cod_dim

  static AffineMap identity(int dim) {
    AffineMap m;
    m.dom_dim = m.cod_dim = dim;
    m.linear.assign(dim, std::vector<Rational>(dim, Rational(0)));
    m.offset.assign(dim, Rational(0));
    for (int i = 0; i < dim; ++i) m.linear[i][i] = 1;
    return m;
  }

  // The polynomials (in the domain variables) to substitute for each
  // codomain variable.
  std::vector<Polynomial> coordinate_polys() const {
    std::vector<Polynomial> out;
    for (int i = 0; i < cod_dim; ++i) {
      Polynomial p = Polynomial::constant(dom_dim, offset[i]);
      for (int j = 0; j < dom_dim; ++j)
        p.add_term(
            [&] {
              Exps e{0, 0, 0};
              e[j] = 1;
              return e;
            }(),
            linear[i][j]);
      out.push_back(std::move(p));
    }
    return out;
  }

  std::vector<Rational> apply(const std::vector<Rational>& s) const {
    assert(static_cast<int>(s.size()) == dom_dim);
    std::vector<Rational> x(cod_dim, Rational(0));
    for (int i = 0; i < cod_dim; ++i) {
      x[i] = offset[i];
      for (int j = 0; j < dom_dim; ++j) x[i] += linear[i][j] * s[j];
    }
    return x;
  }

  AffineMap compose(const AffineMap& inner) const {  // this ∘ inner
    assert(dom_dim == inner.cod_dim);
    AffineMap r;
    r.dom_dim = inner.dom_dim;
    r.cod_dim = cod_dim;
    r.linear.assign(cod_dim, std::vector<Rational>(inner.dom_dim, Rational(0)));
    r.offset = offset;
    for (int i = 0; i < cod_dim; ++i) {
      for (int j = 0; j < inner.dom_dim; ++j)
        for (int k = 0; k < dom_dim; ++k) r.linear[i][j] += linear[i][k] * inner.linear[k][j];
      for (int k = 0; k < dom_dim; ++k) r.offset[i] += linear[i][k] * inner.offset[k];
    }
    return r;
  }
};

inline Polynomial substitute_affine(const Polynomial& f, const AffineMap& map) {
  assert(f.dim() == map.cod_dim);
  return f.substitute(map.coordinate_polys());
}

}  // namespace derham

#endif
