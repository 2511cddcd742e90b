// Rational functions with factored denominators.
//
// Denominators are not general polynomials: they are products of powers of a
// small set of registered factors per element (the pyramid's (1-z), a
// polygon's Wachspress denominator, the (1-t) that those induce on faces).
// Every function in the constructed spaces has this shape, and it keeps
// common-denominator clearing and exact integration tractable.
//
// Canonical form: a factor is divided out exactly when polynomial division
// succeeds; no multivariate gcd is attempted.

#ifndef DERHAM_RATFUN_HPP
#define DERHAM_RATFUN_HPP

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "derham/errors.hpp"
#include "derham/polynomial.hpp"

namespace derham {

struct Factor {
  std::string name;  // export spelling, e.g. "(1-z)" or "W"
  Polynomial poly;
};
using FactorPtr = std::shared_ptr<const Factor>;

inline FactorPtr make_factor(std::string name, Polynomial p) {
  return std::make_shared<Factor>(Factor{std::move(name), std::move(p)});
}

inline bool same_factor(const FactorPtr& a, const FactorPtr& b) {
  return a == b || a->poly == b->poly;
}

class RationalFunction {
 public:
  RationalFunction() : num_(Polynomial(1)) {}
  /*implicit*/ RationalFunction(Polynomial p) : num_(std::move(p)) {}

  static RationalFunction constant(int dim, const Rational& c) {
    return RationalFunction(Polynomial::constant(dim, c));
  }

  static RationalFunction quotient(Polynomial num, const FactorPtr& f, int power) {
    RationalFunction r(std::move(num));
    if (power > 0) r.den_.emplace_back(f, power);
    r.cancel();
    return r;
  }

  int dim() const { return num_.dim(); }
  const Polynomial& num() const { return num_; }
  const std::vector<std::pair<FactorPtr, int>>& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.empty(); }

  Polynomial den_poly() const {
    Polynomial d = Polynomial::constant(dim(), Rational(1));
    for (const auto& [f, p] : den_) d = d * f->poly.pow(static_cast<unsigned>(p));
    return d;
  }

  int power_of(const FactorPtr& f) const {
    for (const auto& [g, p] : den_)
      if (same_factor(g, f)) return p;
    return 0;
  }

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    // common denominator: per-factor max power
    RationalFunction r;
    r.num_ = Polynomial(a.dim());
    std::vector<std::pair<FactorPtr, int>> all = a.den_;
    for (const auto& [f, p] : b.den_) {
      bool found = false;
      for (auto& [g, q] : all)
        if (same_factor(f, g)) {
          q = std::max(q, p);
          found = true;
        }
      if (!found) all.emplace_back(f, p);
    }
    Polynomial na = a.num_, nb = b.num_;
    for (const auto& [f, p] : all) {
      int pa = p - a.power_of(f), pb = p - b.power_of(f);
      if (pa > 0) na = na * f->poly.pow(static_cast<unsigned>(pa));
      if (pb > 0) nb = nb * f->poly.pow(static_cast<unsigned>(pb));
    }
    r.num_ = na + nb;
    r.den_ = std::move(all);
    r.cancel();
    return r;
  }
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
    return a + (Rational(-1) * b);
  }
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    RationalFunction r;
    r.num_ = a.num_ * b.num_;
    r.den_ = a.den_;
    for (const auto& [f, p] : b.den_) {
      bool found = false;
      for (auto& [g, q] : r.den_)
        if (same_factor(f, g)) {
          q += p;
          found = true;
        }
      if (!found) r.den_.emplace_back(f, p);
    }
    r.cancel();
    return r;
  }
  friend RationalFunction operator*(const Rational& c, const RationalFunction& a) {
    RationalFunction r = a;
    r.num_ = c * r.num_;
    if (r.num_.is_zero()) r.den_.clear();
    return r;
  }
  friend RationalFunction operator-(const RationalFunction& a) { return Rational(-1) * a; }

  // true iff a - b vanishes identically (cross-multiplied polynomial identity)
  friend bool equal(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ * b.den_poly() == b.num_ * a.den_poly();
  }

  // d(num / prod q_i^{m_i}) = [num' prod q_i - num sum_i m_i q_i' prod_{j!=i} q_j]
  //                           / prod q_i^{m_i + 1}
  RationalFunction differentiate(int axis) const {
    Polynomial first_powers = Polynomial::constant(dim(), Rational(1));
    for (const auto& [f, p] : den_) first_powers = first_powers * f->poly;
    Polynomial n = num_.differentiate(axis) * first_powers;
    for (std::size_t i = 0; i < den_.size(); ++i) {
      Polynomial others = Polynomial::constant(dim(), Rational(1));
      for (std::size_t j = 0; j < den_.size(); ++j)
        if (j != i) others = others * den_[j].first->poly;
      n -= Rational(den_[i].second) * num_ * den_[i].first->poly.differentiate(axis) * others;
    }
    RationalFunction r;
    r.num_ = std::move(n);
    r.den_ = den_;
    for (auto& [f, p] : r.den_) p += 1;
    r.cancel();
    return r;
  }

  // Exact composition with an affine (or polynomial) coordinate map.
  // Composed factors that stay nonconstant become factors of the result;
  // a factor that composes to zero signals a trace onto its pole set.
  RationalFunction substitute_affine(const AffineMap& map) const {
    RationalFunction r;
    r.num_ = derham::substitute_affine(num_, map);
    for (const auto& [f, p] : den_) {
      Polynomial comp = derham::substitute_affine(f->poly, map);
      if (comp.is_zero())
        throw DenominatorVanishes("factor " + f->name + " vanishes under substitution");
      if (comp.is_constant()) {
        r.num_ = rat_pow(Rational(1) / comp.constant_value(), static_cast<unsigned>(p)) * r.num_;
      } else {
        r.den_.emplace_back(make_factor(f->name, std::move(comp)), p);
      }
    }
    r.cancel();
    return r;
  }

  Rational eval(const std::vector<Rational>& x) const {
    Rational d(1);
    for (const auto& [f, p] : den_) {
      Rational v = f->poly.eval(x);
      if (derham::is_zero(v))
        throw DenominatorVanishes("evaluation at a pole of " + f->name);
      d *= rat_pow(v, static_cast<unsigned>(p));
    }
    return num_.eval(x) / d;
  }

  bool operator==(const RationalFunction& o) const { return equal(*this, o); }

 private:
  void cancel() {
    if (num_.is_zero()) {
      den_.clear();
      return;
    }
    // merge duplicate factors (compositions may re-create an existing one)
    for (std::size_t i = 0; i < den_.size(); ++i)
      for (std::size_t j = i + 1; j < den_.size();) {
        if (same_factor(den_[i].first, den_[j].first)) {
          den_[i].second += den_[j].second;
          den_.erase(den_.begin() + static_cast<std::ptrdiff_t>(j));
        } else {
          ++j;
        }
      }
    for (auto it = den_.begin(); it != den_.end();) {
      while (it->second > 0) {
        auto q = num_.divide_exact(it->first->poly);
        if (!q) break;
        num_ = std::move(*q);
        it->second -= 1;
      }
      it = it->second == 0 ? den_.erase(it) : std::next(it);
    }
  }

  Polynomial num_;
  std::vector<std::pair<FactorPtr, int>> den_;
};

// A scalar- or vector-valued field: 1 component for scalars, d for vectors.
struct FieldFn {
  std::vector<RationalFunction> comps;

  FieldFn() = default;
  explicit FieldFn(RationalFunction f) { comps.push_back(std::move(f)); }
  explicit FieldFn(std::vector<RationalFunction> c) : comps(std::move(c)) {}

  bool scalar() const { return comps.size() == 1; }
  int ncomp() const { return static_cast<int>(comps.size()); }
  int dim() const { return comps.at(0).dim(); }
  bool is_zero() const {
    for (const auto& c : comps)
      if (!c.is_zero()) return false;
    return true;
  }

  friend FieldFn operator+(const FieldFn& a, const FieldFn& b) {
    FieldFn r;
    for (int i = 0; i < a.ncomp(); ++i) r.comps.push_back(a.comps[i] + b.comps[i]);
    return r;
  }
  friend FieldFn operator*(const Rational& c, const FieldFn& a) {
    FieldFn r;
    for (const auto& x : a.comps) r.comps.push_back(c * x);
    return r;
  }
  friend bool equal(const FieldFn& a, const FieldFn& b) {
    if (a.ncomp() != b.ncomp()) return false;
    for (int i = 0; i < a.ncomp(); ++i)
      if (!equal(a.comps[i], b.comps[i])) return false;
    return true;
  }
};

inline FieldFn zero_field(int dim, int ncomp) {
  FieldFn f;
  for (int i = 0; i < ncomp; ++i) f.comps.emplace_back(Polynomial(dim));
  return f;
}

}  // namespace derham

#endif
