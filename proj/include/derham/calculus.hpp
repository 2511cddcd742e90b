// Differential operators, trace operators, exact integration and the four
// affine pullbacks.
//
// Traces follow the library's rational-frame convention: edge traces are
// weighted by the un-normalized edge direction, face tangential traces are
// covariant components against the chart spans, and normal traces pair with
// the rational normal t1 x t2. This keeps everything in Q; the weights are
// constant per entity, so space comparisons and interpolation systems are
// unaffected.

#ifndef DERHAM_CALCULUS_HPP
#define DERHAM_CALCULUS_HPP

#include <vector>

#include "derham/geometry.hpp"

namespace derham {

enum class DiffOpKind { Grad, Curl2D, Curl3D, Div };

inline FieldFn diff(DiffOpKind kind, const FieldFn& f) {
  const int d = f.dim();
  switch (kind) {
    case DiffOpKind::Grad: {
      FieldFn g;
      for (int a = 0; a < d; ++a) g.comps.push_back(f.comps[0].differentiate(a));
      return g;
    }
    case DiffOpKind::Curl2D: {
      FieldFn g;
      g.comps.push_back(f.comps[1].differentiate(0) - f.comps[0].differentiate(1));
      return g;
    }
    case DiffOpKind::Curl3D: {
      FieldFn g;
      g.comps.push_back(f.comps[2].differentiate(1) - f.comps[1].differentiate(2));
      g.comps.push_back(f.comps[0].differentiate(2) - f.comps[2].differentiate(0));
      g.comps.push_back(f.comps[1].differentiate(0) - f.comps[0].differentiate(1));
      return g;
    }
    case DiffOpKind::Div: {
      FieldFn g;
      RationalFunction s = f.comps[0].differentiate(0);
      for (int a = 1; a < d; ++a) s = s + f.comps[a].differentiate(a);
      g.comps.push_back(std::move(s));
      return g;
    }
  }
  return f;
}

// ---- traces ------------------------------------------------------------

inline FieldFn trace_restrict(const FieldFn& f, const AffineMap& chart) {
  FieldFn r;
  for (const auto& c : f.comps) r.comps.push_back(c.substitute_affine(chart));
  return r;
}

// (v . dir)|_e in the edge parameter
inline FieldFn trace_E_edge(const FieldFn& v, const EdgeFrame& e) {
  RationalFunction s = RationalFunction::constant(v.dim(), Rational(0));
  for (int i = 0; i < v.ncomp(); ++i) s = s + e.dir[i] * v.comps[i];
  FieldFn r;
  r.comps.push_back(s.substitute_affine(e.chart));
  return r;
}

// covariant components (v.t1, v.t2)|_f in the chart frame
inline FieldFn trace_E_face(const FieldFn& v, const FaceFrame& f) {
  FieldFn r;
  for (const Point* t : {&f.t1, &f.t2}) {
    RationalFunction s = RationalFunction::constant(3, Rational(0));
    for (int i = 0; i < 3; ++i) s = s + (*t)[i] * v.comps[i];
    r.comps.push_back(s.substitute_affine(f.chart));
  }
  return r;
}

// (v . n)|_f with the rational normal t1 x t2
inline FieldFn trace_V_face(const FieldFn& v, const FaceFrame& f) {
  RationalFunction s = RationalFunction::constant(3, Rational(0));
  for (int i = 0; i < 3; ++i) s = s + f.normal[i] * v.comps[i];
  FieldFn r;
  r.comps.push_back(s.substitute_affine(f.chart));
  return r;
}

// ---- exact integration ---------------------------------------------------

namespace detail {

// Antiderivative in `axis`, evaluated between polynomial bounds.
inline Polynomial integrate_var(const Polynomial& p, int axis, const Polynomial& lo,
                                const Polynomial& hi) {
  Polynomial anti(p.dim());
  for (const auto& [e, c] : p.terms()) {
    Exps d = e;
    d[axis] += 1;
    anti.add_term(d, c / d[axis]);
  }
  std::vector<Polynomial> args_hi, args_lo;
  for (int a = 0; a < p.dim(); ++a) {
    args_hi.push_back(Polynomial::variable(p.dim(), a));
    args_lo.push_back(Polynomial::variable(p.dim(), a));
  }
  args_hi[axis] = hi;
  args_lo[axis] = lo;
  return anti.substitute(args_hi) - anti.substitute(args_lo);
}

struct IterStep {
  int axis;
  Polynomial lo, hi;
};

inline Polynomial pconst(int dim, long v) { return Polynomial::constant(dim, rat(v)); }
inline Polynomial pvar(int dim, int axis) { return Polynomial::variable(dim, axis); }

// Iterated-integration recipe per reference shape; innermost first, the last
// step must be the only axis any denominator factor depends on.
inline std::vector<IterStep> iteration_steps(ElementKind kind) {
  switch (kind) {
    case ElementKind::Interval:
      return {{0, pconst(1, 0), pconst(1, 1)}};
    case ElementKind::Triangle:
      return {{0, pconst(2, 0), pconst(2, 1) - pvar(2, 1)}, {1, pconst(2, 0), pconst(2, 1)}};
    case ElementKind::Square:
      return {{0, pconst(2, 0), pconst(2, 1)}, {1, pconst(2, 0), pconst(2, 1)}};
    case ElementKind::Tet:
      return {{0, pconst(3, 0), pconst(3, 1) - pvar(3, 1) - pvar(3, 2)},
              {1, pconst(3, 0), pconst(3, 1) - pvar(3, 2)},
              {2, pconst(3, 0), pconst(3, 1)}};
    case ElementKind::Cube:
      return {{0, pconst(3, 0), pconst(3, 1)},
              {1, pconst(3, 0), pconst(3, 1)},
              {2, pconst(3, 0), pconst(3, 1)}};
    case ElementKind::Prism:
      return {{0, pconst(3, 0), pconst(3, 1) - pvar(3, 1)},
              {1, pconst(3, 0), pconst(3, 1)},
              {2, pconst(3, 0), pconst(3, 1)}};
    case ElementKind::Pyramid:
      return {{0, pconst(3, 0), pconst(3, 1) - pvar(3, 2)},
              {1, pconst(3, 0), pconst(3, 1) - pvar(3, 2)},
              {2, pconst(3, 0), pconst(3, 1)}};
    default:
      throw BadSpec("integrate: unsupported reference shape " + kind_name(kind));
  }
}

}  // namespace detail

// Exact integral of a scalar rational function over a reference shape.
// Denominator factors may only involve the outermost axis (the pyramid's
// (1-z), the (1-t) on slant-face charts). A pole that does not cancel after
// collapsing the inner variables raises DivergentIntegral.
inline Rational integrate_ref(ElementKind kind, const RationalFunction& f) {
  if (f.is_zero()) return Rational(0);
  auto steps = detail::iteration_steps(kind);
  const int last_axis = steps.back().axis;
  for (const auto& [fac, pow] : f.den())
    for (int a = 0; a < f.dim(); ++a)
      if (a != last_axis && !fac->poly.differentiate(a).is_zero())
        throw UnsupportedFactor("integrate: factor " + fac->name +
                                " depends on an inner integration variable");
  Polynomial num = f.num();
  for (std::size_t i = 0; i + 1 < steps.size(); ++i)
    num = detail::integrate_var(num, steps[i].axis, steps[i].lo, steps[i].hi);
  // final 1D step: clear the denominator exactly or report divergence
  for (const auto& [fac, pow] : f.den()) {
    for (int p = 0; p < pow; ++p) {
      auto q = num.divide_exact(fac->poly);
      if (!q)
        throw DivergentIntegral("integrate: pole of " + fac->name + " does not cancel");
      num = std::move(*q);
    }
  }
  num = detail::integrate_var(num, last_axis, steps.back().lo, steps.back().hi);
  if (!num.is_constant()) throw BadSpec("integrate: internal error, nonconstant result");
  return num.constant_value();
}

inline Rational integrate_element(const ReferenceElement& K, const RationalFunction& f) {
  if (K.kind == ElementKind::Polygon)
    throw BadSpec("integrate: polygon integration is not supported");
  return integrate_ref(K.kind, f);
}

// L2 pairing of two fields over a reference shape with a constant rational
// metric (identity for cartesian components; inverse Gram matrix for
// covariant face components).
inline Rational inner_product(ElementKind domain, const FieldFn& a, const FieldFn& b,
                              const std::vector<std::vector<Rational>>* metric = nullptr) {
  RationalFunction s = RationalFunction::constant(a.dim(), Rational(0));
  if (metric) {
    for (int i = 0; i < a.ncomp(); ++i)
      for (int j = 0; j < b.ncomp(); ++j)
        if (!is_zero((*metric)[i][j])) s = s + (*metric)[i][j] * (a.comps[i] * b.comps[j]);
  } else {
    for (int i = 0; i < a.ncomp(); ++i) s = s + a.comps[i] * b.comps[i];
  }
  return integrate_ref(domain, s);
}

// ---- pullbacks -----------------------------------------------------------

enum class PullbackKind { H1, Curl, Div, L2 };

namespace detail {
inline Rational det_linear(const AffineMap& m) {
  const auto& A = m.linear;
  if (m.dom_dim == 1) return A[0][0];
  if (m.dom_dim == 2) return A[0][0] * A[1][1] - A[0][1] * A[1][0];
  return A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1]) -
         A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0]) +
         A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]);
}
}  // namespace detail

// Pullback of reference fields to the physical element K' = map(K).
//  H1:   f ∘ map^{-1}
//  Curl: A^{-t} (f ∘ map^{-1})          (covariant)
//  Div:  (1/det A) A (f ∘ map^{-1})     (contravariant)
//  L2:   (1/det A) (f ∘ map^{-1})
inline FieldFn pullback(PullbackKind kind, const AffineMap& map, const FieldFn& f) {
  const Rational det = detail::det_linear(map);
  if (is_zero(det)) throw SingularMap("pullback: singular map");
  const AffineMap inv = affine_inverse(map);
  FieldFn g = trace_restrict(f, inv);
  switch (kind) {
    case PullbackKind::H1:
      return g;
    case PullbackKind::L2:
      return Rational(1) / det * g;
    case PullbackKind::Curl: {
      FieldFn r;
      for (int i = 0; i < g.ncomp(); ++i) {
        RationalFunction s = RationalFunction::constant(g.dim(), Rational(0));
        for (int j = 0; j < g.ncomp(); ++j) s = s + inv.linear[j][i] * g.comps[j];  // (A^{-1})^t
        r.comps.push_back(std::move(s));
      }
      return r;
    }
    case PullbackKind::Div: {
      FieldFn r;
      for (int i = 0; i < g.ncomp(); ++i) {
        RationalFunction s = RationalFunction::constant(g.dim(), Rational(0));
        for (int j = 0; j < g.ncomp(); ++j) s = s + map.linear[i][j] * g.comps[j];
        r.comps.push_back(Rational(1) / det * s);
      }
      return r;
    }
  }
  return g;
}

}  // namespace derham

#endif
