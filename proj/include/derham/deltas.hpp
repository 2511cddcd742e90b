// The delta-enrichment spaces of the concrete families, and the 2D family
// spaces they must trace into.
//
// Spanning sets are written out explicitly; low-index degeneracies
// (collapsing spans) are handled by rank, never by trusting the list. The
// pyramid H(curl) enrichments are stored as curl-generators corrected by
// exact gradients so that their tangential face traces land in the
// prescribed face spaces; the corrections are solved at construction time
// and change nothing about the curls.

#ifndef DERHAM_DELTAS_HPP
#define DERHAM_DELTAS_HPP

#include <string>
#include <vector>

#include "derham/spaces.hpp"

namespace derham {

enum class DeltaId { H2I, H2II, H3I, H3II, H3III, H3IV, H3V, H3VI, E3I, E3II, E3III, E3IV, E3V };

// ---- two-dimensional deltas ------------------------------------------------

// span{ x y^m, y x^m }
inline FunctionSpace delta_H2I(const SpaceContext& ctx, int m) {
  FunctionSpace s(ctx, 1);
  if (m < 1) return s;
  s.add(FieldFn(RationalFunction(Polynomial::monomial(2, {1, m, 0}))));
  s.add(FieldFn(RationalFunction(Polynomial::monomial(2, {m, 1, 0}))));
  return s;
}

// Polygon enrichment: per-vertex series xi_{i+1} lambda_{i+1}^a with
// saturating power windows.
inline FunctionSpace delta_H2II(const ReferenceElement& poly, int m) {
  if (poly.kind != ElementKind::Polygon)
    throw IncompatibleElement("delta H2II needs a polygon element");
  const int ne = poly.num_vertices();
  FunctionSpace s(context_of(poly), 1);
  if (m < 1) return s;
  auto add_series = [&](int vtx, int lo, int hi) {
    for (int a = lo; a <= hi; ++a) {
      RationalFunction f = poly.xi[vtx];
      for (int p = 0; p < a; ++p) f = f * RationalFunction(poly.lambda[vtx]);
      s.add(FieldFn(std::move(f)));
    }
  };
  for (int i = 3; i <= ne - 1; ++i) add_series(i, std::max(m + 2 - i, 0), m - 1);
  add_series(0, std::max(m + 3 - ne, 1), m - 1);
  return s;
}

// ---- two-dimensional family spaces ------------------------------------------

// The concrete 2D commuting sequences; `Sq3Tilde` is the modified third
// square sequence that appears as the prism's square-face trace (its H(curl)
// space is not symmetric in (s,t); t is the prism z-direction).
struct Family2D {
  enum Kind { Tri1, Tri2, Sq1, Sq2, Sq3, Sq3Tilde, Sq4, Poly1, Poly2 } kind;
  int k = 0;
};

namespace detail2d {

inline FieldFn mono2(const Exps& e) {
  return FieldFn(RationalFunction(Polynomial::monomial(2, e)));
}

}  // namespace detail2d

inline FunctionSpace family2d_H(const Family2D& f, const SpaceContext& ctx,
                                const ReferenceElement* poly = nullptr) {
  using build::P;
  using build::Q_box;
  const int k = f.k;
  switch (f.kind) {
    case Family2D::Tri1: return P(ctx, k + 2);
    case Family2D::Tri2: return P(ctx, k + 1);
    case Family2D::Sq1: return span_union(P(ctx, k + 2), delta_H2I(ctx, k + 2));
    case Family2D::Sq2: return span_union(P(ctx, k + 1), delta_H2I(ctx, k + 1));
    case Family2D::Sq3:
    case Family2D::Sq3Tilde: {
      FunctionSpace s = Q_box(ctx, {k, k});
      s.add(detail2d::mono2({k + 1, 0, 0}));
      s.add(detail2d::mono2({0, k + 1, 0}));
      append(s, delta_H2I(ctx, k + 1));
      return s;
    }
    case Family2D::Sq4: return Q_box(ctx, {k + 1, k + 1});
    case Family2D::Poly1: return span_union(P(ctx, k + 2), delta_H2II(*poly, k + 2));
    case Family2D::Poly2: return span_union(P(ctx, k + 1), delta_H2II(*poly, k + 1));
  }
  throw BadSpec("family2d_H");
}

inline FunctionSpace family2d_E(const Family2D& f, const SpaceContext& ctx,
                                const ReferenceElement* poly = nullptr) {
  using build::N2;
  using build::P;
  using build::Q_box;
  const int k = f.k;
  switch (f.kind) {
    case Family2D::Tri1: return build::bold(P(ctx, k + 1));
    case Family2D::Tri2: return N2(ctx, k);
    case Family2D::Sq1:
      return span_union(build::bold(P(ctx, k + 1)), grad_space(delta_H2I(ctx, k + 2)));
    case Family2D::Sq2: return span_union(N2(ctx, k), grad_space(delta_H2I(ctx, k + 1)));
    case Family2D::Sq3: {
      FunctionSpace s = build::bold(Q_box(ctx, {k, k}));
      append(s, build::koszul_cross2(build::scalar_monos(ctx, {{k, k, 0}})));
      append(s, grad_space(delta_H2I(ctx, k + 1)));
      return s;
    }
    case Family2D::Sq3Tilde: {
      FunctionSpace s = build::bold(Q_box(ctx, {k, k}));
      FieldFn extra = zero_field(2, 2);
      extra.comps[1] = RationalFunction(Polynomial::monomial(2, {k + 1, k, 0}));
      s.add(std::move(extra));
      append(s, grad_space(delta_H2I(ctx, k + 1)));
      return s;
    }
    case Family2D::Sq4:
      return build::stack_components(
          {Q_box(ctx, {k, k + 1}), Q_box(ctx, {k + 1, k})});
    case Family2D::Poly1:
      return span_union(build::bold(P(ctx, k + 1)), grad_space(delta_H2II(*poly, k + 2)));
    case Family2D::Poly2: return span_union(N2(ctx, k), grad_space(delta_H2II(*poly, k + 1)));
  }
  throw BadSpec("family2d_E");
}

inline FunctionSpace family2d_W(const Family2D& f, const SpaceContext& ctx) {
  const int k = f.k;
  switch (f.kind) {
    case Family2D::Tri1:
    case Family2D::Tri2:
    case Family2D::Poly1:
    case Family2D::Poly2:
    case Family2D::Sq1:
    case Family2D::Sq2: return build::P(ctx, k);
    case Family2D::Sq3:
    case Family2D::Sq3Tilde:
    case Family2D::Sq4: return build::Q_box(ctx, {k, k});
  }
  throw BadSpec("family2d_W");
}

// the delta part of a 2D family's H-slot ({0} where the family has none)
inline FunctionSpace family2d_deltaH(const Family2D& f, const SpaceContext& ctx,
                                     const ReferenceElement* poly = nullptr) {
  switch (f.kind) {
    case Family2D::Sq1: return delta_H2I(ctx, f.k + 2);
    case Family2D::Sq2:
    case Family2D::Sq3:
    case Family2D::Sq3Tilde: return delta_H2I(ctx, f.k + 1);
    case Family2D::Poly1: return delta_H2II(*poly, f.k + 2);
    case Family2D::Poly2: return delta_H2II(*poly, f.k + 1);
    default: return FunctionSpace(ctx, 1);
  }
}

// ---- three-dimensional deltas -----------------------------------------------

namespace detail3d {

inline FieldFn smono(const Exps& e) {
  return FieldFn(RationalFunction(Polynomial::monomial(3, e)));
}

// x^a y^b z^c / (1-z)^p on the pyramid
inline RationalFunction pyr_q(const ReferenceElement& pyr, const Exps& e, int p) {
  return RationalFunction::quotient(Polynomial::monomial(3, e), pyr.factors.at(0), p);
}

// f * grad(axis)
inline FieldFn times_grad(const RationalFunction& f, int axis) {
  FieldFn v = zero_field(3, 3);
  v.comps[axis] = f;
  return v;
}

// scalar gradients of rational functions
inline FieldFn grad_of(const RationalFunction& f) {
  FieldFn g;
  for (int a = 0; a < 3; ++a) g.comps.push_back(f.differentiate(a));
  return g;
}

// Solve for gradient corrections so that every tangential face trace of
// `raw` lands in the prescribed face spaces. Unknowns are the correction
// coefficients plus the membership coefficients per face target.
inline FieldFn correct_tangential(const ReferenceElement& K, const FieldFn& raw,
                                  const std::vector<RationalFunction>& pool,
                                  const std::vector<std::vector<FunctionSpace>>& face_targets) {
  std::vector<FieldFn> pool_grads;
  for (const auto& w : pool) pool_grads.push_back(grad_of(w));
  const std::size_t J = pool.size();

  struct Block {
    Coordinatization co;
    std::size_t lambda_offset;
    std::size_t nlambda;
  };
  std::vector<Block> blocks;
  std::size_t nlambda_total = 0;
  for (int fi = 0; fi < K.num_faces(); ++fi) {
    FaceFrame fr = K.face_frame(fi);
    SpaceContext fctx = face_context(K, fi);
    for (const auto& target : face_targets[fi]) {
      std::vector<FieldFn> fns;
      fns.push_back(trace_E_face(raw, fr));
      for (const auto& g : pool_grads) fns.push_back(trace_E_face(g, fr));
      for (const auto& t : target.basis()) fns.push_back(t);
      Block b;
      b.co = coordinatize(fns, fctx);
      b.nlambda = target.basis().size();
      b.lambda_offset = J + nlambda_total;
      nlambda_total += b.nlambda;
      blocks.push_back(std::move(b));
    }
  }
  // rows: one equation per (block, coordinate column)
  std::size_t nrows = 0;
  for (const auto& b : blocks) nrows += b.co.mat.cols();
  QMatrix A(nrows, J + nlambda_total);
  QVector rhs(nrows, Rational(0));
  std::size_t row = 0;
  for (const auto& b : blocks) {
    for (std::size_t col = 0; col < b.co.mat.cols(); ++col, ++row) {
      rhs[row] = b.co.mat(0, col);
      for (std::size_t j = 0; j < J; ++j) A(row, j) = b.co.mat(1 + j, col);
      for (std::size_t t = 0; t < b.nlambda; ++t)
        A(row, b.lambda_offset + t) = b.co.mat(1 + J + t, col);
    }
  }
  SolveResult sol = solve_linear(A, rhs);  // throws Inconsistent if no correction exists
  FieldFn out = raw;
  for (std::size_t j = 0; j < J; ++j)
    if (!is_zero(sol.particular[j])) out = out + (-sol.particular[j]) * pool_grads[j];
  return out;
}

// Face targets for the pyramid H(curl) enrichments: the Nedelec space
// N_{m-1} on the four triangles, and on the base a simultaneous membership
// requirement against the square families the enrichment serves.
inline std::vector<std::vector<FunctionSpace>> pyramid_E_targets(
    const ReferenceElement& K, int m, const std::vector<Family2D::Kind>& base_kinds) {
  std::vector<std::vector<FunctionSpace>> targets(K.num_faces());
  const int k = std::max(m - 1, 0);
  for (int fi = 0; fi < K.num_faces(); ++fi) {
    SpaceContext fctx = face_context(K, fi);
    if (K.face_frame(fi).domain == ElementKind::Triangle) {
      targets[fi].push_back(family2d_E({Family2D::Tri2, k}, fctx));
    } else {
      for (Family2D::Kind b : base_kinds) targets[fi].push_back(family2d_E({b, k}, fctx));
    }
  }
  return targets;
}

}  // namespace detail3d

inline FunctionSpace build_delta(DeltaId id, int m, const ReferenceElement& K) {
  using detail3d::pyr_q;
  using detail3d::smono;
  using detail3d::times_grad;
  const SpaceContext ctx = context_of(K);

  auto require_kind = [&](ElementKind k, const char* what) {
    if (K.kind != k) throw IncompatibleElement(std::string("delta ") + what + " needs " + kind_name(k));
  };

  switch (id) {
    case DeltaId::H2I:
      return delta_H2I(ctx, m);
    case DeltaId::H2II:
      return delta_H2II(K, m);

    case DeltaId::H3I: {
      FunctionSpace s(ctx, 1);
      if (m < 1) return s;
      s.add(smono({1, 1, m}));
      s.add(smono({m, 1, 1}));
      s.add(smono({1, m, 1}));
      const FunctionSpace pyz = build::P_tilde(ctx, m, {1, 2});
      const FunctionSpace pzx = build::P_tilde(ctx, m, {2, 0});
      const FunctionSpace pxy = build::P_tilde(ctx, m, {0, 1});
      for (const auto& e : pyz.basis())
        s.add(FieldFn(RationalFunction(Polynomial::monomial(3, {1, 0, 0})) * e.comps[0]));
      for (const auto& e : pzx.basis())
        s.add(FieldFn(RationalFunction(Polynomial::monomial(3, {0, 1, 0})) * e.comps[0]));
      for (const auto& e : pxy.basis())
        s.add(FieldFn(RationalFunction(Polynomial::monomial(3, {0, 0, 1})) * e.comps[0]));
      return s;
    }
    case DeltaId::H3II: {
      FunctionSpace s(ctx, 1);
      if (m < 1) return s;
      s.add(smono({1, 1, m}));
      s.add(smono({m, 1, 1}));
      s.add(smono({1, m, 1}));
      s.add(smono({1, m, 0}));
      s.add(smono({0, 1, m}));
      s.add(smono({m, 0, 1}));
      s.add(smono({1, 0, m}));
      s.add(smono({m, 1, 0}));
      s.add(smono({0, m, 1}));
      return s;
    }
    case DeltaId::H3III: {
      FunctionSpace s(ctx, 1);
      if (m < 1) return s;
      s.add(smono({1, 0, m}));
      s.add(smono({0, 1, m}));
      const FunctionSpace pxy = build::P_tilde(ctx, m, {0, 1});
      for (const auto& e : pxy.basis())
        s.add(FieldFn(RationalFunction(Polynomial::monomial(3, {0, 0, 1})) * e.comps[0]));
      return s;
    }
    case DeltaId::H3IV: {
      require_kind(ElementKind::Pyramid, "H3IV");
      FunctionSpace s(ctx, 1);
      if (m < 1) return s;
      s.add(FieldFn(pyr_q(K, {1, m, 0}, 1)));
      s.add(FieldFn(pyr_q(K, {m, 1, 0}, 1)));
      for (int a = 0; a <= m - 2; ++a) {
        s.add(FieldFn(pyr_q(K, {1 + a, 1, 1 + (m - 2 - a)}, 1)));  // xyz/(1-z) ~P_{m-2}(x,z)
        s.add(FieldFn(pyr_q(K, {1, 1 + a, 1 + (m - 2 - a)}, 1)));  // xyz/(1-z) ~P_{m-2}(y,z)
      }
      return s;
    }
    case DeltaId::H3V: {
      FunctionSpace s = build_delta(DeltaId::H3IV, m, K);
      auto add_ab = [&](int a, int b) {
        s.add(FieldFn(pyr_q(K, {a, b, 0}, std::min(a, b))));
      };
      add_ab(1, m);
      add_ab(m, 1);
      for (int a = 1; a <= m - 1; ++a)
        for (int b = 1; b <= m - 1; ++b)
          if (a + b >= m + 1) add_ab(a, b);
      return s;
    }
    case DeltaId::H3VI: {
      FunctionSpace s = build_delta(DeltaId::H3IV, m, K);
      for (int a = 1; a <= m; ++a)
        for (int b = 1; b <= m; ++b)
          if (a + b >= m + 1) s.add(FieldFn(pyr_q(K, {a, b, 0}, std::min(a, b))));
      return s;
    }

    case DeltaId::E3I: {
      FunctionSpace s(ctx, 3);
      if (m < 1) return s;
      // x ~P_{m-1}(y,z) (y grad z - z grad y) and the two cyclic analogues
      const int X = 0, Y = 1, Z = 2;
      auto add_block = [&](int i, int j, int l) {
        const FunctionSpace pt = build::P_tilde(ctx, m - 1, {j, l});
        for (const auto& p : pt.basis()) {
          Exps ei{0, 0, 0};
          ei[i] = 1;
          RationalFunction xi(Polynomial::monomial(3, ei));
          Exps ej{0, 0, 0};
          ej[j] = 1;
          Exps el{0, 0, 0};
          el[l] = 1;
          FieldFn v = zero_field(3, 3);
          v.comps[l] = xi * p.comps[0] * RationalFunction(Polynomial::monomial(3, ej));
          v.comps[j] =
              Rational(-1) * (xi * p.comps[0] * RationalFunction(Polynomial::monomial(3, el)));
          s.add(std::move(v));
        }
      };
      add_block(X, Y, Z);
      add_block(Y, Z, X);
      add_block(Z, X, Y);
      return s;
    }
    case DeltaId::E3II: {
      FunctionSpace s(ctx, 3);
      if (m < 1) return s;
      const int X = 0, Y = 1, Z = 2;
      auto unit = [&](int a) {
        Exps e{0, 0, 0};
        e[a] = 1;
        return RationalFunction(Polynomial::monomial(3, e));
      };
      auto pw = [&](int a, int p) {
        Exps e{0, 0, 0};
        e[a] = p;
        return RationalFunction(Polynomial::monomial(3, e));
      };
      auto add_first = [&](int i, int j, int l) {  // x (y^m grad z - z^m grad y)
        FieldFn v = zero_field(3, 3);
        v.comps[l] = unit(i) * pw(j, m);
        v.comps[j] = Rational(-1) * (unit(i) * pw(l, m));
        s.add(std::move(v));
      };
      auto add_second = [&](int i, int j, int l) {  // x y^{m-1} z^{m-1} (y grad z - z grad y)
        RationalFunction c = unit(i) * pw(j, m - 1) * pw(l, m - 1);
        FieldFn v = zero_field(3, 3);
        v.comps[l] = c * unit(j);
        v.comps[j] = Rational(-1) * (c * unit(l));
        s.add(std::move(v));
      };
      add_first(X, Y, Z);
      add_first(Y, Z, X);
      add_first(Z, X, Y);
      add_second(X, Y, Z);
      add_second(Y, Z, X);
      add_second(Z, X, Y);
      return s;
    }
    case DeltaId::E3III: {
      FunctionSpace s(ctx, 3);
      if (m < 1) return s;
      // omega = x grad y - y grad x
      auto add_omega_times = [&](const RationalFunction& c) {
        FieldFn v = zero_field(3, 3);
        v.comps[1] = c * RationalFunction(Polynomial::monomial(3, {1, 0, 0}));
        v.comps[0] = Rational(-1) * (c * RationalFunction(Polynomial::monomial(3, {0, 1, 0})));
        s.add(std::move(v));
      };
      add_omega_times(RationalFunction(Polynomial::monomial(3, {0, 0, m})));
      const FunctionSpace pxy = build::P_tilde(ctx, m - 1, {0, 1});
      for (const auto& p : pxy.basis())
        add_omega_times(RationalFunction(Polynomial::monomial(3, {0, 0, 1})) * p.comps[0]);
      return s;
    }
    case DeltaId::E3IV: {
      require_kind(ElementKind::Pyramid, "E3IV");
      FunctionSpace s(ctx, 3);
      if (m < 1) return s;
      auto targets = detail3d::pyramid_E_targets(
          K, m, {Family2D::Sq2, Family2D::Sq3, Family2D::Sq4});
      auto corrected = [&](const FieldFn& raw, const std::vector<RationalFunction>& pool) {
        return detail3d::correct_tangential(K, raw, pool, targets);
      };
      {
        std::vector<RationalFunction> pool;
        for (int nu = 0; nu <= 2; ++nu) pool.push_back(pyr_q(K, {1, m, 1}, nu));
        s.add(corrected(times_grad(pyr_q(K, {1, m, 0}, 1), 2), pool));
      }
      {
        std::vector<RationalFunction> pool;
        for (int nu = 0; nu <= 2; ++nu) pool.push_back(pyr_q(K, {m, 1, 1}, nu));
        s.add(corrected(times_grad(pyr_q(K, {m, 1, 0}, 1), 2), pool));
      }
      if (m >= 2) {
        std::vector<RationalFunction> pool;
        for (int nu = 0; nu <= 2; ++nu) pool.push_back(pyr_q(K, {2, 1, 1}, nu));
        s.add(corrected(times_grad(pyr_q(K, {1, 1, 1}, 1), 0), pool));
      }
      return s;
    }
    case DeltaId::E3V: {
      require_kind(ElementKind::Pyramid, "E3V");
      FunctionSpace s = build_delta(DeltaId::E3IV, m, K);
      auto targets = detail3d::pyramid_E_targets(K, m, {Family2D::Sq3, Family2D::Sq4});
      for (int a = 1; a <= m - 1; ++a)
        for (int b = 1; b <= m - 1; ++b) {
          if (a + b < m) continue;
          const int mu = std::min(a, b);
          std::vector<RationalFunction> pool;
          for (int nu = 0; nu <= mu + 1; ++nu) pool.push_back(pyr_q(K, {a + 1, b + 1, 0}, nu));
          for (int nu = 0; nu <= mu + 1; ++nu) pool.push_back(pyr_q(K, {a + 1, b + 1, 1}, nu));
          s.add(detail3d::correct_tangential(K, times_grad(pyr_q(K, {a, b + 1, 0}, mu), 0), pool,
                                             targets));
        }
      return s;
    }
  }
  throw BadSpec("build_delta: unknown id");
}

}  // namespace derham

#endif
