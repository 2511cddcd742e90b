// Function spaces: spans of scalar/vector rational functions with rank-based
// dimensions, plus constructors for every named polynomial space family.
//
// A FunctionSpace never trusts its spanning list: dimension, containment and
// equality questions all go through coordinatize() -> exact rank. Degenerate
// sets (the low-index delta spans) are harmless.

#ifndef DERHAM_SPACES_HPP
#define DERHAM_SPACES_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "derham/calculus.hpp"

namespace derham {

// Where functions live: variable count, a reference shape for integration,
// and the registered denominator factors.
struct SpaceContext {
  int dim = 1;
  ElementKind domain = ElementKind::Interval;
  std::vector<FactorPtr> factors;

  bool factor_registered(const FactorPtr& f) const {
    for (const auto& g : factors)
      if (same_factor(f, g)) return true;
    return false;
  }
};

inline SpaceContext context_of(const ReferenceElement& K) {
  return SpaceContext{K.dim, K.kind, K.factors};
}
inline SpaceContext face_context(const ReferenceElement& K, int fi) {
  FaceFrame fr = K.face_frame(fi);
  return SpaceContext{2, fr.domain, K.face_factors(fi)};
}
inline SpaceContext edge_context(const ReferenceElement& K, int e) {
  return SpaceContext{1, ElementKind::Interval, K.edge_factors(e)};
}

// Coordinate matrix of a list of fields over the union of occurring
// monomials, after clearing the least common denominator. One row per field,
// component blocks side by side.
struct Coordinatization {
  QMatrix mat;
  std::vector<std::pair<int, Exps>> columns;  // (component, monomial)
};

inline Coordinatization coordinatize(const std::vector<FieldFn>& fns, const SpaceContext& ctx) {
  Coordinatization co;
  if (fns.empty()) return co;
  const int ncomp = fns[0].ncomp();
  // least common denominator over the registered factors
  std::vector<std::pair<FactorPtr, int>> lcd;
  for (const auto& f : fns)
    for (const auto& c : f.comps)
      for (const auto& [fac, pow] : c.den()) {
        if (!ctx.factor_registered(fac))
          throw UnsupportedFactor("coordinatize: unregistered denominator factor " + fac->name);
        bool found = false;
        for (auto& [g, q] : lcd)
          if (same_factor(fac, g)) {
            q = std::max(q, pow);
            found = true;
          }
        if (!found) lcd.emplace_back(fac, pow);
      }
  // clear denominators and collect monomial columns
  std::map<std::pair<int, Exps>, std::size_t> col_of;
  std::vector<std::vector<std::pair<std::pair<int, Exps>, Rational>>> rows;
  for (const auto& f : fns) {
    std::vector<std::pair<std::pair<int, Exps>, Rational>> row;
    for (int ci = 0; ci < ncomp; ++ci) {
      Polynomial cleared = f.comps[ci].num();
      for (const auto& [fac, pow] : lcd) {
        const int missing = pow - f.comps[ci].power_of(fac);
        if (missing > 0) cleared = cleared * fac->poly.pow(missing);
      }
      for (const auto& [e, c] : cleared.terms()) {
        auto key = std::make_pair(ci, e);
        col_of.try_emplace(key, col_of.size());
        row.emplace_back(key, c);
      }
    }
    rows.push_back(std::move(row));
  }
  co.mat = QMatrix(rows.size(), col_of.size());
  co.columns.resize(col_of.size());
  for (const auto& [key, idx] : col_of) co.columns[idx] = key;
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (const auto& [key, c] : rows[r]) co.mat(r, col_of[key]) += c;
  return co;
}

class FunctionSpace {
 public:
  FunctionSpace() = default;
  FunctionSpace(SpaceContext ctx, int ncomp, std::vector<FieldFn> basis = {})
      : ctx_(std::move(ctx)), ncomp_(ncomp), basis_(std::move(basis)) {}

  const SpaceContext& context() const { return ctx_; }
  int ncomp() const { return ncomp_; }
  const std::vector<FieldFn>& basis() const { return basis_; }
  bool empty() const { return basis_.empty(); }

  void add(FieldFn f) {
    basis_.push_back(std::move(f));
    dim_.reset();
  }

  std::size_t dim() const {
    if (!dim_) dim_ = basis_.empty() ? 0 : mat_rank(coordinatize(basis_, ctx_).mat);
    return *dim_;
  }

 private:
  SpaceContext ctx_;
  int ncomp_ = 1;
  std::vector<FieldFn> basis_;
  mutable std::optional<std::size_t> dim_;
};

inline std::size_t span_dim(const FunctionSpace& s) { return s.dim(); }

// rank of the joint span of a space and extra fields
inline std::size_t joint_rank(const FunctionSpace& s, const std::vector<FieldFn>& extra) {
  std::vector<FieldFn> all = s.basis();
  all.insert(all.end(), extra.begin(), extra.end());
  if (all.empty()) return 0;
  return mat_rank(coordinatize(all, s.context()).mat);
}

inline bool contains(const FunctionSpace& s, const FieldFn& f) {
  if (f.is_zero()) return true;
  return joint_rank(s, {f}) == s.dim();
}

inline bool contains_space(const FunctionSpace& outer, const FunctionSpace& inner) {
  if (inner.empty()) return true;
  return joint_rank(outer, inner.basis()) == outer.dim();
}

// Space equality as double containment collapsed through ranks.
inline bool spaces_equal(const FunctionSpace& a, const FunctionSpace& b) {
  return a.dim() == b.dim() && joint_rank(a, b.basis()) == a.dim();
}

// Concatenated basis; rejects a nontrivial overlap between the summands.
inline FunctionSpace direct_sum(const FunctionSpace& a, const FunctionSpace& b) {
  FunctionSpace r(a.context(), a.ncomp(), a.basis());
  for (const auto& f : b.basis()) r.add(f);
  if (r.dim() != a.dim() + b.dim())
    throw OverlapNotTrivial("direct_sum: summands intersect nontrivially");
  return r;
}

inline FunctionSpace span_union(const FunctionSpace& a, const FunctionSpace& b) {
  FunctionSpace r(a.context(), a.ncomp(), a.basis());
  for (const auto& f : b.basis()) r.add(f);
  return r;
}

inline void append(FunctionSpace& dst, const FunctionSpace& src) {
  for (const auto& f : src.basis()) dst.add(f);
}

// maximal independent subset of the spanning list (a true basis)
inline FunctionSpace reduced(const FunctionSpace& s) {
  if (s.empty()) return s;
  Coordinatization co = coordinatize(s.basis(), s.context());
  QMatrix t = co.mat.transposed();
  std::vector<std::size_t> pivots = detail::echelonize(t);
  std::vector<FieldFn> keep;
  for (std::size_t r : pivots) keep.push_back(s.basis()[r]);
  return FunctionSpace(s.context(), s.ncomp(), std::move(keep));
}

// Subspace spanned by coefficient combinations of the basis.
inline FunctionSpace combine(const FunctionSpace& s, const std::vector<QVector>& coeffs) {
  FunctionSpace r(s.context(), s.ncomp());
  for (const auto& c : coeffs) {
    FieldFn acc = zero_field(s.context().dim, s.ncomp());
    for (std::size_t j = 0; j < c.size(); ++j)
      if (!is_zero(c[j])) acc = acc + c[j] * s.basis()[j];
    r.add(std::move(acc));
  }
  return r;
}

// Image of a space under a function->function operator, in a target context.
template <typename Op>
inline FunctionSpace image_space(const FunctionSpace& s, const SpaceContext& target_ctx,
                                 int target_ncomp, Op&& op) {
  FunctionSpace r(target_ctx, target_ncomp);
  for (const auto& f : s.basis()) r.add(op(f));
  return r;
}

// ---- polynomial space constructors ----------------------------------------

namespace build {

inline std::vector<Exps> monomials_up_to(int dim, int degree) {
  std::vector<Exps> out;
  for (int a = 0; a <= degree; ++a)
    for (int b = 0; a + b <= degree; ++b) {
      if (dim == 1 && b > 0) break;
      for (int c = 0; a + b + c <= degree; ++c) {
        if (dim <= 2 && c > 0) break;
        out.push_back({a, b, c});
      }
    }
  return out;
}

inline FunctionSpace scalar_space(const SpaceContext& ctx, const std::vector<Exps>& monos) {
  FunctionSpace s(ctx, 1);
  for (const auto& e : monos) s.add(FieldFn(RationalFunction(Polynomial::monomial(ctx.dim, e))));
  return s;
}

// P_p: total degree at most p (empty space when p < 0)
inline FunctionSpace P(const SpaceContext& ctx, int p) {
  if (p < 0) return FunctionSpace(ctx, 1);
  return scalar_space(ctx, monomials_up_to(ctx.dim, p));
}

// homogeneous total degree exactly p, in a chosen subset of axes
inline FunctionSpace P_tilde(const SpaceContext& ctx, int p, std::vector<int> axes = {}) {
  FunctionSpace s(ctx, 1);
  if (p < 0) return s;
  if (axes.empty())
    for (int a = 0; a < ctx.dim; ++a) axes.push_back(a);
  std::vector<Exps> monos;
  if (axes.size() == 1) {
    Exps e{0, 0, 0};
    e[axes[0]] = p;
    monos.push_back(e);
  } else if (axes.size() == 2) {
    for (int i = 0; i <= p; ++i) {
      Exps e{0, 0, 0};
      e[axes[0]] = i;
      e[axes[1]] = p - i;
      monos.push_back(e);
    }
  } else {
    for (int i = 0; i <= p; ++i)
      for (int j = 0; i + j <= p; ++j) monos.push_back({i, j, p - i - j});
  }
  return scalar_space(ctx, monos);
}

// per-axis degree caps: Q_p and the boxes P_{a,b,c}
inline FunctionSpace Q_box(const SpaceContext& ctx, const std::vector<int>& caps) {
  FunctionSpace s(ctx, 1);
  for (int c : caps)
    if (c < 0) return s;
  std::vector<Exps> monos;
  const int cx = caps[0], cy = ctx.dim >= 2 ? caps[1] : 0, cz = ctx.dim >= 3 ? caps[2] : 0;
  for (int a = 0; a <= cx; ++a)
    for (int b = 0; b <= cy; ++b)
      for (int c = 0; c <= cz; ++c) monos.push_back({a, b, c});
  return scalar_space(ctx, monos);
}

// P_{p|q}: degree at most p in (x,y), at most q in z
inline FunctionSpace P_split(const SpaceContext& ctx, int pxy, int pz) {
  FunctionSpace s(ctx, 1);
  if (pxy < 0 || pz < 0) return s;
  std::vector<Exps> monos;
  for (int a = 0; a <= pxy; ++a)
    for (int b = 0; a + b <= pxy; ++b)
      for (int c = 0; c <= pz; ++c) monos.push_back({a, b, c});
  return scalar_space(ctx, monos);
}

// vector space with a given scalar space in every component
inline FunctionSpace bold(const FunctionSpace& scalar) {
  const int d = scalar.context().dim;
  FunctionSpace s(scalar.context(), d);
  for (int comp = 0; comp < d; ++comp)
    for (const auto& f : scalar.basis()) {
      FieldFn v = zero_field(d, d);
      v.comps[comp] = f.comps[0];
      s.add(std::move(v));
    }
  return s;
}

// component-wise given scalar spaces (e.g. the Nedelec boxes)
inline FunctionSpace stack_components(const std::vector<FunctionSpace>& comps) {
  const int d = static_cast<int>(comps.size());
  FunctionSpace s(comps[0].context(), d);
  for (int comp = 0; comp < d; ++comp)
    for (const auto& f : comps[comp].basis()) {
      FieldFn v = zero_field(comps[0].context().dim, d);
      v.comps[comp] = f.comps[0];
      s.add(std::move(v));
    }
  return s;
}

// 2D Koszul rotation: x × p = (y p, -x p)
inline FunctionSpace koszul_cross2(const FunctionSpace& scalar) {
  FunctionSpace s(scalar.context(), 2);
  const Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
  for (const auto& f : scalar.basis()) {
    FieldFn v;
    v.comps.push_back(RationalFunction(y) * f.comps[0]);
    v.comps.push_back(Rational(-1) * (RationalFunction(x) * f.comps[0]));
    s.add(std::move(v));
  }
  return s;
}

// 3D Koszul cross: x × v for vector generators v
inline FunctionSpace koszul_cross3(const FunctionSpace& vec) {
  FunctionSpace s(vec.context(), 3);
  const RationalFunction x{Polynomial::variable(3, 0)}, y{Polynomial::variable(3, 1)},
      z{Polynomial::variable(3, 2)};
  for (const auto& f : vec.basis()) {
    FieldFn v;
    v.comps.push_back(y * f.comps[2] - z * f.comps[1]);
    v.comps.push_back(z * f.comps[0] - x * f.comps[2]);
    v.comps.push_back(x * f.comps[1] - y * f.comps[0]);
    s.add(std::move(v));
  }
  return s;
}

// radial Koszul field: x p
inline FunctionSpace koszul_radial(const FunctionSpace& scalar) {
  const int d = scalar.context().dim;
  FunctionSpace s(scalar.context(), d);
  for (const auto& f : scalar.basis()) {
    FieldFn v;
    for (int a = 0; a < d; ++a)
      v.comps.push_back(RationalFunction(Polynomial::variable(d, a)) * f.comps[0]);
    s.add(std::move(v));
  }
  return s;
}

// 2D Nedelec / Raviart-Thomas of the first kind
inline FunctionSpace N2(const SpaceContext& ctx, int k) {
  FunctionSpace s = bold(P(ctx, k));
  const FunctionSpace rot = koszul_cross2(P_tilde(ctx, k));
  for (const auto& f : rot.basis()) s.add(f);
  return s;
}
inline FunctionSpace RT2(const SpaceContext& ctx, int k) {
  FunctionSpace s = bold(P(ctx, k));
  const FunctionSpace rad = koszul_radial(P_tilde(ctx, k));
  for (const auto& f : rad.basis()) s.add(f);
  return s;
}

// span of explicit monomial lists
inline FunctionSpace scalar_monos(const SpaceContext& ctx, const std::vector<Exps>& monos) {
  return scalar_space(ctx, monos);
}

// product of a scalar space by a fixed scalar function
inline FunctionSpace times(const FunctionSpace& s, const RationalFunction& g) {
  FunctionSpace r(s.context(), s.ncomp());
  for (const auto& f : s.basis()) {
    FieldFn v;
    for (const auto& c : f.comps) v.comps.push_back(c * g);
    r.add(std::move(v));
  }
  return r;
}

// tensor with P_q(z): every basis function times z^0..z^q
inline FunctionSpace tensor_Pz(const FunctionSpace& s, int q) {
  FunctionSpace r(s.context(), s.ncomp());
  const Polynomial z = Polynomial::variable(s.context().dim, s.context().dim - 1);
  for (int c = 0; c <= q; ++c) {
    const RationalFunction zc{z.pow(c)};
    const FunctionSpace sz = times(s, zc);
    for (const auto& f : sz.basis()) r.add(f);
  }
  return r;
}

}  // namespace build

// gradient / curl / div images as spaces
inline FunctionSpace grad_space(const FunctionSpace& s) {
  return image_space(s, s.context(), s.context().dim,
                     [](const FieldFn& f) { return diff(DiffOpKind::Grad, f); });
}
inline FunctionSpace curl_space(const FunctionSpace& s) {
  if (s.context().dim == 2)
    return image_space(s, s.context(), 1,
                       [](const FieldFn& f) { return diff(DiffOpKind::Curl2D, f); });
  return image_space(s, s.context(), 3,
                     [](const FieldFn& f) { return diff(DiffOpKind::Curl3D, f); });
}
inline FunctionSpace div_space(const FunctionSpace& s) {
  return image_space(s, s.context(), 1,
                     [](const FieldFn& f) { return diff(DiffOpKind::Div, f); });
}

}  // namespace derham

#endif
