// Assembly of the concrete commuting exact sequence families on every
// reference shape, and of the ambient polynomial sequences their cores come
// from.
//
// A SequenceSpec carries the enriched slots, the admissible core, the delta
// pieces, and the prescribed boundary data (per-face 2D family in 3D,
// per-edge H-degree in 2D/3D). Verification consumes exactly this structure.

#ifndef DERHAM_FAMILIES_HPP
#define DERHAM_FAMILIES_HPP

#include <memory>
#include <string>
#include <vector>

#include "derham/deltas.hpp"

namespace derham {

struct SequenceSpec {
  std::shared_ptr<const ReferenceElement> element;  // null for ambient sequences
  int dim = 1;
  int family = 1;
  int k = 0;
  std::string label;

  std::vector<FunctionSpace> slots;    // H,(E),(V),W
  std::vector<FunctionSpace> g_slots;  // the admissible core, same layout
  FunctionSpace delta_H, delta_E;      // empty when the family has none

  std::vector<Family2D> face_families;  // per face (3D only)
  int edge_H_degree = 1;                // H_1(e) = P_deg(e) on every edge (2D/3D)

  const FunctionSpace& H() const { return slots.front(); }
  const FunctionSpace& W() const { return slots.back(); }
  const FunctionSpace& E() const { return slots[1]; }
  const FunctionSpace& V() const { return slots[2]; }
};

namespace detail_fam {

inline FieldFn mono3(const Exps& e) {
  return FieldFn(RationalFunction(Polynomial::monomial(3, e)));
}

// ambient 2D cores S^{2d}_{1..4,k}
inline std::vector<FunctionSpace> ambient2d(const SpaceContext& ctx, int family, int k) {
  using namespace build;
  switch (family) {
    case 1: return {P(ctx, k + 2), bold(P(ctx, k + 1)), P(ctx, k)};
    case 2: return {P(ctx, k + 1), N2(ctx, k), P(ctx, k)};
    case 3: {
      FunctionSpace H = Q_box(ctx, {k, k});
      H.add(FieldFn(RationalFunction(Polynomial::monomial(2, {k + 1, 0, 0}))));
      H.add(FieldFn(RationalFunction(Polynomial::monomial(2, {0, k + 1, 0}))));
      FunctionSpace E = bold(Q_box(ctx, {k, k}));
      append(E, koszul_cross2(scalar_monos(ctx, {{k, k, 0}})));
      return {std::move(H), std::move(E), Q_box(ctx, {k, k})};
    }
    case 4:
      return {Q_box(ctx, {k + 1, k + 1}),
              stack_components({Q_box(ctx, {k, k + 1}), Q_box(ctx, {k + 1, k})}),
              Q_box(ctx, {k, k})};
  }
  throw UnknownFamily("ambient 2d family " + std::to_string(family));
}

// ambient 3D cores S^{3d}_{1..6,k}
inline std::vector<FunctionSpace> ambient3d(const SpaceContext& ctx, int family, int k) {
  using namespace build;
  switch (family) {
    case 1:
      return {P(ctx, k + 3), bold(P(ctx, k + 2)), bold(P(ctx, k + 1)), P(ctx, k)};
    case 2: {
      FunctionSpace E = bold(P(ctx, k));
      append(E, koszul_cross3(bold(P_tilde(ctx, k))));
      FunctionSpace V = bold(P(ctx, k));
      append(V, koszul_radial(P_tilde(ctx, k)));
      return {P(ctx, k + 1), std::move(E), std::move(V), P(ctx, k)};
    }
    case 3: {
      FunctionSpace H = Q_box(ctx, {k, k, k});
      H.add(mono3({k + 1, 0, 0}));
      H.add(mono3({0, k + 1, 0}));
      H.add(mono3({0, 0, k + 1}));
      FunctionSpace gens(ctx, 3);
      {
        FieldFn a = zero_field(3, 3);
        a.comps[0] = RationalFunction(Polynomial::monomial(3, {0, k, k}));
        gens.add(a);
        FieldFn b = zero_field(3, 3);
        b.comps[1] = RationalFunction(Polynomial::monomial(3, {k, 0, k}));
        gens.add(b);
        FieldFn c = zero_field(3, 3);
        c.comps[2] = RationalFunction(Polynomial::monomial(3, {k, k, 0}));
        gens.add(c);
      }
      FunctionSpace E = bold(Q_box(ctx, {k, k, k}));
      append(E, koszul_cross3(gens));
      FunctionSpace V = bold(Q_box(ctx, {k, k, k}));
      append(V, koszul_radial(scalar_monos(ctx, {{k, k, k}})));
      return {std::move(H), std::move(E), std::move(V), Q_box(ctx, {k, k, k})};
    }
    case 4:
      return {Q_box(ctx, {k + 1, k + 1, k + 1}),
              stack_components({Q_box(ctx, {k, k + 1, k + 1}), Q_box(ctx, {k + 1, k, k + 1}),
                                Q_box(ctx, {k + 1, k + 1, k})}),
              stack_components({Q_box(ctx, {k + 1, k, k}), Q_box(ctx, {k, k + 1, k}),
                                Q_box(ctx, {k, k, k + 1})}),
              Q_box(ctx, {k, k, k})};
    case 5: {
      FunctionSpace H = P_split(ctx, k, k);
      append(H, P_tilde(ctx, k + 1, {0, 1}));
      H.add(mono3({0, 0, k + 1}));
      FunctionSpace E = bold(P_split(ctx, k, k));
      const FunctionSpace ptk = P_tilde(ctx, k, {0, 1});
      const FunctionSpace ptk1 = P_tilde(ctx, k + 1, {0, 1});
      for (const auto& p : ptk.basis()) {  // (y,-x) ~P_k(x,y)
        FieldFn v = zero_field(3, 3);
        v.comps[0] = RationalFunction(Polynomial::monomial(3, {0, 1, 0})) * p.comps[0];
        v.comps[1] = Rational(-1) * (RationalFunction(Polynomial::monomial(3, {1, 0, 0})) * p.comps[0]);
        E.add(std::move(v));
      }
      for (const auto& p : ptk1.basis()) {  // ~P_{k+1}(x,y) z^k e_z
        FieldFn v = zero_field(3, 3);
        v.comps[2] = p.comps[0] * RationalFunction(Polynomial::monomial(3, {0, 0, k}));
        E.add(std::move(v));
      }
      FunctionSpace V = bold(P_split(ctx, k, k));
      for (const auto& p : ptk.basis()) {  // ~P_k(x,y) z^{k+1} e_z
        FieldFn v = zero_field(3, 3);
        v.comps[2] = p.comps[0] * RationalFunction(Polynomial::monomial(3, {0, 0, k + 1}));
        V.add(std::move(v));
      }
      return {std::move(H), std::move(E), std::move(V), P_split(ctx, k, k)};
    }
    case 6: {
      FunctionSpace Exy(ctx, 3), Vxy(ctx, 3);
      // N_k(x,y) ⊗ P_{k+1}(z) in the (x,y) components
      {
        SpaceContext c2{2, ElementKind::Square, {}};
        FunctionSpace N = N2(c2, k), RT = RT2(c2, k);
        auto lift = [&](const FunctionSpace& s2, FunctionSpace& out, int zdeg) {
          for (int c = 0; c <= zdeg; ++c)
            for (const auto& f : s2.basis()) {
              FieldFn v = zero_field(3, 3);
              for (int i = 0; i < 2; ++i)
                v.comps[i] = RationalFunction(f.comps[i].num().lifted(3)) *
                             RationalFunction(Polynomial::monomial(3, {0, 0, c}));
              out.add(std::move(v));
            }
        };
        lift(N, Exy, k + 1);
        lift(RT, Vxy, k);
      }
      FunctionSpace E = Exy;
      const FunctionSpace pz1 = P_split(ctx, k + 1, k);
      const FunctionSpace pz2 = P_split(ctx, k, k + 1);
      for (const auto& p : pz1.basis()) {
        FieldFn v = zero_field(3, 3);
        v.comps[2] = p.comps[0];
        E.add(std::move(v));
      }
      FunctionSpace V = Vxy;
      for (const auto& p : pz2.basis()) {
        FieldFn v = zero_field(3, 3);
        v.comps[2] = p.comps[0];
        V.add(std::move(v));
      }
      return {P_split(ctx, k + 1, k + 1), std::move(E), std::move(V), P_split(ctx, k, k)};
    }
  }
  throw UnknownFamily("ambient 3d family " + std::to_string(family));
}

inline FunctionSpace assemble_H(const FunctionSpace& core, const FunctionSpace& dH) {
  return dH.empty() ? core : direct_sum(core, dH);
}
inline FunctionSpace assemble_E(const FunctionSpace& core, const FunctionSpace& dH,
                                const FunctionSpace& dE) {
  FunctionSpace e = core;
  if (!dH.empty()) e = direct_sum(e, grad_space(dH));
  if (!dE.empty()) e = direct_sum(e, dE);
  return e;
}
inline FunctionSpace assemble_V(const FunctionSpace& core, const FunctionSpace& dE) {
  return dE.empty() ? core : direct_sum(core, curl_space(dE));
}

}  // namespace detail_fam

// Ambient (whole-space) admissible sequences; no element attached.
inline SequenceSpec build_ambient(int dim, int family, int k) {
  SequenceSpec s;
  s.dim = dim;
  s.family = family;
  s.k = k;
  s.label = "S" + std::to_string(family) + "_" + std::to_string(dim) + "d";
  SpaceContext ctx{dim, dim == 2 ? ElementKind::Square : ElementKind::Cube, {}};
  s.slots = dim == 2 ? detail_fam::ambient2d(ctx, family, k)
                     : detail_fam::ambient3d(ctx, family, k);
  s.g_slots = s.slots;
  return s;
}

// The concrete family grid: interval(1), triangle(1,2),
// square(1-4), polygon(1,2), tet(1,2), cube(1-4), prism(1-4), pyramid(1-4).
inline SequenceSpec build_sequence(std::shared_ptr<const ReferenceElement> K, int family,
                                   int k) {
  using detail_fam::ambient2d;
  using detail_fam::ambient3d;
  using detail_fam::assemble_E;
  using detail_fam::assemble_H;
  using detail_fam::assemble_V;

  SequenceSpec s;
  s.element = K;
  s.dim = K->dim;
  s.family = family;
  s.k = k;
  s.label = kind_name(K->kind) + " family " + std::to_string(family) + " k=" + std::to_string(k);
  const SpaceContext ctx = context_of(*K);
  auto fail = [&] {
    throw UnknownFamily("no family " + std::to_string(family) + " on " + kind_name(K->kind));
  };

  switch (K->kind) {
    case ElementKind::Interval: {
      if (family != 1) fail();
      s.slots = {build::P(ctx, k + 1), build::P(ctx, k)};
      s.g_slots = s.slots;
      s.edge_H_degree = k + 1;
      return s;
    }
    case ElementKind::Triangle: {
      if (family != 1 && family != 2) fail();
      s.g_slots = ambient2d(ctx, family, k);
      s.slots = s.g_slots;
      s.delta_H = FunctionSpace(ctx, 1);
      s.edge_H_degree = family == 1 ? k + 2 : k + 1;
      return s;
    }
    case ElementKind::Square: {
      if (family < 1 || family > 4) fail();
      s.g_slots = ambient2d(ctx, family, k);
      s.delta_H = family == 1   ? build_delta(DeltaId::H2I, k + 2, *K)
                  : family == 4 ? FunctionSpace(ctx, 1)
                                : build_delta(DeltaId::H2I, k + 1, *K);
      s.slots = {assemble_H(s.g_slots[0], s.delta_H),
                 assemble_E(s.g_slots[1], s.delta_H, FunctionSpace(ctx, 2)),
                 s.g_slots[2]};
      s.edge_H_degree = family == 1 ? k + 2 : k + 1;
      return s;
    }
    case ElementKind::Polygon: {
      if (family != 1 && family != 2) fail();
      s.g_slots = ambient2d(ctx, family, k);
      s.delta_H = build_delta(DeltaId::H2II, family == 1 ? k + 2 : k + 1, *K);
      s.slots = {assemble_H(s.g_slots[0], s.delta_H),
                 assemble_E(s.g_slots[1], s.delta_H, FunctionSpace(ctx, 2)),
                 s.g_slots[2]};
      s.edge_H_degree = family == 1 ? k + 2 : k + 1;
      return s;
    }
    case ElementKind::Tet: {
      if (family != 1 && family != 2) fail();
      s.g_slots = ambient3d(ctx, family, k);
      s.slots = s.g_slots;
      s.delta_H = FunctionSpace(ctx, 1);
      s.delta_E = FunctionSpace(ctx, 3);
      s.face_families.assign(4, Family2D{family == 1 ? Family2D::Tri1 : Family2D::Tri2,
                                         family == 1 ? k + 1 : k});
      s.edge_H_degree = family == 1 ? k + 3 : k + 1;
      return s;
    }
    case ElementKind::Cube: {
      if (family < 1 || family > 4) fail();
      static const int core_of[5] = {0, 1, 2, 3, 4};
      s.g_slots = ambient3d(ctx, core_of[family], k);
      switch (family) {
        case 1:
          s.delta_H = build_delta(DeltaId::H3I, k + 3, *K);
          s.delta_E = build_delta(DeltaId::E3I, k + 2, *K);
          break;
        case 2:
          s.delta_H = build_delta(DeltaId::H3I, k + 1, *K);
          s.delta_E = build_delta(DeltaId::E3I, k + 1, *K);
          break;
        case 3:
          s.delta_H = build_delta(DeltaId::H3II, k + 1, *K);
          s.delta_E = build_delta(DeltaId::E3II, k + 1, *K);
          break;
        case 4:
          s.delta_H = FunctionSpace(ctx, 1);
          s.delta_E = FunctionSpace(ctx, 3);
          break;
      }
      break;
    }
    case ElementKind::Prism: {
      if (family < 1 || family > 4) fail();
      static const int core_of[5] = {0, 1, 2, 5, 6};
      s.g_slots = ambient3d(ctx, core_of[family], k);
      switch (family) {
        case 1:
          s.delta_H = build_delta(DeltaId::H3III, k + 3, *K);
          s.delta_E = build_delta(DeltaId::E3III, k + 2, *K);
          break;
        case 2:
        case 3:
          s.delta_H = build_delta(DeltaId::H3III, k + 1, *K);
          s.delta_E = build_delta(DeltaId::E3III, k + 1, *K);
          break;
        case 4:
          s.delta_H = FunctionSpace(ctx, 1);
          s.delta_E = FunctionSpace(ctx, 3);
          break;
      }
      break;
    }
    case ElementKind::Pyramid: {
      if (family < 1 || family > 4) fail();
      s.g_slots = ambient3d(ctx, family == 1 ? 1 : 2, k);
      switch (family) {
        case 1:
          s.delta_H = build_delta(DeltaId::H3IV, k + 3, *K);
          s.delta_E = build_delta(DeltaId::E3IV, k + 2, *K);
          break;
        case 2:
          s.delta_H = build_delta(DeltaId::H3IV, k + 1, *K);
          s.delta_E = build_delta(DeltaId::E3IV, k + 1, *K);
          break;
        case 3:
          s.delta_H = build_delta(DeltaId::H3V, k + 1, *K);
          s.delta_E = build_delta(DeltaId::E3V, k + 1, *K);
          break;
        case 4:
          s.delta_H = build_delta(DeltaId::H3VI, k + 1, *K);
          s.delta_E = build_delta(DeltaId::E3V, k + 1, *K);
          break;
      }
      break;
    }
  }

  // shared 3D assembly
  s.slots = {assemble_H(s.g_slots[0], s.delta_H),
             assemble_E(s.g_slots[1], s.delta_H, s.delta_E),
             assemble_V(s.g_slots[2], s.delta_E), s.g_slots[3]};
  s.edge_H_degree = family == 1 ? k + 3 : k + 1;

  // prescribed face families
  const Family2D::Kind tri = family == 1 ? Family2D::Tri1 : Family2D::Tri2;
  const int fk = family == 1 ? k + 1 : k;
  Family2D::Kind sq = Family2D::Sq1;
  switch (family) {
    case 1: sq = Family2D::Sq1; break;
    case 2: sq = Family2D::Sq2; break;
    case 3: sq = K->kind == ElementKind::Prism ? Family2D::Sq3Tilde : Family2D::Sq3; break;
    case 4: sq = Family2D::Sq4; break;
  }
  for (int fi = 0; fi < K->num_faces(); ++fi) {
    const bool is_tri = K->faces[fi].loop.size() == 3;
    s.face_families.push_back(Family2D{is_tri ? tri : sq, fk});
  }
  return s;
}

inline SequenceSpec build_sequence(ElementKind kind, int family, int k) {
  auto K = std::make_shared<const ReferenceElement>(make_reference(kind));
  return build_sequence(std::move(K), family, k);
}

}  // namespace derham

#endif
