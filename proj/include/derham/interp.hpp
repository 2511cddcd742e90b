// Harmonic interpolators Pi_H, Pi_E, Pi_V, Pi_W and the commuting-diagram
// checker.
//
// Constraint rows: vertex values,
// edge/face moments against bubble-derived test spaces, interior moments.
// Test spaces are computed from the sequence itself (bubbles, kernels and
// curl/grad images), so the interpolator adapts to every family. All inner
// products are exact; face vector pairings carry the inverse Gram matrix of
// the rational face frame, edge pairings the direction weight, both constant
// per entity and therefore solution-neutral.

#ifndef DERHAM_INTERP_HPP
#define DERHAM_INTERP_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "derham/verify.hpp"

namespace derham {

enum class InterpKind { H, E, V, W };

namespace detail_interp {

// scalar value of u at a vertex, evaluated through an adjacent edge trace so
// that removable pyramid poles cancel first
inline Rational vertex_value(const FieldFn& u, const ReferenceElement& K, int v) {
  if (K.dim == 1) return u.comps[0].eval(K.vertices[v]);
  for (int e = 0; e < K.num_edges(); ++e)
    if (K.edges[e].a == v || K.edges[e].b == v) {
      EdgeFrame fr = K.edge_frame(e);
      RationalFunction tr = u.comps[0].substitute_affine(fr.chart);
      return tr.eval({Rational(K.edges[e].a == v ? 0 : 1)});
    }
  throw BadSpec("vertex_value: vertex not on any edge");
}

// inverse Gram matrix of a face frame
inline std::vector<std::vector<Rational>> inv_gram(const FaceFrame& fr) {
  const Rational a = detail::dot(fr.t1, fr.t1), b = detail::dot(fr.t1, fr.t2),
                 d = detail::dot(fr.t2, fr.t2);
  const Rational det = a * d - b * b;
  return {{d / det, -b / det}, {-b / det, a / det}};
}

// mean-zero subspace of a 1D space on [0,1]
inline FunctionSpace mean_zero_1d(const FunctionSpace& s) {
  if (s.empty()) return s;
  QMatrix means(s.basis().size(), 1);
  for (std::size_t i = 0; i < s.basis().size(); ++i)
    means(i, 0) = integrate_ref(ElementKind::Interval, s.basis()[i].comps[0]);
  return reduced(combine(s, mat_nullspace(means.transposed())));
}

// mean-zero subspace of a scalar face space
inline FunctionSpace mean_zero_face(const FunctionSpace& s, ElementKind domain) {
  if (s.empty()) return s;
  QMatrix means(s.basis().size(), 1);
  for (std::size_t i = 0; i < s.basis().size(); ++i)
    means(i, 0) = integrate_ref(domain, s.basis()[i].comps[0]);
  return reduced(combine(s, mat_nullspace(means.transposed())));
}

}  // namespace detail_interp

// One interpolation constraint: a functional u -> Q.
class InterpolationSystem {
 public:
  using Functional = std::function<Rational(const FieldFn&)>;

  InterpKind kind;
  std::shared_ptr<const ReferenceElement> element;
  FunctionSpace slot;
  std::vector<Functional> rows;
  QMatrix matrix;  // rows x slot basis

  // Applies every constraint to u and solves for the slot coefficients.
  FieldFn interpolate(const FieldFn& u) const {
    QVector rhs(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rhs[i] = rows[i](u);
    SolveResult sol = solve_linear(matrix, rhs);
    if (sol.nullity != 0) throw SingularSystem("interpolation system is underdetermined");
    FieldFn out = zero_field(slot.context().dim, slot.ncomp());
    for (std::size_t j = 0; j < sol.particular.size(); ++j)
      if (!is_zero(sol.particular[j])) out = out + sol.particular[j] * slot.basis()[j];
    return out;
  }
};

namespace detail_interp {

inline void finalize(InterpolationSystem& sys) {
  if (sys.rows.size() != sys.slot.basis().size()) {
    // the slot spanning list may be redundant; constraints must match dim
    if (sys.rows.size() != sys.slot.dim())
      throw SingularSystem("constraint count " + std::to_string(sys.rows.size()) +
                           " does not match slot dimension " + std::to_string(sys.slot.dim()));
  }
  sys.matrix = QMatrix(sys.rows.size(), sys.slot.basis().size());
  for (std::size_t i = 0; i < sys.rows.size(); ++i)
    for (std::size_t j = 0; j < sys.slot.basis().size(); ++j)
      sys.matrix(i, j) = sys.rows[i](sys.slot.basis()[j]);
  if (mat_rank(sys.matrix) != sys.slot.dim())
    throw SingularSystem("interpolation matrix is singular");
}

}  // namespace detail_interp

// Builds the harmonic interpolation system of the given kind for a
// (compatible) sequence.
inline InterpolationSystem build_system(InterpKind kind, const SequenceSpec& seq) {
  using detail_interp::inv_gram;
  using detail_interp::mean_zero_1d;
  using detail_interp::mean_zero_face;
  using detail_interp::vertex_value;

  const auto K = seq.element;
  const int d = seq.dim;
  InterpolationSystem sys;
  sys.kind = kind;
  sys.element = K;

  auto edge_E_row = [K](int e, RationalFunction test) {
    EdgeFrame fr = K->edge_frame(e);
    return [K, fr, test = std::move(test)](const FieldFn& u) {
      FieldFn tr = u.scalar() ? trace_restrict(u, fr.chart) : trace_E_edge(u, fr);
      return integrate_ref(ElementKind::Interval, tr.comps[0] * test);
    };
  };
  auto edge_grad_row = [K](int e, RationalFunction test) {
    EdgeFrame fr = K->edge_frame(e);
    return [fr, test = std::move(test)](const FieldFn& u) {
      RationalFunction dtr = u.comps[0].substitute_affine(fr.chart).differentiate(0);
      return integrate_ref(ElementKind::Interval, dtr * test);
    };
  };

  switch (kind) {
    case InterpKind::H: {
      sys.slot = reduced(seq.slots[0]);
      // vertex values
      for (int v = 0; v < K->num_vertices(); ++v)
        sys.rows.push_back([K, v](const FieldFn& u) { return vertex_value(u, *K, v); });
      if (d == 1) {
        FunctionSpace Hb = bubble(seq.slots[0], 'H', *K);
        for (const auto& b : Hb.basis()) {
          RationalFunction test = b.comps[0].differentiate(0);
          sys.rows.push_back([test](const FieldFn& u) {
            return integrate_ref(ElementKind::Interval, u.comps[0].differentiate(0) * test);
          });
        }
        break;
      }
      // edge moments against grad of the edge-trace bubbles
      for (int e = 0; e < K->num_edges(); ++e) {
        FunctionSpace H1 = trace_space_H_edge(seq.slots[0], *K, e);
        const FunctionSpace H1b = detail_verify::bubble_1d(H1);
        for (const auto& b : H1b.basis())
          sys.rows.push_back(edge_grad_row(e, b.comps[0].differentiate(0)));
      }
      // face moments against grad of the face-trace bubbles
      if (d == 3) {
        for (int fi = 0; fi < K->num_faces(); ++fi) {
          FaceFrame fr = K->face_frame(fi);
          auto G = inv_gram(fr);
          auto face_dom = make_reference(fr.domain);
          FunctionSpace H2 = trace_space_H_face(seq.slots[0], *K, fi);
          const FunctionSpace H2b = bubble(H2, 'H', face_dom);
          for (const auto& b : H2b.basis()) {
            FieldFn test = diff(DiffOpKind::Grad, b);
            sys.rows.push_back([K, fr, G, test, dom = fr.domain](const FieldFn& u) {
              FieldFn tr = trace_restrict(u, fr.chart);
              return inner_product(dom, diff(DiffOpKind::Grad, tr), test, &G);
            });
          }
        }
      }
      // interior moments against grad of the H-bubbles
      {
        FunctionSpace Hb = bubble(seq.slots[0], 'H', *K);
        for (const auto& b : Hb.basis()) {
          FieldFn test = diff(DiffOpKind::Grad, b);
          sys.rows.push_back([K, test](const FieldFn& u) {
            return inner_product(K->kind, diff(DiffOpKind::Grad, u), test);
          });
        }
      }
      break;
    }

    case InterpKind::E: {
      sys.slot = reduced(seq.slots[1]);
      // edge moments against mean-zero edge W plus the constants
      for (int e = 0; e < K->num_edges(); ++e) {
        FunctionSpace W1 = trace_space_E_edge(seq.slots[1], *K, e);
        sys.rows.push_back(edge_E_row(e, RationalFunction::constant(1, Rational(1))));
        const FunctionSpace W1z = mean_zero_1d(W1);
        for (const auto& b : W1z.basis()) sys.rows.push_back(edge_E_row(e, b.comps[0]));
      }
      if (d == 3) {
        for (int fi = 0; fi < K->num_faces(); ++fi) {
          FaceFrame fr = K->face_frame(fi);
          auto G = inv_gram(fr);
          auto face_dom = make_reference(fr.domain);
          FunctionSpace E2 = trace_space_E_face(seq.slots[1], *K, fi);
          FunctionSpace E2b = bubble(E2, 'E', face_dom);
          // curl moments against a basis of curl(E-bubbles)
          const FunctionSpace curl_tests = reduced(curl_space(E2b));
          for (const auto& tb : curl_tests.basis()) {
            RationalFunction test = tb.comps[0];
            sys.rows.push_back([fr, test, dom = fr.domain](const FieldFn& u) {
              FieldFn tr = trace_E_face(u, fr);
              return integrate_ref(dom, diff(DiffOpKind::Curl2D, tr).comps[0] * test);
            });
          }
          // value moments against the curl-free face E-bubbles
          const FunctionSpace E2b_cf = kernel_space(E2b, DiffOpKind::Curl2D);
          for (const auto& b : E2b_cf.basis()) {
            sys.rows.push_back([fr, G, b, dom = fr.domain](const FieldFn& u) {
              return inner_product(dom, trace_E_face(u, fr), b, &G);
            });
          }
        }
      }
      // interior: curl moments then curl-free bubble moments
      {
        const DiffOpKind curl = d == 2 ? DiffOpKind::Curl2D : DiffOpKind::Curl3D;
        FunctionSpace Eb = bubble(seq.slots[1], 'E', *K);
        const FunctionSpace curl_tests = reduced(curl_space(Eb));
        for (const auto& test : curl_tests.basis()) {
          sys.rows.push_back([K, curl, test](const FieldFn& u) {
            return inner_product(K->kind, diff(curl, u), test);
          });
        }
        const FunctionSpace Eb_cf = kernel_space(Eb, curl);
        for (const auto& b : Eb_cf.basis()) {
          sys.rows.push_back([K, b](const FieldFn& u) {
            return inner_product(K->kind, u, b);
          });
        }
      }
      break;
    }

    case InterpKind::V: {
      sys.slot = reduced(seq.slots[2]);
      for (int fi = 0; fi < K->num_faces(); ++fi) {
        FaceFrame fr = K->face_frame(fi);
        FunctionSpace W2 = trace_space_V_face(seq.slots[2], *K, fi);
        auto row = [fr](RationalFunction test) {
          return [fr, test = std::move(test)](const FieldFn& u) {
            FieldFn tr = trace_V_face(u, fr);
            return integrate_ref(fr.domain, tr.comps[0] * test);
          };
        };
        sys.rows.push_back(row(RationalFunction::constant(2, Rational(1))));
        const FunctionSpace W2z = mean_zero_face(W2, fr.domain);
        for (const auto& b : W2z.basis()) sys.rows.push_back(row(b.comps[0]));
      }
      {
        FunctionSpace Vb = bubble(seq.slots[2], 'V', *K);
        const FunctionSpace div_tests = reduced(div_space(Vb));
        for (const auto& tb : div_tests.basis()) {
          RationalFunction test = tb.comps[0];
          sys.rows.push_back([K, test](const FieldFn& u) {
            return integrate_ref(K->kind, diff(DiffOpKind::Div, u).comps[0] * test);
          });
        }
        const FunctionSpace Vb_df = kernel_space(Vb, DiffOpKind::Div);
        for (const auto& b : Vb_df.basis()) {
          sys.rows.push_back([K, b](const FieldFn& u) {
            return inner_product(K->kind, u, b);
          });
        }
      }
      break;
    }

    case InterpKind::W: {
      sys.slot = reduced(seq.slots.back());
      FunctionSpace Wb = bubble(seq.slots.back(), 'W', *K);
      sys.rows.push_back([K](const FieldFn& u) {
        return integrate_ref(K->kind, u.comps[0]);
      });
      for (const auto& b : Wb.basis()) {
        sys.rows.push_back([K, b](const FieldFn& u) {
          return inner_product(K->kind, u, b);
        });
      }
      break;
    }
  }

  detail_interp::finalize(sys);
  return sys;
}

inline FieldFn harmonic_interpolate(const InterpolationSystem& sys, const FieldFn& u) {
  return sys.interpolate(u);
}

// ---- commuting-diagram checker ------------------------------------------------

struct CommutingReport {
  // one verdict per applicable identity, in diagram order
  std::vector<bool> identities;
  bool pass = false;
};

struct InterpolatorSet {
  std::vector<InterpolationSystem> systems;  // H,(E),(V),W
};

inline InterpolatorSet build_interpolators(const SequenceSpec& seq) {
  InterpolatorSet set;
  set.systems.push_back(build_system(InterpKind::H, seq));
  if (seq.dim >= 2) set.systems.push_back(build_system(InterpKind::E, seq));
  if (seq.dim == 3) set.systems.push_back(build_system(InterpKind::V, seq));
  set.systems.push_back(build_system(InterpKind::W, seq));
  return set;
}

// Checks the commuting identities for smooth inputs: a scalar u for the
// gradient link and vector fields for the curl/div links.
inline CommutingReport check_commuting(const InterpolatorSet& set, const SequenceSpec& seq,
                                       const FieldFn& u_scalar,
                                       const FieldFn& u_curl = FieldFn(),
                                       const FieldFn& u_div = FieldFn()) {
  CommutingReport rep;
  const auto ops = detail_verify::sequence_ops(seq.dim);
  // grad Pi_H u = Pi_{next} grad u
  {
    FieldFn lhs = diff(ops[0], set.systems[0].interpolate(u_scalar));
    FieldFn rhs = set.systems[1].interpolate(diff(ops[0], u_scalar));
    rep.identities.push_back(equal(lhs, rhs));
  }
  if (seq.dim >= 2 && !u_curl.comps.empty()) {
    FieldFn lhs = diff(ops[1], set.systems[1].interpolate(u_curl));
    FieldFn rhs = set.systems[2].interpolate(diff(ops[1], u_curl));
    rep.identities.push_back(equal(lhs, rhs));
  }
  if (seq.dim == 3 && !u_div.comps.empty()) {
    FieldFn lhs = diff(ops[2], set.systems[2].interpolate(u_div));
    FieldFn rhs = set.systems[3].interpolate(diff(ops[2], u_div));
    rep.identities.push_back(equal(lhs, rhs));
  }
  rep.pass = true;
  for (bool b : rep.identities) rep.pass = rep.pass && b;
  return rep;
}

// projection property: every slot basis function is reproduced exactly
inline bool check_projection(const InterpolatorSet& set) {
  for (const auto& sys : set.systems)
    for (const auto& b : sys.slot.basis())
      if (!equal(sys.interpolate(b), b)) return false;
  return true;
}

}  // namespace derham

#endif
