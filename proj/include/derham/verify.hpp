// The verification engine: exactness, bubbles, compatibility, delta
// properties, M-index, edge compatibility and hybrid patch checks.
//
// Failures are verdicts inside reports, never exceptions. Space equality is
// always double containment via rank on a common coordinatization.

#ifndef DERHAM_VERIFY_HPP
#define DERHAM_VERIFY_HPP

#include <optional>
#include <string>
#include <vector>

#include "derham/families.hpp"

namespace derham {

// ---- trace spaces ---------------------------------------------------------

inline FunctionSpace trace_space_H_face(const FunctionSpace& s, const ReferenceElement& K,
                                        int fi) {
  FaceFrame fr = K.face_frame(fi);
  return image_space(s, face_context(K, fi), 1,
                     [&](const FieldFn& f) { return trace_restrict(f, fr.chart); });
}
inline FunctionSpace trace_space_E_face(const FunctionSpace& s, const ReferenceElement& K,
                                        int fi) {
  FaceFrame fr = K.face_frame(fi);
  return image_space(s, face_context(K, fi), 2,
                     [&](const FieldFn& f) { return trace_E_face(f, fr); });
}
inline FunctionSpace trace_space_V_face(const FunctionSpace& s, const ReferenceElement& K,
                                        int fi) {
  FaceFrame fr = K.face_frame(fi);
  return image_space(s, face_context(K, fi), 1,
                     [&](const FieldFn& f) { return trace_V_face(f, fr); });
}
inline FunctionSpace trace_space_H_edge(const FunctionSpace& s, const ReferenceElement& K,
                                        int e) {
  EdgeFrame fr = K.edge_frame(e);
  return image_space(s, edge_context(K, e), 1,
                     [&](const FieldFn& f) { return trace_restrict(f, fr.chart); });
}
inline FunctionSpace trace_space_E_edge(const FunctionSpace& s, const ReferenceElement& K,
                                        int e) {
  EdgeFrame fr = K.edge_frame(e);
  return image_space(s, edge_context(K, e), 1,
                     [&](const FieldFn& f) { return trace_E_edge(f, fr); });
}

// ---- bubbles ---------------------------------------------------------------

namespace detail_verify {

// nullspace combos of the stacked trace rows
inline std::vector<QVector> vanishing_combos(
    const FunctionSpace& s, const std::vector<Coordinatization>& blocks) {
  std::size_t total_cols = 0;
  for (const auto& b : blocks) total_cols += b.mat.cols();
  QMatrix stacked(s.basis().size(), total_cols);
  std::size_t off = 0;
  for (const auto& b : blocks) {
    for (std::size_t r = 0; r < b.mat.rows(); ++r)
      for (std::size_t c = 0; c < b.mat.cols(); ++c) stacked(r, off + c) = b.mat(r, c);
    off += b.mat.cols();
  }
  return mat_nullspace(stacked.transposed());
}

}  // namespace detail_verify

// subspace with vanishing full boundary trace of the given kind
inline FunctionSpace bubble(const FunctionSpace& s, char kind, const ReferenceElement& K) {
  if (s.empty()) return s;
  std::vector<Coordinatization> blocks;
  auto add_block = [&](const FunctionSpace& traces, const SpaceContext& ctx) {
    blocks.push_back(coordinatize(traces.basis(), ctx));
  };
  if (kind == 'H') {
    if (K.dim == 1) {
      QMatrix evals(s.basis().size(), K.vertices.size());
      for (std::size_t i = 0; i < s.basis().size(); ++i)
        for (std::size_t v = 0; v < K.vertices.size(); ++v)
          evals(i, v) = s.basis()[i].comps[0].eval(K.vertices[v]);
      Coordinatization co;
      co.mat = std::move(evals);
      blocks.push_back(std::move(co));
    } else if (K.dim == 2) {
      for (int e = 0; e < K.num_edges(); ++e)
        add_block(trace_space_H_edge(s, K, e), edge_context(K, e));
    } else {
      for (int f = 0; f < K.num_faces(); ++f)
        add_block(trace_space_H_face(s, K, f), face_context(K, f));
    }
  } else if (kind == 'E') {
    if (K.dim == 2) {
      for (int e = 0; e < K.num_edges(); ++e)
        add_block(trace_space_E_edge(s, K, e), edge_context(K, e));
    } else {
      for (int f = 0; f < K.num_faces(); ++f)
        add_block(trace_space_E_face(s, K, f), face_context(K, f));
    }
  } else if (kind == 'V') {
    for (int f = 0; f < K.num_faces(); ++f)
      add_block(trace_space_V_face(s, K, f), face_context(K, f));
  } else if (kind == 'W') {  // zero mean
    QMatrix means(s.basis().size(), 1);
    for (std::size_t i = 0; i < s.basis().size(); ++i)
      means(i, 0) = integrate_element(K, s.basis()[i].comps[0]);
    Coordinatization co;
    co.mat = std::move(means);
    blocks.push_back(std::move(co));
  }
  return reduced(combine(s, detail_verify::vanishing_combos(s, blocks)));
}

// subspace of s with vanishing differential (grad/curl/div as fits ncomp)
inline FunctionSpace kernel_space(const FunctionSpace& s, DiffOpKind op) {
  if (s.empty()) return s;
  std::vector<FieldFn> images;
  for (const auto& f : s.basis()) images.push_back(diff(op, f));
  Coordinatization co = coordinatize(images, s.context());
  return reduced(combine(s, mat_nullspace(co.mat.transposed())));
}

// {v in bubble: op v = 0}
inline FunctionSpace divfree_bubble(const FunctionSpace& s, char kind, DiffOpKind op,
                                    const ReferenceElement& K) {
  return kernel_space(bubble(s, kind, K), op);
}

// ---- exactness -------------------------------------------------------------

struct LinkVerdict {
  std::string name;
  bool pass = false;
  std::string note;
};

struct ExactnessReport {
  std::vector<std::size_t> dims;
  std::vector<LinkVerdict> links;
  long alternating_sum = 0;
  bool pass = false;
};

namespace detail_verify {

inline std::vector<DiffOpKind> sequence_ops(int dim) {
  if (dim == 1) return {DiffOpKind::Grad};
  if (dim == 2) return {DiffOpKind::Grad, DiffOpKind::Curl2D};
  return {DiffOpKind::Grad, DiffOpKind::Curl3D, DiffOpKind::Div};
}

inline std::size_t image_rank(const FunctionSpace& s, DiffOpKind op) {
  if (s.empty()) return 0;
  std::vector<FieldFn> images;
  for (const auto& f : s.basis()) images.push_back(diff(op, f));
  return mat_rank(coordinatize(images, s.context()).mat);
}

}  // namespace detail_verify

inline ExactnessReport check_exactness(const SequenceSpec& seq) {
  using detail_verify::image_rank;
  ExactnessReport rep;
  const auto ops = detail_verify::sequence_ops(seq.dim);
  for (const auto& s : seq.slots) rep.dims.push_back(s.dim());

  // kernel of the first map is the constants
  {
    LinkVerdict v{"ker(first) = constants", false, ""};
    const FunctionSpace& H = seq.slots[0];
    const bool has_one =
        contains(H, FieldFn(RationalFunction::constant(H.context().dim, Rational(1))));
    const std::size_t ker = H.dim() - image_rank(H, ops[0]);
    v.pass = has_one && ker == 1;
    if (!v.pass)
      v.note = "ker dim " + std::to_string(ker) + (has_one ? "" : ", constants missing");
    rep.links.push_back(std::move(v));
  }
  // interior links: image = kernel of the next map
  for (std::size_t i = 0; i + 1 < ops.size(); ++i) {
    LinkVerdict v{"im(d" + std::to_string(i) + ") = ker(d" + std::to_string(i + 1) + ")", false,
                  ""};
    const FunctionSpace& cur = seq.slots[i];
    const FunctionSpace& next = seq.slots[i + 1];
    std::vector<FieldFn> images;
    bool complex_ok = true;
    for (const auto& f : cur.basis()) {
      FieldFn df = diff(ops[i], f);
      if (!diff(ops[i + 1], df).is_zero()) complex_ok = false;
      images.push_back(std::move(df));
    }
    const bool contained = joint_rank(next, images) == next.dim();
    const std::size_t im = images.empty() ? 0 : mat_rank(coordinatize(images, next.context()).mat);
    const std::size_t ker = next.dim() - image_rank(next, ops[i + 1]);
    v.pass = complex_ok && contained && im == ker;
    if (!v.pass)
      v.note = std::string(complex_ok ? "" : "not a complex; ") +
               (contained ? "" : "image escapes next slot; ") + "im " + std::to_string(im) +
               " vs ker " + std::to_string(ker);
    rep.links.push_back(std::move(v));
  }
  // last map onto W
  {
    LinkVerdict v{"last map onto W", false, ""};
    const FunctionSpace& last = seq.slots[seq.slots.size() - 2];
    const FunctionSpace& W = seq.slots.back();
    std::vector<FieldFn> images;
    for (const auto& f : last.basis()) images.push_back(diff(ops.back(), f));
    const bool contained = joint_rank(W, images) == W.dim();
    const std::size_t im = images.empty() ? 0 : mat_rank(coordinatize(images, W.context()).mat);
    v.pass = contained && im == W.dim();
    if (!v.pass)
      v.note = std::string(contained ? "" : "image escapes W; ") + "im " + std::to_string(im) +
               " vs dim W " + std::to_string(W.dim());
    rep.links.push_back(std::move(v));
  }
  int sign = 1;
  for (std::size_t d : rep.dims) {
    rep.alternating_sum += sign * static_cast<long>(d);
    sign = -sign;
  }
  rep.pass = rep.alternating_sum == 1;
  for (const auto& l : rep.links) rep.pass = rep.pass && l.pass;
  return rep;
}

// ---- compatibility ----------------------------------------------------------

struct CompatibilityReport {
  bool pass = false;
  // identity block: lhs/rhs of each d-specific dimension identity
  std::vector<std::pair<std::size_t, std::size_t>> identities;
  std::vector<bool> face_trace_matches_prescription;  // 3D only
  std::vector<CompatibilityReport> face_reports;      // 3D: per face
  std::vector<bool> edge_ok;                          // 2D: per edge 1D compatibility
  std::string note;
};

namespace detail_verify {

// dimension of the endpoint-evaluation image of a 1D space
inline std::size_t vertex_trace_dim(const FunctionSpace& s) {
  if (s.empty()) return 0;
  QMatrix evals(s.basis().size(), 2);
  for (std::size_t i = 0; i < s.basis().size(); ++i) {
    evals(i, 0) = s.basis()[i].comps[0].eval({Rational(0)});
    evals(i, 1) = s.basis()[i].comps[0].eval({Rational(1)});
  }
  return mat_rank(evals);
}

// bubble of a 1D space: vanishing endpoint values
inline FunctionSpace bubble_1d(const FunctionSpace& s) {
  if (s.empty()) return s;
  QMatrix evals(s.basis().size(), 2);
  for (std::size_t i = 0; i < s.basis().size(); ++i) {
    evals(i, 0) = s.basis()[i].comps[0].eval({Rational(0)});
    evals(i, 1) = s.basis()[i].comps[0].eval({Rational(1)});
  }
  return reduced(combine(s, mat_nullspace(evals.transposed())));
}

// 1D compatible exact sequence check for (H1, W1) on an edge
inline bool edge_sequence_compatible(const FunctionSpace& H1, const FunctionSpace& W1) {
  // exact: ker(d/dt) = constants, image = W1
  const bool has_one =
      contains(H1, FieldFn(RationalFunction::constant(1, Rational(1))));
  std::vector<FieldFn> images;
  for (const auto& f : H1.basis()) images.push_back(diff(DiffOpKind::Grad, f));
  const std::size_t im = images.empty() ? 0 : mat_rank(coordinatize(images, H1.context()).mat);
  const bool exact = has_one && (H1.dim() - im == 1) && joint_rank(W1, images) == W1.dim() &&
                     im == W1.dim();
  return exact && vertex_trace_dim(H1) == 2;
}

}  // namespace detail_verify

// 2D compatibility of (H2, E2, W2) living on element K2 (a reference triangle,
// square, polygon, or a face domain carrying face factors).
inline CompatibilityReport check_compatibility_2d(const FunctionSpace& H2,
                                                  const FunctionSpace& E2,
                                                  const FunctionSpace& W2,
                                                  const ReferenceElement& K2) {
  CompatibilityReport rep;
  (void)W2;
  std::size_t sum_H1_bubbles = 0, sum_W1 = 0;
  bool edges_ok = true;
  for (int e = 0; e < K2.num_edges(); ++e) {
    FunctionSpace H1 = trace_space_H_edge(H2, K2, e);
    FunctionSpace W1 = trace_space_E_edge(E2, K2, e);
    const bool ok = detail_verify::edge_sequence_compatible(H1, W1);
    rep.edge_ok.push_back(ok);
    edges_ok = edges_ok && ok;
    sum_H1_bubbles += detail_verify::bubble_1d(H1).dim();
    sum_W1 += W1.dim();
  }
  const std::size_t trH = H2.dim() - bubble(H2, 'H', K2).dim();
  const std::size_t trE = E2.dim() - bubble(E2, 'E', K2).dim();
  rep.identities.emplace_back(trH, K2.num_vertices() + sum_H1_bubbles);
  rep.identities.emplace_back(trE, sum_W1);
  rep.pass = edges_ok && trH == K2.num_vertices() + sum_H1_bubbles && trE == sum_W1;
  return rep;
}

inline CompatibilityReport check_compatibility(const SequenceSpec& seq) {
  const ReferenceElement& K = *seq.element;
  if (seq.dim == 1) {
    CompatibilityReport rep;
    const std::size_t tr = detail_verify::vertex_trace_dim(seq.slots[0]);
    rep.identities.emplace_back(tr, 2);
    rep.pass = tr == 2;
    return rep;
  }
  if (seq.dim == 2)
    return check_compatibility_2d(seq.slots[0], seq.slots[1], seq.slots[2], K);

  CompatibilityReport rep;
  rep.pass = true;

  // per-face trace sequences; compare against the prescribed 2D families
  std::size_t sum_H2_bubbles = 0, sum_E2_bubbles = 0, sum_W2 = 0;
  for (int fi = 0; fi < K.num_faces(); ++fi) {
    const SpaceContext fctx = face_context(K, fi);
    FunctionSpace H2 = trace_space_H_face(seq.slots[0], K, fi);
    FunctionSpace E2 = trace_space_E_face(seq.slots[1], K, fi);
    FunctionSpace W2 = trace_space_V_face(seq.slots[2], K, fi);
    if (fi < static_cast<int>(seq.face_families.size())) {
      const Family2D fam = seq.face_families[fi];
      const bool match = spaces_equal(H2, family2d_H(fam, fctx)) &&
                         spaces_equal(E2, family2d_E(fam, fctx)) &&
                         spaces_equal(W2, family2d_W(fam, fctx));
      rep.face_trace_matches_prescription.push_back(match);
      rep.pass = rep.pass && match;
    }
    auto face_dom = make_reference(K.face_frame(fi).domain);
    CompatibilityReport sub = check_compatibility_2d(H2, E2, W2, face_dom);
    rep.pass = rep.pass && sub.pass;
    sum_H2_bubbles += bubble(H2, 'H', face_dom).dim();
    sum_E2_bubbles += bubble(E2, 'E', face_dom).dim();
    sum_W2 += W2.dim();
    rep.face_reports.push_back(std::move(sub));
  }

  // edge sums over the 3D element
  std::size_t sum_H1_bubbles = 0, sum_W1 = 0;
  for (int e = 0; e < K.num_edges(); ++e) {
    FunctionSpace H1 = trace_space_H_edge(seq.slots[0], K, e);
    FunctionSpace W1 = trace_space_E_edge(seq.slots[1], K, e);
    sum_H1_bubbles += detail_verify::bubble_1d(H1).dim();
    sum_W1 += W1.dim();
  }

  const std::size_t trH = seq.slots[0].dim() - bubble(seq.slots[0], 'H', K).dim();
  const std::size_t trE = seq.slots[1].dim() - bubble(seq.slots[1], 'E', K).dim();
  const std::size_t trV = seq.slots[2].dim() - bubble(seq.slots[2], 'V', K).dim();
  rep.identities.emplace_back(trH, K.num_vertices() + sum_H1_bubbles + sum_H2_bubbles);
  rep.identities.emplace_back(trE, sum_W1 + sum_E2_bubbles);
  rep.identities.emplace_back(trV, sum_W2);
  for (const auto& [lhs, rhs] : rep.identities) rep.pass = rep.pass && lhs == rhs;
  return rep;
}

// ---- delta properties --------------------------------------------------------

struct DeltaReport {
  bool admissible = false;
  // properties (i)-(iv) for deltaH then deltaE (deltaE slots false/unused in 2D)
  std::vector<bool> props;
  std::size_t dim_dH = 0, dim_dE = 0;
  std::size_t required_dH = 0, required_dE = 0;  // right-hand sides of (iv)
  bool pass = false;
};

inline DeltaReport check_delta_properties(const SequenceSpec& seq) {
  const ReferenceElement& K = *seq.element;
  DeltaReport rep;
  rep.props.assign(8, true);
  rep.dim_dH = seq.delta_H.dim();
  rep.dim_dE = seq.delta_E.dim();

  const FunctionSpace& Hg = seq.g_slots[0];
  const FunctionSpace& Wg = seq.g_slots.back();

  // prescribed boundary spaces
  std::vector<FunctionSpace> H2pre, E2pre, W2pre;
  if (seq.dim == 3) {
    for (int fi = 0; fi < K.num_faces(); ++fi) {
      const SpaceContext fctx = face_context(K, fi);
      H2pre.push_back(family2d_H(seq.face_families[fi], fctx));
      E2pre.push_back(family2d_E(seq.face_families[fi], fctx));
      W2pre.push_back(family2d_W(seq.face_families[fi], fctx));
    }
  }

  // admissibility of the core
  rep.admissible =
      contains(Wg, FieldFn(RationalFunction::constant(K.dim, Rational(1))));
  if (seq.dim == 2) {
    for (int e = 0; e < K.num_edges(); ++e) {
      FunctionSpace H1 = build::P(edge_context(K, e), seq.edge_H_degree);
      FunctionSpace W1 = build::P(edge_context(K, e), seq.edge_H_degree - 1);
      rep.admissible = rep.admissible &&
                       contains_space(H1, trace_space_H_edge(Hg, K, e)) &&
                       contains_space(W1, trace_space_E_edge(seq.g_slots[1], K, e));
    }
  } else {
    for (int fi = 0; fi < K.num_faces(); ++fi) {
      rep.admissible = rep.admissible &&
                       contains_space(H2pre[fi], trace_space_H_face(Hg, K, fi)) &&
                       contains_space(E2pre[fi], trace_space_E_face(seq.g_slots[1], K, fi)) &&
                       contains_space(W2pre[fi], trace_space_V_face(seq.g_slots[2], K, fi));
    }
  }

  if (!rep.admissible)
    throw AdmissibilityViolated("core sequence violates the admissibility conditions");

  // deltaH (i): face/edge traces inside the prescribed H spaces
  if (seq.dim == 2) {
    for (int e = 0; e < K.num_edges(); ++e) {
      FunctionSpace H1 = build::P(edge_context(K, e), seq.edge_H_degree);
      if (!contains_space(H1, trace_space_H_edge(seq.delta_H, K, e))) rep.props[0] = false;
    }
  } else {
    for (int fi = 0; fi < K.num_faces(); ++fi)
      if (!contains_space(H2pre[fi], trace_space_H_face(seq.delta_H, K, fi)))
        rep.props[0] = false;
  }
  // deltaH (ii): trivial intersection with the core
  rep.props[1] = joint_rank(Hg, seq.delta_H.basis()) == Hg.dim() + seq.delta_H.dim();
  // deltaH (iii): no new H-bubbles
  rep.props[2] =
      bubble(span_union(Hg, seq.delta_H), 'H', K).dim() == bubble(Hg, 'H', K).dim();
  // deltaH (iv): the dimension formula
  {
    std::size_t rhs = K.num_vertices();
    for (int e = 0; e < K.num_edges(); ++e) rhs += seq.edge_H_degree - 1;
    if (seq.dim == 3)
      for (int fi = 0; fi < K.num_faces(); ++fi)
        rhs += bubble(H2pre[fi], 'H', make_reference(K.face_frame(fi).domain)).dim();
    rhs += bubble(Hg, 'H', K).dim();
    rep.required_dH = rhs - Hg.dim();
    rep.props[3] = seq.delta_H.dim() + Hg.dim() == rhs;
  }

  if (seq.dim == 3) {
    const FunctionSpace& Vg = seq.g_slots[2];
    FunctionSpace curl_dE = curl_space(seq.delta_E);
    // deltaE (i)
    for (int fi = 0; fi < K.num_faces(); ++fi)
      if (!contains_space(E2pre[fi], trace_space_E_face(seq.delta_E, K, fi)))
        rep.props[4] = false;
    // deltaE (ii)
    rep.props[5] = joint_rank(Vg, curl_dE.basis()) == Vg.dim() + curl_dE.dim();
    // deltaE (iii): no new solenoidal V-bubbles
    rep.props[6] = divfree_bubble(span_union(Vg, curl_dE), 'V', DiffOpKind::Div, K).dim() ==
                   divfree_bubble(Vg, 'V', DiffOpKind::Div, K).dim();
    // deltaE (iv): the M-index count
    {
      std::size_t rhs = 0;
      for (int fi = 0; fi < K.num_faces(); ++fi) rhs += W2pre[fi].dim();
      rhs += bubble(Wg, 'W', K).dim();
      rhs += divfree_bubble(Vg, 'V', DiffOpKind::Div, K).dim();
      rep.required_dE = rhs - Vg.dim();
      rep.props[7] = seq.delta_E.dim() + Vg.dim() == rhs &&
                     curl_dE.dim() == seq.delta_E.dim();
    }
  }

  rep.pass = rep.admissible;
  const std::size_t nprops = seq.dim == 3 ? 8 : 4;
  for (std::size_t i = 0; i < nprops; ++i) rep.pass = rep.pass && rep.props[i];
  return rep;
}

// ---- M-index ----------------------------------------------------------------

struct MIndexReport {
  long def_form = 0;   // Definition 5.3
  long sum_form = 0;   // identity (5.2)
  bool agree = false;
};

inline MIndexReport m_index(const FunctionSpace& V, const FunctionSpace& W,
                            const std::vector<FunctionSpace>& face_W2,
                            const ReferenceElement& K) {
  MIndexReport rep;
  long dimM = 0;
  for (const auto& m : face_W2) dimM += static_cast<long>(m.dim());

  // trace dimension of the divergence-free part of V
  FunctionSpace divfree = kernel_space(V, DiffOpKind::Div);
  std::size_t tr_divfree = 0;
  if (!divfree.empty()) {
    std::vector<Coordinatization> blocks;
    for (int fi = 0; fi < K.num_faces(); ++fi)
      blocks.push_back(coordinatize(trace_space_V_face(divfree, K, fi).basis(),
                                    face_context(K, fi)));
    tr_divfree = divfree.dim() - detail_verify::vanishing_combos(divfree, blocks).size();
  }
  // trace dimension of the gradient-free part of W
  FunctionSpace gradfree = kernel_space(W, DiffOpKind::Grad);
  std::size_t tr_gradfree = 0;
  if (!gradfree.empty()) {
    std::vector<Coordinatization> blocks;
    for (int fi = 0; fi < K.num_faces(); ++fi)
      blocks.push_back(coordinatize(trace_space_H_face(gradfree, K, fi).basis(),
                                    face_context(K, fi)));
    tr_gradfree = gradfree.dim() - detail_verify::vanishing_combos(gradfree, blocks).size();
  }
  rep.def_form = dimM - static_cast<long>(tr_divfree) - static_cast<long>(tr_gradfree);

  rep.sum_form = dimM + static_cast<long>(bubble(W, 'W', K).dim()) +
                 static_cast<long>(divfree_bubble(V, 'V', DiffOpKind::Div, K).dim()) -
                 static_cast<long>(V.dim());
  rep.agree = rep.def_form == rep.sum_form;
  return rep;
}

inline MIndexReport m_index(const SequenceSpec& seq) {
  const ReferenceElement& K = *seq.element;
  std::vector<FunctionSpace> face_W2;
  for (int fi = 0; fi < K.num_faces(); ++fi)
    face_W2.push_back(family2d_W(seq.face_families[fi], face_context(K, fi)));
  return m_index(seq.g_slots[2], seq.g_slots[3], face_W2, K);
}

// ---- edge compatibility across faces ------------------------------------------

// For every edge shared by two faces: the H- and tangential E-traces of the
// two face sequences agree as spaces on the common edge parameter.
inline bool check_edge_compatibility(const std::vector<FunctionSpace>& face_H,
                                     const std::vector<FunctionSpace>& face_E,
                                     const ReferenceElement& K) {
  for (int e = 0; e < K.num_edges(); ++e) {
    auto adjacent = K.faces_of_edge(e);
    if (adjacent.size() != 2) return false;
    EdgeFrame ef = K.edge_frame(e);
    std::vector<FunctionSpace> Hs, Es;
    for (int fi : adjacent) {
      FaceFrame fr = K.face_frame(fi);
      AffineMap eta = chart_preimage(fr.chart, ef.chart);  // edge param -> face coords
      SpaceContext ectx = edge_context(K, e);
      Hs.push_back(image_space(face_H[fi], ectx, 1, [&](const FieldFn& f) {
        return trace_restrict(f, eta);
      }));
      Es.push_back(image_space(face_E[fi], ectx, 1, [&](const FieldFn& f) {
        RationalFunction s = eta.linear[0][0] * f.comps[0] + eta.linear[1][0] * f.comps[1];
        FieldFn r;
        r.comps.push_back(s.substitute_affine(eta));
        return r;
      }));
    }
    if (!spaces_equal(Hs[0], Hs[1]) || !spaces_equal(Es[0], Es[1])) return false;
  }
  return true;
}

inline bool check_edge_compatibility(const SequenceSpec& seq) {
  const ReferenceElement& K = *seq.element;
  std::vector<FunctionSpace> face_H, face_E;
  for (int fi = 0; fi < K.num_faces(); ++fi) {
    const SpaceContext fctx = face_context(K, fi);
    face_H.push_back(family2d_H(seq.face_families[fi], fctx));
    face_E.push_back(family2d_E(seq.face_families[fi], fctx));
  }
  return check_edge_compatibility(face_H, face_E, K);
}

// ---- hybrid two-element patches -------------------------------------------------

struct HybridReport {
  bool faces_match = false;
  bool H_equal = false, E_equal = false, V_equal = false;
  std::size_t H_dims[2] = {0, 0}, E_dims[2] = {0, 0}, V_dims[2] = {0, 0};
  std::size_t E_joint = 0;  // dim of the joint span; detects one-function mismatches
  bool pass = false;
};

// Glue map(A)|faceA to map(B)|faceB and compare the physical trace spaces on
// the shared face. Spaces are compared in A's face parameters; B's spaces are
// pulled through the affine transition, covariantly for the E-traces.
inline HybridReport check_hybrid_patch(const SequenceSpec& seqA, const AffineMap& mapA,
                                       int faceA, const SequenceSpec& seqB,
                                       const AffineMap& mapB, int faceB) {
  const ReferenceElement& KA = *seqA.element;
  const ReferenceElement& KB = *seqB.element;
  HybridReport rep;

  // the physical face must coincide as a point set
  {
    std::vector<Point> pa, pb;
    for (int vi : KA.faces[faceA].loop) pa.push_back(mapA.apply(KA.vertices[vi]));
    for (int vi : KB.faces[faceB].loop) pb.push_back(mapB.apply(KB.vertices[vi]));
    if (pa.size() != pb.size()) throw FacesDoNotMatch("different face arities");
    std::size_t matched = 0;
    for (const auto& p : pa)
      for (const auto& q : pb)
        if (p == q) {
          ++matched;
          break;
        }
    if (matched != pa.size())
      throw FacesDoNotMatch("mapped faces do not coincide as point sets");
    rep.faces_match = true;
  }

  FaceFrame frA = KA.face_frame(faceA), frB = KB.face_frame(faceB);
  // transition tau: A face params -> B face params (through physical space)
  AffineMap tau = chart_preimage(mapB.compose(frB.chart), mapA.compose(frA.chart));

  FunctionSpace HA = trace_space_H_face(seqA.slots[0], KA, faceA);
  FunctionSpace EA = trace_space_E_face(seqA.slots[1], KA, faceA);
  FunctionSpace VA = trace_space_V_face(seqA.slots[2], KA, faceA);

  const SpaceContext actx = HA.context();
  FunctionSpace HBraw = trace_space_H_face(seqB.slots[0], KB, faceB);
  FunctionSpace EBraw = trace_space_E_face(seqB.slots[1], KB, faceB);
  FunctionSpace VBraw = trace_space_V_face(seqB.slots[2], KB, faceB);
  FunctionSpace HB = image_space(HBraw, actx, 1, [&](const FieldFn& f) {
    return trace_restrict(f, tau);
  });
  FunctionSpace EB = image_space(EBraw, actx, 2, [&](const FieldFn& f) {
    FieldFn r;
    for (int i = 0; i < 2; ++i) {
      RationalFunction s = tau.linear[0][i] * f.comps[0] + tau.linear[1][i] * f.comps[1];
      r.comps.push_back(s.substitute_affine(tau));
    }
    return r;
  });
  FunctionSpace VB = image_space(VBraw, actx, 1, [&](const FieldFn& f) {
    return trace_restrict(f, tau);
  });

  rep.H_dims[0] = HA.dim();
  rep.H_dims[1] = HB.dim();
  rep.E_dims[0] = EA.dim();
  rep.E_dims[1] = EB.dim();
  rep.V_dims[0] = VA.dim();
  rep.V_dims[1] = VB.dim();
  rep.H_equal = spaces_equal(HA, HB);
  rep.E_equal = spaces_equal(EA, EB);
  rep.V_equal = spaces_equal(VA, VB);
  rep.E_joint = joint_rank(EA, EB.basis());
  rep.pass = rep.faces_match && rep.H_equal && rep.E_equal && rep.V_equal;
  return rep;
}

}  // namespace derham

#endif
