// One-stop verification pipeline: build a sequence, run exactness,
// compatibility (including face-trace prescriptions and edge compatibility),
// delta properties, M-index (both forms), and seeded commuting spot checks.

#ifndef DERHAM_RUNNER_HPP
#define DERHAM_RUNNER_HPP

#include <cstdint>

#include "derham/interp.hpp"
#include "derham/report.hpp"
#include "derham/rng.hpp"

namespace derham {

struct RunOptions {
  bool run_commuting = true;
  int commuting_samples = 3;
  std::uint64_t seed = 1;
};

struct RunOutcome {
  VerifyResult result;
  bool m_index_agree = true;
  bool edge_compatible = true;

  bool pass() const { return result.pass() && m_index_agree && edge_compatible; }
};

inline RunOutcome run_verification(const SequenceSpec& seq, const RunOptions& opt = {}) {
  RunOutcome out;
  VerifyResult& r = out.result;
  r.element = seq.element ? kind_name(seq.element->kind) : "ambient";
  r.family = seq.family;
  r.k = seq.k;
  for (const auto& s : seq.slots) r.dims.push_back(s.dim());
  r.delta_props.assign(8, true);

  r.exact = check_exactness(seq).pass;

  if (seq.element) {
    r.compatible = check_compatibility(seq).pass;
    try {
      DeltaReport de = check_delta_properties(seq);
      r.delta_dimH = de.dim_dH;
      r.delta_dimE = de.dim_dE;
      r.delta_props = de.props;
    } catch (const AdmissibilityViolated&) {
      r.delta_props.assign(8, false);
      r.notes.push_back("core sequence is not admissible");
    }
    if (seq.dim == 3) {
      MIndexReport mi = m_index(seq);
      r.m_index = mi.def_form;
      out.m_index_agree = mi.agree;
      if (!mi.agree) r.notes.push_back("M-index forms disagree");
      out.edge_compatible = check_edge_compatibility(seq);
      if (!out.edge_compatible) r.notes.push_back("face sequences violate edge compatibility");
    }
    if (seq.element->kind == ElementKind::Square && seq.k == 0 &&
        (seq.family == 2 || seq.family == 3))
      r.notes.push_back(
          "k=0 degeneracy: the closed-form delta dimension 2 collapses to rank 1 "
          "(span{xy, yx}); property (iv) is checked with actual ranks");
    if (seq.element->kind == ElementKind::Pyramid && (seq.family == 3 || seq.family == 4))
      r.notes.push_back("pyramid families 3 and 4 share the same delta E space");
  } else {
    r.compatible = true;  // ambient sequences carry no boundary prescription
  }

  // seeded commuting spot checks (full sweeps live in the acceptance suite)
  if (opt.run_commuting && seq.element && seq.element->kind != ElementKind::Polygon &&
      r.exact && r.compatible) {
    InterpolatorSet set = build_interpolators(seq);
    Rng rng(opt.seed);
    const int deg = seq.k + 3;
    bool ok = true;
    for (int i = 0; i < opt.commuting_samples && ok; ++i) {
      FieldFn u = rng.scalar_field(seq.dim, deg);
      FieldFn w = seq.dim >= 2 ? rng.vector_field(seq.dim, deg) : FieldFn();
      FieldFn v = seq.dim == 3 ? rng.vector_field(seq.dim, deg) : FieldFn();
      ok = check_commuting(set, seq, u, w, v).pass;
    }
    r.commuting = ok;
    if (!ok) r.notes.push_back("a commuting identity failed");
  }
  return out;
}

}  // namespace derham

#endif
