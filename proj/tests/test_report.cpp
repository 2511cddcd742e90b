#include <catch2/catch_amalgamated.hpp>

#include "derham/export.hpp"
#include "derham/report.hpp"
#include "derham/runner.hpp"

using namespace derham;

TEST_CASE("json reports round-trip") {
  auto seq = build_sequence(ElementKind::Square, 2, 1);
  RunOptions opt;
  opt.commuting_samples = 1;
  VerifyResult r = run_verification(seq, opt).result;
  nlohmann::json j = emit_report(r);
  VerifyResult back = parse_report(j);
  CHECK(back == r);
  // wire keys are exactly the documented schema
  for (const char* key : {"element", "family", "k", "dims", "exact", "compatible", "delta",
                          "mIndex", "notes"})
    CHECK(j.contains(key));
  CHECK(j["dims"].contains("H"));
  CHECK(j["dims"].contains("E"));
  CHECK(j["dims"].contains("W"));
  CHECK_FALSE(j["dims"].contains("V"));  // 2D report
  CHECK(j["delta"]["props"].size() == 8);
}

TEST_CASE("basis export grammar") {
  // interval family 1 k=0: H lines are `1` and `1 * x^1`
  auto s = build_sequence(ElementKind::Interval, 1, 0);
  CHECK(to_grammar(s.slots[0].basis()[0]) == "1");
  CHECK(to_grammar(s.slots[0].basis()[1]) == "1 * x^1");

  // square family 2 k=0: the E slot contains the rotation field (y, -x)
  auto sq = build_sequence(ElementKind::Square, 2, 0);
  bool found = false;
  for (const auto& f : sq.slots[1].basis())
    if (to_grammar(f) == "1 * y^1 | -1 * x^1") found = true;
  CHECK(found);

  // pyramid family 2 k=0: the delta H line is xy/(1-z)
  auto pyr = build_sequence(ElementKind::Pyramid, 2, 0);
  REQUIRE(pyr.delta_H.dim() == 1);
  CHECK(to_grammar(pyr.delta_H.basis()[0]) == "1 * x^1 y^1 / (1-z)^1");

  // a sum of terms joins with ` + `
  Polynomial p = Polynomial::constant(2, rat(1, 2));
  p.add_term({2, 1, 0}, rat(-3, 4));
  CHECK(to_grammar(FieldFn(RationalFunction(p))) == "1/2 + -3/4 * x^2 y^1");
}

TEST_CASE("runner verdicts") {
  RunOptions opt;
  opt.commuting_samples = 1;
  auto out = run_verification(build_sequence(ElementKind::Prism, 4, 0), opt);
  CHECK(out.pass());
  CHECK(out.result.exact);
  CHECK(out.result.compatible);
  CHECK(out.m_index_agree);
  CHECK(out.edge_compatible);
}

TEST_CASE("verification is deterministic for a fixed seed") {
  RunOptions opt;
  opt.seed = 12345;
  opt.commuting_samples = 2;
  auto a = run_verification(build_sequence(ElementKind::Tet, 2, 0), opt);
  auto b = run_verification(build_sequence(ElementKind::Tet, 2, 0), opt);
  CHECK(a.result == b.result);
  CHECK(emit_report(a.result).dump() == emit_report(b.result).dump());
}
