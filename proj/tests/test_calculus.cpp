#include <catch2/catch_amalgamated.hpp>

#include "derham/calculus.hpp"
#include "derham/rng.hpp"

using namespace derham;

namespace {
FieldFn scal(int dim, Exps e) { return FieldFn(RationalFunction(Polynomial::monomial(dim, e))); }
FieldFn vec3(Polynomial a, Polynomial b, Polynomial c) {
  FieldFn f;
  f.comps = {RationalFunction(std::move(a)), RationalFunction(std::move(b)),
             RationalFunction(std::move(c))};
  return f;
}
}  // namespace

TEST_CASE("differential operators") {
  // grad(xy) = (y, x)
  FieldFn g = diff(DiffOpKind::Grad, scal(2, {1, 1, 0}));
  CHECK(equal(g.comps[0], RationalFunction(Polynomial::variable(2, 1))));
  CHECK(equal(g.comps[1], RationalFunction(Polynomial::variable(2, 0))));

  // curl(0, -xyz, xy^2) = (3xy, -y^2, -yz)
  FieldFn v = vec3(Polynomial(3), Rational(-1) * Polynomial::monomial(3, {1, 1, 1}),
                   Polynomial::monomial(3, {1, 2, 0}));
  FieldFn c = diff(DiffOpKind::Curl3D, v);
  CHECK(equal(c.comps[0], Rational(3) * RationalFunction(Polynomial::monomial(3, {1, 1, 0}))));
  CHECK(equal(c.comps[1], Rational(-1) * RationalFunction(Polynomial::monomial(3, {0, 2, 0}))));
  CHECK(equal(c.comps[2], Rational(-1) * RationalFunction(Polynomial::monomial(3, {0, 1, 1}))));

  // div(x, y, z) = 3
  FieldFn d = diff(DiffOpKind::Div, vec3(Polynomial::variable(3, 0), Polynomial::variable(3, 1),
                                         Polynomial::variable(3, 2)));
  CHECK(equal(d.comps[0], RationalFunction::constant(3, Rational(3))));
}

TEST_CASE("complex property on random fields") {
  Rng rng(42);
  for (int t = 0; t < 20; ++t) {
    CHECK(diff(DiffOpKind::Curl3D, diff(DiffOpKind::Grad, rng.scalar_field(3, 4))).is_zero());
    CHECK(diff(DiffOpKind::Div, diff(DiffOpKind::Curl3D, rng.vector_field(3, 4))).is_zero());
    CHECK(diff(DiffOpKind::Curl2D, diff(DiffOpKind::Grad, rng.scalar_field(2, 4))).is_zero());
  }
}

TEST_CASE("traces") {
  auto cube = make_reference(ElementKind::Cube);
  // E-trace on the face z=0 of v = (y, x, x+y) is (y, x) in the face frame
  Polynomial xpy = Polynomial::variable(3, 0) + Polynomial::variable(3, 1);
  FieldFn v = vec3(Polynomial::variable(3, 1), Polynomial::variable(3, 0), xpy);
  FieldFn tr = trace_E_face(v, cube.face_frame(0));
  CHECK(equal(tr.comps[0], RationalFunction(Polynomial::variable(2, 1))));
  CHECK(equal(tr.comps[1], RationalFunction(Polynomial::variable(2, 0))));

  // normal trace of curl(x y (y grad z - z grad y)) on x=1 is 3y (up to the
  // rational frame weight); zero on x=0, y=0, z=0
  FieldFn w = vec3(Polynomial(3), Rational(-1) * Polynomial::monomial(3, {1, 1, 1}),
                   Polynomial::monomial(3, {1, 2, 0}));
  FieldFn cw = diff(DiffOpKind::Curl3D, w);
  for (int fi = 0; fi < cube.num_faces(); ++fi) {
    FaceFrame fr = cube.face_frame(fi);
    FieldFn nt = trace_V_face(cw, fr);
    const Point& v0 = cube.vertices[cube.faces[fi].loop[0]];
    const bool is_x1 = v0[0] == Rational(1) && is_zero(fr.normal[1]) && is_zero(fr.normal[2]);
    if (is_x1) {
      // 3y in face coordinates; the x=1 frame has s = y
      RationalFunction expect =
          fr.normal[0] * (Rational(3) * RationalFunction(Polynomial::monomial(2, {1, 0, 0})));
      CHECK(equal(nt.comps[0], expect));
    }
    if (is_zero(v0[0]) && !is_zero(fr.normal[0]) && is_zero(fr.normal[1]) && is_zero(fr.normal[2]))
      CHECK(nt.comps[0].is_zero());  // x=0
  }

  // H-trace at an interval endpoint: x^2 at the vertex x=1
  auto iv = make_reference(ElementKind::Interval);
  CHECK(Polynomial::monomial(1, {2, 0, 0}).eval({Rational(1)}) == Rational(1));
}

TEST_CASE("trace chain rule along edges") {
  // d/dt of the edge restriction equals the direction-weighted gradient trace
  Rng rng(8);
  auto pyr = make_reference(ElementKind::Pyramid);
  for (int e = 0; e < pyr.num_edges(); ++e) {
    EdgeFrame fr = pyr.edge_frame(e);
    FieldFn u = rng.scalar_field(3, 3);
    RationalFunction lhs = u.comps[0].substitute_affine(fr.chart).differentiate(0);
    FieldFn grad_trace = trace_E_edge(diff(DiffOpKind::Grad, u), fr);
    CHECK(equal(lhs, grad_trace.comps[0]));
  }
}

TEST_CASE("face curl identity") {
  // curl2d of the covariant face trace equals the normal trace of the curl
  Rng rng(9);
  for (ElementKind k : {ElementKind::Tet, ElementKind::Prism, ElementKind::Pyramid}) {
    auto K = make_reference(k);
    FieldFn v = rng.vector_field(3, 3);
    for (int fi = 0; fi < K.num_faces(); ++fi) {
      FaceFrame fr = K.face_frame(fi);
      FieldFn lhs = diff(DiffOpKind::Curl2D, trace_E_face(v, fr));
      FieldFn rhs = trace_V_face(diff(DiffOpKind::Curl3D, v), fr);
      CHECK(equal(lhs.comps[0], rhs.comps[0]));
    }
  }
}

TEST_CASE("integration") {
  CHECK(integrate_ref(ElementKind::Tet, RationalFunction::constant(3, Rational(1))) == rat(1, 6));

  auto pyr = make_reference(ElementKind::Pyramid);
  auto f = RationalFunction::quotient(Polynomial::monomial(3, {1, 1, 0}), pyr.factors[0], 1);
  CHECK(integrate_element(pyr, f) == rat(1, 16));

  auto divergent =
      RationalFunction::quotient(Polynomial::constant(3, Rational(1)), pyr.factors[0], 3);
  CHECK_THROWS_AS(integrate_element(pyr, divergent), DivergentIntegral);

  // linearity and positivity on monomials
  Rng rng(10);
  for (ElementKind k : {ElementKind::Triangle, ElementKind::Cube, ElementKind::Prism}) {
    RationalFunction a(rng.polynomial(k == ElementKind::Triangle ? 2 : 3, 2));
    RationalFunction b(rng.polynomial(k == ElementKind::Triangle ? 2 : 3, 2));
    CHECK(integrate_ref(k, a + b) == integrate_ref(k, a) + integrate_ref(k, b));
  }
  CHECK(sgn(integrate_ref(ElementKind::Prism, RationalFunction(Polynomial::monomial(3, {2, 1, 3})))) > 0);
}

TEST_CASE("pullbacks") {
  AffineMap id = AffineMap::identity(3);
  Rng rng(12);
  FieldFn u = rng.scalar_field(3, 3);
  CHECK(equal(pullback(PullbackKind::H1, id, u), u));

  AffineMap A;
  A.dom_dim = A.cod_dim = 3;
  A.linear = {{rat(2), rat(1), rat(0)}, {rat(0), rat(1), rat(-1)}, {rat(1, 2), rat(0), rat(3)}};
  A.offset = {rat(1), rat(-2), rat(1, 3)};

  // grad commutes: grad(H1 pullback) = curl-pullback of grad
  {
    FieldFn lhs = diff(DiffOpKind::Grad, pullback(PullbackKind::H1, A, u));
    FieldFn rhs = pullback(PullbackKind::Curl, A, diff(DiffOpKind::Grad, u));
    CHECK(equal(lhs, rhs));
  }
  // div commutes: div(Piola) = L2-pullback of div
  {
    FieldFn v = rng.vector_field(3, 3);
    FieldFn lhs = diff(DiffOpKind::Div, pullback(PullbackKind::Div, A, v));
    FieldFn rhs = pullback(PullbackKind::L2, A, diff(DiffOpKind::Div, v));
    CHECK(equal(lhs, rhs));
  }
  // curl commutes: curl(covariant) = Piola of curl
  {
    FieldFn v = rng.vector_field(3, 3);
    FieldFn lhs = diff(DiffOpKind::Curl3D, pullback(PullbackKind::Curl, A, v));
    FieldFn rhs = pullback(PullbackKind::Div, A, diff(DiffOpKind::Curl3D, v));
    CHECK(equal(lhs, rhs));
  }
  // functoriality
  {
    AffineMap B;
    B.dom_dim = B.cod_dim = 3;
    B.linear = {{rat(1), rat(0), rat(1)}, {rat(0), rat(2), rat(0)}, {rat(0), rat(0), rat(1)}};
    B.offset = {rat(0), rat(1), rat(0)};
    FieldFn v = rng.vector_field(3, 2);
    for (PullbackKind kind :
         {PullbackKind::H1, PullbackKind::Curl, PullbackKind::Div, PullbackKind::L2}) {
      FieldFn lhs = pullback(kind, A.compose(B), v);
      FieldFn rhs = pullback(kind, A, pullback(kind, B, v));
      CHECK(equal(lhs, rhs));
    }
  }
  // singular maps are rejected
  AffineMap S = AffineMap::identity(3);
  S.linear[2][2] = 0;
  CHECK_THROWS_AS(pullback(PullbackKind::Div, S, u), SingularMap);
}
