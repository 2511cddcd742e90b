#include <catch2/catch_amalgamated.hpp>

#include <fstream>

#include "derham/geometry.hpp"

using namespace derham;

TEST_CASE("reference element counts") {
  auto tet = make_reference(ElementKind::Tet);
  CHECK(tet.num_vertices() == 4);
  CHECK(tet.num_edges() == 6);
  CHECK(tet.num_faces() == 4);

  auto pyr = make_reference(ElementKind::Pyramid);
  CHECK(pyr.num_vertices() == 5);
  CHECK(pyr.num_edges() == 8);
  CHECK(pyr.num_faces() == 5);

  auto prism = make_reference(ElementKind::Prism);
  CHECK(prism.num_vertices() == 6);
  CHECK(prism.num_edges() == 9);
  CHECK(prism.num_faces() == 5);

  for (ElementKind k : {ElementKind::Tet, ElementKind::Cube, ElementKind::Prism,
                        ElementKind::Pyramid}) {
    auto K = make_reference(k);
    CHECK(K.num_vertices() - K.num_edges() + K.num_faces() == 2);  // Euler
  }
}

TEST_CASE("face frames") {
  auto cube = make_reference(ElementKind::Cube);
  // face z=0: outward normal is -e_z
  FaceFrame f0 = cube.face_frame(0);
  Point n0 = f0.normal;
  if (!f0.outward)
    for (auto& c : n0) c = -c;
  CHECK(n0 == pt3(0, 0, -1));
  // chart maps (s,t) into the z=0 plane
  CHECK(f0.chart.apply({rat(1, 3), rat(1, 7)}) == Point{rat(1, 3), rat(1, 7), rat(0)});

  auto pyr = make_reference(ElementKind::Pyramid);
  FaceFrame fslant = pyr.face_frame(2);  // x+z=1
  // normal proportional to (1,0,1)
  CHECK(fslant.normal[0] == fslant.normal[2]);
  CHECK(is_zero(fslant.normal[1]));
  CHECK(fslant.outward);

  auto tet = make_reference(ElementKind::Tet);
  FaceFrame ft = tet.face_frame(3);  // x+y+z=1
  CHECK(ft.normal == pt3(1, 1, 1));
}

TEST_CASE("edge tangents lie in both adjacent face planes") {
  for (ElementKind k : {ElementKind::Tet, ElementKind::Cube, ElementKind::Prism,
                        ElementKind::Pyramid}) {
    auto K = make_reference(k);
    for (int e = 0; e < K.num_edges(); ++e) {
      auto faces = K.faces_of_edge(e);
      REQUIRE(faces.size() == 2);
      EdgeFrame ef = K.edge_frame(e);
      for (int fi : faces) {
        FaceFrame fr = K.face_frame(fi);
        CHECK(is_zero(detail::dot(ef.dir, fr.normal)));
      }
    }
  }
}

TEST_CASE("wachspress on the unit square reduces to bilinears") {
  auto sq = make_polygon({pt2(0, 0), pt2(1, 0), pt2(1, 1), pt2(0, 1)});
  REQUIRE(sq.xi.size() == 4);
  for (const auto& x : sq.xi) CHECK(x.is_polynomial());
  // xi_0 = (1-x)(1-y)
  Polynomial expect = Polynomial::constant(2, Rational(1));
  expect.add_term({1, 0, 0}, Rational(-1));
  Polynomial onemy = Polynomial::constant(2, Rational(1));
  onemy.add_term({0, 1, 0}, Rational(-1));
  CHECK(equal(sq.xi[0], RationalFunction(expect * onemy)));
}

TEST_CASE("wachspress pentagon: partition of unity and linear reproduction") {
  std::vector<Point> verts = {pt2(0, 0), pt2(2, 0), pt2(3, 2), pt2(1, 4), pt2(-1, 2)};
  auto P = make_polygon(verts);
  RationalFunction sum = RationalFunction::constant(2, Rational(0));
  RationalFunction sx = sum, sy = sum;
  for (int i = 0; i < 5; ++i) {
    sum = sum + P.xi[i];
    sx = sx + verts[i][0] * P.xi[i];
    sy = sy + verts[i][1] * P.xi[i];
  }
  CHECK(equal(sum, RationalFunction::constant(2, Rational(1))));
  CHECK(equal(sx, RationalFunction(Polynomial::variable(2, 0))));
  CHECK(equal(sy, RationalFunction(Polynomial::variable(2, 1))));
  // lambda_i vanishes on its edge and peaks at 1 over the vertices
  for (int i = 0; i < 5; ++i) {
    EdgeFrame ef = P.edge_frame(i);
    CHECK(substitute_affine(P.lambda[i], ef.chart).is_zero());
    Rational mx(0);
    for (const auto& v : verts) mx = std::max(mx, P.lambda[i].eval(v));
    CHECK(mx == Rational(1));
  }
}

TEST_CASE("triangle wachspress are the barycentric coordinates") {
  auto T = make_polygon({pt2(0, 0), pt2(1, 0), pt2(0, 1)});
  for (const auto& x : T.xi) CHECK(x.is_polynomial());
  CHECK(T.xi[1] == RationalFunction(Polynomial::variable(2, 0)));
  CHECK(T.xi[2] == RationalFunction(Polynomial::variable(2, 1)));
}

TEST_CASE("polygon constructor rejects bad input") {
  CHECK_THROWS_AS(make_polygon({pt2(0, 0), pt2(1, 0), pt2(2, 0), pt2(0, 1)}), CollinearVertices);
  CHECK_THROWS_AS(make_polygon({pt2(0, 0), pt2(0, 1), pt2(1, 0)}), NonConvex);  // clockwise
}

TEST_CASE("polygon vertex file") {
  const std::string path = "test_polygon_verts.txt";
  {
    std::ofstream out(path);
    out << "0 0\n1 0\n3/2 1\n1/2 2\n-1/2 1\n";
  }
  auto P = read_polygon_file(path);
  CHECK(P.num_vertices() == 5);
  CHECK(P.vertices[2] == Point{rat(3, 2), rat(1)});
  std::remove(path.c_str());
}

TEST_CASE("face chart composed with its preimage is the identity") {
  auto pyr = make_reference(ElementKind::Pyramid);
  for (int fi = 0; fi < pyr.num_faces(); ++fi) {
    FaceFrame fr = pyr.face_frame(fi);
    AffineMap round = chart_preimage(fr.chart, fr.chart);
    AffineMap id = AffineMap::identity(2);
    CHECK(round.linear == id.linear);
    CHECK(round.offset == id.offset);
  }
}
