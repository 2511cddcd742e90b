// Reference polytopes with oriented subentities and exact frames.
//
// Provides:
//  - make_reference: interval, triangle, square, tetrahedron, cube (hexahedron),
//    prism, pyramid, with fixed reference coordinates
//  - edge/face frames: rational (un-normalized) tangents, normals and affine
//    charts; all trace formulas downstream work with these directions and
//    exact scalar corrections, so no irrational entries ever appear
//  - make_polygon: convex polygons with edge functions lambda_i and Wachspress
//    vertex functions xi_i (one admissible choice of the xi)
//
// Conventions (orientation is an implementation choice):
//  - edges are directed from lower to higher vertex index
//  - face loops are listed so that quad charts take t along the element z-axis
//    on side faces; charts are v0 + s(v1-v0) + t(vlast-v0)

#ifndef DERHAM_GEOMETRY_HPP
#define DERHAM_GEOMETRY_HPP

#include <array>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "derham/errors.hpp"
#include "derham/qlinalg.hpp"
#include "derham/ratfun.hpp"

namespace derham {

enum class ElementKind { Interval, Triangle, Square, Polygon, Tet, Cube, Prism, Pyramid };

inline std::string kind_name(ElementKind k) {
  switch (k) {
    case ElementKind::Interval: return "interval";
    case ElementKind::Triangle: return "triangle";
    case ElementKind::Square: return "square";
    case ElementKind::Polygon: return "polygon";
    case ElementKind::Tet: return "tet";
    case ElementKind::Cube: return "cube";
    case ElementKind::Prism: return "prism";
    case ElementKind::Pyramid: return "pyramid";
  }
  return "?";
}

using Point = std::vector<Rational>;

struct Edge {
  int a, b;  // vertex indices, a < b
};

struct Face {
  std::vector<int> loop;  // vertex loop; loop[1]-loop[0] and loop.back()-loop[0] span
};

struct EdgeFrame {
  AffineMap chart;  // [0,1] -> element coordinates
  Point dir;        // endpoint difference (un-normalized tangent)
};

struct FaceFrame {
  AffineMap chart;     // (s,t) in a 2D reference shape -> 3D face plane
  Point t1, t2;        // chart spans
  Point normal;        // t1 x t2, rational, un-normalized
  bool outward;        // whether `normal` points out of the element
  ElementKind domain;  // Triangle or Square
};

namespace detail {
inline Point cross3(const Point& a, const Point& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline Rational dot(const Point& a, const Point& b) {
  Rational s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}
inline Point sub(const Point& a, const Point& b) {
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}
}  // namespace detail

class ReferenceElement {
 public:
  ElementKind kind = ElementKind::Interval;
  int dim = 1;
  std::vector<Point> vertices;
  std::vector<Edge> edges;
  std::vector<Face> faces;          // 3D only
  std::vector<FactorPtr> factors;   // registered denominator factors

  // polygon data (kind == Polygon)
  std::vector<Polynomial> lambda;        // per edge: vanishes on e_i, max 1 on closure
  std::vector<RationalFunction> xi;      // per vertex: Wachspress coordinates

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_faces() const { return static_cast<int>(faces.size()); }

  EdgeFrame edge_frame(int e) const {
    const Point& pa = vertices[static_cast<std::size_t>(edges[e].a)];
    const Point& pb = vertices[static_cast<std::size_t>(edges[e].b)];
    EdgeFrame f;
    f.chart.dom_dim = 1;
    f.chart.cod_dim = dim;
    f.chart.offset = pa;
    f.chart.linear.assign(static_cast<std::size_t>(dim), {Rational(0)});
    f.dir = detail::sub(pb, pa);
    for (int i = 0; i < dim; ++i) f.chart.linear[static_cast<std::size_t>(i)][0] = f.dir[static_cast<std::size_t>(i)];
    return f;
  }

  FaceFrame face_frame(int fi) const {
    const Face& f = faces[static_cast<std::size_t>(fi)];
    FaceFrame fr;
    const Point& v0 = vertices[static_cast<std::size_t>(f.loop[0])];
    fr.t1 = detail::sub(vertices[static_cast<std::size_t>(f.loop[1])], v0);
    fr.t2 = detail::sub(vertices[static_cast<std::size_t>(f.loop.back())], v0);
    fr.normal = detail::cross3(fr.t1, fr.t2);
    fr.domain = f.loop.size() == 3 ? ElementKind::Triangle : ElementKind::Square;
    fr.chart.dom_dim = 2;
    fr.chart.cod_dim = 3;
    fr.chart.offset = v0;
    fr.chart.linear.assign(3, std::vector<Rational>(2, Rational(0)));
    for (int i = 0; i < 3; ++i) {
      fr.chart.linear[static_cast<std::size_t>(i)][0] = fr.t1[static_cast<std::size_t>(i)];
      fr.chart.linear[static_cast<std::size_t>(i)][1] = fr.t2[static_cast<std::size_t>(i)];
    }
    // outward test against the element centroid
    Point centroid(3, Rational(0)), fcent(3, Rational(0));
    for (const auto& v : vertices)
      for (int i = 0; i < 3; ++i) centroid[static_cast<std::size_t>(i)] += v[static_cast<std::size_t>(i)];
    for (int i = 0; i < 3; ++i) centroid[static_cast<std::size_t>(i)] /= static_cast<int>(vertices.size());
    for (int vi : f.loop)
      for (int i = 0; i < 3; ++i) fcent[static_cast<std::size_t>(i)] += vertices[static_cast<std::size_t>(vi)][static_cast<std::size_t>(i)];
    for (int i = 0; i < 3; ++i) fcent[static_cast<std::size_t>(i)] /= static_cast<int>(f.loop.size());
    fr.outward = sgn(detail::dot(fr.normal, detail::sub(fcent, centroid))) > 0;
    return fr;
  }

  // Element edges lying on face fi, as element edge indices.
  std::vector<int> face_edges(int fi) const {
    const auto& loop = faces[static_cast<std::size_t>(fi)].loop;
    std::vector<int> out;
    for (std::size_t i = 0; i < loop.size(); ++i) {
      int a = loop[i], b = loop[(i + 1) % loop.size()];
      if (a > b) std::swap(a, b);
      for (int e = 0; e < num_edges(); ++e)
        if (edges[static_cast<std::size_t>(e)].a == a && edges[static_cast<std::size_t>(e)].b == b) out.push_back(e);
    }
    return out;
  }

  std::vector<int> faces_of_edge(int e) const {
    std::vector<int> out;
    for (int fi = 0; fi < num_faces(); ++fi)
      for (int fe : face_edges(fi))
        if (fe == e) out.push_back(fi);
    return out;
  }

  // Registered factors composed onto a face chart (constants drop out).
  std::vector<FactorPtr> face_factors(int fi) const {
    return composed_factors(face_frame(fi).chart);
  }
  std::vector<FactorPtr> edge_factors(int e) const {
    return composed_factors(edge_frame(e).chart);
  }

 private:
  std::vector<FactorPtr> composed_factors(const AffineMap& chart) const {
    std::vector<FactorPtr> out;
    for (const auto& f : factors) {
      Polynomial comp = substitute_affine(f->poly, chart);
      if (!comp.is_constant() && !comp.is_zero()) out.push_back(make_factor(f->name, std::move(comp)));
    }
    return out;
  }
};

inline Point pt1(long a) { return {rat(a)}; }
inline Point pt2(long a, long b) { return {rat(a), rat(b)}; }
inline Point pt3(long a, long b, long c) { return {rat(a), rat(b), rat(c)}; }

inline ReferenceElement make_reference(ElementKind kind) {
  ReferenceElement K;
  K.kind = kind;
  switch (kind) {
    case ElementKind::Interval:
      K.dim = 1;
      K.vertices = {pt1(0), pt1(1)};
      break;
    case ElementKind::Triangle:
      K.dim = 2;
      K.vertices = {pt2(0, 0), pt2(1, 0), pt2(0, 1)};
      K.edges = {{0, 1}, {1, 2}, {0, 2}};
      break;
    case ElementKind::Square:
      K.dim = 2;
      K.vertices = {pt2(0, 0), pt2(1, 0), pt2(1, 1), pt2(0, 1)};
      K.edges = {{0, 1}, {1, 2}, {2, 3}, {0, 3}};
      break;
    case ElementKind::Tet:
      K.dim = 3;
      K.vertices = {pt3(0, 0, 0), pt3(1, 0, 0), pt3(0, 1, 0), pt3(0, 0, 1)};
      K.edges = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
      K.faces = {{{0, 2, 1}}, {{0, 1, 3}}, {{0, 3, 2}}, {{1, 2, 3}}};
      break;
    case ElementKind::Cube:
      K.dim = 3;
      K.vertices = {pt3(0, 0, 0), pt3(1, 0, 0), pt3(1, 1, 0), pt3(0, 1, 0),
                    pt3(0, 0, 1), pt3(1, 0, 1), pt3(1, 1, 1), pt3(0, 1, 1)};
      K.edges = {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {4, 5}, {5, 6},
                 {6, 7}, {4, 7}, {0, 4}, {1, 5}, {2, 6}, {3, 7}};
      // side-face charts take t along z
      K.faces = {{{0, 1, 2, 3}},    // z=0
                 {{4, 5, 6, 7}},    // z=1
                 {{0, 1, 5, 4}},    // y=0
                 {{1, 2, 6, 5}},    // x=1
                 {{3, 2, 6, 7}},    // y=1
                 {{0, 3, 7, 4}}};   // x=0
      break;
    case ElementKind::Prism:
      K.dim = 3;
      K.vertices = {pt3(0, 0, 0), pt3(1, 0, 0), pt3(0, 1, 0),
                    pt3(0, 0, 1), pt3(1, 0, 1), pt3(0, 1, 1)};
      K.edges = {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}, {0, 3}, {1, 4}, {2, 5}};
      K.faces = {{{0, 1, 2}},       // z=0
                 {{3, 4, 5}},       // z=1
                 {{0, 1, 4, 3}},    // y=0
                 {{1, 2, 5, 4}},    // x+y=1
                 {{0, 2, 5, 3}}};   // x=0
      break;
    case ElementKind::Pyramid: {
      K.dim = 3;
      K.vertices = {pt3(0, 0, 0), pt3(1, 0, 0), pt3(1, 1, 0), pt3(0, 1, 0), pt3(0, 0, 1)};
      K.edges = {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {0, 4}, {1, 4}, {2, 4}, {3, 4}};
      K.faces = {{{0, 1, 2, 3}},    // base z=0
                 {{0, 1, 4}},       // y=0
                 {{1, 2, 4}},       // x+z=1
                 {{2, 3, 4}},       // y+z=1
                 {{0, 3, 4}}};      // x=0
      Polynomial one_minus_z = Polynomial::constant(3, Rational(1));
      one_minus_z.add_term({0, 0, 1}, Rational(-1));
      K.factors.push_back(make_factor("(1-z)", std::move(one_minus_z)));
      break;
    }
    case ElementKind::Polygon:
      throw BadSpec("make_reference: use make_polygon for polygons");
  }
  return K;
}

// Signed cross of (b-a, c-a).
inline Rational cross2(const Point& a, const Point& b, const Point& c) {
  return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

// Convex polygon with Wachspress vertex functions.
//
// lambda_i is the normalized linear function vanishing on edge e_i
// (e_i joins v_i and v_{i+1}); xi_i are the Wachspress coordinates with the
// adjoint W as their single registered denominator.
inline ReferenceElement make_polygon(const std::vector<Point>& verts) {
  const int ne = static_cast<int>(verts.size());
  if (ne < 3) throw BadSpec("make_polygon: need at least 3 vertices");
  ReferenceElement K;
  K.kind = ElementKind::Polygon;
  K.dim = 2;
  K.vertices = verts;
  for (int i = 0; i < ne; ++i) {
    Edge e{i, (i + 1) % ne};
    if (e.a > e.b) std::swap(e.a, e.b);
    K.edges.push_back(e);
  }
  // strict convexity, counter-clockwise
  for (int i = 0; i < ne; ++i) {
    const Rational c = cross2(verts[static_cast<std::size_t>(i)],
                              verts[static_cast<std::size_t>((i + 1) % ne)],
                              verts[static_cast<std::size_t>((i + 2) % ne)]);
    if (sgn(c) == 0) throw CollinearVertices("make_polygon: collinear vertices");
    if (sgn(c) < 0) throw NonConvex("make_polygon: vertices not strictly convex ccw");
  }

  // edge line functions, positive inside
  std::vector<Polynomial> ell;
  for (int i = 0; i < ne; ++i) {
    const Point& a = verts[static_cast<std::size_t>(i)];
    const Point& b = verts[static_cast<std::size_t>((i + 1) % ne)];
    Polynomial p(2);
    p.add_term({1, 0, 0}, -(b[1] - a[1]));
    p.add_term({0, 1, 0}, b[0] - a[0]);
    p.add_term({0, 0, 0}, (b[1] - a[1]) * a[0] - (b[0] - a[0]) * a[1]);
    ell.push_back(std::move(p));
  }
  // lambda_i: scaled so the max over the closure (attained at a vertex) is 1
  for (int i = 0; i < ne; ++i) {
    Rational mx(0);
    for (const auto& v : verts) {
      Rational val = ell[static_cast<std::size_t>(i)].eval(v);
      if (val > mx) mx = val;
    }
    K.lambda.push_back(Rational(1) / mx * ell[static_cast<std::size_t>(i)]);
  }
  // Wachspress weights w_i = A(v_{i-1},v_i,v_{i+1}) * prod_{j != i-1,i} ell_j
  std::vector<Polynomial> w;
  Polynomial W(2);
  for (int i = 0; i < ne; ++i) {
    const int prev = (i + ne - 1) % ne;
    Polynomial wi = Polynomial::constant(
        2, cross2(verts[static_cast<std::size_t>(prev)], verts[static_cast<std::size_t>(i)],
                  verts[static_cast<std::size_t>((i + 1) % ne)]));
    for (int j = 0; j < ne; ++j)
      if (j != prev && j != i) wi = wi * ell[static_cast<std::size_t>(j)];
    W += wi;
    w.push_back(std::move(wi));
  }
  if (W.is_constant()) {
    const Rational c = W.constant_value();
    for (int i = 0; i < ne; ++i) K.xi.emplace_back(Rational(1) / c * w[static_cast<std::size_t>(i)]);
  } else {
    FactorPtr Wf = make_factor("W", W);
    K.factors.push_back(Wf);
    for (int i = 0; i < ne; ++i)
      K.xi.push_back(RationalFunction::quotient(w[static_cast<std::size_t>(i)], Wf, 1));
  }
  // construction checks for conditions (L.1)-(L.3)
  for (int i = 0; i < ne; ++i)
    for (int j = 0; j < ne; ++j) {
      const Rational v = K.xi[static_cast<std::size_t>(i)].eval(verts[static_cast<std::size_t>(j)]);
      if (v != Rational(i == j ? 1 : 0))
        throw BadSpec("make_polygon: xi_i(v_j) != delta_ij");
    }
  RationalFunction sum = RationalFunction::constant(2, Rational(0));
  for (const auto& x : K.xi) sum = sum + x;
  if (!equal(sum, RationalFunction::constant(2, Rational(1))))
    throw BadSpec("make_polygon: xi do not sum to 1");
  for (int i = 0; i < ne; ++i) {
    EdgeFrame ef = K.edge_frame(i);
    for (const auto& x : K.xi) {
      RationalFunction tr = x.substitute_affine(ef.chart);
      if (!tr.is_polynomial() || tr.num().degree() > 1)
        throw BadSpec("make_polygon: xi edge trace not linear");
    }
  }
  return K;
}

// Polygon vertex file: one vertex per line, coordinates as rationals `p/q`.
inline ReferenceElement read_polygon_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open polygon file: " + path);
  std::vector<Point> verts;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string xs, ys;
    if (!(ss >> xs >> ys)) {
      if (xs.empty()) continue;  // blank line
      throw std::runtime_error("bad polygon vertex line: " + line);
    }
    verts.push_back({parse_rational(xs), parse_rational(ys)});
  }
  return make_polygon(verts);
}

// Exact inverse of an invertible affine map.
inline AffineMap affine_inverse(const AffineMap& m) {
  if (m.dom_dim != m.cod_dim) throw SingularMap("affine_inverse: not square");
  const int n = m.dom_dim;
  QMatrix A(static_cast<std::size_t>(n), static_cast<std::size_t>(2 * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) A(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = m.linear[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    A(static_cast<std::size_t>(i), static_cast<std::size_t>(n + i)) = 1;
  }
  if (detail::echelonize(A, static_cast<std::size_t>(n)).size() != static_cast<std::size_t>(n))
    throw SingularMap("affine_inverse: singular linear part");
  AffineMap inv;
  inv.dom_dim = inv.cod_dim = n;
  inv.linear.assign(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n), Rational(0)));
  inv.offset.assign(static_cast<std::size_t>(n), Rational(0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv.linear[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = A(static_cast<std::size_t>(i), static_cast<std::size_t>(n + j));
  // offset: inv(b) = -A^{-1} b
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv.offset[static_cast<std::size_t>(i)] -= inv.linear[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * m.offset[static_cast<std::size_t>(j)];
  return inv;
}

// chart^{-1} ∘ p for an affine p whose image lies in the chart's plane.
// Solves the (consistent, overdetermined) linear system exactly.
inline AffineMap chart_preimage(const AffineMap& chart, const AffineMap& p) {
  if (chart.cod_dim != p.cod_dim) throw FacesDoNotMatch("chart_preimage: dimension mismatch");
  const int rows = chart.cod_dim, cols = chart.dom_dim;
  QMatrix T(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) T(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = chart.linear[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  AffineMap out;
  out.dom_dim = p.dom_dim;
  out.cod_dim = cols;
  out.linear.assign(static_cast<std::size_t>(cols), std::vector<Rational>(static_cast<std::size_t>(p.dom_dim), Rational(0)));
  out.offset.assign(static_cast<std::size_t>(cols), Rational(0));
  // offset: solve T u = p.offset - chart.offset
  QVector rhs(static_cast<std::size_t>(rows));
  for (int i = 0; i < rows; ++i) rhs[static_cast<std::size_t>(i)] = p.offset[static_cast<std::size_t>(i)] - chart.offset[static_cast<std::size_t>(i)];
  SolveResult s0 = solve_linear(T, rhs);
  for (int i = 0; i < cols; ++i) out.offset[static_cast<std::size_t>(i)] = s0.particular[static_cast<std::size_t>(i)];
  // columns of the linear part
  for (int j = 0; j < p.dom_dim; ++j) {
    for (int i = 0; i < rows; ++i) rhs[static_cast<std::size_t>(i)] = p.linear[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    SolveResult sj = solve_linear(T, rhs);
    for (int i = 0; i < cols; ++i) out.linear[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = sj.particular[static_cast<std::size_t>(i)];
  }
  return out;
}

}  // namespace derham

#endif
