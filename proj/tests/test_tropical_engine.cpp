#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "tp/errors.hpp"
#include "tp/tropical_engine.hpp"

using namespace tp;

namespace {

std::string kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return "";
}

QVec qv(std::initializer_list<long> xs) {
  QVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

// Oracle: brute-force lower-hull check of a candidate simplex, independent of
// the engine's enumeration (uses determinants rather than linear solves).
bool is_lower_simplex(const RegularTriangulation& tri, const std::vector<int>& s) {
  int n = tri.dim;
  // Lifted points as rows (x, lambda, 1); the sign of the (n+2)-determinant
  // with any extra point tells on which side of the lifted hyperplane it lies.
  auto row = [&](int i) {
    QVec r;
    for (auto c : tri.points[i]) r.emplace_back(c);
    r.push_back(tri.lift[i]);
    r.emplace_back(1);
    return r;
  };
  // Orientation reference: a point far above the hyperplane.
  QMat base;
  for (int i : s) base.push_back(row(i));
  QVec up(n + 2, Q(0));
  for (int i : s)
    for (int j = 0; j < n; ++j) up[j] += Q(static_cast<long>(tri.points[i][j])) / (n + 1);
  up[n] = 1000000;
  up[n + 1] = 1;
  QMat m = base;
  m.push_back(up);
  Q ref = det(m);
  if (ref == 0) return false;
  for (int k = 0; k < static_cast<int>(tri.points.size()); ++k) {
    if (std::count(s.begin(), s.end(), k)) continue;
    QMat mk = base;
    mk.push_back(row(k));
    Q dk = det(mk);
    if (dk == 0 || (dk > 0) != (ref > 0)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("cube data: star of 0 consists of the six unit vectors") {
  auto inst = fx::cube();
  auto tri = validate_and_triangulate(inst);
  CHECK(tri.top.size() == 12);
  int z = inst.index_of({0, 0, 0});
  std::set<IVec> nb;
  for (int j : tri.neighbors(z)) nb.insert(inst.point(j));
  CHECK(nb == std::set<IVec>{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}});
  CHECK(tri.margin > 0);
  CHECK(inst.interior_indices().size() == 2);
}

TEST_CASE("standard simplex has no interior point") {
  CHECK(kind_of([] { fx::build(2, {{{0, 0, 0}, 0, 1}, {{1, 0, 0}, 0, 1}, {{0, 1, 0}, 0, 1}, {{0, 0, 1}, 0, 1}}); }) ==
        "MissingInteriorPoint");
}

TEST_CASE("instance validation errors") {
  CHECK(kind_of([] { fx::build(1, {{{1, 0}, 0, 1}, {{-1, 0}, 0, 1}, {{0, 1}, 0, 1}, {{0, -1}, 0, 1}}); }) ==
        "MissingMonomial");
  CHECK(kind_of([] {
          fx::build(1, {{{1, 0}, 0, 1}, {{-1, 0}, 0, 1}, {{0, 1}, 0, 1}, {{0, -1}, 0, 1}, {{0, 0}, 0, 0}});
        }) == "ValidationError");
  CHECK(kind_of([] {
          fx::build(1, {{{1, 0}, 0, 1}, {{1, 0}, 1, 1}, {{-1, 0}, 0, 1}, {{0, 1}, 0, 1}, {{0, -1}, 0, 1}, {{0, 0}, 0, 1}});
        }) == "ValidationError");
}

TEST_CASE("elliptic: nine unimodular cone triangles") {
  auto inst = fx::elliptic();
  auto tri = validate_and_triangulate(inst);
  CHECK(tri.top.size() == 9);
  int z = inst.index_of({0, 0});
  for (auto& t : tri.top) {
    CHECK(std::count(t.begin(), t.end(), z) == 1);
    std::vector<IVec> s;
    for (int i : t) s.push_back(inst.point(i));
    CHECK(normalized_simplex_volume(s) == frac(1, 2));
    CHECK(is_lower_simplex(tri, t));
  }
}

TEST_CASE("elliptic with constant boundary lift is not a triangulation") {
  std::vector<fx::Mono> ms{{{0, 0}, 0, -1}};
  for (IVec b : {IVec{-1, -1}, IVec{0, -1}, IVec{1, -1}, IVec{2, -1}, IVec{-1, 0}, IVec{-1, 1}, IVec{-1, 2},
                 IVec{0, 1}, IVec{1, 0}})
    ms.push_back({b, 1, 1});
  auto inst = fx::build(1, ms);
  CHECK(kind_of([&] { validate_and_triangulate(inst); }) == "NotATriangulation");
  // The dual polytope {mu_m >= mu_0} is still the polar triangle.
  std::vector<Halfspace> h;
  for (auto& c : inst.coeffs)
    if (c.m != IVec{0, 0}) h.push_back({c.m, c.lambda});
  auto verts = enumerate_vertices(RationalPolytope::from_inequalities(2, h));
  std::sort(verts.begin(), verts.end());
  std::vector<QVec> want{qv({-1, -1}), qv({0, 1}), qv({1, 0})};
  CHECK(verts == want);
}

TEST_CASE("non-unimodular lower cell is rejected") {
  // Square [-1,1]^2 with all corners lifted equally and the midpoints high:
  // lower faces are the four triangles conv{0, corner, corner} of area 1.
  std::vector<fx::Mono> ms{{{0, 0}, 0, 1}};
  for (IVec c : {IVec{-1, -1}, IVec{1, -1}, IVec{-1, 1}, IVec{1, 1}}) ms.push_back({c, 1, 1});
  for (IVec e : {IVec{0, -1}, IVec{0, 1}, IVec{-1, 0}, IVec{1, 0}}) ms.push_back({e, 5, 1});
  CHECK(kind_of([&] { validate_and_triangulate(fx::build(1, ms)); }) == "NotUnimodular");
}

TEST_CASE("trop_eval examples") {
  auto inst = fx::cube();
  auto r = trop_eval(inst, qv({0, 0, 0}));
  CHECK(r.value == 0);
  CHECK(r.argmin == std::vector<int>{inst.index_of({0, 0, 0})});
  r = trop_eval(inst, {frac(-1, 2), 0, 0});
  CHECK(r.value == 0);
  CHECK(r.argmin == std::vector<int>{inst.index_of({0, 0, 0})});
  r = trop_eval(inst, qv({-1, 0, 0}));
  CHECK(r.value == 0);
  std::vector<int> both{inst.index_of({0, 0, 0}), inst.index_of({1, 0, 0})};
  std::sort(both.begin(), both.end());
  CHECK(r.argmin == both);
  // Single monomial: lambda + <m, n>.
  ProblemInstance one;
  one.d = 1;
  one.coeffs = {{{2, 3}, frac(1, 2), {1, 0}}};
  CHECK(trop_eval(one, {frac(1, 3), -1}).value == frac(1, 2) + frac(2, 3) - 3);
}

TEST_CASE("cube dual cells") {
  auto inst = fx::cube();
  auto tri = validate_and_triangulate(inst);
  auto tc = dual_complex(tri);
  int z = inst.index_of({0, 0, 0}), e1 = inst.index_of({1, 0, 0});
  const auto& cube = tc.dual_of({z});
  CHECK(cube.bounded);
  CHECK(cube.dim == 3);
  CHECK(cube.poly.vertices.size() == 8);
  for (auto& v : cube.poly.vertices)
    for (auto& c : v) CHECK(abs(c) == 1);
  CHECK(cell_volume(tc, tc.index.at({z})) == 8);
  auto nab = dual_cell_polytope(tri, z);
  CHECK(polytope_volume(nab) == 8);
  CHECK(nab.vertices == cube.poly.vertices);
  const auto& sig = tc.dual_of({z, e1});
  CHECK(sig.dim == 2);
  for (auto& v : sig.poly.vertices) CHECK(v[0] == -1);
  CHECK(cell_volume(tc, tc.index.at({z, e1})) == 4);
  // A vertex cell has volume 1.
  CHECK(cell_volume(tc, tc.index.at(tri.top[0])) == 1);
  // Unbounded cells are rejected.
  int b = inst.index_of({0, 1, 0});
  CHECK(kind_of([&] { cell_volume(tc, tc.index.at({b})); }) == "UnboundedCell");
  CHECK(kind_of([&] { dual_cell_polytope(tri, b); }) == "NotInteriorPoint");
  CHECK_THROWS(tropical_periods(tri, tc));
  try {
    tropical_periods(tri, tc);
  } catch (const Error& e) {
    CHECK(e.kind() == "WrongDimension");
  }
}

TEST_CASE("elliptic tropical period") {
  auto inst = fx::elliptic();
  auto tri = validate_and_triangulate(inst);
  auto tc = dual_complex(tri);
  int z = inst.index_of({0, 0});
  auto per = tropical_periods(tri, tc);
  CHECK(per.size() == 1);
  CHECK(per.at({z, z}) == 3);
  auto nab = dual_cell_polytope(tri, z);
  CHECK(nab.vertices.size() == 9);
}

TEST_CASE("genus-2 tropical periods are symmetric") {
  auto inst = fx::genus2();
  auto tri = validate_and_triangulate(inst);
  auto tc = dual_complex(tri);
  auto w = inst.interior_indices();
  REQUIRE(w.size() == 2);
  auto per = tropical_periods(tri, tc);
  CHECK(per.at({w[0], w[1]}) == per.at({w[1], w[0]}));
  CHECK(per.at({w[0], w[1]}) > 0);
  // Oracle: perimeter of nabla^w from its vertex list in angular order.
  for (int x : w) {
    auto nab = dual_cell_polytope(tri, x);
    auto vs = nab.vertices;
    QVec c{0, 0};
    for (auto& v : vs) c = add(c, v);
    c = scale(c, frac(1, vs.size()));
    std::sort(vs.begin(), vs.end(), [&](const QVec& a, const QVec& b) {
      return std::atan2(Q(a[1] - c[1]).get_d(), Q(a[0] - c[0]).get_d()) <
             std::atan2(Q(b[1] - c[1]).get_d(), Q(b[0] - c[0]).get_d());
    });
    Q perim = 0;
    for (std::size_t i = 0; i < vs.size(); ++i) perim += primitive_lattice_length(vs[i], vs[(i + 1) % vs.size()]);
    CHECK(per.at({x, x}) == perim);
  }
}

TEST_CASE("property: duality is a dimension-reversing, inclusion-reversing bijection") {
  for (auto& [name, inst] : fx::corpus()) {
    CAPTURE(name);
    auto tri = validate_and_triangulate(inst);
    auto tc = dual_complex(tri);
    int n = tri.dim;
    for (int k = 0; k <= n; ++k) {
      int count = 0;
      for (auto& c : tc.cells)
        if (c.dim == n - k) ++count;
      CHECK(count == static_cast<int>(tri.cells_by_dim[k].size()));
    }
    CHECK(tc.cells.size() == tri.cell_dim.size());
    for (auto& a : tc.cells)
      for (auto& b : tc.cells) {
        if (a.tau.size() >= b.tau.size()) continue;
        bool sub = std::includes(b.tau.begin(), b.tau.end(), a.tau.begin(), a.tau.end());
        if (!sub) continue;
        // tau_a subset tau_b  =>  dual(b) is a face of dual(a).
        for (auto& v : b.poly.vertices) CHECK(a.poly.contains(v));
      }
    // Bounded iff tau is not contained in a facet of Delta.
    std::vector<QVec> dv;
    for (auto& v : inst.delta.vertices) dv.push_back(to_qvec(v));
    auto facets = hull_facets(dv);
    for (auto& c : tc.cells) {
      bool on_facet = false;
      for (auto& f : facets) {
        bool all = true;
        for (int i : c.tau) all = all && dot(f.normal, to_qvec(tri.points[i])) + f.offset == 0;
        on_facet = on_facet || all;
      }
      CHECK(c.bounded == !on_facet);
    }
  }
}

TEST_CASE("property: trop(f) is attained exactly on tau over its dual cell") {
  for (auto& [name, inst] : fx::corpus()) {
    CAPTURE(name);
    auto tri = validate_and_triangulate(inst);
    auto tc = dual_complex(tri);
    for (auto& c : tc.cells) {
      if (c.poly.vertices.empty()) continue;
      // Relative-interior sample: vertex centroid plus a share of each ray.
      QVec s(tri.dim, Q(0));
      for (auto& v : c.poly.vertices) s = add(s, v);
      s = scale(s, frac(1, c.poly.vertices.size()));
      for (auto& r : c.rays) s = add(s, r);
      CHECK(trop_eval(inst, s).argmin == c.tau);
      for (auto& v : c.poly.vertices) {
        auto am = trop_eval(inst, v).argmin;
        CHECK(std::includes(am.begin(), am.end(), c.tau.begin(), c.tau.end()));
      }
    }
  }
}

TEST_CASE("property: brute-force lower-hull oracle agrees with the triangulation") {
  for (auto& [name, inst] : fx::corpus()) {
    CAPTURE(name);
    auto tri = validate_and_triangulate(inst);
    for (auto& t : tri.top) CHECK(is_lower_simplex(tri, t));
  }
}

TEST_CASE("property: perturbation within the chamber margin keeps the triangulation") {
  std::mt19937_64 rng(2024);
  for (auto& [name, inst] : fx::corpus()) {
    CAPTURE(name);
    auto tri = validate_and_triangulate(inst);
    for (int trial = 0; trial < 10; ++trial) {
      auto cs = inst.coeffs;
      std::uniform_int_distribution<int> u(-99, 99);
      for (auto& c : cs) c.lambda += tri.margin * frac(u(rng), 100);
      auto tri2 = validate_and_triangulate(ProblemInstance::make(inst.d, cs));
      CHECK(tri2.top == tri.top);
    }
  }
}

TEST_CASE("property: affine shift of lambda translates nabla^w") {
  auto inst = fx::cube();
  auto tri = validate_and_triangulate(inst);
  int z = inst.index_of({0, 0, 0});
  auto base = dual_cell_polytope(tri, z);
  QVec a{frac(1, 2), -2, frac(1, 3)};
  auto cs = inst.coeffs;
  for (auto& c : cs) c.lambda += dot(c.m, a) + 5;
  auto tri2 = validate_and_triangulate(ProblemInstance::make(inst.d, cs));
  CHECK(tri2.top == tri.top);
  auto moved = dual_cell_polytope(tri2, z);
  REQUIRE(moved.vertices.size() == base.vertices.size());
  for (std::size_t i = 0; i < base.vertices.size(); ++i) CHECK(moved.vertices[i] == sub(base.vertices[i], a));
}

TEST_CASE("support of points of l*Delta") {
  auto inst = fx::cube();
  auto tri = validate_and_triangulate(inst);
  auto s = tri.support_of({1, 0, 0}, 1);
  CHECK(s.cell == std::vector<int>{inst.index_of({1, 0, 0})});
  CHECK(s.weights == std::vector<std::int64_t>{1});
  s = tri.support_of({1, 1, 0}, 2);
  CHECK(s.cell.size() == 2);
  CHECK(s.weights == std::vector<std::int64_t>{1, 1});
  CHECK_THROWS(tri.support_of({5, 0, 0}, 1));
}
