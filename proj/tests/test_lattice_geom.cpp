#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "tp/errors.hpp"
#include "tp/lattice_geom.hpp"

using namespace tp;

namespace {

QVec qv(std::initializer_list<long> xs) {
  QVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

// Oracle: 2-D area by the shoelace formula after angular sorting.
Q shoelace(std::vector<QVec> pts) {
  double cx = 0, cy = 0;
  for (auto& p : pts) {
    cx += p[0].get_d();
    cy += p[1].get_d();
  }
  cx /= pts.size();
  cy /= pts.size();
  std::sort(pts.begin(), pts.end(), [&](const QVec& a, const QVec& b) {
    return std::atan2(a[1].get_d() - cy, a[0].get_d() - cx) < std::atan2(b[1].get_d() - cy, b[0].get_d() - cx);
  });
  Q s = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto& a = pts[i];
    auto& b = pts[(i + 1) % pts.size()];
    s += a[0] * b[1] - a[1] * b[0];
  }
  return abs(s) / 2;
}

// Oracle: 3-D volume by coning each facet polygon (fan-triangulated in
// angular order) to the vertex centroid.
Q cone_volume_3d(const std::vector<QVec>& verts) {
  QVec c(3, Q(0));
  for (auto& v : verts) c = add(c, v);
  c = scale(c, frac(1, verts.size()));
  Q vol = 0;
  for (auto& f : hull_facets(verts)) {
    std::vector<QVec> on;
    for (auto& v : verts)
      if (dot(f.normal, v) + f.offset == 0) on.push_back(v);
    // Angular order around the facet centroid in a plane basis.
    QVec fc(3, Q(0));
    for (auto& v : on) fc = add(fc, v);
    fc = scale(fc, frac(1, on.size()));
    QVec u = sub(on[0], fc);
    QVec n = to_qvec(f.normal);
    QVec w{n[1] * u[2] - n[2] * u[1], n[2] * u[0] - n[0] * u[2], n[0] * u[1] - n[1] * u[0]};
    std::sort(on.begin(), on.end(), [&](const QVec& a, const QVec& b) {
      QVec da = sub(a, fc), db = sub(b, fc);
      return std::atan2(dot(da, w).get_d(), dot(da, u).get_d()) < std::atan2(dot(db, w).get_d(), dot(db, u).get_d());
    });
    for (std::size_t i = 1; i + 1 < on.size(); ++i) vol += simplex_volume({c, on[0], on[i], on[i + 1]});
  }
  return vol;
}

}  // namespace

TEST_CASE("normalized simplex volume examples") {
  CHECK(normalized_simplex_volume({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}) == frac(1, 6));
  CHECK(normalized_simplex_volume({{0, 0, 0}, {2, 0, 0}, {0, 1, 0}, {0, 0, 1}}) == frac(2, 6));
  CHECK(normalized_simplex_volume({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {1, 1, 1}}) == frac(1, 6));
  CHECK_THROWS_AS(normalized_simplex_volume({{0, 0}, {1, 1}, {2, 2}}), Error);
}

TEST_CASE("polytope volume examples") {
  auto sq = RationalPolytope::from_vertices({qv({0, 0}), qv({1, 0}), qv({0, 1}), qv({1, 1})});
  CHECK(polytope_volume(sq) == 1);
  auto tri = RationalPolytope::from_vertices({qv({1, 0}), qv({0, 1}), qv({-1, -1})});
  CHECK(polytope_volume(tri) == shoelace(tri.vertices));
  CHECK(polytope_volume(tri) == frac(3, 2));
  auto big = RationalPolytope::from_vertices({qv({-1, -1}), qv({1, -1}), qv({-1, 1}), qv({1, 1})});
  CHECK(polytope_volume(big) == 4);
  // Lower-dimensional face {-1} x [-1,1]^2 measured in its own lattice.
  auto face = RationalPolytope::from_vertices(
      {qv({-1, -1, -1}), qv({-1, 1, -1}), qv({-1, -1, 1}), qv({-1, 1, 1})});
  CHECK(polytope_volume(face) == 4);
  // A diagonal segment from (0,0) to (2,2) has lattice length 2.
  CHECK(polytope_volume(RationalPolytope::from_vertices({qv({0, 0}), qv({2, 2})})) == 2);
  CHECK(polytope_volume(RationalPolytope::from_vertices({qv({3, 1})})) == 1);
}

TEST_CASE("H-described polytopes") {
  std::vector<Halfspace> cube;
  for (int i = 0; i < 3; ++i)
    for (int s : {1, -1}) {
      IVec n(3, 0);
      n[i] = s;
      cube.push_back({n, Q(1)});
    }
  auto p = RationalPolytope::from_inequalities(3, cube);
  CHECK(is_bounded(p));
  CHECK(enumerate_vertices(p).size() == 8);
  CHECK(polytope_volume(p) == 8);
  std::vector<Halfspace> half(cube.begin(), cube.end() - 1);
  auto u = RationalPolytope::from_inequalities(3, half);
  CHECK_FALSE(is_bounded(u));
  CHECK_THROWS_AS(polytope_volume(u), Error);
}

TEST_CASE("interior lattice points examples") {
  auto cross = LatticePolytope::hull({{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
  CHECK(interior_lattice_points(cross) == std::vector<IVec>{{0, 0}});
  auto cube7 = LatticePolytope::hull({{2, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}});
  auto w = interior_lattice_points(cube7);
  CHECK(std::count(w.begin(), w.end(), IVec{0, 0, 0}) == 1);
  CHECK(std::count(w.begin(), w.end(), IVec{1, 0, 0}) == 1);
  auto ell = LatticePolytope::hull({{-1, -1}, {2, -1}, {-1, 2}, {0, 0}, {1, -1}});
  CHECK(ell.vertices.size() == 3);
  CHECK(lattice_points(ell).size() == 10);
  CHECK(interior_lattice_points(ell) == std::vector<IVec>{{0, 0}});
}

TEST_CASE("primitive lattice length examples") {
  CHECK(primitive_lattice_length(qv({0, 0}), qv({3, 0})) == 3);
  CHECK(primitive_lattice_length(qv({0, 0}), qv({2, 4})) == 2);
  CHECK(primitive_lattice_length({frac(1, 2), Q(0)}, {Q(0), frac(1, 2)}) == frac(1, 2));
  CHECK_THROWS_AS(primitive_lattice_length(qv({1, 1}), qv({1, 1})), Error);
}

TEST_CASE("property: placing triangulation volume matches independent oracles") {
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<int> coord(-4, 4);
  for (int trial = 0; trial < 40; ++trial) {
    int dim = 2 + trial % 2;
    std::vector<QVec> pts;
    for (int i = 0; i < 5 + trial % 5; ++i) {
      QVec p;
      for (int j = 0; j < dim; ++j) p.emplace_back(coord(rng));
      pts.push_back(p);
    }
    if (affine_dim(pts) != dim) continue;
    auto simp = placing_triangulation(pts);
    Q sum = 0;
    for (auto& s : simp) {
      std::vector<QVec> sp;
      for (int i : s) sp.push_back(pts[i]);
      sum += simplex_volume(sp);
    }
    // Hull vertices for the oracles.
    std::vector<IVec> ip;
    for (auto& p : pts) {
      IVec v;
      for (auto& c : p) v.push_back(to_int64(c));
      ip.push_back(v);
    }
    auto hull = LatticePolytope::hull(ip);
    std::vector<QVec> hv;
    for (auto& v : hull.vertices) hv.push_back(to_qvec(v));
    Q oracle = dim == 2 ? shoelace(hv) : cone_volume_3d(hv);
    CHECK(sum == oracle);
    CHECK(polytope_volume(RationalPolytope::from_vertices(pts)) == oracle);
  }
}

TEST_CASE("property: interior points of l*P equal scaled enumeration") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coord(-2, 2);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<IVec> pts;
    for (int i = 0; i < 5; ++i) pts.push_back({coord(rng), coord(rng)});
    auto p = LatticePolytope::hull(pts);
    if (p.dim != 2) continue;
    for (int l = 1; l <= 3; ++l) {
      std::vector<IVec> scaled;
      for (auto& v : p.vertices) scaled.push_back(scale(v, l));
      CHECK(interior_lattice_points(p, l) == interior_lattice_points(LatticePolytope::hull(scaled), 1));
    }
  }
}

TEST_CASE("property: primitive length invariant under lattice translations and unimodular maps") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> coord(-5, 5);
  for (int trial = 0; trial < 50; ++trial) {
    QVec a{frac(coord(rng), 3), frac(coord(rng), 2)};
    QVec b{frac(coord(rng), 3), frac(coord(rng), 2)};
    if (a == b) continue;
    Q len = primitive_lattice_length(a, b);
    QVec t{Q(coord(rng)), Q(coord(rng))};
    CHECK(primitive_lattice_length(add(a, t), add(b, t)) == len);
    // Random unimodular matrix from elementary operations.
    long m[2][2] = {{1, 0}, {0, 1}};
    for (int k = 0; k < 4; ++k) {
      long f = coord(rng);
      int r = k % 2;
      for (int c = 0; c < 2; ++c) m[r][c] += f * m[1 - r][c];
    }
    auto apply = [&](const QVec& x) {
      return QVec{Q(m[0][0]) * x[0] + Q(m[0][1]) * x[1], Q(m[1][0]) * x[0] + Q(m[1][1]) * x[1]};
    };
    CHECK(primitive_lattice_length(apply(a), apply(b)) == len);
  }
}
