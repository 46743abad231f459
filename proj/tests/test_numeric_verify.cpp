#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "tp/errors.hpp"
#include "tp/gamma_asymptotics.hpp"
#include "tp/numeric_verify.hpp"
#include "tp/toric_calculus.hpp"

using namespace tp;

namespace {

struct Setup {
  ProblemInstance inst;
  RegularTriangulation tri;
  explicit Setup(ProblemInstance i) : inst(std::move(i)), tri(validate_and_triangulate(inst)) {}
  int idx(const IVec& m) const { return inst.index_of(m); }
};

std::vector<int> edge_of(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

std::complex<double> sphere_symbolic(const Setup& s, int l, const IVec& v, int w, double t) {
  return sphere_period_asymptotics(s.inst, s.tri, star_fan(s.tri, w), l, v, principal_branches(s.inst)).eval(t);
}

}  // namespace

TEST_CASE("cube sphere sweep approaches 4 L^2 - 4 zeta(2)") {
  Setup s(fx::cube());
  CycleSpec cyc;
  cyc.w = s.idx({0, 0, 0});
  auto table = convergence_sweep(s.inst, s.tri, 1, {1, 0, 0}, cyc, {1e-1, 1e-2, 1e-3});
  REQUIRE(table.rows.size() == 3);
  CHECK(table.decreasing);
  auto& last = table.rows.back();
  double L = std::log(1e3);
  CHECK(last.symbolic.real() == doctest::Approx(4 * L * L - 4 * M_PI * M_PI / 6).epsilon(1e-12));
  CHECK(last.abs_err / std::abs(last.symbolic) < 0.01);
  CHECK(last.est_quad_err < 1e-6);
  CHECK(std::abs(last.numeric.imag()) < 1e-12);
  CHECK(table.slope > 0);
}

TEST_CASE("elliptic sphere converges to 3 L") {
  Setup s(fx::elliptic());
  int w = s.idx({0, 0});
  double prev = 1e300;
  for (double t : {1e-2, 1e-3, 1e-4, 1e-6}) {
    auto r = real_cycle_quadrature(s.inst, s.tri, 1, {0, 0}, w, t);
    double err = std::abs(r.value - sphere_symbolic(s, 1, {0, 0}, w, t));
    CAPTURE(t);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 0.05);
}

TEST_CASE("second-order forms on the cube sphere") {
  Setup s(fx::cube());
  int w = s.idx({0, 0, 0});
  for (IVec v : {IVec{0, 0, 0}, IVec{1, 0, 0}, IVec{0, 1, 0}}) {
    double prev = 1e300;
    for (double t : {1e-2, 1e-3, 1e-4}) {
      auto r = real_cycle_quadrature(s.inst, s.tri, 2, v, w, t);
      auto sym = sphere_symbolic(s, 2, v, w, t);
      double err = std::abs(r.value - sym);
      CAPTURE(to_string(v));
      CAPTURE(t);
      CHECK(err < prev);
      prev = err;
    }
    CHECK(prev < 0.05 * (1 + std::abs(sphere_symbolic(s, 2, v, w, 1e-4))));
  }
}

TEST_CASE("quadrature controls") {
  Setup s(fx::cube());
  int w = s.idx({0, 0, 0});
  IVec v{1, 0, 0};
  double t = 1e-2;
  auto base = real_cycle_quadrature(s.inst, s.tri, 1, v, w, t);

  SUBCASE("orientation flip negates") {
    QuadratureConfig c;
    c.orientation = -1;
    auto r = real_cycle_quadrature(s.inst, s.tri, 1, v, w, t, c);
    CHECK(std::abs(r.value + base.value) < 1e-12 * std::abs(base.value));
  }
  SUBCASE("projection center does not matter") {
    for (double shift : {0.2, 0.5}) {
      QuadratureConfig c;
      c.center_shift = shift;
      auto r = real_cycle_quadrature(s.inst, s.tri, 1, v, w, t, c);
      CHECK(std::abs(r.value - base.value) < 1e-9 * std::abs(base.value));
    }
  }
  SUBCASE("error estimate tracks refinement") {
    QuadratureConfig coarse;
    coarse.panels = 4;
    coarse.gauss_order = 4;
    auto r = real_cycle_quadrature(s.inst, s.tri, 1, v, w, t, coarse);
    double actual = std::abs(r.value - base.value);
    CHECK(actual <= r.error_estimate);
    coarse.panels = 8;
    auto r2 = real_cycle_quadrature(s.inst, s.tri, 1, v, w, t, coarse);
    CHECK(std::abs(r2.value - base.value) < actual);
  }
}

TEST_CASE("torus quadrature converges to -(2 pi i)^d") {
  for (auto& [name, inst] : fx::corpus()) {
    Setup s(inst);
    for (int w : s.inst.interior_indices())
      for (int m : s.tri.neighbors(w)) {
        CycleSpec cyc;
        cyc.kind = CycleSpec::Kind::Torus;
        cyc.w = w;
        cyc.edge = edge_of(w, m);
        // Corrections are genuine powers of t; small lattice margins (elliptic,
        // bipyramid) need t well below 1e-4 before the slices separate roots.
        auto table = convergence_sweep(s.inst, s.tri, 1, s.inst.point(w), cyc, {1e-6, 1e-7, 1e-8});
        auto exact = std::pow(std::complex<double>(0, 2 * M_PI), s.inst.d) * -1.0;
        CAPTURE(std::string(name));
        CAPTURE(w);
        CAPTURE(m);
        CHECK(std::abs(table.rows[0].symbolic - exact) < 1e-12);
        CHECK(table.rows.back().abs_err / std::abs(exact) < 1e-6);
        CHECK(table.decreasing);
        CHECK(table.rows.back().est_quad_err < 1e-8);
        CHECK(table.slope > 0.5);
      }
  }
}

TEST_CASE("torus orientation and node count") {
  Setup s(fx::genus2());
  int w = s.idx({1, 1});
  int m = s.tri.neighbors(w)[0];
  auto base = torus_cycle_quadrature(s.inst, s.tri, 1, {1, 1}, edge_of(w, m), w, 1e-3);
  QuadratureConfig c;
  c.orientation = -1;
  auto flipped = torus_cycle_quadrature(s.inst, s.tri, 1, {1, 1}, edge_of(w, m), w, 1e-3, c);
  CHECK(std::abs(base.value + flipped.value) < 1e-12);
  c.orientation = 1;
  c.panels = 64;
  auto fine = torus_cycle_quadrature(s.inst, s.tri, 1, {1, 1}, edge_of(w, m), w, 1e-3, c);
  CHECK(std::abs(fine.value - base.value) < 1e-12);
}

TEST_CASE("numeric errors") {
  Setup g(fx::genus2());
  CHECK_THROWS_AS(real_cycle_quadrature(g.inst, g.tri, 1, {1, 1}, g.idx({1, 1}), 1e-3), Error);
  try {
    require_positive_family(g.inst, g.idx({1, 1}));
    FAIL("expected NotPositiveFamily");
  } catch (const Error& e) {
    CHECK(e.kind() == "NotPositiveFamily");
  }
  Setup e(fx::elliptic());
  int w = e.idx({0, 0});
  auto kind_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& err) {
      return err.kind();
    }
    return std::string("none");
  };
  CHECK(kind_of([&] { real_cycle_quadrature(e.inst, e.tri, 1, {0, 0}, w, 0.9); }) == "ChartGap");
  CHECK(kind_of([&] { real_cycle_quadrature(e.inst, e.tri, 1, {0, 0}, w, 1.5); }) == "BadParameter");
  CHECK(kind_of([&] { real_cycle_quadrature(e.inst, e.tri, 1, {0, 0}, e.idx({1, 0}), 1e-3); }) ==
        "NotInteriorPoint");
  CHECK(kind_of([&] { torus_cycle_quadrature(e.inst, e.tri, 1, {0, 0}, {0, 1, 2}, w, 1e-3); }) == "BadCell");
  CycleSpec cyc;
  cyc.w = w;
  CHECK(kind_of([&] { convergence_sweep(e.inst, e.tri, 1, {0, 0}, cyc, {1e-3, 1e-2}); }) == "BadParameter");
}

TEST_CASE("sweep csv") {
  Setup s(fx::elliptic());
  CycleSpec cyc;
  cyc.w = s.idx({0, 0});
  auto table = convergence_sweep(s.inst, s.tri, 1, {0, 0}, cyc, {1e-2, 1e-3});
  auto csv = table.to_csv();
  CHECK(csv.rfind("t,numeric_re,numeric_im,symbolic_re,symbolic_im,abs_err,est_quad_err\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(table.to_csv() == csv);
}
