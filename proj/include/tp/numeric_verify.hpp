#pragma once

#include <complex>
#include <string>
#include <vector>

#include "tp/tropical_engine.hpp"

namespace tp {

struct QuadratureConfig {
  int panels = 16;          // composite panels per simplex edge (sphere) or trapezoid nodes / 4 (torus)
  int gauss_order = 10;     // Gauss-Legendre nodes per panel and axis
  double center_shift = 0;  // projection center moves this fraction toward the first vertex of the dual cell
  double newton_tol = 1e-14;
  int max_newton = 200;
  int orientation = 1;      // -1 reverses the cycle
};

struct NumericResult {
  std::complex<double> value;
  double error_estimate = 0;  // |I(n) - I(n/2)| from halving the node counts
};

// Throws NotPositiveFamily unless c_w < 0 and c_m > 0 for every other m.
void require_positive_family(const ProblemInstance& inst, int w);

// Residue period over the positive real sphere around w, in the sign
// convention of the sphere expansions.
NumericResult real_cycle_quadrature(const ProblemInstance& inst, const RegularTriangulation& tri, int l,
                                    const IVec& v, int w, double t, const QuadratureConfig& cfg = {});

// Residue period over the torus fibre above the dual cell of `edge`, oriented
// by w_orientation; any nonzero coefficients.
NumericResult torus_cycle_quadrature(const ProblemInstance& inst, const RegularTriangulation& tri, int l,
                                     const IVec& v, std::vector<int> edge, int w_orientation, double t,
                                     const QuadratureConfig& cfg = {});

struct CycleSpec {
  enum class Kind { Sphere, Torus } kind = Kind::Sphere;
  int w = -1;              // sphere base point or torus orientation vertex
  std::vector<int> edge;   // torus only
};

struct SweepRow {
  double t = 0;
  std::complex<double> numeric;
  std::complex<double> symbolic;
  double abs_err = 0;
  double est_quad_err = 0;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  double slope = 0;  // least-squares slope of log(abs_err) against log(t)
  bool decreasing = false;
  std::string to_csv() const;
};

// ts must be strictly decreasing in (0, 1).
SweepTable convergence_sweep(const ProblemInstance& inst, const RegularTriangulation& tri, int l, const IVec& v,
                             const CycleSpec& cycle, const std::vector<double>& ts, const QuadratureConfig& cfg = {});

}  // namespace tp
