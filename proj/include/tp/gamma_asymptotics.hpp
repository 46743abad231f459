#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tp/constant_field.hpp"
#include "tp/toric_calculus.hpp"
#include "tp/tropical_engine.hpp"

namespace tp {

// Branches of arg(-c_to / c_from) = Arg(-c_to / c_from) + 2 pi k(from, to),
// with Arg the principal value. Pairs without an entry have k = 0.
struct BranchAssignment {
  bool consistent = false;  // produced by the globally consistent algorithm
  std::map<std::pair<int, int>, std::int64_t> winding;

  std::int64_t k(int from, int to) const;
  CF arg(const ProblemInstance& inst, int from, int to) const;
  // log(-c_to / c_from) = LogAbs + i * arg on this branch.
  CF log(const ProblemInstance& inst, int from, int to) const;
};

// Principal values everywhere, then the instance's overrides.
BranchAssignment principal_branches(const ProblemInstance& inst);

// d = 1: branches on all edges satisfying both consistency conditions,
// following the inductive construction over a generic perturbed lift. Branches
// out of the first point of the perturbed order are principal.
BranchAssignment choose_arg_branches(const ProblemInstance& inst, const RegularTriangulation& tri);

// arg(a->b) + arg(b->a); zero when the reversal condition holds.
CF reversal_residual(const ProblemInstance& inst, const BranchAssignment& br, int a, int b);
// arg(m0->m1) - arg(m0->m2) - arg(m2->m1) - det(m1-m0, m2-m0) pi (d = 1).
CF triangle_residual(const ProblemInstance& inst, const BranchAssignment& br, int m0, int m1, int m2);
// Number of nonzero residuals over all edges and all ordered 2-cells (d = 1).
struct BranchCheck {
  int edges_checked = 0;
  int triangles_checked = 0;
  int reversal_failures = 0;
  int triangle_failures = 0;
  bool ok() const { return reversal_failures == 0 && triangle_failures == 0; }
};
BranchCheck check_branches(const ProblemInstance& inst, const RegularTriangulation& tri, const BranchAssignment& br);

// Polynomial in L = -log t with constant-field coefficients, plus O(t^eps).
struct AsymptoticExpansion {
  std::vector<CF> coeffs;  // coeffs[k] multiplies L^k
  bool error_term = true;
  std::string indices;
  std::string orientation;

  int degree() const;  // -1 for the zero polynomial
  CF coefficient(int k) const { return k >= 0 && k < static_cast<int>(coeffs.size()) ? coeffs[k] : CF(); }
  std::complex<double> eval(double t) const;
  std::string to_string() const;
  bool same_polynomial(const AsymptoticExpansion& o) const;
  AsymptoticExpansion operator-(const AsymptoticExpansion& o) const;
};

DivisorPoly gamma_class_series(const StarFan& fan);

// E_{v,w}; throws IncompatiblePair unless conv({w} u tau_v) is a cell.
DivisorPoly e_factor(const RegularTriangulation& tri, const StarFan& fan, int l, const IVec& v);

// Full expansion of the sphere period. theta_turns = theta / (2 pi)
// twists each coefficient by exp(i (lambda_m - lambda_w) theta); `extra`
// multiplies the integrand.
AsymptoticExpansion sphere_period_asymptotics(const ProblemInstance& inst, const RegularTriangulation& tri,
                                              const StarFan& fan, int l, const IVec& v, const BranchAssignment& br,
                                              const DivisorPoly* extra = nullptr, const Q& theta_turns = 0);

AsymptoticExpansion theta_twisted_asymptotics(const ProblemInstance& inst, const RegularTriangulation& tri,
                                              const StarFan& fan, const IVec& v, const BranchAssignment& br,
                                              const Q& theta_turns);

// edge: the cell of the triangulation dual to the torus' tropical cell.
AsymptoticExpansion torus_period_asymptotics(const ProblemInstance& inst, const RegularTriangulation& tri, int l,
                                             const IVec& v, std::vector<int> edge, int w_orientation);

// A zero coefficient with degree >= 0 means the volume formula vanishes: the
// expansion has no term of degree >= `degree`.
struct LeadingTerm {
  int degree = -1;  // -1: the expansion vanishes identically
  Q coefficient = 0;
};
// From tropical volumes only.
LeadingTerm leading_term(const ProblemInstance& inst, const RegularTriangulation& tri, const TropicalComplex& tc,
                         int l, const IVec& v, int w);

// Minimal cell and weights of v in l * Delta; requires v in Int(l Delta).
RegularTriangulation::Support interior_support(const ProblemInstance& inst, const RegularTriangulation& tri, int l,
                                               const IVec& v);

}  // namespace tp
