#pragma once

#include <complex>
#include <string>
#include <vector>

#include "tp/constant_field.hpp"
#include "tp/gamma_asymptotics.hpp"
#include "tp/tropical_engine.hpp"

namespace tp {

using CFMat = std::vector<std::vector<CF>>;

// Limit data for curves on the dual basis (alpha*_1..alpha*_g, beta*_1..beta*_g),
// W in lexicographic order.
struct LimitHodgeData {
  std::vector<int> W;  // point indices
  int genus = 0;
  QMat N;
  QMat expN;
  QMat Q;  // Q(alpha*_v, beta*_w) = delta_vw
  CFMat P;   // g x g, P[v][w]
  CFMat F1;  // g x 2g, row v = (-2 pi i e_v | P(v, .))
};

// Column alpha*_w carries (-1)^{1+delta} l(w, w') in row beta*_w'.
QMat monodromy_matrix(const ProblemInstance& inst, const RegularTriangulation& tri, const TropicalComplex& tc);

// Throws InconsistentBranches unless both branch conditions hold.
CFMat p_matrix(const ProblemInstance& inst, const RegularTriangulation& tri, const BranchAssignment& br);

LimitHodgeData limit_filtration(const ProblemInstance& inst, const RegularTriangulation& tri,
                                const BranchAssignment& br);

struct HodgeChecks {
  bool n_squared_zero = false;
  bool exp_n_preserves_q = false;
  bool infinitesimal_isotropy = false;  // N^T Q + Q N = 0
  bool length_block_symmetric = false;
  int f1_rank = 0;
  double isotropy_residual = 0;  // max |F1 Q F1^T|
  double limit_det = 0;          // |det [F1; conj F1]|, zero when P is real
  double hodge_det = 0;          // same on the nilpotent orbit exp(i y N) F1, y = 10
  bool p_symmetric_numeric = false;
  bool ok(int genus) const;
};
// Numeric checks use tolerance 1e-9.
HodgeChecks check_limit_data(const LimitHodgeData& h);

// Sphere expansions at theta = 2 pi and theta = 0; the constant term of the
// difference divided by -2 pi i against the N entry.
struct CrosscheckReport {
  QMat recovered;         // recovered[w][v] = M(w, v)
  Q max_discrepancy = 0;  // over all entries
  bool exact = true;      // every ratio was rational
  bool ok() const { return exact && max_discrepancy == 0; }
};
CrosscheckReport monodromy_crosscheck(const ProblemInstance& inst, const RegularTriangulation& tri,
                                      const TropicalComplex& tc, const BranchAssignment& br);

// The exact part of [Omega^{1,v}] minus L N(-2 pi i alpha*_v) is the F1 row for
// v: L-coefficients match N and constant terms match P. Returns mismatches.
int period_vector_mismatches(const ProblemInstance& inst, const RegularTriangulation& tri, const LimitHodgeData& h,
                             const BranchAssignment& br);

}  // namespace tp
