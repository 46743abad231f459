#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tp/lattice_geom.hpp"
#include "tp/rational.hpp"

namespace tp {

struct CoefficientDatum {
  IVec m;
  Q lambda;
  QComplex c;
};

// Winding adjustment for a branch: arg(-c_to / c_from) gets 2*pi*winding added.
struct BranchOverride {
  IVec from;
  IVec to;
  std::int64_t winding = 0;
};

struct ProblemInstance {
  int d = 0;  // hypersurface dimension; the lattice has rank d+1
  LatticePolytope delta;
  std::vector<CoefficientDatum> coeffs;  // sorted lexicographically by exponent
  std::vector<BranchOverride> overrides;

  // Validates the hypotheses (distinct exponents, nonzero coefficients,
  // coverage of all lattice points of the hull, nonempty interior set).
  static ProblemInstance make(int d, std::vector<CoefficientDatum> coeffs,
                              std::vector<BranchOverride> overrides = {});
  int index_of(const IVec& m) const;  // -1 when absent
  std::size_t size() const { return coeffs.size(); }
  const IVec& point(int i) const { return coeffs[i].m; }
  std::vector<int> interior_indices() const;  // W, lexicographic
  bool is_interior(int i) const;
};

struct RegularTriangulation {
  int dim = 0;  // d+1
  std::vector<IVec> points;
  std::vector<Q> lift;
  std::vector<std::vector<int>> top;            // sorted index sets, size dim+1
  std::vector<std::vector<std::vector<int>>> cells_by_dim;  // [k] = cells with k+1 vertices
  std::map<std::vector<int>, int> cell_dim;     // sorted vertex set -> dimension
  Q margin;                                     // chamber margin of the lift
  std::vector<bool> interior;                   // per point: in Int(Delta)

  bool is_cell(std::vector<int> s) const;
  // Minimal cell tau with x in l*tau, and the weights p_m (sum l).
  struct Support {
    std::vector<int> cell;
    std::vector<std::int64_t> weights;  // aligned with cell
  };
  Support support_of(const IVec& v, int l) const;
  std::vector<int> neighbors(int i) const;  // A_i: points joined to i by an edge
};

RegularTriangulation validate_and_triangulate(const ProblemInstance& inst);

struct TropEval {
  Q value;
  std::vector<int> argmin;
};
TropEval trop_eval(const ProblemInstance& inst, const QVec& n);

struct DualCell {
  std::vector<int> tau;  // cell of the triangulation
  int dim = 0;           // dim + dim(tau) = d+1
  RationalPolytope poly; // vertices + H-description (with equalities)
  bool bounded = false;
  std::vector<QVec> rays;  // extreme rays of the recession cone
};

struct TropicalComplex {
  int dim = 0;
  std::vector<DualCell> cells;
  std::map<std::vector<int>, int> index;  // tau -> cell index
  const DualCell& dual_of(std::vector<int> tau) const;
  // Cells of the tropical hypersurface (dual to cells of positive dimension).
  std::vector<int> hypersurface_cells() const;
};

TropicalComplex dual_complex(const RegularTriangulation& tri);
RationalPolytope dual_cell_polytope(const RegularTriangulation& tri, int w);
Q cell_volume(const TropicalComplex& tc, int cell);

// d = 1 only. Keys (w, w') over interior points, including w == w'.
std::map<std::pair<int, int>, Q> tropical_periods(const RegularTriangulation& tri, const TropicalComplex& tc);

// Point where all mu_m, m in the top cell, agree.
QVec dual_vertex(const RegularTriangulation& tri, const std::vector<int>& top_cell);

}  // namespace tp
