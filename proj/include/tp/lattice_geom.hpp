#pragma once

#include <vector>

#include "tp/rational.hpp"

namespace tp {

// normal . x + offset >= 0   (or == 0 for equalities)
struct Halfspace {
  IVec normal;
  Q offset;
};

struct LatticePolytope {
  std::vector<IVec> vertices;
  int dim = -1;

  // Builds the polytope from arbitrary generators; keeps only true vertices.
  static LatticePolytope hull(const std::vector<IVec>& points);
  std::size_t ambient_dim() const { return vertices.empty() ? 0 : vertices[0].size(); }
};

struct RationalPolytope {
  std::size_t ambient = 0;
  std::vector<QVec> vertices;           // may be empty when only H-data is known
  std::vector<Halfspace> inequalities;  // may be empty when only V-data is known
  std::vector<Halfspace> equalities;

  static RationalPolytope from_vertices(std::vector<QVec> verts);
  static RationalPolytope from_inequalities(std::size_t ambient, std::vector<Halfspace> ineqs,
                                            std::vector<Halfspace> eqs = {});
  bool contains(const QVec& x) const;
};

// Facets of the convex hull of a full-dimensional point set, as inward
// halfspaces with primitive integral normals.
std::vector<Halfspace> hull_facets(const std::vector<QVec>& points);

// Affine dimension of a point set.
int affine_dim(const std::vector<QVec>& points);

// Triangulation of the convex hull of full-dimensional points in Q^k by
// placing; each simplex is a list of k+1 indices into `points`.
std::vector<std::vector<int>> placing_triangulation(const std::vector<QVec>& points);

Q normalized_simplex_volume(const std::vector<IVec>& simplex);
Q simplex_volume(const std::vector<QVec>& simplex);  // Euclidean, full-dim

// Vertices of an H-described polytope (brute force over tight subsystems).
std::vector<QVec> enumerate_vertices(const RationalPolytope& p);
bool is_bounded(const RationalPolytope& p);
// Extreme rays of the recession cone {r : normal.r >= 0, eq.normal.r == 0};
// empty when the cone is {0}. Throws if the cone has a lineality space.
std::vector<QVec> recession_rays(std::size_t ambient, const std::vector<Halfspace>& ineqs,
                                 const std::vector<Halfspace>& eqs);

// Lattice-normalized volume in the affine span (1 for a point).
Q polytope_volume(const RationalPolytope& p);
Q lattice_volume_of_points(const std::vector<QVec>& points);

std::vector<IVec> interior_lattice_points(const LatticePolytope& p, int l = 1);
std::vector<IVec> lattice_points(const LatticePolytope& p);
bool in_interior(const LatticePolytope& p, const QVec& x);

Q primitive_lattice_length(const QVec& a, const QVec& b);

}  // namespace tp
