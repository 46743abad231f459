#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <set>
#include <vector>

#include "tp/constant_field.hpp"
#include "tp/tropical_engine.hpp"

namespace tp {

// Fan of cones over the cells of the triangulation that contain w.
struct StarFan {
  int w = -1;    // point index of the base point
  int dim = 0;   // d+1
  std::vector<int> ray_points;                // A_w as point indices, sorted
  std::vector<IVec> rays;                     // m - w, aligned with ray_points
  std::vector<std::vector<int>> top_cones;    // sorted ray index sets of size dim
  std::set<std::vector<int>> cones;           // all cones, including the empty one

  int ray_of_point(int m) const;  // -1 if m is not in A_w
  bool is_cone(const std::vector<int>& rays_sorted) const { return cones.count(rays_sorted) > 0; }

  struct Memo {
    std::mutex mu;
    std::map<std::vector<int>, Z> table;
  };
  std::shared_ptr<Memo> memo = std::make_shared<Memo>();
};

StarFan star_fan(const RegularTriangulation& tri, int w);

// Degree of the product of the divisors D_r over the multiset (ray indices,
// size dim). With rng set, the repeated ray and the containing top cone are
// chosen at random and the memo table is bypassed.
Z intersection_number(const StarFan& fan, std::vector<int> multiset, std::mt19937_64* rng = nullptr);

// Truncated polynomial in the divisor classes D_r of a star fan.
class DivisorPoly {
 public:
  using Exponent = std::vector<int>;  // one entry per ray

  explicit DivisorPoly(const StarFan& fan);
  static DivisorPoly constant(const StarFan& fan, const CF& c);
  static DivisorPoly divisor(const StarFan& fan, int ray);
  static DivisorPoly sigma(const StarFan& fan);
  // Sum over rays of (lambda_m - lambda_w) D_m.
  static DivisorPoly omega(const StarFan& fan, const RegularTriangulation& tri);

  DivisorPoly operator+(const DivisorPoly& o) const;
  DivisorPoly operator-(const DivisorPoly& o) const;
  DivisorPoly operator*(const DivisorPoly& o) const;
  DivisorPoly operator*(const CF& c) const;
  DivisorPoly& operator+=(const DivisorPoly& o);
  bool operator==(const DivisorPoly& o) const { return terms_ == o.terms_; }

  // exp of a polynomial without constant term (nilpotent).
  DivisorPoly exp() const;
  DivisorPoly homogeneous(int k) const;
  CF constant_term() const;
  bool is_zero() const { return terms_.empty(); }
  int min_degree() const;  // -1 for the zero polynomial
  const StarFan& fan() const { return *fan_; }
  const std::map<Exponent, CF>& terms() const { return terms_; }

 private:
  void add(const Exponent& e, const CF& c);
  const StarFan* fan_;
  std::map<Exponent, CF> terms_;
};

// Sum of coefficient times intersection number over the top-degree terms.
CF integrate(const StarFan& fan, const DivisorPoly& p);

// Intersection number recomputed from the volume polynomial of the polytope
// {n : <m - w, n> + a_m >= 0} by exact mixed finite differences.
Q volume_polynomial_oracle(const StarFan& fan, const RegularTriangulation& tri, const std::vector<int>& multiset);

}  // namespace tp
