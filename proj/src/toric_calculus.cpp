#include "tp/toric_calculus.hpp"

#include <algorithm>
#include <numeric>

#include "tp/errors.hpp"

namespace tp {

namespace {

QMat ray_matrix(const StarFan& fan, const std::vector<int>& cone) {
  QMat m;
  for (int r : cone) m.push_back(to_qvec(fan.rays[r]));
  return m;
}

// Linear functional taking the value 1 on ray `rho` and 0 on the other rays
// of the (unimodular) top cone.
QVec dual_basis_vector(const StarFan& fan, const std::vector<int>& cone, int rho) {
  QMat a = ray_matrix(fan, cone);
  QVec rhs(cone.size(), Q(0));
  for (std::size_t j = 0; j < cone.size(); ++j)
    if (cone[j] == rho) rhs[j] = 1;
  QVec x;
  if (!solve(a, rhs, x)) throw Error("SmoothnessViolation", "top cone is not a basis");
  return x;
}

Z intersect_rec(const StarFan& fan, const std::vector<int>& ms, std::mt19937_64* rng) {
  std::vector<int> support = ms;
  support.erase(std::unique(support.begin(), support.end()), support.end());
  if (!fan.is_cone(support)) return 0;
  if (support.size() == ms.size()) return support.size() == static_cast<std::size_t>(fan.dim) ? 1 : 0;
  if (!rng) {
    std::lock_guard<std::mutex> lock(fan.memo->mu);
    auto it = fan.memo->table.find(ms);
    if (it != fan.memo->table.end()) return it->second;
  }
  std::vector<int> repeated;
  for (std::size_t i = 1; i < ms.size(); ++i)
    if (ms[i] == ms[i - 1] && (repeated.empty() || repeated.back() != ms[i])) repeated.push_back(ms[i]);
  std::vector<const std::vector<int>*> containing;
  for (auto& c : fan.top_cones)
    if (std::includes(c.begin(), c.end(), support.begin(), support.end())) containing.push_back(&c);
  int rho = repeated.front();
  const std::vector<int>* cone = containing.front();
  if (rng) {
    rho = repeated[std::uniform_int_distribution<std::size_t>(0, repeated.size() - 1)(*rng)];
    cone = containing[std::uniform_int_distribution<std::size_t>(0, containing.size() - 1)(*rng)];
  }
  QVec ell = dual_basis_vector(fan, *cone, rho);
  // D_rho = -sum_{r not in cone} <ell, u_r> D_r
  std::vector<int> rest = ms;
  rest.erase(std::find(rest.begin(), rest.end(), rho));
  Z total = 0;
  for (int r = 0; r < static_cast<int>(fan.rays.size()); ++r) {
    if (std::binary_search(cone->begin(), cone->end(), r)) continue;
    Q coef = dot(fan.rays[r], ell);
    if (coef == 0) continue;
    std::vector<int> next = rest;
    next.insert(std::upper_bound(next.begin(), next.end(), r), r);
    total -= coef.get_num() * intersect_rec(fan, next, rng);
  }
  if (!rng) {
    std::lock_guard<std::mutex> lock(fan.memo->mu);
    fan.memo->table.emplace(ms, total);
  }
  return total;
}

}  // namespace

int StarFan::ray_of_point(int m) const {
  auto it = std::lower_bound(ray_points.begin(), ray_points.end(), m);
  if (it == ray_points.end() || *it != m) return -1;
  return static_cast<int>(it - ray_points.begin());
}

StarFan star_fan(const RegularTriangulation& tri, int w) {
  if (w < 0 || w >= static_cast<int>(tri.points.size()) || !tri.interior[w])
    throw Error("NotInteriorPoint", "star fan requested at a non-interior point");
  StarFan fan;
  fan.w = w;
  fan.dim = tri.dim;
  fan.ray_points = tri.neighbors(w);
  for (int m : fan.ray_points) fan.rays.push_back(sub(tri.points[m], tri.points[w]));
  for (auto& t : tri.top) {
    if (!std::binary_search(t.begin(), t.end(), w)) continue;
    std::vector<int> cone;
    for (int m : t)
      if (m != w) cone.push_back(fan.ray_of_point(m));
    std::sort(cone.begin(), cone.end());
    IMat mat;
    for (int r : cone) mat.push_back(fan.rays[r]);
    if (abs(det(mat)) != 1) throw Error("SmoothnessViolation", "top cone is not unimodular");
    fan.top_cones.push_back(cone);
    for (unsigned mask = 0; mask < (1u << cone.size()); ++mask) {
      std::vector<int> face;
      for (std::size_t j = 0; j < cone.size(); ++j)
        if (mask & (1u << j)) face.push_back(cone[j]);
      fan.cones.insert(face);
    }
  }
  for (auto& r : fan.rays)
    if (gcd_vec(r) != 1) throw Error("SmoothnessViolation", "ray is not primitive");
  // Completeness: every wall lies in exactly two top cones.
  std::map<std::vector<int>, int> walls;
  for (auto& c : fan.top_cones)
    for (std::size_t j = 0; j < c.size(); ++j) {
      std::vector<int> f = c;
      f.erase(f.begin() + j);
      ++walls[f];
    }
  for (auto& [f, k] : walls)
    if (k != 2) throw Error("SmoothnessViolation", "fan is not complete");
  // Generic directions lie in exactly one top cone.
  std::mt19937_64 rng(0x5eed);
  std::uniform_int_distribution<int> coord(-1000, 1000);
  for (int trial = 0; trial < 16; ++trial) {
    QVec x;
    for (int j = 0; j < fan.dim; ++j) x.emplace_back(coord(rng));
    int hits = 0;
    bool boundary = false;
    for (auto& c : fan.top_cones) {
      QMat a(fan.dim, QVec(fan.dim));
      for (int i = 0; i < fan.dim; ++i)
        for (int j = 0; j < fan.dim; ++j) a[i][j] = static_cast<long>(fan.rays[c[j]][i]);
      QVec coef;
      solve(a, x, coef);
      bool in = true;
      for (auto& q : coef) {
        if (q == 0) boundary = true;
        if (q < 0) in = false;
      }
      if (in) ++hits;
    }
    if (!boundary && hits != 1) throw Error("SmoothnessViolation", "fan does not cover space exactly once");
  }
  return fan;
}

Z intersection_number(const StarFan& fan, std::vector<int> multiset, std::mt19937_64* rng) {
  if (static_cast<int>(multiset.size()) != fan.dim)
    throw Error("BadArity", "multiset must have " + std::to_string(fan.dim) + " entries");
  for (int r : multiset)
    if (r < 0 || r >= static_cast<int>(fan.rays.size())) throw Error("BadArity", "unknown ray");
  std::sort(multiset.begin(), multiset.end());
  return intersect_rec(fan, multiset, rng);
}

DivisorPoly::DivisorPoly(const StarFan& fan) : fan_(&fan) {}

void DivisorPoly::add(const Exponent& e, const CF& c) {
  if (c.is_zero()) return;
  int deg = std::accumulate(e.begin(), e.end(), 0);
  if (deg > fan_->dim) return;
  auto& slot = terms_[e];
  slot += c;
  if (slot.is_zero()) terms_.erase(e);
}

DivisorPoly DivisorPoly::constant(const StarFan& fan, const CF& c) {
  DivisorPoly p(fan);
  p.add(Exponent(fan.rays.size(), 0), c);
  return p;
}

DivisorPoly DivisorPoly::divisor(const StarFan& fan, int ray) {
  DivisorPoly p(fan);
  Exponent e(fan.rays.size(), 0);
  e.at(ray) = 1;
  p.add(e, CF(1));
  return p;
}

DivisorPoly DivisorPoly::sigma(const StarFan& fan) {
  DivisorPoly p(fan);
  for (std::size_t r = 0; r < fan.rays.size(); ++r) p += divisor(fan, static_cast<int>(r));
  return p;
}

DivisorPoly DivisorPoly::omega(const StarFan& fan, const RegularTriangulation& tri) {
  DivisorPoly p(fan);
  for (std::size_t r = 0; r < fan.rays.size(); ++r)
    p += divisor(fan, static_cast<int>(r)) * CF(tri.lift[fan.ray_points[r]] - tri.lift[fan.w]);
  return p;
}

DivisorPoly& DivisorPoly::operator+=(const DivisorPoly& o) {
  if (o.fan_ != fan_) throw Error("FanMismatch", "divisor polynomials over different fans");
  for (auto& [e, c] : o.terms_) add(e, c);
  return *this;
}

DivisorPoly DivisorPoly::operator+(const DivisorPoly& o) const {
  DivisorPoly r = *this;
  r += o;
  return r;
}

DivisorPoly DivisorPoly::operator-(const DivisorPoly& o) const { return *this + o * CF(-1); }

DivisorPoly DivisorPoly::operator*(const CF& c) const {
  DivisorPoly r(*fan_);
  for (auto& [e, x] : terms_) r.add(e, x * c);
  return r;
}

DivisorPoly DivisorPoly::operator*(const DivisorPoly& o) const {
  if (o.fan_ != fan_) throw Error("FanMismatch", "divisor polynomials over different fans");
  DivisorPoly r(*fan_);
  for (auto& [ea, ca] : terms_)
    for (auto& [eb, cb] : o.terms_) {
      Exponent e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      r.add(e, ca * cb);
    }
  return r;
}

DivisorPoly DivisorPoly::exp() const {
  if (!constant_term().is_zero()) throw Error("NotNilpotent", "exp of a polynomial with constant term");
  DivisorPoly result = constant(*fan_, CF(1));
  DivisorPoly power = result;
  for (int k = 1; k <= fan_->dim; ++k) {
    power = power * *this * CF(Q(1) / k);
    result += power;
  }
  return result;
}

DivisorPoly DivisorPoly::homogeneous(int k) const {
  DivisorPoly r(*fan_);
  for (auto& [e, c] : terms_)
    if (std::accumulate(e.begin(), e.end(), 0) == k) r.add(e, c);
  return r;
}

CF DivisorPoly::constant_term() const {
  auto it = terms_.find(Exponent(fan_->rays.size(), 0));
  return it == terms_.end() ? CF() : it->second;
}

int DivisorPoly::min_degree() const {
  int best = -1;
  for (auto& [e, c] : terms_) {
    int d = std::accumulate(e.begin(), e.end(), 0);
    if (best < 0 || d < best) best = d;
  }
  return best;
}

CF integrate(const StarFan& fan, const DivisorPoly& p) {
  if (&p.fan() != &fan) throw Error("FanMismatch", "polynomial belongs to another fan");
  CF total;
  for (auto& [e, c] : p.terms()) {
    if (std::accumulate(e.begin(), e.end(), 0) != fan.dim) continue;
    std::vector<int> ms;
    for (std::size_t r = 0; r < e.size(); ++r)
      for (int k = 0; k < e[r]; ++k) ms.push_back(static_cast<int>(r));
    Z n = intersection_number(fan, ms);
    if (n != 0) total += c * CF(Q(n));
  }
  return total;
}

namespace {

struct ChamberExit {};

// Volume of {x : <u_r, x> + a_r >= 0} assuming its normal fan is the star fan.
Q fan_polytope_volume(const StarFan& fan, const QVec& a) {
  std::vector<QVec> verts;
  for (auto& c : fan.top_cones) {
    QMat m = ray_matrix(fan, c);
    QVec rhs;
    for (int r : c) rhs.push_back(-a[r]);
    QVec x;
    if (!solve(m, rhs, x)) throw Error("SmoothnessViolation", "singular cone");
    for (std::size_t r = 0; r < fan.rays.size(); ++r) {
      if (std::binary_search(c.begin(), c.end(), static_cast<int>(r))) continue;
      if (dot(fan.rays[r], x) + a[r] <= 0) throw ChamberExit{};
    }
    verts.push_back(x);
  }
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  return lattice_volume_of_points(verts);
}

}  // namespace

Q volume_polynomial_oracle(const StarFan& fan, const RegularTriangulation& tri, const std::vector<int>& multiset) {
  int n = fan.dim;
  if (static_cast<int>(multiset.size()) != n) throw Error("BadArity", "multiset size");
  QVec base;
  for (int m : fan.ray_points) base.push_back(tri.lift[m] - tri.lift[fan.w]);
  Q h = 1;
  for (int attempt = 0; attempt < 60; ++attempt, h /= 2) {
    try {
      Q acc = 0;
      for (unsigned mask = 0; mask < (1u << n); ++mask) {
        QVec a = base;
        int bits = 0;
        for (int j = 0; j < n; ++j)
          if (mask & (1u << j)) {
            a[multiset[j]] += h;
            ++bits;
          }
        Q v = fan_polytope_volume(fan, a);
        acc += ((n - bits) % 2 == 0) ? v : Q(-v);
      }
      // vol(a) = (sum a_r D_r)^n / n!, so the mixed difference equals I * h^n.
      Q hn = 1;
      for (int j = 0; j < n; ++j) hn *= h;
      return acc / hn;
    } catch (const ChamberExit&) {
    }
  }
  throw Error("ChamberExit", "no step keeps the normal fan fixed");
}

}  // namespace tp
