#include "tp/lattice_geom.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "tp/errors.hpp"

namespace tp {

namespace {

template <class F>
void for_each_combination(int n, int k, F&& f) {
  if (k > n || k < 0) return;
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    f(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Scale a rational vector to a primitive integer vector with the same direction.
IVec primitive_direction(const QVec& v) {
  Z l = 1;
  for (auto& q : v) {
    Q c = q;
    c.canonicalize();
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den().get_mpz_t());
  }
  std::vector<Z> iv;
  Z g = 0;
  for (auto& q : v) {
    Q c = q * Q(l);
    c.canonicalize();
    iv.push_back(c.get_num());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num().get_mpz_t());
  }
  IVec r;
  for (auto& z : iv) {
    Z q = g == 0 ? z : Z(z / g);
    if (!q.fits_slong_p()) throw Error("Overflow", "normal vector entries too large");
    r.push_back(q.get_si());
  }
  return r;
}

QMat differences(const std::vector<QVec>& pts) {
  QMat d;
  for (std::size_t i = 1; i < pts.size(); ++i) d.push_back(sub(pts[i], pts[0]));
  return d;
}

// Sign of det[f1-f0, ..., f_{k-1}-f0, x-f0].
int orient(const std::vector<QVec>& pts, const std::vector<int>& facet, const QVec& x) {
  QMat m;
  for (std::size_t i = 1; i < facet.size(); ++i) m.push_back(sub(pts[facet[i]], pts[facet[0]]));
  m.push_back(sub(x, pts[facet[0]]));
  return sgn(det(m));
}

// Coordinates of points in an integral basis of the lattice parallel to
// their affine span, origin at the first point.
std::vector<QVec> span_coordinates(const std::vector<QVec>& points, int& k) {
  std::size_t n = points[0].size();
  QMat diff = differences(points);
  k = diff.empty() ? 0 : rank(diff);
  if (k == static_cast<int>(n)) return points;
  std::vector<QVec> out;
  if (k == 0) {
    out.assign(points.size(), QVec{});
    return out;
  }
  IMat basis = saturated_lattice_basis(diff, n);
  // Pick k coordinates where the basis is independent.
  QMat bt;
  for (auto& b : basis) bt.push_back(to_qvec(b));
  QMat tmp = bt;
  auto piv = rref(tmp);
  QMat sq(k, QVec(k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) sq[i][j] = bt[j][piv[i]];
  for (auto& p : points) {
    QVec rel = sub(p, points[0]);
    QVec rhs(k);
    for (int i = 0; i < k; ++i) rhs[i] = rel[piv[i]];
    QVec y;
    solve(sq, rhs, y);
    out.push_back(y);
  }
  return out;
}

}  // namespace

int affine_dim(const std::vector<QVec>& points) {
  if (points.empty()) return -1;
  QMat d = differences(points);
  return d.empty() ? 0 : rank(d);
}

std::vector<Halfspace> hull_facets(const std::vector<QVec>& points) {
  std::size_t n = points[0].size();
  std::vector<Halfspace> facets;
  std::set<std::pair<IVec, std::string>> seen;
  for_each_combination(static_cast<int>(points.size()), static_cast<int>(n), [&](const std::vector<int>& idx) {
    std::vector<QVec> sub_pts;
    for (int i : idx) sub_pts.push_back(points[i]);
    QMat d = differences(sub_pts);
    if (!d.empty() && rank(d) != static_cast<int>(n) - 1) return;
    QMat ns = d.empty() ? QMat{QVec{Q(1)}} : nullspace(d, n);
    if (ns.size() != 1) return;
    IVec nrm = primitive_direction(ns[0]);
    Q off = -dot(nrm, points[idx[0]]);
    int pos = 0, neg = 0;
    for (auto& p : points) {
      Q v = dot(nrm, p) + off;
      if (v > 0) ++pos;
      if (v < 0) ++neg;
    }
    if (pos && neg) return;
    if (neg) {
      for (auto& x : nrm) x = -x;
      off = -off;
    }
    auto key = std::make_pair(nrm, to_string(off));
    if (seen.insert(key).second) facets.push_back({nrm, off});
  });
  return facets;
}

std::vector<std::vector<int>> placing_triangulation(const std::vector<QVec>& points) {
  std::size_t k = points[0].size();
  std::vector<std::vector<int>> simplices;
  if (k == 0) return {{0}};
  // Initial simplex: greedy rank growth.
  std::vector<int> init{0};
  for (std::size_t i = 1; i < points.size() && init.size() < k + 1; ++i) {
    std::vector<QVec> cand;
    for (int j : init) cand.push_back(points[j]);
    cand.push_back(points[i]);
    if (affine_dim(cand) == static_cast<int>(init.size())) init.push_back(static_cast<int>(i));
  }
  if (init.size() != k + 1) throw Error("DegeneratePolytope", "points are not full-dimensional");
  simplices.push_back(init);
  std::set<int> used(init.begin(), init.end());
  for (std::size_t p = 0; p < points.size(); ++p) {
    if (used.count(static_cast<int>(p))) continue;
    // Boundary facets: faces of codimension one lying in exactly one simplex.
    std::map<std::vector<int>, std::pair<int, int>> faces;  // facet -> (count, opposite)
    for (auto& s : simplices) {
      for (std::size_t drop = 0; drop < s.size(); ++drop) {
        std::vector<int> f;
        for (std::size_t j = 0; j < s.size(); ++j)
          if (j != drop) f.push_back(s[j]);
        std::sort(f.begin(), f.end());
        auto& e = faces[f];
        e.first++;
        e.second = s[drop];
      }
    }
    std::vector<std::vector<int>> added;
    for (auto& [f, e] : faces) {
      if (e.first != 1) continue;
      int so = orient(points, f, points[e.second]);
      int sp = orient(points, f, points[p]);
      if (so * sp < 0) {
        auto ns = f;
        ns.push_back(static_cast<int>(p));
        added.push_back(ns);
      }
    }
    for (auto& s : added) simplices.push_back(s);
    used.insert(static_cast<int>(p));
  }
  return simplices;
}

Q simplex_volume(const std::vector<QVec>& simplex) {
  QMat d = differences(simplex);
  Q v = det(d);
  if (v < 0) v = -v;
  return v / factorial(static_cast<int>(d.size()));
}

Q normalized_simplex_volume(const std::vector<IVec>& simplex) {
  if (simplex.empty() || simplex.size() != simplex[0].size() + 1)
    throw Error("BadArity", "simplex must have dim+1 vertices");
  std::vector<QVec> q;
  for (auto& v : simplex) q.push_back(to_qvec(v));
  Q v = simplex_volume(q);
  if (v == 0) throw Error("DegenerateSimplex", "vertices are affinely dependent");
  return v;
}

Q lattice_volume_of_points(const std::vector<QVec>& points) {
  if (points.empty()) throw Error("EmptyPolytope", "no points");
  int k = 0;
  auto coords = span_coordinates(points, k);
  if (k == 0) return 1;
  auto simp = placing_triangulation(coords);
  Q vol = 0;
  for (auto& s : simp) {
    std::vector<QVec> sp;
    for (int i : s) sp.push_back(coords[i]);
    vol += simplex_volume(sp);
  }
  return vol;
}

RationalPolytope RationalPolytope::from_vertices(std::vector<QVec> verts) {
  RationalPolytope p;
  p.ambient = verts.empty() ? 0 : verts[0].size();
  p.vertices = std::move(verts);
  return p;
}

RationalPolytope RationalPolytope::from_inequalities(std::size_t ambient, std::vector<Halfspace> ineqs,
                                                     std::vector<Halfspace> eqs) {
  RationalPolytope p;
  p.ambient = ambient;
  p.inequalities = std::move(ineqs);
  p.equalities = std::move(eqs);
  return p;
}

bool RationalPolytope::contains(const QVec& x) const {
  for (auto& h : inequalities)
    if (dot(h.normal, x) + h.offset < 0) return false;
  for (auto& h : equalities)
    if (dot(h.normal, x) + h.offset != 0) return false;
  return true;
}

std::vector<QVec> enumerate_vertices(const RationalPolytope& p) {
  if (p.inequalities.empty() && p.equalities.empty()) return p.vertices;
  std::size_t n = p.ambient;
  QMat eq;
  QVec eqb;
  for (auto& h : p.equalities) {
    eq.push_back(to_qvec(h.normal));
    eqb.push_back(-h.offset);
  }
  int re = eq.empty() ? 0 : rank(eq);
  int need = static_cast<int>(n) - re;
  std::vector<QVec> out;
  std::set<std::vector<std::string>> seen;
  for_each_combination(static_cast<int>(p.inequalities.size()), need, [&](const std::vector<int>& idx) {
    QMat a = eq;
    QVec b = eqb;
    for (int i : idx) {
      a.push_back(to_qvec(p.inequalities[i].normal));
      b.push_back(-p.inequalities[i].offset);
    }
    // Augmented rref; unique solution iff rank n and consistent.
    QMat aug = a;
    for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
    auto piv = rref(aug);
    if (piv.size() != n || (!piv.empty() && piv.back() == static_cast<int>(n))) return;
    QVec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = aug[i][n];
    if (!p.contains(x)) return;
    std::vector<std::string> key;
    for (auto& c : x) key.push_back(to_string(c));
    if (seen.insert(key).second) out.push_back(x);
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<QVec> recession_rays(std::size_t n, const std::vector<Halfspace>& ineqs,
                                 const std::vector<Halfspace>& eqs) {
  QMat all;
  for (auto& h : eqs) all.push_back(to_qvec(h.normal));
  for (auto& h : ineqs) all.push_back(to_qvec(h.normal));
  if (all.empty() || rank(all) < static_cast<int>(n))
    throw Error("UnboundedPolytope", "recession cone contains a line");
  QMat eq;
  for (auto& h : eqs) eq.push_back(to_qvec(h.normal));
  int re = eq.empty() ? 0 : rank(eq);
  int need = static_cast<int>(n) - 1 - re;
  std::vector<QVec> rays;
  std::set<IVec> seen;
  auto ok = [&](const QVec& r) {
    for (auto& h : eqs)
      if (dot(h.normal, r) != 0) return false;
    for (auto& h : ineqs)
      if (dot(h.normal, r) < 0) return false;
    return true;
  };
  for_each_combination(static_cast<int>(ineqs.size()), need, [&](const std::vector<int>& idx) {
    QMat a = eq;
    for (int i : idx) a.push_back(to_qvec(ineqs[i].normal));
    QMat ns = nullspace(a, n);
    if (ns.size() != 1) return;
    for (int s : {1, -1}) {
      QVec r = scale(ns[0], Q(s));
      if (!ok(r)) continue;
      IVec pr = primitive_direction(r);
      if (seen.insert(pr).second) rays.push_back(to_qvec(pr));
    }
  });
  return rays;
}

bool is_bounded(const RationalPolytope& p) {
  if (p.inequalities.empty() && p.equalities.empty()) return true;
  try {
    return recession_rays(p.ambient, p.inequalities, p.equalities).empty();
  } catch (const Error&) {
    return false;
  }
}

Q polytope_volume(const RationalPolytope& p) {
  if (!is_bounded(p)) throw Error("UnboundedPolytope", "volume of an unbounded polyhedron");
  auto verts = p.vertices.empty() ? enumerate_vertices(p) : p.vertices;
  if (verts.empty()) throw Error("EmptyPolytope", "polytope has no vertices");
  return lattice_volume_of_points(verts);
}

LatticePolytope LatticePolytope::hull(const std::vector<IVec>& points) {
  LatticePolytope lp;
  if (points.empty()) return lp;
  std::vector<QVec> q;
  std::set<IVec> uniq(points.begin(), points.end());
  std::vector<IVec> pts(uniq.begin(), uniq.end());
  for (auto& p : pts) q.push_back(to_qvec(p));
  int k = 0;
  auto coords = span_coordinates(q, k);
  lp.dim = k;
  if (k == 0) {
    lp.vertices = {pts[0]};
    return lp;
  }
  auto facets = hull_facets(coords);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    QMat tight;
    for (auto& f : facets)
      if (dot(f.normal, coords[i]) + f.offset == 0) tight.push_back(to_qvec(f.normal));
    if (!tight.empty() && rank(tight) == k) lp.vertices.push_back(pts[i]);
  }
  return lp;
}

namespace {
std::vector<Halfspace> full_dim_facets(const LatticePolytope& p) {
  if (p.dim != static_cast<int>(p.ambient_dim()))
    throw Error("DegeneratePolytope", "lattice point enumeration requires a full-dimensional polytope");
  std::vector<QVec> q;
  for (auto& v : p.vertices) q.push_back(to_qvec(v));
  return hull_facets(q);
}

template <class Pred>
std::vector<IVec> box_scan(const LatticePolytope& p, int l, Pred&& keep) {
  std::size_t n = p.ambient_dim();
  IVec lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = hi[i] = p.vertices[0][i] * l;
    for (auto& v : p.vertices) {
      lo[i] = std::min<std::int64_t>(lo[i], v[i] * l);
      hi[i] = std::max<std::int64_t>(hi[i], v[i] * l);
    }
  }
  std::vector<IVec> out;
  IVec cur = lo;
  while (true) {
    if (keep(cur)) out.push_back(cur);
    int i = static_cast<int>(n) - 1;
    while (i >= 0 && cur[i] == hi[i]) {
      cur[i] = lo[i];
      --i;
    }
    if (i < 0) return out;
    ++cur[i];
  }
}
}  // namespace

bool in_interior(const LatticePolytope& p, const QVec& x) {
  for (auto& f : full_dim_facets(p))
    if (dot(f.normal, x) + f.offset <= 0) return false;
  return true;
}

std::vector<IVec> interior_lattice_points(const LatticePolytope& p, int l) {
  if (l < 1) throw Error("BadScale", "scale must be >= 1");
  auto facets = full_dim_facets(p);
  return box_scan(p, l, [&](const IVec& x) {
    QVec q = to_qvec(x);
    for (auto& f : facets)
      if (dot(f.normal, q) + f.offset * l <= 0) return false;
    return true;
  });
}

std::vector<IVec> lattice_points(const LatticePolytope& p) {
  auto facets = full_dim_facets(p);
  return box_scan(p, 1, [&](const IVec& x) {
    QVec q = to_qvec(x);
    for (auto& f : facets)
      if (dot(f.normal, q) + f.offset < 0) return false;
    return true;
  });
}

Q primitive_lattice_length(const QVec& a, const QVec& b) {
  QVec d = sub(b, a);
  bool zero = std::all_of(d.begin(), d.end(), [](const Q& x) { return x == 0; });
  if (zero) throw Error("DegenerateSegment", "endpoints coincide");
  IVec prim = primitive_direction(d);
  for (std::size_t i = 0; i < d.size(); ++i)
    if (prim[i] != 0) {
      Q r = d[i] / Q(static_cast<long>(prim[i]));
      r.canonicalize();
      return r;
    }
  throw Error("IrrationalDirection", "direction is not proportional to a lattice vector");
}

}  // namespace tp
