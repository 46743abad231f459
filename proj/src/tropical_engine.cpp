#include "tp/tropical_engine.hpp"

#include <algorithm>
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

// Barycentric coordinates of x w.r.t. the simplex (must be full-dimensional).
bool barycentric(const std::vector<IVec>& pts, const std::vector<int>& simplex, const QVec& x, QVec& b) {
  std::size_t n = x.size();
  QMat a(n + 1, QVec(simplex.size()));
  QVec rhs(n + 1);
  for (std::size_t j = 0; j < simplex.size(); ++j) {
    for (std::size_t i = 0; i < n; ++i) a[i][j] = static_cast<long>(pts[simplex[j]][i]);
    a[n][j] = 1;
  }
  for (std::size_t i = 0; i < n; ++i) rhs[i] = x[i];
  rhs[n] = 1;
  return solve(a, rhs, b);
}

}  // namespace

ProblemInstance ProblemInstance::make(int d, std::vector<CoefficientDatum> coeffs,
                                      std::vector<BranchOverride> overrides) {
  if (d < 1) throw Error("ValidationError", "dimension d must be >= 1");
  if (coeffs.empty()) throw Error("ValidationError", "no monomials");
  for (auto& c : coeffs) {
    if (static_cast<int>(c.m.size()) != d + 1)
      throw Error("ValidationError", "exponent " + to_string(c.m) + " does not have d+1 coordinates");
    if (c.c.is_zero()) throw Error("ValidationError", "zero leading coefficient at exponent " + to_string(c.m));
  }
  std::sort(coeffs.begin(), coeffs.end(), [](const auto& a, const auto& b) { return a.m < b.m; });
  for (std::size_t i = 1; i < coeffs.size(); ++i)
    if (coeffs[i].m == coeffs[i - 1].m)
      throw Error("ValidationError", "duplicate exponent " + to_string(coeffs[i].m));
  ProblemInstance inst;
  inst.d = d;
  std::vector<IVec> pts;
  for (auto& c : coeffs) pts.push_back(c.m);
  inst.delta = LatticePolytope::hull(pts);
  if (inst.delta.dim != d + 1)
    throw Error("ValidationError", "Newton polytope is not full-dimensional (dim " +
                                       std::to_string(inst.delta.dim) + ")");
  auto all = lattice_points(inst.delta);
  for (auto& p : all)
    if (!std::binary_search(pts.begin(), pts.end(), p))
      throw Error("MissingMonomial", "lattice point " + to_string(p) + " of the Newton polytope has no coefficient");
  inst.coeffs = std::move(coeffs);
  inst.overrides = std::move(overrides);
  if (inst.interior_indices().empty())
    throw Error("MissingInteriorPoint", "the Newton polytope has no interior lattice point");
  for (auto& o : inst.overrides)
    if (inst.index_of(o.from) < 0 || inst.index_of(o.to) < 0)
      throw Error("ValidationError", "branch override refers to unknown exponent");
  return inst;
}

int ProblemInstance::index_of(const IVec& m) const {
  auto it = std::lower_bound(coeffs.begin(), coeffs.end(), m, [](const auto& c, const IVec& x) { return c.m < x; });
  if (it == coeffs.end() || it->m != m) return -1;
  return static_cast<int>(it - coeffs.begin());
}

bool ProblemInstance::is_interior(int i) const { return in_interior(delta, to_qvec(coeffs[i].m)); }

std::vector<int> ProblemInstance::interior_indices() const {
  std::vector<int> w;
  for (int i = 0; i < static_cast<int>(coeffs.size()); ++i)
    if (is_interior(i)) w.push_back(i);
  return w;
}

bool RegularTriangulation::is_cell(std::vector<int> s) const {
  std::sort(s.begin(), s.end());
  return cell_dim.count(s) > 0;
}

std::vector<int> RegularTriangulation::neighbors(int i) const {
  std::vector<int> out;
  if (cells_by_dim.size() < 2) return out;
  for (auto& e : cells_by_dim[1]) {
    if (e[0] == i) out.push_back(e[1]);
    if (e[1] == i) out.push_back(e[0]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

RegularTriangulation::Support RegularTriangulation::support_of(const IVec& v, int l) const {
  QVec x;
  for (auto c : v) x.push_back(frac(c, l));
  for (auto& t : top) {
    QVec b;
    if (!barycentric(points, t, x, b)) continue;
    if (std::any_of(b.begin(), b.end(), [](const Q& q) { return q < 0; })) continue;
    Support s;
    for (std::size_t j = 0; j < t.size(); ++j) {
      if (b[j] == 0) continue;
      Q p = b[j] * l;
      if (!is_integral(p)) throw Error("NotUnimodular", "non-integral weights for " + to_string(v));
      s.cell.push_back(t[j]);
      s.weights.push_back(to_int64(p));
    }
    return s;
  }
  throw Error("OutsidePolytope", to_string(v) + " is not in l*Delta");
}

RegularTriangulation validate_and_triangulate(const ProblemInstance& inst) {
  RegularTriangulation tri;
  int n = inst.d + 1;
  tri.dim = n;
  for (auto& c : inst.coeffs) {
    tri.points.push_back(c.m);
    tri.lift.push_back(c.lambda);
  }
  int N = static_cast<int>(tri.points.size());
  std::set<std::vector<int>> tops;
  for_each_combination(N, n + 1, [&](const std::vector<int>& idx) {
    QMat a(n + 1, QVec(n + 1));
    QVec rhs(n + 1);
    for (int r = 0; r <= n; ++r) {
      for (int j = 0; j < n; ++j) a[r][j] = static_cast<long>(tri.points[idx[r]][j]);
      a[r][n] = 1;
      rhs[r] = tri.lift[idx[r]];
    }
    QVec h;
    if (!solve(a, rhs, h)) return;  // affinely dependent
    std::vector<int> face;
    for (int m = 0; m < N; ++m) {
      Q val = h[n];
      for (int j = 0; j < n; ++j) val += h[j] * static_cast<long>(tri.points[m][j]);
      Q slack = tri.lift[m] - val;
      if (slack < 0) return;
      if (slack == 0) face.push_back(m);
    }
    if (static_cast<int>(face.size()) > n + 1) {
      std::string pts;
      for (int m : face) pts += to_string(tri.points[m]) + " ";
      throw Error("NotATriangulation", "lower face is not a simplex: " + pts);
    }
    tops.insert(face);
  });
  tri.top.assign(tops.begin(), tops.end());
  Q unit = 1 / factorial(n);
  Q total = 0;
  for (auto& t : tri.top) {
    std::vector<IVec> s;
    for (int i : t) s.push_back(tri.points[i]);
    Q v = normalized_simplex_volume(s);
    if (v != unit) {
      std::string pts;
      for (auto& p : s) pts += to_string(p) + " ";
      throw Error("NotUnimodular", "simplex " + pts + "has volume " + to_string(v));
    }
    total += v;
  }
  std::vector<QVec> verts;
  for (auto& v : inst.delta.vertices) verts.push_back(to_qvec(v));
  if (total != lattice_volume_of_points(verts))
    throw Error("NotATriangulation", "lower hull does not cover the Newton polytope");

  // Chamber margin: how far lift values may move without changing the cells.
  bool first = true;
  for (auto& t : tri.top) {
    for (int m = 0; m < N; ++m) {
      if (std::binary_search(t.begin(), t.end(), m)) continue;
      QVec b;
      barycentric(tri.points, t, to_qvec(tri.points[m]), b);
      Q interp = 0, l1 = 1;
      for (std::size_t j = 0; j < t.size(); ++j) {
        interp += b[j] * tri.lift[t[j]];
        l1 += abs(b[j]);
      }
      Q r = (tri.lift[m] - interp) / l1;
      if (first || r < tri.margin) tri.margin = r;
      first = false;
    }
  }
  if (first) tri.margin = 1;

  tri.cells_by_dim.assign(n + 1, {});
  for (auto& t : tri.top) {
    for (unsigned mask = 1; mask < (1u << t.size()); ++mask) {
      std::vector<int> s;
      for (std::size_t j = 0; j < t.size(); ++j)
        if (mask & (1u << j)) s.push_back(t[j]);
      int dm = static_cast<int>(s.size()) - 1;
      if (tri.cell_dim.emplace(s, dm).second) tri.cells_by_dim[dm].push_back(s);
    }
  }
  for (auto& c : tri.cells_by_dim) std::sort(c.begin(), c.end());
  for (int i = 0; i < N; ++i) tri.interior.push_back(inst.is_interior(i));
  return tri;
}

TropEval trop_eval(const ProblemInstance& inst, const QVec& n) {
  TropEval r;
  for (int i = 0; i < static_cast<int>(inst.size()); ++i) {
    Q v = inst.coeffs[i].lambda + dot(inst.coeffs[i].m, n);
    if (r.argmin.empty() || v < r.value) {
      r.value = v;
      r.argmin = {i};
    } else if (v == r.value) {
      r.argmin.push_back(i);
    }
  }
  return r;
}

QVec dual_vertex(const RegularTriangulation& tri, const std::vector<int>& t) {
  int n = tri.dim;
  QMat a(n, QVec(n));
  QVec rhs(n);
  for (int r = 0; r < n; ++r) {
    IVec diff = sub(tri.points[t[r + 1]], tri.points[t[0]]);
    for (int j = 0; j < n; ++j) a[r][j] = static_cast<long>(diff[j]);
    rhs[r] = tri.lift[t[0]] - tri.lift[t[r + 1]];
  }
  QVec x;
  if (!solve(a, rhs, x)) throw Error("DegenerateSimplex", "top cell is not full-dimensional");
  return x;
}

const DualCell& TropicalComplex::dual_of(std::vector<int> tau) const {
  std::sort(tau.begin(), tau.end());
  auto it = index.find(tau);
  if (it == index.end()) throw Error("BadCell", "not a cell of the triangulation");
  return cells[it->second];
}

std::vector<int> TropicalComplex::hypersurface_cells() const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(cells.size()); ++i)
    if (cells[i].tau.size() >= 2) out.push_back(i);
  return out;
}

TropicalComplex dual_complex(const RegularTriangulation& tri) {
  TropicalComplex tc;
  int n = tri.dim;
  tc.dim = n;
  std::map<std::vector<int>, QVec> top_vertex;
  for (auto& t : tri.top) top_vertex[t] = dual_vertex(tri, t);
  int N = static_cast<int>(tri.points.size());
  for (int k = 0; k <= n; ++k) {
    for (auto& tau : tri.cells_by_dim[k]) {
      DualCell c;
      c.tau = tau;
      c.dim = n - k;
      int m0 = tau[0];
      std::vector<Halfspace> eqs, ineqs;
      for (std::size_t i = 1; i < tau.size(); ++i)
        eqs.push_back({sub(tri.points[tau[i]], tri.points[m0]), tri.lift[tau[i]] - tri.lift[m0]});
      for (int m = 0; m < N; ++m) {
        if (std::binary_search(tau.begin(), tau.end(), m)) continue;
        ineqs.push_back({sub(tri.points[m], tri.points[m0]), tri.lift[m] - tri.lift[m0]});
      }
      c.poly = RationalPolytope::from_inequalities(n, ineqs, eqs);
      for (auto& [t, v] : top_vertex)
        if (std::includes(t.begin(), t.end(), tau.begin(), tau.end())) c.poly.vertices.push_back(v);
      std::sort(c.poly.vertices.begin(), c.poly.vertices.end());
      c.rays = recession_rays(n, ineqs, eqs);
      c.bounded = c.rays.empty();
      tc.index[tau] = static_cast<int>(tc.cells.size());
      tc.cells.push_back(std::move(c));
    }
  }
  return tc;
}

RationalPolytope dual_cell_polytope(const RegularTriangulation& tri, int w) {
  if (w < 0 || w >= static_cast<int>(tri.points.size()) || !tri.interior[w])
    throw Error("NotInteriorPoint", "dual polytope requested for a non-interior point");
  int n = tri.dim;
  std::vector<Halfspace> ineqs;
  for (int m = 0; m < static_cast<int>(tri.points.size()); ++m) {
    if (m == w) continue;
    ineqs.push_back({sub(tri.points[m], tri.points[w]), tri.lift[m] - tri.lift[w]});
  }
  auto p = RationalPolytope::from_inequalities(n, ineqs);
  for (auto& t : tri.top)
    if (std::binary_search(t.begin(), t.end(), w)) p.vertices.push_back(dual_vertex(tri, t));
  std::sort(p.vertices.begin(), p.vertices.end());
  return p;
}

Q cell_volume(const TropicalComplex& tc, int cell) {
  const auto& c = tc.cells.at(cell);
  if (!c.bounded) throw Error("UnboundedCell", "volume of an unbounded cell");
  return lattice_volume_of_points(c.poly.vertices);
}

std::map<std::pair<int, int>, Q> tropical_periods(const RegularTriangulation& tri, const TropicalComplex& tc) {
  if (tri.dim != 2) throw Error("WrongDimension", "tropical periods are defined for curves (d = 1)");
  std::map<std::pair<int, int>, Q> out;
  for (int w = 0; w < static_cast<int>(tri.points.size()); ++w) {
    if (!tri.interior[w]) continue;
    Q total = 0;
    for (int m : tri.neighbors(w)) {
      const auto& e = tc.dual_of({w, m});
      Q len = primitive_lattice_length(e.poly.vertices.at(0), e.poly.vertices.at(1));
      total += len;
      if (tri.interior[m]) out[{w, m}] = len;
    }
    out[{w, w}] = total;
  }
  return out;
}

}  // namespace tp
