#include "tp/gamma_asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "tp/errors.hpp"

namespace tp {

namespace {

QComplex ratio(const ProblemInstance& inst, int from, int to) {
  // -c_to / c_from
  return -(inst.coeffs[to].c * inst.coeffs[from].c.inverse());
}

bool negative_real(const QComplex& z) { return z.im == 0 && z.re < 0; }

std::int64_t det2(const IVec& a, const IVec& b) { return a[0] * b[1] - a[1] * b[0]; }

CF two_pi() { return CF(2) * CF::pi(); }

std::vector<int> with_point(std::vector<int> cell, int w) {
  if (!std::binary_search(cell.begin(), cell.end(), w)) cell.insert(std::upper_bound(cell.begin(), cell.end(), w), w);
  return cell;
}

std::int64_t weight_of(const RegularTriangulation::Support& s, int m) {
  for (std::size_t j = 0; j < s.cell.size(); ++j)
    if (s.cell[j] == m) return s.weights[j];
  return 0;
}

}  // namespace

std::int64_t BranchAssignment::k(int from, int to) const {
  auto it = winding.find({from, to});
  return it == winding.end() ? 0 : it->second;
}

CF BranchAssignment::arg(const ProblemInstance& inst, int from, int to) const {
  return CF::arg(ratio(inst, from, to)) + CF(Q(k(from, to))) * two_pi();
}

CF BranchAssignment::log(const ProblemInstance& inst, int from, int to) const {
  return CF::log_abs(ratio(inst, from, to)) + CF::i() * arg(inst, from, to);
}

BranchAssignment principal_branches(const ProblemInstance& inst) {
  BranchAssignment br;
  for (auto& o : inst.overrides) br.winding[{inst.index_of(o.from), inst.index_of(o.to)}] += o.winding;
  return br;
}

CF reversal_residual(const ProblemInstance& inst, const BranchAssignment& br, int a, int b) {
  return br.arg(inst, a, b) + br.arg(inst, b, a);
}

CF triangle_residual(const ProblemInstance& inst, const BranchAssignment& br, int m0, int m1, int m2) {
  std::int64_t d = det2(sub(inst.point(m1), inst.point(m0)), sub(inst.point(m2), inst.point(m0)));
  return br.arg(inst, m0, m1) - br.arg(inst, m0, m2) - br.arg(inst, m2, m1) - CF(Q(d)) * CF::pi();
}

BranchCheck check_branches(const ProblemInstance& inst, const RegularTriangulation& tri, const BranchAssignment& br) {
  if (inst.d != 1) throw Error("WrongDimension", "branch consistency is defined for curves");
  BranchCheck c;
  for (auto& e : tri.cells_by_dim[1]) {
    ++c.edges_checked;
    if (!reversal_residual(inst, br, e[0], e[1]).is_zero()) ++c.reversal_failures;
  }
  for (auto& t : tri.cells_by_dim[2]) {
    std::vector<int> p = t;
    do {
      ++c.triangles_checked;
      if (!triangle_residual(inst, br, p[0], p[1], p[2]).is_zero()) ++c.triangle_failures;
    } while (std::next_permutation(p.begin(), p.end()));
  }
  return c;
}

BranchAssignment choose_arg_branches(const ProblemInstance& inst, const RegularTriangulation& tri) {
  if (inst.d != 1) throw Error("WrongDimension", "globally consistent branches require d = 1");
  int n = static_cast<int>(inst.size());
  // Generic lift lambda' = lambda + index / q within the chamber.
  if (tri.margin <= 0) throw Error("ChamberPerturbationFailed", "zero chamber margin");
  Q bound = Q(n - 1) / tri.margin;
  Z q = bound.get_num() / bound.get_den() + 1;
  std::vector<Q> lift;
  bool injective = false;
  for (int attempt = 0; attempt < 64 && !injective; ++attempt, q *= 2) {
    lift.clear();
    for (int i = 0; i < n; ++i) lift.push_back(inst.coeffs[i].lambda + Q(i) / Q(q));
    std::set<Q> seen(lift.begin(), lift.end());
    injective = static_cast<int>(seen.size()) == n;
  }
  if (!injective) throw Error("ChamberPerturbationFailed", "could not separate lift values");
  {
    auto cs = inst.coeffs;
    for (int i = 0; i < n; ++i) cs[i].lambda = lift[i];
    if (validate_and_triangulate(ProblemInstance::make(inst.d, cs)).top != tri.top)
      throw Error("ChamberPerturbationFailed", "perturbed lift changes the triangulation");
  }
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return lift[a] < lift[b]; });

  BranchAssignment br;
  br.consistent = true;
  auto set_pair = [&](int from, int to, std::int64_t k) {
    br.winding[{from, to}] = k;
    // Reversal: Arg(1/z) = -Arg(z) unless z < 0, where both are pi.
    br.winding[{to, from}] = -k - (negative_real(ratio(inst, from, to)) ? 1 : 0);
  };
  auto is_tri = [&](int a, int b, int c) { return tri.is_cell({a, b, c}); };

  std::vector<bool> placed(n, false);
  placed[order[0]] = true;
  for (int step = 1; step < n; ++step) {
    int next = order[step];
    std::vector<int> ring;  // placed neighbours in counterclockwise order around next
    for (int m : tri.neighbors(next))
      if (placed[m]) ring.push_back(m);
    if (ring.empty()) throw Error("InconsistentBranches", "no placed neighbour");
    auto angle = [&](int m) {
      IVec d = sub(inst.point(m), inst.point(next));
      return std::atan2(static_cast<double>(d[1]), static_cast<double>(d[0]));
    };
    std::sort(ring.begin(), ring.end(), [&](int a, int b) { return angle(a) < angle(b); });
    // Placed points sharing a 2-cell with next and m.
    auto cell_partners = [&](int m) {
      std::vector<int> out;
      for (int x = 0; x < n; ++x)
        if (placed[x] && x != m && is_tri(next, m, x)) out.push_back(x);
      return out;
    };
    std::vector<int> candidates = ring;
    std::sort(candidates.begin(), candidates.end(), [&](int a, int b) { return lift[a] < lift[b]; });
    int start = -1;
    for (int m : candidates)
      if (cell_partners(m).size() <= 1) {
        start = m;
        break;
      }
    if (start < 0) throw Error("InconsistentBranches", "no starting element for " + to_string(inst.point(next)));
    int r = static_cast<int>(ring.size());
    int pos = static_cast<int>(std::find(ring.begin(), ring.end(), start) - ring.begin());
    int dir = 1;
    auto partners = cell_partners(start);
    if (!partners.empty() && r > 1 && ring[(pos + 1) % r] != partners[0]) dir = -1;
    std::int64_t prev = -1;
    for (int j = 0; j < r; ++j) {
      int m = ring[((pos + dir * j) % r + r) % r];
      if (j > 0 && is_tri(next, prev, m)) {
        // arg(next->m) = arg(next->prev) + arg(prev->m) + det(m-next, prev-next) pi
        std::int64_t d = det2(sub(inst.point(m), inst.point(next)), sub(inst.point(prev), inst.point(next)));
        CF target = br.arg(inst, next, static_cast<int>(prev)) + br.arg(inst, static_cast<int>(prev), m) +
                    CF(Q(d)) * CF::pi();
        auto kk = (target - CF::arg(ratio(inst, next, m))).ratio_to(two_pi());
        if (!kk || !is_integral(*kk)) throw Error("InconsistentBranches", "non-integral winding");
        set_pair(next, m, to_int64(*kk));
      } else {
        set_pair(next, m, 0);
      }
      prev = m;
    }
    placed[next] = true;
  }
  // Gauge A(a->b) += 2 pi (f(b) - f(a)) leaves both conditions intact; use it
  // to put every branch out of the first point on its principal value.
  std::map<int, std::int64_t> f;
  for (int m : tri.neighbors(order[0])) f[m] = -br.k(order[0], m);
  for (auto& [key, k] : br.winding) {
    auto g = [&](int x) { return f.count(x) ? f[x] : 0; };
    k += g(key.second) - g(key.first);
  }
  for (auto& o : inst.overrides) br.winding[{inst.index_of(o.from), inst.index_of(o.to)}] += o.winding;
  if (inst.overrides.empty() && !check_branches(inst, tri, br).ok())
    throw Error("InconsistentBranches", "constructed branches violate a consistency condition");
  return br;
}

int AsymptoticExpansion::degree() const {
  for (int k = static_cast<int>(coeffs.size()) - 1; k >= 0; --k)
    if (!coeffs[k].is_zero()) return k;
  return -1;
}

std::complex<double> AsymptoticExpansion::eval(double t) const {
  double L = -std::log(t);
  std::complex<double> total = 0;
  double p = 1;
  for (auto& c : coeffs) {
    total += c.eval() * p;
    p *= L;
  }
  return total;
}

std::string AsymptoticExpansion::to_string() const {
  const std::string minus = "−";
  std::string out;
  for (int k = degree(); k >= 0; --k) {
    const CF& c = coeffs[k];
    if (c.is_zero()) continue;
    std::string s = c.to_string();
    bool single = c.terms().size() == 1;
    bool neg = single && s.rfind(minus, 0) == 0;
    if (neg) s = s.substr(minus.size());
    std::string body;
    std::string power = k == 0 ? "" : (k == 1 ? "L" : "L^" + std::to_string(k));
    if (k == 0) {
      body = s;
    } else if (single && s == "1") {
      body = power;
    } else {
      body = (single ? s : "(" + s + ")") + "·" + power;
    }
    if (out.empty()) {
      out = (neg ? minus : "") + body;
    } else {
      out += (neg ? " " + minus + " " : " + ") + body;
    }
  }
  return out.empty() ? "0" : out;
}

bool AsymptoticExpansion::same_polynomial(const AsymptoticExpansion& o) const {
  std::size_t n = std::max(coeffs.size(), o.coeffs.size());
  for (std::size_t k = 0; k < n; ++k)
    if (coefficient(static_cast<int>(k)) != o.coefficient(static_cast<int>(k))) return false;
  return true;
}

AsymptoticExpansion AsymptoticExpansion::operator-(const AsymptoticExpansion& o) const {
  AsymptoticExpansion r;
  std::size_t n = std::max(coeffs.size(), o.coeffs.size());
  for (std::size_t k = 0; k < n; ++k)
    r.coeffs.push_back(coefficient(static_cast<int>(k)) - o.coefficient(static_cast<int>(k)));
  r.error_term = error_term || o.error_term;
  return r;
}

DivisorPoly gamma_class_series(const StarFan& fan) {
  DivisorPoly sigma = DivisorPoly::sigma(fan);
  DivisorPoly expo(fan);
  for (int k = 2; k <= fan.dim; ++k) {
    DivisorPoly s(fan);
    for (std::size_t r = 0; r < fan.rays.size(); ++r) {
      DivisorPoly d = DivisorPoly::divisor(fan, static_cast<int>(r));
      DivisorPoly p = DivisorPoly::constant(fan, CF(1));
      for (int j = 0; j < k; ++j) p = p * d;
      s += p;
    }
    DivisorPoly sk = DivisorPoly::constant(fan, CF(1));
    for (int j = 0; j < k; ++j) sk = sk * sigma;
    Q c = Q(k % 2 == 0 ? 1 : -1) / k;
    expo += (s - sk) * (CF(c) * CF::zeta(k));
  }
  return expo.exp();
}

RegularTriangulation::Support interior_support(const ProblemInstance& inst, const RegularTriangulation& tri, int l,
                                               const IVec& v) {
  if (l < 1) throw Error("BadScale", "l must be positive");
  QVec x;
  for (auto c : v) x.push_back(frac(c, l));
  if (static_cast<int>(v.size()) != tri.dim || !in_interior(inst.delta, x))
    throw Error("NotInVl", to_string(v) + " is not an interior lattice point of l*Delta");
  return tri.support_of(v, l);
}

DivisorPoly e_factor(const RegularTriangulation& tri, const StarFan& fan, int l, const IVec& v) {
  auto sup = tri.support_of(v, l);
  if (!tri.is_cell(with_point(sup.cell, fan.w)))
    throw Error("IncompatiblePair", "conv({w} u tau_v) is not a cell");
  DivisorPoly e = DivisorPoly::constant(fan, CF(1));
  DivisorPoly sigma = DivisorPoly::sigma(fan);
  for (std::size_t j = 0; j < sup.cell.size(); ++j) {
    int m = sup.cell[j];
    for (std::int64_t i = 0; i < sup.weights[j]; ++i) {
      if (m == fan.w) {
        e = e * (sigma - DivisorPoly::constant(fan, CF(Q(i))));
      } else {
        e = e * (DivisorPoly::divisor(fan, fan.ray_of_point(m)) + DivisorPoly::constant(fan, CF(Q(i))));
      }
    }
  }
  return e;
}

AsymptoticExpansion sphere_period_asymptotics(const ProblemInstance& inst, const RegularTriangulation& tri,
                                              const StarFan& fan, int l, const IVec& v, const BranchAssignment& br,
                                              const DivisorPoly* extra, const Q& theta_turns) {
  int d = inst.d;
  int w = fan.w;
  AsymptoticExpansion out;
  out.indices = "l=" + std::to_string(l) + " v=" + to_string(v) + " w=" + to_string(inst.point(w));
  out.orientation = "sphere cycle oriented as the positive real locus, inward normal convention in N_R";
  auto sup = interior_support(inst, tri, l, v);
  if (!tri.is_cell(with_point(sup.cell, w))) {
    out.coeffs.assign(d + 1, CF());
    return out;
  }
  DivisorPoly logs(fan);
  for (std::size_t r = 0; r < fan.rays.size(); ++r) {
    int m = fan.ray_points[r];
    CF c = br.log(inst, w, m);
    if (theta_turns != 0) c += CF::i() * two_pi() * CF(theta_turns * (tri.lift[m] - tri.lift[w]));
    logs += DivisorPoly::divisor(fan, static_cast<int>(r)) * c;
  }
  DivisorPoly x = (logs * CF(-1)).exp() * e_factor(tri, fan, l, v) * gamma_class_series(fan);
  if (extra) x = x * *extra;
  std::int64_t pw = weight_of(sup, w);
  Q sign = Q((d + pw) % 2 == 0 ? 1 : -1) / factorial(l - 1);
  DivisorPoly omega = DivisorPoly::omega(fan, tri);
  DivisorPoly power = x;
  for (int k = 0; k <= d + 1; ++k) {
    CF c = integrate(fan, power) * CF(sign / factorial(k));
    if (k <= d) {
      out.coeffs.push_back(c);
    } else if (!c.is_zero()) {
      throw Error("InternalError", "nonzero L^(d+1) coefficient");
    }
    power = power * omega;
  }
  return out;
}

AsymptoticExpansion theta_twisted_asymptotics(const ProblemInstance& inst, const RegularTriangulation& tri,
                                              const StarFan& fan, const IVec& v, const BranchAssignment& br,
                                              const Q& theta_turns) {
  auto e = sphere_period_asymptotics(inst, tri, fan, 1, v, br, nullptr, theta_turns);
  e.indices += " theta=" + to_string(theta_turns) + "*2pi";
  return e;
}

AsymptoticExpansion torus_period_asymptotics(const ProblemInstance& inst, const RegularTriangulation& tri, int l,
                                             const IVec& v, std::vector<int> edge, int w_orientation) {
  std::sort(edge.begin(), edge.end());
  if (edge.size() != 2 || !tri.is_cell(edge)) throw Error("BadCell", "torus cell must be dual to an edge");
  if (!std::binary_search(edge.begin(), edge.end(), w_orientation) || !tri.interior[w_orientation])
    throw Error("BadCell", "orientation vertex must be an interior vertex of the edge");
  int other = edge[0] == w_orientation ? edge[1] : edge[0];
  AsymptoticExpansion out;
  out.indices = "l=" + std::to_string(l) + " v=" + to_string(v) + " edge=" + to_string(inst.point(edge[0])) + "," +
                to_string(inst.point(edge[1]));
  out.orientation = "torus oriented by w=" + to_string(inst.point(w_orientation));
  auto sup = interior_support(inst, tri, l, v);
  CF unit = pow(CF(2) * CF::pi() * CF::i(), inst.d);
  CF value;
  if (sup.cell == std::vector<int>{w_orientation}) {
    value = -unit;
  } else if (sup.cell == std::vector<int>{other} && tri.interior[other]) {
    value = unit;
  }
  out.coeffs.assign(inst.d + 1, CF());
  out.coeffs[0] = value;
  return out;
}

LeadingTerm leading_term(const ProblemInstance& inst, const RegularTriangulation& tri, const TropicalComplex& tc,
                         int l, const IVec& v, int w) {
  int d = inst.d;
  auto sup = interior_support(inst, tri, l, v);
  auto cell = with_point(sup.cell, w);
  if (!tri.is_cell(cell)) throw Error("IncompatiblePair", "conv({w} u tau_v) is not a cell");
  auto vol_of = [&](const std::vector<int>& c) { return cell_volume(tc, tc.index.at(c)); };
  LeadingTerm lt;
  Q fact = 1;
  for (std::size_t j = 0; j < sup.cell.size(); ++j)
    if (sup.cell[j] != w) fact *= factorial(static_cast<int>(sup.weights[j]) - 1);
  fact /= factorial(l - 1);
  if (sup.cell == std::vector<int>{w}) {
    Q total = 0;
    for (int m : tri.neighbors(w)) total += vol_of(with_point({m}, w));
    lt.degree = d;
    lt.coefficient = (d % 2 == 1 ? total : Q(-total));
    return lt;
  }
  if (!std::binary_search(sup.cell.begin(), sup.cell.end(), w)) {
    lt.degree = d + 1 - static_cast<int>(sup.cell.size());
    lt.coefficient = (d % 2 == 0 ? fact : Q(-fact)) * vol_of(cell);
    return lt;
  }
  // w in tau_v: rewrite sigma * prod_J D_j with the relation given by a
  // functional that is 1 on every j - w, j in J.
  std::vector<int> J;
  for (int m : sup.cell)
    if (m != w) J.push_back(m);
  int k = static_cast<int>(J.size());
  if (k == d + 1) return lt;
  const std::vector<int>* top = nullptr;
  for (auto& t : tri.top)
    if (std::includes(t.begin(), t.end(), cell.begin(), cell.end())) {
      top = &t;
      break;
    }
  QMat a;
  QVec rhs;
  for (int m : *top) {
    if (m == w) continue;
    a.push_back(to_qvec(sub(tri.points[m], tri.points[w])));
    rhs.push_back(std::binary_search(J.begin(), J.end(), m) ? 1 : 0);
  }
  QVec nvec;
  solve(a, rhs, nvec);
  Q sum = 0;
  for (int m : tri.neighbors(w)) {
    if (std::binary_search(J.begin(), J.end(), m)) continue;
    auto c = with_point(cell, m);
    if (!tri.is_cell(c)) continue;
    Q g = 1 - dot(sub(tri.points[m], tri.points[w]), nvec);
    sum += g * vol_of(c);
  }
  std::int64_t pw = weight_of(sup, w);
  lt.degree = d - k;
  lt.coefficient = (d % 2 == 1 ? Q(1) : Q(-1)) * factorial(static_cast<int>(pw) - 1) * fact * sum;
  return lt;
}

}  // namespace tp
