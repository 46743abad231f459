#include "tp/numeric_verify.hpp"

#include <algorithm>
#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/legendre.hpp>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>

#include "tp/errors.hpp"
#include "tp/gamma_asymptotics.hpp"
#include "tp/lattice_geom.hpp"
#include "tp/toric_calculus.hpp"

namespace tp {

namespace {

using cd = std::complex<double>;
using Series = std::vector<cd>;  // truncated power series in s

Series mul(const Series& a, const Series& b) {
  Series c(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; i + j < a.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

Series inverse(const Series& a) {
  Series r(a.size(), 0.0);
  r[0] = 1.0 / a[0];
  for (std::size_t k = 1; k < a.size(); ++k) {
    cd acc = 0;
    for (std::size_t j = 1; j <= k; ++j) acc += a[j] * r[k - j];
    r[k] = -acc / a[0];
  }
  return r;
}

Series power(Series a, int k) {
  Series r(a.size(), 0.0);
  r[0] = 1;
  for (; k > 0; k >>= 1) {
    if (k & 1) r = mul(r, a);
    a = mul(a, a);
  }
  return r;
}

// Coefficient of s^{l-1} in num(s) / den(s)^l, den(0) != 0: the residue at a
// zero of order one of s * den(s).
cd residue(const Series& num, const Series& den, int l) {
  return mul(num, power(inverse(den), l))[l - 1];
}

// (x + s)^k around s = 0 for integer k, as a series of the given length.
Series binomial_series(cd x, int k, std::size_t len) {
  Series r(len, 0.0);
  cd c = std::pow(x, k);
  for (std::size_t i = 0; i < len; ++i) {
    r[i] = c;
    c *= static_cast<double>(k - static_cast<int>(i)) / static_cast<double>(i + 1) / x;
  }
  return r;
}

struct GaussRule {
  std::vector<double> x, w;  // on [0, 1]
};

GaussRule gauss_rule(int n) {
  GaussRule g;
  for (double z : boost::math::legendre_p_zeros<double>(n)) {
    double dp = boost::math::legendre_p_prime(n, z);
    double wt = 2.0 / ((1 - z * z) * dp * dp);
    g.x.push_back(0.5 * (1 + z));
    g.w.push_back(0.5 * wt);
    if (z != 0) {
      g.x.push_back(0.5 * (1 - z));
      g.w.push_back(0.5 * wt);
    }
  }
  return g;
}

double det_d(std::vector<std::vector<double>> m) {
  std::size_t n = m.size();
  double det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(m[r][c]) > std::abs(m[p][c])) p = r;
    if (m[p][c] == 0) return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      double f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

using Point = std::vector<double>;

// Collapsed-coordinate Gauss product rule on a simplex with vertices vs.
cd duffy(const std::vector<Point>& vs, const GaussRule& g, const std::function<cd(const Point&)>& f) {
  std::size_t d = vs.size() - 1;
  std::vector<std::vector<double>> edges(d, std::vector<double>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) edges[i][j] = vs[i + 1][j] - vs[i][j];
  double vol = std::abs(det_d(edges));
  std::vector<std::size_t> idx(d, 0);
  cd total = 0;
  Point p(d);
  while (true) {
    double weight = vol, scale = 1;
    p = vs[0];
    for (std::size_t a = 0; a < d; ++a) {
      double xi = g.x[idx[a]];
      weight *= g.w[idx[a]] * std::pow(xi, static_cast<double>(d - 1 - a));
      scale *= xi;
      for (std::size_t j = 0; j < d; ++j) p[j] += scale * edges[a][j];
    }
    total += weight * f(p);
    std::size_t a = 0;
    while (a < d && ++idx[a] == g.x.size()) idx[a++] = 0;
    if (a == d) break;
  }
  return total;
}

// Composite rule on the standard simplex of dimension d (panels^d pieces for d <= 2).
cd simplex_integral(int d, int panels, const GaussRule& g, const std::function<cd(const Point&)>& f) {
  double h = 1.0 / panels;
  cd total = 0;
  if (d == 1) {
    for (int i = 0; i < panels; ++i) total += duffy({{i * h}, {(i + 1) * h}}, g, f);
  } else if (d == 2) {
    for (int i = 0; i < panels; ++i)
      for (int j = 0; i + j < panels; ++j) {
        total += duffy({{i * h, j * h}, {(i + 1) * h, j * h}, {i * h, (j + 1) * h}}, g, f);
        if (i + j < panels - 1)
          total += duffy({{(i + 1) * h, j * h}, {(i + 1) * h, (j + 1) * h}, {i * h, (j + 1) * h}}, g, f);
      }
  } else {
    std::vector<Point> vs(d + 1, Point(d, 0.0));
    for (int i = 0; i < d; ++i) vs[i + 1][i] = 1;
    total = duffy(vs, gauss_rule(static_cast<int>(g.x.size()) * panels), f);
  }
  return total;
}

void check_t(double t) {
  if (!(t > 0 && t < 1)) throw Error("BadParameter", "t must lie in (0, 1)");
}

struct Term {
  std::vector<double> e;  // m - w
  double log_a = 0;       // log of -c_m/c_w t^{lambda_m - lambda_w} (positive families)
  cd a;                   // same coefficient, complex
  cd log_ac;              // its complex logarithm, without underflow
  int p = 0;              // weight of m in v
};

std::vector<Term> terms_around(const ProblemInstance& inst, int w, double t,
                               const RegularTriangulation::Support& sup) {
  std::vector<Term> ts;
  QComplex cw = inst.coeffs[w].c;
  for (int m = 0; m < static_cast<int>(inst.size()); ++m) {
    if (m == w) continue;
    Term term;
    for (auto x : sub(inst.point(m), inst.point(w))) term.e.push_back(static_cast<double>(x));
    QComplex r = -(inst.coeffs[m].c * cw.inverse());
    double dl = to_double(inst.coeffs[m].lambda - inst.coeffs[w].lambda);
    term.a = cd(to_double(r.re), to_double(r.im)) * std::pow(t, dl);
    term.log_ac = std::log(cd(to_double(r.re), to_double(r.im))) + dl * std::log(t);
    if (r.im == 0 && r.re > 0) term.log_a = std::log(to_double(r.re)) + dl * std::log(t);
    for (std::size_t j = 0; j < sup.cell.size(); ++j)
      if (sup.cell[j] == m) term.p = static_cast<int>(sup.weights[j]);
    ts.push_back(term);
  }
  return ts;
}

int weight_at(const RegularTriangulation::Support& sup, int m) {
  for (std::size_t j = 0; j < sup.cell.size(); ++j)
    if (sup.cell[j] == m) return static_cast<int>(sup.weights[j]);
  return 0;
}

double dotd(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

void require_positive_family(const ProblemInstance& inst, int w) {
  for (int m = 0; m < static_cast<int>(inst.size()); ++m) {
    const QComplex& c = inst.coeffs[m].c;
    bool ok = c.im == 0 && (m == w ? c.re < 0 : c.re > 0);
    if (!ok) throw Error("NotPositiveFamily", "coefficient signs do not make the real sphere a cycle at " +
                                                 to_string(inst.point(m)));
  }
}

NumericResult real_cycle_quadrature(const ProblemInstance& inst, const RegularTriangulation& tri, int l,
                                    const IVec& v, int w, double t, const QuadratureConfig& cfg) {
  check_t(t);
  if (w < 0 || !tri.interior[w]) throw Error("NotInteriorPoint", "sphere cycles need an interior base point");
  require_positive_family(inst, w);
  auto sup = interior_support(inst, tri, l, v);
  int d = inst.d;
  std::size_t n = static_cast<std::size_t>(d + 1);
  double L = -std::log(t);
  auto terms = terms_around(inst, w, t, sup);
  int pw = weight_at(sup, w);

  // Facets of the dual cell, triangulated, mapped to u = -L n.
  auto poly = dual_cell_polytope(tri, w);
  Point center(n, 0.0);
  for (auto& p : poly.vertices)
    for (std::size_t j = 0; j < n; ++j) center[j] += to_double(p[j]) / static_cast<double>(poly.vertices.size());
  for (std::size_t j = 0; j < n; ++j) center[j] += cfg.center_shift * (to_double(poly.vertices[0][j]) - center[j]);
  Point u0(n);
  for (std::size_t j = 0; j < n; ++j) u0[j] = -L * center[j];
  std::vector<std::vector<Point>> simplices;
  for (int m : tri.neighbors(w)) {
    IVec e = sub(inst.point(m), inst.point(w));
    Q gap = inst.coeffs[m].lambda - inst.coeffs[w].lambda;
    std::vector<QVec> face;
    for (auto& p : poly.vertices)
      if (gap + dot(e, p) == 0) face.push_back(p);
    std::size_t drop = 0;
    while (e[drop] == 0) ++drop;
    std::vector<QVec> proj;
    for (auto& p : face) {
      QVec q;
      for (std::size_t j = 0; j < n; ++j)
        if (j != drop) q.push_back(p[j]);
      proj.push_back(q);
    }
    auto simp = d == 1 ? std::vector<std::vector<int>>{{0, 1}} : placing_triangulation(proj);
    for (auto& s : simp) {
      std::vector<Point> verts;
      for (int i : s) {
        Point u(n);
        for (std::size_t j = 0; j < n; ++j) u[j] = -L * to_double(face[i][j]);
        verts.push_back(u);
      }
      simplices.push_back(verts);
    }
  }

  auto logsum = [&](const Point& u, const Point& dir, double rho, double& slope) {
    double mx = -1e300;
    std::vector<double> ex(terms.size());
    for (std::size_t k = 0; k < terms.size(); ++k) {
      ex[k] = terms[k].log_a + dotd(terms[k].e, u) + rho * dotd(terms[k].e, dir);
      mx = std::max(mx, ex[k]);
    }
    double s = 0, ds = 0;
    for (std::size_t k = 0; k < terms.size(); ++k) {
      double x = std::exp(ex[k] - mx);
      s += x;
      ds += x * dotd(terms[k].e, dir);
    }
    slope = ds / s;
    return mx + std::log(s);
  };
  {
    double sl;
    if (logsum(u0, Point(n, 0.0), 0, sl) >= 0)
      throw Error("ChartGap", "projection center is not inside the real sphere; t too large");
  }

  double sign = (d % 2 == 0 ? 1.0 : -1.0) * cfg.orientation;
  auto integrate_with = [&](int panels) {
    GaussRule g = gauss_rule(cfg.gauss_order);
    cd total = 0;
    for (auto& s : simplices) {
      std::vector<std::vector<double>> jac(n, std::vector<double>(n));
      for (std::size_t j = 0; j < n; ++j) jac[j][0] = s[0][j] - u0[j];
      for (int i = 1; i <= d; ++i)
        for (std::size_t j = 0; j < n; ++j) jac[j][i] = s[i][j] - s[0][j];
      double jd = std::abs(det_d(jac));
      auto f = [&](const Point& par) -> cd {
        Point dir(n);
        for (std::size_t j = 0; j < n; ++j) {
          double p = s[0][j];
          for (int i = 1; i <= d; ++i) p += par[i - 1] * (s[i][j] - s[0][j]);
          dir[j] = p - u0[j];
        }
        // Root of the convex increasing log-sum along the ray, from the right.
        double slope;
        double rho = 1, hi = 1;
        while (logsum(u0, dir, hi, slope) <= 0) {
          hi *= 2;
          if (hi > 1e6) throw Error("NewtonDivergence", "ray does not leave the sphere");
        }
        rho = hi;
        int it = 0;
        for (;; ++it) {
          double phi = logsum(u0, dir, rho, slope);
          if (std::abs(phi) < cfg.newton_tol) break;
          if (it > cfg.max_newton || slope <= 0) throw Error("NewtonDivergence", "radial solve failed");
          rho -= phi / slope;
        }
        std::size_t len = static_cast<std::size_t>(l);
        Series den(len, 0.0);
        double hexp = 0, gamma = 0;
        for (auto& term : terms) {
          double c = dotd(term.e, dir);
          double big = std::exp(term.log_a + dotd(term.e, u0) + rho * c);
          double ck = c;
          for (std::size_t k = 0; k < len; ++k) {
            den[k] += big * ck;
            ck *= c / static_cast<double>(k + 2);
          }
          if (term.p > 0) {
            hexp += term.p * (term.log_a + dotd(term.e, u0) + rho * c);
            gamma += term.p * c;
          }
        }
        Series num(len, 0.0);
        double ex = (pw % 2 == 0 ? 1.0 : -1.0) * std::exp(hexp), gk = 1;
        for (std::size_t k = 0; k < len; ++k) {
          num[k] = ex * gk;
          gk *= gamma / static_cast<double>(k + 1);
        }
        num = mul(num, binomial_series(rho, d, len));
        return residue(num, den, l);
      };
      total += jd * simplex_integral(d, panels, g, f);
    }
    return sign * total;
  };
  NumericResult r;
  r.value = integrate_with(cfg.panels);
  r.error_estimate = std::abs(r.value - integrate_with(std::max(1, cfg.panels / 2)));
  return r;
}

namespace {

// Unimodular U (det +1) with U e = e_0 for a primitive integer vector e.
std::vector<IVec> unimodular_completion(const IVec& e) {
  std::size_t n = e.size();
  std::vector<IVec> u(n, IVec(n, 0));
  for (std::size_t i = 0; i < n; ++i) u[i][i] = 1;
  IVec x = e;
  auto row_op = [&](std::size_t i, std::size_t j, std::int64_t q) {  // row_i -= q row_j
    x[i] -= q * x[j];
    for (std::size_t k = 0; k < n; ++k) u[i][k] -= q * u[j][k];
  };
  auto swap_rows = [&](std::size_t i, std::size_t j) {
    std::swap(x[i], x[j]);
    std::swap(u[i], u[j]);
    for (std::size_t k = 0; k < n; ++k) u[j][k] = -u[j][k];  // keep det = +1
    x[j] = -x[j];
  };
  for (std::size_t i = 1; i < n; ++i) {
    while (x[i] != 0) {
      row_op(0, i, x[0] / x[i]);
      swap_rows(0, i);
    }
  }
  if (x[0] < 0) {
    // Negate rows 0 and 1 together (det unchanged).
    for (std::size_t r : {std::size_t(0), std::size_t(n > 1 ? 1 : 0)}) {
      x[r] = -x[r];
      for (std::size_t k = 0; k < n; ++k) u[r][k] = -u[r][k];
    }
  }
  if (x[0] != 1) throw Error("BadCell", "edge direction is not primitive");
  return u;
}

}  // namespace

NumericResult torus_cycle_quadrature(const ProblemInstance& inst, const RegularTriangulation& tri, int l,
                                     const IVec& v, std::vector<int> edge, int w_orientation, double t,
                                     const QuadratureConfig& cfg) {
  check_t(t);
  std::sort(edge.begin(), edge.end());
  if (edge.size() != 2 || !tri.is_cell(edge)) throw Error("BadCell", "torus cell must be dual to an edge");
  if (!std::binary_search(edge.begin(), edge.end(), w_orientation) || !tri.interior[w_orientation])
    throw Error("BadCell", "orientation vertex must be an interior vertex of the edge");
  int w = w_orientation;
  int m0 = edge[0] == w ? edge[1] : edge[0];
  int d = inst.d;
  std::size_t n = static_cast<std::size_t>(d + 1);
  auto sup = interior_support(inst, tri, l, v);
  int pw = weight_at(sup, w);
  auto u = unimodular_completion(sub(inst.point(m0), inst.point(w)));
  // Columns of U^{-1} are the lattice basis b_0 = m0 - w, b_1, ..., b_d.
  QMat uq;
  for (auto& row : u) uq.push_back(to_qvec(row));
  std::vector<Point> basis(n, Point(n));
  for (std::size_t j = 0; j < n; ++j) {
    QVec ej(n, Q(0)), col;
    ej[j] = 1;
    solve(uq, ej, col);
    for (std::size_t i = 0; i < n; ++i) basis[j][i] = to_double(col[i]);
  }
  // Size-reduce b_j against e so the slices |x_j| = const cross the tropical
  // edge as transversally as the lattice allows; row 0 of U absorbs the change.
  double ee = dotd(basis[0], basis[0]);
  for (std::size_t j = 1; j < n; ++j) {
    auto q = static_cast<std::int64_t>(std::llround(dotd(basis[j], basis[0]) / ee));
    for (std::size_t i = 0; i < n; ++i) {
      basis[j][i] -= static_cast<double>(q) * basis[0][i];
      u[0][i] += q * u[j][i];
    }
  }
  // Base point inside the dual cell of the edge.
  auto tc = dual_complex(tri);
  const DualCell& cell = tc.dual_of(edge);
  Point n0(n, 0.0);
  for (auto& p : cell.poly.vertices)
    for (std::size_t j = 0; j < n; ++j) n0[j] += to_double(p[j]) / static_cast<double>(cell.poly.vertices.size());
  for (auto& r : cell.rays)
    for (std::size_t j = 0; j < n; ++j) n0[j] += to_double(r[j]) / static_cast<double>(cell.rays.size());

  struct TorusTerm {
    cd log_a;
    int ey = 0;              // exponent of y
    std::vector<int> ex;     // exponents of x_1..x_d
    int p = 0;
  };
  std::vector<TorusTerm> terms;
  int m0_term = -1;
  for (auto& term : terms_around(inst, w, t, sup)) {
    IVec mw;
    for (double x : term.e) mw.push_back(static_cast<std::int64_t>(std::llround(x)));
    TorusTerm tt;
    tt.log_a = term.log_ac;
    tt.p = term.p;
    for (std::size_t i = 0; i < n; ++i) {
      std::int64_t a = dot(u[i], mw);
      if (i == 0) tt.ey = static_cast<int>(a);
      else tt.ex.push_back(static_cast<int>(a));
    }
    if (mw == sub(inst.point(m0), inst.point(w))) m0_term = static_cast<int>(terms.size());
    terms.push_back(tt);
  }
  std::vector<double> log_radius(d);
  for (int j = 0; j < d; ++j) log_radius[j] = dotd(basis[j + 1], n0) * std::log(t);

  auto integrate_with = [&](int nodes) {
    std::size_t len = static_cast<std::size_t>(l);
    std::vector<int> idx(d, 0);
    cd total = 0;
    std::vector<cd> coef(terms.size());
    while (true) {
      // Work in s = y / y0 with y0 = 1 / a'_{m0}: coefficients come out of
      // logarithms, so extreme t neither overflows nor underflows. The form
      // H / G^l dy / y is unchanged by the rescaling.
      std::vector<cd> log_x(d);
      for (int j = 0; j < d; ++j) log_x[j] = cd(log_radius[j], 2 * M_PI * idx[j] / nodes);
      std::vector<cd> lc(terms.size());
      for (std::size_t k = 0; k < terms.size(); ++k) {
        lc[k] = terms[k].log_a;
        for (int j = 0; j < d; ++j) lc[k] += static_cast<double>(terms[k].ex[j]) * log_x[j];
      }
      for (std::size_t k = 0; k < terms.size(); ++k)
        coef[k] = std::exp(lc[k] - static_cast<double>(terms[k].ey) * lc[m0_term]);
      // Among the roots of G, take the one nearest the tropical seed s = 1 in
      // log-modulus; plain Newton from the seed can jump between sheets.
      cd y0 = 1.0;
      int lo = 0, hi = 0;
      for (auto& term : terms) {
        lo = std::min(lo, term.ey);
        hi = std::max(hi, term.ey);
      }
      std::vector<cd> poly(static_cast<std::size_t>(hi - lo + 1), 0.0);  // in s = y / y0
      poly[static_cast<std::size_t>(-lo)] -= 1.0;
      for (std::size_t k = 0; k < terms.size(); ++k)
        poly[static_cast<std::size_t>(terms[k].ey - lo)] += coef[k] * std::pow(y0, terms[k].ey);
      // Negligible end coefficients only create roots far from |s| = 1 and
      // wreck the conditioning of the companion matrix; Newton below uses
      // the full polynomial.
      double big = 0;
      for (auto& c : poly) big = std::max(big, std::abs(c));
      while (poly.size() > 1 && std::abs(poly.back()) < 1e-15 * big) poly.pop_back();
      std::size_t first = 0;
      while (first + 1 < poly.size() && std::abs(poly[first]) < 1e-15 * big) ++first;
      poly.erase(poly.begin(), poly.begin() + static_cast<long>(first));
      cd y = y0;
      if (poly.size() > 2) {
        int deg = static_cast<int>(poly.size()) - 1;
        Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
        for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1;
        for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -poly[static_cast<std::size_t>(i)] / poly.back();
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
        double best = 1e300;
        for (int i = 0; i < deg; ++i) {
          cd s = es.eigenvalues()(i);
          double dist = std::abs(std::log(std::abs(s)));
          if (std::abs(s) > 0 && dist < best) {
            best = dist;
            y = y0 * s;
          }
        }
      }
      for (int it = 0;; ++it) {
        cd g = -1, dg = 0;
        double scale = 1;
        for (std::size_t k = 0; k < terms.size(); ++k) {
          cd mono = coef[k] * std::pow(y, terms[k].ey);
          g += mono;
          dg += mono * static_cast<double>(terms[k].ey) / y;
          scale += std::abs(mono);
        }
        if (std::abs(g) < cfg.newton_tol * scale) break;
        if (it > cfg.max_newton || dg == 0.0) throw Error("NewtonDivergence", "torus root solve failed");
        y -= g / dg;
      }
      Series den(len, 0.0), num(len, 0.0);
      cd hcoef = pw % 2 == 0 ? 1.0 : -1.0;
      int ky = -1;
      for (std::size_t k = 0; k < terms.size(); ++k) {
        Series b = binomial_series(y, terms[k].ey, len + 1);
        for (std::size_t i = 0; i < len; ++i) den[i] += coef[k] * b[i + 1];
        if (terms[k].p > 0) {
          hcoef *= std::pow(coef[k], terms[k].p);
          ky += terms[k].p * terms[k].ey;
        }
      }
      num = binomial_series(y, ky, len);
      for (auto& c : num) c *= hcoef;
      total += residue(num, den, l);
      int j = 0;
      while (j < d && ++idx[j] == nodes) idx[j++] = 0;
      if (j == d) break;
    }
    return total * std::pow(cd(0, 2 * M_PI / nodes), d) * static_cast<double>(cfg.orientation);
  };
  int nodes = 4 * cfg.panels;
  NumericResult r;
  r.value = integrate_with(nodes);
  r.error_estimate = std::abs(r.value - integrate_with(std::max(2, nodes / 2)));
  return r;
}

std::string SweepTable::to_csv() const {
  std::string out = "t,numeric_re,numeric_im,symbolic_re,symbolic_im,abs_err,est_quad_err\n";
  char buf[512];
  for (auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t, r.numeric.real(),
                  r.numeric.imag(), r.symbolic.real(), r.symbolic.imag(), r.abs_err, r.est_quad_err);
    out += buf;
  }
  return out;
}

SweepTable convergence_sweep(const ProblemInstance& inst, const RegularTriangulation& tri, int l, const IVec& v,
                             const CycleSpec& cycle, const std::vector<double>& ts, const QuadratureConfig& cfg) {
  for (std::size_t i = 0; i < ts.size(); ++i) {
    check_t(ts[i]);
    if (i > 0 && !(ts[i] < ts[i - 1])) throw Error("BadParameter", "t values must be strictly decreasing");
  }
  AsymptoticExpansion sym;
  if (cycle.kind == CycleSpec::Kind::Sphere) {
    auto fan = star_fan(tri, cycle.w);
    sym = sphere_period_asymptotics(inst, tri, fan, l, v, principal_branches(inst));
  } else {
    sym = torus_period_asymptotics(inst, tri, l, v, cycle.edge, cycle.w);
  }
  SweepTable table;
  for (double t : ts) {
    NumericResult nr = cycle.kind == CycleSpec::Kind::Sphere
                           ? real_cycle_quadrature(inst, tri, l, v, cycle.w, t, cfg)
                           : torus_cycle_quadrature(inst, tri, l, v, cycle.edge, cycle.w, t, cfg);
    SweepRow row;
    row.t = t;
    row.numeric = nr.value;
    row.symbolic = sym.eval(t);
    row.abs_err = std::abs(row.numeric - row.symbolic);
    row.est_quad_err = nr.error_estimate;
    table.rows.push_back(row);
  }
  table.decreasing = true;
  for (std::size_t i = 1; i < table.rows.size(); ++i)
    if (!(table.rows[i].abs_err < table.rows[i - 1].abs_err)) table.decreasing = false;
  if (table.rows.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, k = static_cast<double>(table.rows.size());
    for (auto& r : table.rows) {
      double x = std::log(r.t), y = std::log(std::max(r.abs_err, 1e-300));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    table.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  }
  return table;
}

}  // namespace tp
