#include "tp/hodge_curve.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "tp/errors.hpp"
#include "tp/toric_calculus.hpp"

namespace tp {

namespace {

constexpr double kTol = 1e-9;

void require_curve(const ProblemInstance& inst) {
  if (inst.d != 1) throw Error("WrongDimension", "limit Hodge data is defined for curves");
}

QMat zeros(std::size_t n) { return QMat(n, QVec(n, Q(0))); }

QMat mul(const QMat& a, const QMat& b) {
  QMat c = zeros(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < a.size(); ++k)
      if (a[i][k] != 0)
        for (std::size_t j = 0; j < a.size(); ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

QMat transpose(const QMat& a) {
  QMat t = zeros(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) t[j][i] = a[i][j];
  return t;
}

bool is_zero(const QMat& a) {
  for (auto& r : a)
    for (auto& x : r)
      if (x != 0) return false;
  return true;
}

std::vector<int> sorted_w(const ProblemInstance& inst) {
  auto w = inst.interior_indices();
  std::sort(w.begin(), w.end());  // indices follow the lexicographic order of the points
  return w;
}

bool adjacent(const RegularTriangulation& tri, int a, int b) {
  return tri.is_cell({std::min(a, b), std::max(a, b)});
}

}  // namespace

QMat monodromy_matrix(const ProblemInstance& inst, const RegularTriangulation& tri, const TropicalComplex& tc) {
  require_curve(inst);
  auto W = sorted_w(inst);
  int g = static_cast<int>(W.size());
  auto len = tropical_periods(tri, tc);
  QMat n = zeros(2 * g);
  for (int a = 0; a < g; ++a)
    for (int b = 0; b < g; ++b) {
      int w = W[a], w2 = W[b];
      if (w != w2 && !adjacent(tri, w, w2)) continue;
      Q l = len.at({w, w2});
      n[g + b][a] = w == w2 ? l : Q(-l);
    }
  return n;
}

CFMat p_matrix(const ProblemInstance& inst, const RegularTriangulation& tri, const BranchAssignment& br) {
  require_curve(inst);
  if (!check_branches(inst, tri, br).ok())
    throw Error("InconsistentBranches", "branches violate a consistency condition");
  auto W = sorted_w(inst);
  int g = static_cast<int>(W.size());
  CFMat p(g, std::vector<CF>(g));
  for (int b = 0; b < g; ++b) {
    int w = W[b];
    auto fan = star_fan(tri, w);
    auto sigma = DivisorPoly::sigma(fan);
    for (int a = 0; a < g; ++a) {
      int v = W[a];
      if (v != w && !adjacent(tri, v, w)) continue;
      CF total;
      for (std::size_t r = 0; r < fan.rays.size(); ++r) {
        auto dm = DivisorPoly::divisor(fan, static_cast<int>(r));
        auto other = v == w ? sigma : DivisorPoly::divisor(fan, fan.ray_of_point(v));
        total += integrate(fan, dm * other) * br.log(inst, w, fan.ray_points[r]);
      }
      p[a][b] = v == w ? -total : total;
    }
  }
  return p;
}

LimitHodgeData limit_filtration(const ProblemInstance& inst, const RegularTriangulation& tri,
                                const BranchAssignment& br) {
  require_curve(inst);
  LimitHodgeData h;
  h.W = sorted_w(inst);
  h.genus = static_cast<int>(h.W.size());
  int g = h.genus;
  h.N = monodromy_matrix(inst, tri, dual_complex(tri));
  h.expN = h.N;
  for (int i = 0; i < 2 * g; ++i) h.expN[i][i] += 1;
  h.Q = zeros(2 * g);
  for (int i = 0; i < g; ++i) {
    h.Q[i][g + i] = 1;
    h.Q[g + i][i] = -1;
  }
  h.P = p_matrix(inst, tri, br);
  CF unit = CF(-2) * CF::pi() * CF::i();
  for (int v = 0; v < g; ++v) {
    std::vector<CF> row(2 * g);
    row[v] = unit;
    for (int w = 0; w < g; ++w) row[g + w] = h.P[v][w];
    h.F1.push_back(row);
  }
  return h;
}

bool HodgeChecks::ok(int genus) const {
  return n_squared_zero && exp_n_preserves_q && infinitesimal_isotropy && length_block_symmetric &&
         f1_rank == genus && isotropy_residual < kTol && hodge_det > kTol && p_symmetric_numeric;
}

HodgeChecks check_limit_data(const LimitHodgeData& h) {
  HodgeChecks c;
  int g = h.genus;
  c.n_squared_zero = is_zero(mul(h.N, h.N));
  c.exp_n_preserves_q = mul(mul(transpose(h.expN), h.Q), h.expN) == h.Q;
  QMat inf = mul(transpose(h.N), h.Q);
  QMat qn = mul(h.Q, h.N);
  for (int i = 0; i < 2 * g; ++i)
    for (int j = 0; j < 2 * g; ++j) inf[i][j] += qn[i][j];
  c.infinitesimal_isotropy = is_zero(inf);
  c.length_block_symmetric = true;
  for (int a = 0; a < g; ++a)
    for (int b = 0; b < g; ++b)
      if (h.N[g + b][a] != h.N[g + a][b]) c.length_block_symmetric = false;

  Eigen::MatrixXcd f(g, 2 * g), q(2 * g, 2 * g), stack(2 * g, 2 * g);
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < 2 * g; ++j) f(i, j) = h.F1[i][j].eval();
  for (int i = 0; i < 2 * g; ++i)
    for (int j = 0; j < 2 * g; ++j) q(i, j) = to_double(h.Q[i][j]);
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(f);
  lu.setThreshold(kTol);
  c.f1_rank = static_cast<int>(lu.rank());
  c.isotropy_residual = g == 0 ? 0 : (f * q * f.transpose()).cwiseAbs().maxCoeff();
  stack << f, f.conjugate();
  c.limit_det = g == 0 ? 1 : std::abs(stack.determinant());
  Eigen::MatrixXcd orbit = Eigen::MatrixXcd::Identity(2 * g, 2 * g);
  for (int i = 0; i < 2 * g; ++i)
    for (int j = 0; j < 2 * g; ++j) orbit(i, j) += std::complex<double>(0, 10) * to_double(h.N[i][j]);
  Eigen::MatrixXcd fo = f * orbit.transpose();
  stack << fo, fo.conjugate();
  c.hodge_det = g == 0 ? 1 : std::abs(stack.determinant());
  double asym = 0;
  for (int a = 0; a < g; ++a)
    for (int b = 0; b < g; ++b) asym = std::max(asym, std::abs(h.P[a][b].eval() - h.P[b][a].eval()));
  c.p_symmetric_numeric = asym < kTol;
  return c;
}

CrosscheckReport monodromy_crosscheck(const ProblemInstance& inst, const RegularTriangulation& tri,
                                      const TropicalComplex& tc, const BranchAssignment& br) {
  require_curve(inst);
  auto W = sorted_w(inst);
  int g = static_cast<int>(W.size());
  QMat n = monodromy_matrix(inst, tri, tc);
  CrosscheckReport rep;
  rep.recovered = zeros(g);
  CF unit = CF(-2) * CF::pi() * CF::i();
  for (int b = 0; b < g; ++b) {
    int w = W[b];
    auto fan = star_fan(tri, w);
    for (int a = 0; a < g; ++a) {
      const IVec& v = inst.point(W[a]);
      auto diff =
          theta_twisted_asymptotics(inst, tri, fan, v, br, 1) - theta_twisted_asymptotics(inst, tri, fan, v, br, 0);
      auto m = diff.coefficient(0).ratio_to(unit);
      if (!m) {
        rep.exact = false;
        continue;
      }
      // M(w, v) against the alpha*_v -> beta*_w entry of N.
      rep.recovered[b][a] = *m;
      Q err = abs(*m - n[g + b][a]);
      rep.max_discrepancy = std::max(rep.max_discrepancy, err);
    }
  }
  return rep;
}

int period_vector_mismatches(const ProblemInstance& inst, const RegularTriangulation& tri, const LimitHodgeData& h,
                             const BranchAssignment& br) {
  int g = h.genus;
  int bad = 0;
  for (int b = 0; b < g; ++b) {
    auto fan = star_fan(tri, h.W[b]);
    for (int a = 0; a < g; ++a) {
      auto e = sphere_period_asymptotics(inst, tri, fan, 1, inst.point(h.W[a]), br);
      // exp(L N / (2 pi i)) removes L N(alpha*_v) from the beta*_w component.
      if (e.coefficient(1) != CF(h.N[g + b][a])) ++bad;
      if (e.coefficient(0) != h.F1[a][g + b]) ++bad;
      if (e.degree() > 1) ++bad;
    }
  }
  return bad;
}

}  // namespace tp
