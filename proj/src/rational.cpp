#include "tp/rational.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <stdexcept>

namespace tp {

std::string to_string(const Q& q) {
  Q c = q;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

std::string to_string(const Z& z) { return z.get_str(); }

std::string to_string(const IVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s + ")";
}

static bool is_int_literal(const std::string& s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

Q parse_rational(const std::string& s) {
  auto slash = s.find('/');
  std::string num = slash == std::string::npos ? s : s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!is_int_literal(num) || !is_int_literal(den) || den[0] == '-' || den[0] == '+')
    throw std::invalid_argument("not a rational literal: '" + s + "'");
  if (num[0] == '+') num = num.substr(1);
  Z n(num), d(den);
  if (d == 0) throw std::invalid_argument("zero denominator: '" + s + "'");
  Q q(n, d);
  q.canonicalize();
  return q;
}

QVec to_qvec(const IVec& v) {
  QVec r;
  r.reserve(v.size());
  for (auto x : v) r.emplace_back(static_cast<long>(x));
  return r;
}

bool is_integral(const Q& q) {
  Q c = q;
  c.canonicalize();
  return c.get_den() == 1;
}

std::int64_t to_int64(const Q& q) {
  Q c = q;
  c.canonicalize();
  if (c.get_den() != 1 || !c.get_num().fits_slong_p())
    throw std::domain_error("rational is not a small integer: " + to_string(q));
  return c.get_num().get_si();
}

double to_double(const Q& q) { return q.get_d(); }

Q dot(const QVec& a, const QVec& b) {
  Q s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Q dot(const IVec& a, const QVec& b) {
  Q s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += Q(static_cast<long>(a[i])) * b[i];
  return s;
}

std::int64_t dot(const IVec& a, const IVec& b) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

IVec sub(const IVec& a, const IVec& b) {
  IVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

IVec add(const IVec& a, const IVec& b) {
  IVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

IVec scale(const IVec& a, std::int64_t s) {
  IVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
  return r;
}

QVec sub(const QVec& a, const QVec& b) {
  QVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

QVec add(const QVec& a, const QVec& b) {
  QVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

QVec scale(const QVec& a, const Q& s) {
  QVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
  return r;
}

Q frac(long n, long d) {
  Q q(n, d);
  q.canonicalize();
  return q;
}

Q factorial(int n) {
  Q r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

std::vector<int> rref(QMat& m) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  std::size_t rows = m.size(), cols = m[0].size(), r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    Q inv = 1 / m[r][c];
    for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Q f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(static_cast<int>(c));
    ++r;
  }
  return pivots;
}

Q det(QMat m) {
  std::size_t n = m.size();
  Q d = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      d = -d;
    }
    d *= m[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m[i][c] == 0) continue;
      Q f = m[i][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return d;
}

int rank(QMat m) { return static_cast<int>(rref(m).size()); }

bool solve(const QMat& a, const QVec& b, QVec& x) {
  std::size_t n = a.size();
  QMat aug(n, QVec(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = a[i][j];
    aug[i][n] = b[i];
  }
  auto piv = rref(aug);
  if (piv.size() != n || piv.back() != static_cast<int>(n) - 1) return false;
  x.assign(n, Q(0));
  for (std::size_t i = 0; i < n; ++i) x[i] = aug[i][n];
  return true;
}

QMat nullspace(const QMat& m, std::size_t ncols) {
  QMat r = m;
  auto piv = rref(r);
  std::vector<bool> is_piv(ncols, false);
  for (int p : piv) is_piv[p] = true;
  QMat basis;
  for (std::size_t f = 0; f < ncols; ++f) {
    if (is_piv[f]) continue;
    QVec v(ncols, Q(0));
    v[f] = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -r[i][f];
    basis.push_back(v);
  }
  return basis;
}

static std::vector<Z> integer_row(const QVec& v) {
  Z l = 1;
  for (auto& q : v) {
    Q c = q;
    c.canonicalize();
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den().get_mpz_t());
  }
  std::vector<Z> r;
  for (auto& q : v) {
    Q c = q * Q(l);
    c.canonicalize();
    r.push_back(c.get_num());
  }
  return r;
}

IMat saturated_lattice_basis(const QMat& spanning, std::size_t n) {
  // Orthogonal complement C of the span; lattice = integer kernel of C.
  QMat comp = nullspace(spanning, n);
  std::vector<std::vector<Z>> c;
  for (auto& v : comp) c.push_back(integer_row(v));
  std::vector<std::vector<Z>> u(n, std::vector<Z>(n, Z(0)));
  for (std::size_t i = 0; i < n; ++i) u[i][i] = 1;
  auto colop = [&](std::size_t dst, std::size_t src, const Z& f) {
    for (auto& row : c) row[dst] -= f * row[src];
    for (auto& row : u) row[dst] -= f * row[src];
  };
  auto colswap = [&](std::size_t a, std::size_t b) {
    for (auto& row : c) std::swap(row[a], row[b]);
    for (auto& row : u) std::swap(row[a], row[b]);
  };
  std::size_t p = 0;
  for (std::size_t i = 0; i < c.size() && p < n; ++i) {
    while (true) {
      std::size_t best = n;
      for (std::size_t j = p; j < n; ++j)
        if (c[i][j] != 0 && (best == n || abs(c[i][j]) < abs(c[i][best]))) best = j;
      if (best == n) break;
      if (best != p) colswap(best, p);
      bool done = true;
      for (std::size_t j = p + 1; j < n; ++j) {
        if (c[i][j] == 0) continue;
        Z f;
        mpz_fdiv_q(f.get_mpz_t(), c[i][j].get_mpz_t(), c[i][p].get_mpz_t());
        colop(j, p, f);
        if (c[i][j] != 0) done = false;
      }
      if (done) {
        ++p;
        break;
      }
    }
  }
  IMat basis;
  for (std::size_t j = p; j < n; ++j) {
    IVec v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = u[i][j].get_si();
    basis.push_back(v);
  }
  return basis;
}

Z det(const IMat& m) {
  QMat q;
  for (auto& r : m) q.push_back(to_qvec(r));
  Q d = det(q);
  d.canonicalize();
  return d.get_num();
}

std::int64_t gcd_vec(const IVec& v) {
  std::int64_t g = 0;
  for (auto x : v) g = std::gcd(g, x < 0 ? -x : x);
  return g;
}

}  // namespace tp
