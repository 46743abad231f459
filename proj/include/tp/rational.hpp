#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace tp {

using Q = mpq_class;
using Z = mpz_class;

using IVec = std::vector<std::int64_t>;
using QVec = std::vector<Q>;
using QMat = std::vector<QVec>;
using IMat = std::vector<IVec>;

// "p/q" for non-integers, "p" for integers.
std::string to_string(const Q& q);
std::string to_string(const Z& z);
std::string to_string(const IVec& v);

// Accepts "p", "-p", "p/q". Throws std::invalid_argument on anything else.
Q parse_rational(const std::string& s);

QVec to_qvec(const IVec& v);
bool is_integral(const Q& q);
std::int64_t to_int64(const Q& q);  // requires integral value that fits
double to_double(const Q& q);

Q dot(const QVec& a, const QVec& b);
Q dot(const IVec& a, const QVec& b);
std::int64_t dot(const IVec& a, const IVec& b);
IVec sub(const IVec& a, const IVec& b);
IVec add(const IVec& a, const IVec& b);
IVec scale(const IVec& a, std::int64_t s);
QVec sub(const QVec& a, const QVec& b);
QVec add(const QVec& a, const QVec& b);
QVec scale(const QVec& a, const Q& s);

Q factorial(int n);
// Canonical n/d (mpq_class(n, d) alone is not canonicalized).
Q frac(long n, long d);

// Exact linear algebra over Q.
Q det(QMat m);
int rank(QMat m);
// Reduced row echelon form in place, returns pivot columns.
std::vector<int> rref(QMat& m);
// Solve square system a x = b; returns false if singular.
bool solve(const QMat& a, const QVec& b, QVec& x);
// Basis of {x : m x = 0}, ncols given explicitly for empty m.
QMat nullspace(const QMat& m, std::size_t ncols);

// Integer basis of the saturated lattice Z^n intersected with the rational
// span of the given vectors.
IMat saturated_lattice_basis(const QMat& spanning, std::size_t n);

// Integer determinant of a square integer matrix (exact).
Z det(const IMat& m);

std::int64_t gcd_vec(const IVec& v);

// Exact complex number with rational parts.
struct QComplex {
  Q re = 0;
  Q im = 0;
  bool is_zero() const { return re == 0 && im == 0; }
  Q norm2() const { return re * re + im * im; }
  bool operator==(const QComplex& o) const { return re == o.re && im == o.im; }
  QComplex operator*(const QComplex& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
  QComplex operator-() const { return {-re, -im}; }
  QComplex inverse() const {
    Q n = norm2();
    return {re / n, -im / n};
  }
};

}  // namespace tp
