#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tp/rational.hpp"

namespace tp {

// Transcendental atoms. Log(p) = log p for a rational prime p; Arg(p) is the
// argument in (0, pi/4) of the Gaussian prime a+bi (a > b > 0) over a prime
// p = 1 mod 4. Together with pi these give a canonical form for logarithms
// and arguments of Gaussian rationals.
struct Atom {
  enum class Kind { Pi, Zeta, Log, Arg, I };
  Kind kind;
  Z key;  // zeta argument, or the prime p
  bool operator<(const Atom& o) const { return kind != o.kind ? kind < o.kind : key < o.key; }
  bool operator==(const Atom& o) const { return kind == o.kind && key == o.key; }
};

using Monomial = std::vector<std::pair<Atom, int>>;  // sorted by atom, positive exponents

// Q-polynomial in the atoms, kept in a canonical form: i^2 = -1, and every
// product of pi^2 and even zeta values is rewritten as a rational multiple of
// a single zeta(2k) (so pi appears with exponent at most 1).
class CF {
 public:
  CF() = default;
  CF(const Q& q);  // NOLINT(runtime/explicit)
  CF(long n) : CF(Q(n)) {}  // NOLINT(runtime/explicit)

  static CF pi();
  static CF zeta(int k);
  static CF i();
  static CF log_prime(const Z& p);
  static CF arg_prime(const Z& p);

  // log|z| for nonzero Gaussian rational z.
  static CF log_abs(const QComplex& z);
  // Principal argument of z in (-pi, pi].
  static CF arg(const QComplex& z);

  CF operator+(const CF& o) const;
  CF operator-(const CF& o) const;
  CF operator*(const CF& o) const;
  CF operator-() const;
  CF& operator+=(const CF& o);
  CF& operator-=(const CF& o);
  CF& operator*=(const CF& o);
  bool operator==(const CF& o) const { return terms_ == o.terms_; }
  bool operator!=(const CF& o) const { return !(*this == o); }

  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const;
  Q constant() const;  // coefficient of the empty monomial
  // Some q with *this == q * unit, if one exists (unit must be nonzero).
  std::optional<Q> ratio_to(const CF& unit) const;
  CF conj() const;  // i -> -i; all other atoms are real
  std::complex<double> eval() const;
  std::string to_string() const;
  const std::map<Monomial, Q>& terms() const { return terms_; }

 private:
  void add_term(Monomial m, const Q& c);
  std::map<Monomial, Q> terms_;
};

CF pow(const CF& x, int k);

// Factorization by trial division with a probabilistic primality check on
// the cofactor; throws UnsupportedCoefficient for an unfactored composite.
std::vector<std::pair<Z, int>> factor_integer(Z n);

// The Gaussian prime a+bi with a > b > 0 and a^2+b^2 = p, for p = 1 mod 4.
std::pair<Z, Z> gaussian_prime(const Z& p);

// zeta(2k) / pi^(2k), exact.
Q even_zeta_ratio(int k);

}  // namespace tp
