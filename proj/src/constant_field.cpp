#include "tp/constant_field.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "tp/errors.hpp"

namespace tp {

namespace {

const std::string kMinus = "−";
const std::string kDot = "·";

Q bernoulli(int n) {
  static std::mutex mu;
  static std::vector<Q> cache{Q(1)};
  std::lock_guard<std::mutex> lock(mu);
  while (static_cast<int>(cache.size()) <= n) {
    int m = static_cast<int>(cache.size());
    Q s = 0;
    Z binom = 1;  // C(m+1, k)
    for (int k = 0; k < m; ++k) {
      s += binom * cache[k];
      binom = binom * (m + 1 - k) / (k + 1);
    }
    cache.push_back(-s / (m + 1));
  }
  return cache[n];
}

// Brings a monomial into canonical form, scaling *c accordingly.
Monomial normalize(const Monomial& in, Q& c) {
  Monomial out;
  int pi_exp = 0;
  int even_weight = 0;  // half the total weight of pi^2 and even zeta factors
  Q factor = 1;
  for (auto& [a, e] : in) {
    if (e == 0) continue;
    if (a.kind == Atom::Kind::Pi) {
      pi_exp += e;
    } else if (a.kind == Atom::Kind::Zeta && a.key % 2 == 0) {
      int k = static_cast<int>(a.key.get_si()) / 2;
      even_weight += k * e;
      for (int j = 0; j < e; ++j) factor *= even_zeta_ratio(k);
    } else if (a.kind == Atom::Kind::I) {
      if ((e / 2) % 2 == 1) c = -c;
      if (e % 2) out.push_back({a, 1});
    } else {
      out.push_back({a, e});
    }
  }
  even_weight += pi_exp / 2;
  pi_exp %= 2;
  if (pi_exp) out.push_back({Atom{Atom::Kind::Pi, 0}, 1});
  if (even_weight > 0) {
    c *= factor / even_zeta_ratio(even_weight);
    out.push_back({Atom{Atom::Kind::Zeta, 2 * even_weight}, 1});
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  return out;
}

Monomial multiply(const Monomial& a, const Monomial& b) {
  Monomial r;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      r.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      r.push_back(b[j++]);
    } else {
      r.push_back({a[i].first, a[i].second + b[j].second});
      ++i;
      ++j;
    }
  }
  return r;
}

std::string atom_name(const Atom& a) {
  switch (a.kind) {
    case Atom::Kind::Pi:
      return "pi";
    case Atom::Kind::Zeta:
      return "zeta(" + a.key.get_str() + ")";
    case Atom::Kind::Log:
      return "log(" + a.key.get_str() + ")";
    case Atom::Kind::Arg:
      return "arg(" + a.key.get_str() + ")";
    case Atom::Kind::I:
      return "i";
  }
  return "?";
}

struct GaussInt {
  Z re, im;
  GaussInt operator*(const GaussInt& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
  GaussInt conj() const { return {re, -im}; }
};

}  // namespace

Q even_zeta_ratio(int k) {
  // zeta(2k) = (-1)^(k+1) B_2k (2 pi)^(2k) / (2 (2k)!)
  Q r = bernoulli(2 * k) * (Q(1) * (Z(1) << (2 * k))) / (2 * factorial(2 * k));
  if (k % 2 == 0) r = -r;
  return r;
}

std::vector<std::pair<Z, int>> factor_integer(Z n) {
  if (n < 0) n = -n;
  std::vector<std::pair<Z, int>> out;
  if (n == 0) throw Error("UnsupportedCoefficient", "cannot factor zero");
  auto take = [&](const Z& p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) out.push_back({p, e});
  };
  take(2);
  for (long d = 3; d <= 1000000 && Z(d) * d <= n; d += 2) take(Z(d));
  if (n > 1) {
    if (mpz_probab_prime_p(n.get_mpz_t(), 30) == 0)
      throw Error("UnsupportedCoefficient", "composite cofactor " + n.get_str() + " not factored");
    out.push_back({n, 1});
  }
  return out;
}

std::pair<Z, Z> gaussian_prime(const Z& p) {
  if (p % 4 != 1) throw Error("BadPrime", p.get_str() + " is not 1 mod 4");
  Z x = 0;
  Z e = (p - 1) / 4;
  for (Z c = 2;; ++c) {
    Z t;
    mpz_powm(t.get_mpz_t(), c.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    if ((t * t) % p == p - 1) {
      x = t;
      break;
    }
  }
  Z r0 = p, r1 = x, lim = sqrt(p);
  while (r1 > lim) {
    Z r2 = r0 % r1;
    r0 = r1;
    r1 = r2;
  }
  Z a = r1, b = sqrt(p - a * a);
  if (a < b) std::swap(a, b);
  return {a, b};
}

CF::CF(const Q& q) {
  if (q != 0) terms_[{}] = q;
}

void CF::add_term(Monomial m, const Q& c) {
  if (c == 0) return;
  Q cc = c;
  m = normalize(m, cc);
  auto& slot = terms_[m];
  slot += cc;
  if (slot == 0) terms_.erase(m);
}

CF CF::pi() {
  CF x;
  x.add_term({{Atom{Atom::Kind::Pi, 0}, 1}}, 1);
  return x;
}

CF CF::zeta(int k) {
  if (k < 2) throw Error("BadZeta", "zeta(" + std::to_string(k) + ")");
  CF x;
  x.add_term({{Atom{Atom::Kind::Zeta, k}, 1}}, 1);
  return x;
}

CF CF::i() {
  CF x;
  x.add_term({{Atom{Atom::Kind::I, 0}, 1}}, 1);
  return x;
}

CF CF::log_prime(const Z& p) {
  CF x;
  x.add_term({{Atom{Atom::Kind::Log, p}, 1}}, 1);
  return x;
}

CF CF::arg_prime(const Z& p) {
  CF x;
  x.add_term({{Atom{Atom::Kind::Arg, p}, 1}}, 1);
  return x;
}

CF CF::log_abs(const QComplex& z) {
  if (z.is_zero()) throw Error("ZeroCoefficient", "log of zero");
  Q n = z.norm2();
  CF r;
  for (auto& [p, e] : factor_integer(n.get_num())) r += CF(frac(e, 2)) * log_prime(p);
  for (auto& [p, e] : factor_integer(n.get_den())) r -= CF(frac(e, 2)) * log_prime(p);
  return r;
}

CF CF::arg(const QComplex& z) {
  if (z.is_zero()) throw Error("ZeroCoefficient", "argument of zero");
  Z den = lcm(z.re.get_den(), z.im.get_den());
  Q qa = z.re * den, qb = z.im * den;
  Z a = qa.get_num(), b = qb.get_num();
  Z g = gcd(a, b);
  GaussInt u{a / g, b / g};
  Z norm = u.re * u.re + u.im * u.im;
  CF angle;
  GaussInt prod{1, 0};
  for (auto& [p, e] : factor_integer(norm)) {
    if (p == 2) {
      angle += CF(frac(e, 4)) * pi();
      for (int k = 0; k < e; ++k) prod = prod * GaussInt{1, 1};
      continue;
    }
    if (p % 4 != 1) throw Error("InternalError", "primitive Gaussian integer with inert prime factor");
    auto [pa, pb] = gaussian_prime(p);
    GaussInt pp{pa, pb};
    GaussInt t = u * pp.conj();
    bool divides = t.re % p == 0 && t.im % p == 0;
    GaussInt f = divides ? pp : pp.conj();
    angle += CF(divides ? e : -e) * arg_prime(p);
    for (int k = 0; k < e; ++k) prod = prod * f;
  }
  // u / prod is a unit.
  GaussInt q = u * prod.conj();
  Z pn = prod.re * prod.re + prod.im * prod.im;
  Z ur = q.re / pn, ui = q.im / pn;
  if (ur == -1) angle += pi();
  if (ui == 1) angle += CF(frac(1, 2)) * pi();
  if (ui == -1) angle -= CF(frac(1, 2)) * pi();
  double target = std::atan2(z.im.get_d(), z.re.get_d());
  double val = angle.eval().real();
  long k = std::lround((target - val) / (2 * M_PI));
  if (k != 0) angle += CF(2 * k) * pi();
  return angle;
}

CF CF::operator+(const CF& o) const {
  CF r = *this;
  r += o;
  return r;
}

CF CF::operator-(const CF& o) const {
  CF r = *this;
  r -= o;
  return r;
}

CF CF::operator-() const {
  CF r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

CF& CF::operator+=(const CF& o) {
  for (auto& [m, c] : o.terms_) {
    auto& slot = terms_[m];
    slot += c;
    if (slot == 0) terms_.erase(m);
  }
  return *this;
}

CF& CF::operator-=(const CF& o) {
  for (auto& [m, c] : o.terms_) {
    auto& slot = terms_[m];
    slot -= c;
    if (slot == 0) terms_.erase(m);
  }
  return *this;
}

CF CF::operator*(const CF& o) const {
  CF r;
  for (auto& [ma, ca] : terms_)
    for (auto& [mb, cb] : o.terms_) r.add_term(multiply(ma, mb), ca * cb);
  return r;
}

CF& CF::operator*=(const CF& o) {
  *this = *this * o;
  return *this;
}

bool CF::is_rational() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }

Q CF::constant() const {
  auto it = terms_.find({});
  return it == terms_.end() ? Q(0) : it->second;
}

std::optional<Q> CF::ratio_to(const CF& unit) const {
  if (unit.is_zero()) return std::nullopt;
  auto& [m0, c0] = *unit.terms_.begin();
  auto it = terms_.find(m0);
  Q q = it == terms_.end() ? Q(0) : it->second / c0;
  if (unit * CF(q) == *this) return q;
  return std::nullopt;
}

CF CF::conj() const {
  CF r;
  for (auto& [m, c] : terms_) {
    bool has_i = std::any_of(m.begin(), m.end(), [](const auto& x) { return x.first.kind == Atom::Kind::I; });
    r.terms_[m] = has_i ? Q(-c) : c;
  }
  return r;
}

std::complex<double> CF::eval() const {
  std::complex<double> total = 0;
  for (auto& [m, c] : terms_) {
    std::complex<double> v = c.get_d();
    for (auto& [a, e] : m) {
      std::complex<double> x;
      switch (a.kind) {
        case Atom::Kind::Pi:
          x = M_PI;
          break;
        case Atom::Kind::Zeta:
          x = std::riemann_zeta(a.key.get_d());
          break;
        case Atom::Kind::Log:
          x = std::log(a.key.get_d());
          break;
        case Atom::Kind::Arg: {
          auto [pa, pb] = gaussian_prime(a.key);
          x = std::atan2(pb.get_d(), pa.get_d());
          break;
        }
        case Atom::Kind::I:
          x = std::complex<double>(0, 1);
          break;
      }
      for (int k = 0; k < e; ++k) v *= x;
    }
    total += v;
  }
  return total;
}

std::string CF::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto& [m, c] : terms_) {
    Q mag = abs(c);
    std::string body;
    for (auto& [a, e] : m) {
      if (!body.empty()) body += kDot;
      body += atom_name(a);
      if (e > 1) body += "^" + std::to_string(e);
    }
    std::string term = body.empty() ? tp::to_string(mag) : (mag == 1 ? body : tp::to_string(mag) + kDot + body);
    if (first) {
      out = (c < 0 ? kMinus : "") + term;
    } else {
      out += (c < 0 ? " " + kMinus + " " : " + ") + term;
    }
    first = false;
  }
  return out;
}

CF pow(const CF& x, int k) {
  CF r(1);
  for (int j = 0; j < k; ++j) r *= x;
  return r;
}

}  // namespace tp
