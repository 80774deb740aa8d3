#include "rscalc/ratfun.h"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

namespace rscalc {

namespace {

using IntPoly = std::vector<mpz_class>;

void trim(IntPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// Integer polynomial with unit content and positive leading coefficient.
IntPoly primitive_part(IntPoly p) {
  trim(p);
  if (p.empty()) return p;
  mpz_class g = 0;
  for (const auto& c : p) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) break;
  }
  if (p.back() < 0) g = -g;
  if (g != 1) {
    for (auto& c : p) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  }
  return p;
}

IntPoly to_primitive(const Poly& p) {
  mpz_class l = 1;
  for (const auto& c : p.coeffs()) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  }
  IntPoly r;
  r.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) {
    mpz_class v = c.get_num() * (l / c.get_den());
    r.push_back(v);
  }
  return primitive_part(std::move(r));
}

// lc(b)^k * a = q * b + r with deg r < deg b.
IntPoly pseudo_remainder(IntPoly a, const IntPoly& b) {
  const int db = static_cast<int>(b.size()) - 1;
  const mpz_class& lb = b.back();
  while (static_cast<int>(a.size()) - 1 >= db && !a.empty()) {
    const int shift = static_cast<int>(a.size()) - 1 - db;
    const mpz_class la = a.back();
    for (auto& c : a) c *= lb;
    for (int i = 0; i <= db; ++i) a[i + shift] -= la * b[i];
    trim(a);
  }
  return a;
}

Poly from_int(const IntPoly& p) {
  std::vector<Rational> c;
  c.reserve(p.size());
  for (const auto& v : p) c.emplace_back(v);
  return Poly(std::move(c));
}

std::vector<std::complex<double>> roots_of_squarefree(const Poly& p) {
  const int d = p.degree();
  std::vector<std::complex<double>> roots;
  if (d <= 0) return roots;
  const Poly m = p.monic();
  if (d == 1) {
    roots.emplace_back(-m.coeff(0).get_d(), 0.0);
    return roots;
  }
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
  for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) companion(i, d - 1) = -m.coeff(i).get_d();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  const Poly dm = m.derivative();
  for (int i = 0; i < d; ++i) {
    std::complex<double> z = solver.eigenvalues()(i);
    // A couple of Newton steps tighten eigenvalue accuracy; simple roots
    // make the derivative nonzero.
    for (int it = 0; it < 3; ++it) {
      const std::complex<double> fz = m.evaluate(z);
      const std::complex<double> dz = dm.evaluate(z);
      if (std::abs(dz) == 0.0) break;
      const std::complex<double> step = fz / dz;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
      z -= step;
    }
    roots.push_back(z);
  }
  return roots;
}

}  // namespace

// ---------------------------------------------------------------- Poly

Poly::Poly(std::vector<Rational> ascending) : coeffs_(std::move(ascending)) { trim(); }

Poly Poly::constant(const Rational& c) { return Poly(std::vector<Rational>{c}); }

Poly Poly::monomial(int degree, const Rational& c) {
  if (degree < 0) throw std::invalid_argument("Poly::monomial: negative degree");
  std::vector<Rational> v(static_cast<size_t>(degree) + 1);
  v.back() = c;
  return Poly(std::move(v));
}

void Poly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

int Poly::valuation() const {
  for (size_t k = 0; k < coeffs_.size(); ++k) {
    if (coeffs_[k] != 0) return static_cast<int>(k);
  }
  return -1;
}

bool Poly::is_monomial() const { return !is_zero() && valuation() == degree(); }

Rational Poly::coeff(int k) const {
  if (k < 0 || k >= static_cast<int>(coeffs_.size())) return Rational(0);
  return coeffs_[k];
}

Poly Poly::monic() const {
  if (is_zero() || leading() == 1) return *this;
  return scaled(1 / leading());
}

Poly Poly::derivative() const {
  if (coeffs_.size() <= 1) return Poly();
  std::vector<Rational> d(coeffs_.size() - 1);
  for (size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * static_cast<long>(k);
  return Poly(std::move(d));
}

Poly Poly::scaled(const Rational& s) const {
  if (s == 0) return Poly();
  Poly r = *this;
  for (auto& c : r.coeffs_) c *= s;
  return r;
}

Poly Poly::shifted(int k) const {
  if (is_zero() || k == 0) return *this;
  if (k > 0) {
    std::vector<Rational> v(static_cast<size_t>(k));
    v.insert(v.end(), coeffs_.begin(), coeffs_.end());
    return Poly(std::move(v));
  }
  if (valuation() < -k) throw std::domain_error("Poly::shifted: division by z is not exact");
  return Poly(std::vector<Rational>(coeffs_.begin() - k, coeffs_.end()));
}

std::complex<double> Poly::evaluate(std::complex<double> z) const {
  std::complex<double> acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + it->get_d();
  return acc;
}

Poly operator+(const Poly& a, const Poly& b) {
  const auto& big = a.coeffs_.size() >= b.coeffs_.size() ? a : b;
  const auto& small = a.coeffs_.size() >= b.coeffs_.size() ? b : a;
  Poly r = big;
  for (size_t k = 0; k < small.coeffs_.size(); ++k) r.coeffs_[k] += small.coeffs_[k];
  r.trim();
  return r;
}

Poly operator-(const Poly& a) {
  Poly r = a;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  std::vector<Rational> r(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (size_t j = 0; j < b.coeffs_.size(); ++j) r[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return Poly(std::move(r));
}

PolyDivision divide(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  if (a.degree() < b.degree()) return {Poly(), a};
  if (b.is_monomial()) {
    // Division by c*z^k splits coefficients directly.
    const int k = b.degree();
    const Rational inv = 1 / b.leading();
    const auto& c = a.coeffs();
    std::vector<Rational> q(c.begin() + k, c.end());
    for (auto& v : q) v *= inv;
    std::vector<Rational> r(c.begin(), c.begin() + k);
    return {Poly(std::move(q)), Poly(std::move(r))};
  }
  std::vector<Rational> rem = a.coeffs();
  const int db = b.degree();
  std::vector<Rational> quot(static_cast<size_t>(a.degree() - db) + 1);
  const Rational inv_lead = 1 / b.leading();
  for (int k = a.degree(); k >= db; --k) {
    if (rem[k] == 0) continue;
    const Rational f = rem[k] * inv_lead;
    quot[k - db] = f;
    for (int i = 0; i <= db; ++i) rem[k - db + i] -= f * b.coeffs()[i];
  }
  rem.resize(static_cast<size_t>(db));
  return {Poly(std::move(quot)), Poly(std::move(rem))};
}

Poly exact_quotient(const Poly& a, const Poly& b) {
  PolyDivision d = divide(a, b);
  if (!d.remainder.is_zero()) throw std::domain_error("exact_quotient: nonzero remainder");
  return d.quotient;
}

Poly poly_gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant()) return Poly::constant(1);
  const int shift = std::min(a.valuation(), b.valuation());
  if (a.is_monomial() || b.is_monomial()) return Poly::monomial(shift);
  if (a == b) return a.monic();
  IntPoly x = to_primitive(a.shifted(-a.valuation()));
  IntPoly y = to_primitive(b.shifted(-b.valuation()));
  if (x.size() < y.size()) std::swap(x, y);
  while (!y.empty()) {
    if (y.size() == 1) {
      x = IntPoly{1};
      break;
    }
    IntPoly r = primitive_part(pseudo_remainder(std::move(x), y));
    x = std::move(y);
    y = std::move(r);
  }
  return from_int(x).monic().shifted(shift);
}

std::string to_string(const Poly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = p.degree(); k >= 0; --k) {
    const Rational& c = p.coeffs()[k];
    if (c == 0) continue;
    Rational mag = abs(c);
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    const bool unit = mag == 1 && k > 0;
    if (!unit) os << format_rational(mag);
    if (k > 0) {
      if (!unit) os << "*";
      os << "z";
      if (k > 1) os << "^" << k;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------- RatFun

RatFun::RatFun(const Rational& c) : num_(Poly::constant(c)), den_(Poly::constant(1)) {}

RatFun::RatFun(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
  normalize();
}

void RatFun::normalize() {
  if (num_.is_zero()) {
    den_ = Poly::constant(1);
    return;
  }
  if (!den_.is_constant()) {
    Poly g = poly_gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = exact_quotient(num_, g);
      den_ = exact_quotient(den_, g);
    }
  }
  if (den_.leading() != 1) {
    const Rational inv = 1 / den_.leading();
    num_ = num_.scaled(inv);
    den_ = den_.scaled(inv);
  }
}

RatFun RatFun::z_pow(int k) {
  if (k >= 0) return RatFun(Poly::monomial(k), Poly::constant(1), Normalized{});
  return RatFun(Poly::constant(1), Poly::monomial(-k), Normalized{});
}

int RatFun::relative_degree() const {
  if (is_zero()) return std::numeric_limits<int>::max() / 2;
  return den_.degree() - num_.degree();
}

Rational RatFun::value_at_infinity() const {
  const int rel = relative_degree();
  if (rel < 0) throw std::domain_error("value_at_infinity: improper function");
  if (rel > 0) return Rational(0);
  return num_.leading();
}

RatFun RatFun::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of the zero rational function");
  const Rational inv = 1 / num_.leading();
  return RatFun(den_.scaled(inv), num_.scaled(inv), Normalized{});
}

RatFun& RatFun::operator+=(const RatFun& b) {
  if (b.is_zero()) return *this;
  if (is_zero()) return *this = b;
  if (den_ == b.den_) {
    num_ = num_ + b.num_;
    if (num_.is_zero()) return *this = RatFun();
    if (!den_.is_constant()) {
      Poly g = poly_gcd(num_, den_);
      if (g.degree() > 0) {
        num_ = exact_quotient(num_, g);
        den_ = exact_quotient(den_, g);
      }
    }
    return *this;
  }
  // Henrici: common factors of the sum can only come from gcd(den, b.den).
  const Poly g = poly_gcd(den_, b.den_);
  if (g.degree() == 0) {
    num_ = num_ * b.den_ + b.num_ * den_;
    den_ = den_ * b.den_;
    if (num_.is_zero()) *this = RatFun();
    return *this;
  }
  const Poly da = exact_quotient(den_, g);
  const Poly db = exact_quotient(b.den_, g);
  Poly t = num_ * db + b.num_ * da;
  if (t.is_zero()) return *this = RatFun();
  const Poly e = poly_gcd(t, g);
  if (e.degree() > 0) {
    num_ = exact_quotient(t, e);
    den_ = da * exact_quotient(b.den_, e);
  } else {
    num_ = std::move(t);
    den_ = da * b.den_;
  }
  return *this;
}

RatFun& RatFun::operator-=(const RatFun& b) { return *this += -b; }

RatFun& RatFun::operator*=(const RatFun& b) {
  if (is_zero() || b.is_zero()) return *this = RatFun();
  if (b.is_constant()) {
    num_ = num_.scaled(b.num_.leading());
    return *this;
  }
  if (is_constant()) {
    const Rational c = num_.leading();
    *this = b;
    num_ = num_.scaled(c);
    return *this;
  }
  Poly g1 = poly_gcd(num_, b.den_);
  Poly g2 = poly_gcd(b.num_, den_);
  Poly n1 = g1.degree() > 0 ? exact_quotient(num_, g1) : num_;
  Poly d2 = g1.degree() > 0 ? exact_quotient(b.den_, g1) : b.den_;
  Poly n2 = g2.degree() > 0 ? exact_quotient(b.num_, g2) : b.num_;
  Poly d1 = g2.degree() > 0 ? exact_quotient(den_, g2) : den_;
  num_ = n1 * n2;
  den_ = d1 * d2;
  return *this;
}

RatFun& RatFun::operator/=(const RatFun& b) {
  if (b.is_zero()) throw std::domain_error("division by the zero rational function");
  return *this *= b.inverse();
}

RatFun operator-(const RatFun& a) {
  RatFun r = a;
  r.num_ = -r.num_;
  return r;
}

std::complex<double> RatFun::evaluate(std::complex<double> z) const {
  return num_.evaluate(z) / den_.evaluate(z);
}

RatFun rf_arith(const RatFun& a, const RatFun& b, ArithOp op) {
  switch (op) {
    case ArithOp::kAdd:
      return a + b;
    case ArithOp::kSub:
      return a - b;
    case ArithOp::kMul:
      return a * b;
    case ArithOp::kDiv:
      return a / b;
  }
  throw std::invalid_argument("rf_arith: unknown operation");
}

Properness classify(const RatFun& r) {
  if (r.is_zero()) return Properness::kStrictlyProper;
  const int rel = r.relative_degree();
  if (rel > 0) return Properness::kStrictlyProper;
  if (rel == 0) return Properness::kBiproper;
  return Properness::kImproper;
}

std::vector<std::complex<double>> poles(const RatFun& r) {
  std::vector<std::complex<double>> out;
  const Poly& den = r.den();
  if (den.degree() <= 0) return out;
  // Poles at the origin are counted exactly.
  const int origin = den.valuation();
  out.assign(static_cast<size_t>(origin), std::complex<double>(0.0, 0.0));
  Poly p = den.shifted(-origin);
  if (p.degree() <= 0) return out;
  // Yun's square-free factorization.
  Poly dp = p.derivative();
  Poly a = poly_gcd(p, dp);
  Poly b = exact_quotient(p, a);
  Poly c = exact_quotient(dp, a);
  Poly d = c - b.derivative();
  for (int mult = 1; b.degree() > 0; ++mult) {
    Poly factor = poly_gcd(b, d);
    if (factor.is_zero()) factor = b.monic();
    const Poly next_b = exact_quotient(b, factor);
    const Poly next_c = exact_quotient(d, factor);
    for (const auto& root : roots_of_squarefree(factor)) {
      for (int k = 0; k < mult; ++k) out.push_back(root);
    }
    b = next_b;
    d = next_c - b.derivative();
  }
  return out;
}

bool is_stable(const RatFun& r, double tol) {
  if (!is_proper(r)) return false;
  for (const auto& p : poles(r)) {
    if (!(std::abs(p) < 1.0 - tol)) return false;
  }
  return true;
}

std::vector<Rational> series(const RatFun& r, int n) {
  if (n < 0) throw std::invalid_argument("series: negative length");
  if (!is_proper(r)) throw std::domain_error("series: improper rational function");
  std::vector<Rational> h(static_cast<size_t>(n) + 1);
  if (r.is_zero()) return h;
  const int d = r.den().degree();
  // In powers of z^-1: num has coefficients a_k = num[d-k], den b_k = den[d-k].
  for (int k = 0; k <= n; ++k) {
    Rational acc = r.num().coeff(d - k);
    for (int j = 1; j <= std::min(k, d); ++j) {
      const Rational bj = r.den().coeff(d - j);
      if (bj != 0) acc -= bj * h[k - j];
    }
    h[k] = acc;
  }
  return h;
}

std::string to_string(const RatFun& r) {
  if (r.den().degree() == 0) return to_string(r.num());
  return "(" + to_string(r.num()) + ")/(" + to_string(r.den()) + ")";
}

}  // namespace rscalc
