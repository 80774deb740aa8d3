#pragma once

#include <complex>
#include <string>
#include <vector>

#include "rscalc/rational.h"

namespace rscalc {

/// Default margin for pole stability: a pole p is stable iff |p| < 1 - tol.
inline constexpr double kDefaultPoleTolerance = 1e-8;

/// Univariate polynomial in z with exact rational coefficients, stored in
/// ascending powers. The highest stored coefficient is nonzero; the zero
/// polynomial has no coefficients.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Rational> ascending);

  static Poly constant(const Rational& c);
  /// c * z^degree
  static Poly monomial(int degree, const Rational& c = 1);

  const std::vector<Rational>& coeffs() const { return coeffs_; }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_constant() const { return coeffs_.size() <= 1; }
  /// Lowest power with a nonzero coefficient; -1 for zero.
  int valuation() const;
  bool is_monomial() const;
  /// Coefficient of z^k, zero outside the stored range.
  Rational coeff(int k) const;
  const Rational& leading() const { return coeffs_.back(); }

  Poly monic() const;
  Poly derivative() const;
  Poly scaled(const Rational& s) const;
  /// Multiplies by z^k (k >= 0) or divides by z^-k when every dropped
  /// coefficient is zero.
  Poly shifted(int k) const;

  std::complex<double> evaluate(std::complex<double> z) const;

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend bool operator==(const Poly& a, const Poly& b) { return a.coeffs_ == b.coeffs_; }

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

struct PolyDivision {
  Poly quotient;
  Poly remainder;
};

/// Euclidean division over Q; throws std::domain_error on a zero divisor.
PolyDivision divide(const Poly& a, const Poly& b);

/// Exact quotient a / b; throws std::domain_error if b does not divide a.
Poly exact_quotient(const Poly& a, const Poly& b);

/// Monic greatest common divisor; gcd(0, 0) = 0.
Poly poly_gcd(const Poly& a, const Poly& b);

std::string to_string(const Poly& p);

enum class Properness { kStrictlyProper, kBiproper, kImproper };

/// Rational function num/den in z. Always normalized: num and den coprime,
/// den monic, zero represented as 0/1. Exact equality is structural.
class RatFun {
 public:
  RatFun() : den_(Poly::constant(1)) {}
  RatFun(const Rational& c);  // NOLINT: constants convert implicitly
  RatFun(long c) : RatFun(Rational(c)) {}  // NOLINT
  RatFun(int c) : RatFun(Rational(c)) {}  // NOLINT
  /// Throws std::domain_error when den is zero.
  RatFun(Poly num, Poly den);
  explicit RatFun(Poly num) : RatFun(std::move(num), Poly::constant(1)) {}

  /// z^k for any integer k.
  static RatFun z_pow(int k);
  static RatFun z() { return z_pow(1); }
  static RatFun z_inv() { return z_pow(-1); }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return den_.degree() == 0 && num_.degree() <= 0; }
  bool is_polynomial() const { return den_.degree() == 0; }
  /// deg(den) - deg(num); the zero function has no relative degree and
  /// reports a large positive value.
  int relative_degree() const;
  /// Value at z = infinity for proper functions (zero when strictly proper).
  Rational value_at_infinity() const;

  RatFun inverse() const;

  RatFun& operator+=(const RatFun& b);
  RatFun& operator-=(const RatFun& b);
  RatFun& operator*=(const RatFun& b);
  RatFun& operator/=(const RatFun& b);

  friend RatFun operator+(RatFun a, const RatFun& b) { return a += b; }
  friend RatFun operator-(RatFun a, const RatFun& b) { return a -= b; }
  friend RatFun operator*(RatFun a, const RatFun& b) { return a *= b; }
  friend RatFun operator/(RatFun a, const RatFun& b) { return a /= b; }
  friend RatFun operator-(const RatFun& a);
  friend bool operator==(const RatFun& a, const RatFun& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  std::complex<double> evaluate(std::complex<double> z) const;

 private:
  struct Normalized {};
  RatFun(Poly num, Poly den, Normalized) : num_(std::move(num)), den_(std::move(den)) {}
  void normalize();

  Poly num_;
  Poly den_;
};

enum class ArithOp { kAdd, kSub, kMul, kDiv };

/// Single entry point for the four field operations.
RatFun rf_arith(const RatFun& a, const RatFun& b, ArithOp op);

Properness classify(const RatFun& r);
inline bool is_proper(const RatFun& r) { return classify(r) != Properness::kImproper; }

/// Roots of the (already cancelled) denominator with multiplicity. Exact
/// square-free factorization precedes numeric root finding, so repeated
/// poles are located as accurately as simple ones.
std::vector<std::complex<double>> poles(const RatFun& r);

/// Proper and every pole strictly inside the circle of radius 1 - tol.
bool is_stable(const RatFun& r, double tol = kDefaultPoleTolerance);

/// Markov parameters h_0..h_n of the expansion r = sum_k h_k z^-k.
/// Throws std::domain_error for improper r.
std::vector<Rational> series(const RatFun& r, int n);

std::string to_string(const RatFun& r);

}  // namespace rscalc
