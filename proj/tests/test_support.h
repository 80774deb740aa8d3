#pragma once

#include <random>
#include <string>
#include <vector>

#include "rscalc/error.h"
#include "rscalc/parameterizations.h"
#include "rscalc/ratfun.h"
#include "rscalc/tfmatrix.h"

namespace rscalc::testing {

inline Rational q(long p, long d = 1) {
  Rational r(p, d);
  r.canonicalize();
  return r;
}

inline Poly poly(std::vector<Rational> ascending) { return Poly(std::move(ascending)); }

/// z - c
inline Poly linear(const Rational& c) { return Poly({-c, Rational(1)}); }

inline RatFun zinv() { return RatFun::z_inv(); }

/// Small random rational in [-range, range] with denominator up to max_den.
inline Rational random_rational(std::mt19937& rng, int range = 3, int max_den = 4) {
  std::uniform_int_distribution<int> den(1, max_den);
  const int d = den(rng);
  std::uniform_int_distribution<int> num(-range * d, range * d);
  return q(num(rng), d);
}

inline Poly random_poly(std::mt19937& rng, int max_degree) {
  std::uniform_int_distribution<int> deg(0, max_degree);
  const int d = deg(rng);
  std::vector<Rational> c(static_cast<size_t>(d) + 1);
  for (auto& v : c) v = random_rational(rng);
  if (c.back() == 0) c.back() = 1;
  return Poly(std::move(c));
}

/// Random rational function with numerator and denominator degree <= max_degree.
inline RatFun random_ratfun(std::mt19937& rng, int max_degree, double zero_probability = 0.0) {
  std::bernoulli_distribution zero(zero_probability);
  if (zero(rng)) return RatFun();
  Poly num = random_poly(rng, max_degree);
  Poly den = random_poly(rng, max_degree);
  return RatFun(num, den.monic());
}

inline TFMatrix random_tfmatrix(std::mt19937& rng, const SignalSpace& rows, const SignalSpace& cols,
                                int max_degree, double zero_probability = 0.0) {
  TFMatrix m(rows, cols);
  for (int i = 0; i < m.num_rows(); ++i) {
    for (int j = 0; j < m.num_cols(); ++j) m(i, j) = random_ratfun(rng, max_degree, zero_probability);
  }
  return m;
}

/// Signal space with `blocks` blocks named s0, s1, ... of dimension 1..max_dim.
inline SignalSpace random_space(std::mt19937& rng, int blocks, int max_dim) {
  std::uniform_int_distribution<int> dim(1, max_dim);
  std::vector<SignalBlock> b;
  for (int k = 0; k < blocks; ++k) b.push_back({"s" + std::to_string(k), dim(rng)});
  return SignalSpace(std::move(b));
}

/// Polynomial in z^-1 with the given taps h_0, h_1, ...
inline RatFun fir(const std::vector<Rational>& taps) {
  const int n = static_cast<int>(taps.size()) - 1;
  std::vector<Rational> num(taps.rbegin(), taps.rend());
  return RatFun(Poly(num), Poly::monomial(n));
}

/// Random FIR matrix sum_{k=first..last} c_k z^-k with small rational taps.
inline TFMatrix random_fir(std::mt19937& rng, const SignalSpace& rows, const SignalSpace& cols, int first, int last,
                           double zero_probability = 0.3) {
  std::bernoulli_distribution zero(zero_probability);
  TFMatrix m(rows, cols);
  for (int i = 0; i < m.num_rows(); ++i) {
    for (int j = 0; j < m.num_cols(); ++j) {
      std::vector<Rational> taps(static_cast<size_t>(last) + 1);
      for (int k = first; k <= last; ++k) taps[k] = zero(rng) ? Rational(0) : random_rational(rng, 1, 4);
      m(i, j) = fir(taps);
    }
  }
  return m;
}

/// Plant with stabilizing gains F (A + BF Schur) and L (A + LC Schur).
struct PlantFixture {
  std::string name;
  PlantSS plant;
  QMatrix f;
  QMatrix l;
};

/// Output-feedback plants: scalar and 2-state, stable and unstable, D zero and nonzero.
inline std::vector<PlantFixture> output_feedback_plants() {
  return {
      {"scalar_stable", PlantSS({{q(1, 2)}}, {{1}}, {{1}}, {{0}}), QMatrix::zero(1, 1), QMatrix::zero(1, 1)},
      {"scalar_unstable", PlantSS({{2}}, {{1}}, {{1}}, {{0}}), QMatrix{{-2}}, QMatrix{{-2}}},
      {"scalar_feedthrough", PlantSS({{q(1, 2)}}, {{1}}, {{1}}, {{1}}), QMatrix::zero(1, 1), QMatrix::zero(1, 1)},
      {"double_integrator", PlantSS({{1, 1}, {0, 1}}, {{0}, {1}}, {{1, 0}}, {{0}}), QMatrix{{-1, -2}},
       QMatrix{{-2}, {-1}}},
      {"two_state_feedthrough", PlantSS({{q(1, 2), q(1, 4)}, {0, q(-1, 3)}}, {{1}, {q(1, 2)}}, {{1, 1}}, {{q(1, 3)}}),
       QMatrix::zero(1, 2), QMatrix::zero(2, 1)},
  };
}

/// State-feedback plants (C = I, D = O). L = -A makes A + LC = O.
inline std::vector<PlantFixture> state_feedback_plants() {
  auto make = [](std::string name, QMatrix a, QMatrix b, QMatrix f) {
    PlantSS p = PlantSS::state_feedback(a, std::move(b));
    return PlantFixture{std::move(name), p, std::move(f), -a};
  };
  return {
      make("scalar_stable", {{q(1, 2)}}, {{1}}, QMatrix::zero(1, 1)),
      make("scalar_unstable", {{2}}, {{1}}, {{-2}}),
      make("double_integrator", {{1, 1}, {0, 1}}, {{0}, {1}}, {{-1, -2}}),
      make("two_input", {{q(1, 2), 1}, {0, q(3, 2)}}, {{1, 0}, {0, 1}}, {{q(-1, 2), -1}, {0, q(-3, 2)}}),
  };
}

/// Admissible controller for a fixture: Youla with a random FIR Q (taps
/// z^0..z^-max_tap), redrawn while I - D Q(inf) is singular (improper K).
inline TFMatrix random_admissible_controller(std::mt19937& rng, const CoprimeFactors& f, int max_tap = 2) {
  for (;;) {
    const YoulaParam q(random_fir(rng, f.vr().rows(), f.vr().cols(), 0, max_tap));
    try {
      TFMatrix k = youla_to_controller(f, q);
      if (classify(k).all_proper) return k;
    } catch (const SingularError&) {
    }
  }
}

}  // namespace rscalc::testing
