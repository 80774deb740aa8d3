#include "rscalc/plant.h"

#include <stdexcept>

namespace rscalc {

PlantSS::PlantSS(QMatrix a, QMatrix b, QMatrix c, QMatrix d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
  const int n = a_.rows();
  if (n == 0 || a_.cols() != n) throw std::invalid_argument("plant: A must be square and nonempty");
  if (b_.rows() != n || b_.cols() == 0) throw std::invalid_argument("plant: B must have n rows");
  if (c_.cols() != n || c_.rows() == 0) throw std::invalid_argument("plant: C must have n columns");
  if (d_.rows() != c_.rows() || d_.cols() != b_.cols()) {
    throw std::invalid_argument("plant: D must be (outputs x inputs)");
  }
}

PlantSS PlantSS::state_feedback(QMatrix a, QMatrix b) {
  const int n = a.rows();
  const int m = b.cols();
  return PlantSS(std::move(a), std::move(b), QMatrix::identity(n), QMatrix::zero(n, m));
}

TFMatrix PlantSS::a_tf() const { return TFMatrix::constant(state_space(), state_space(), a_); }
TFMatrix PlantSS::b_tf() const { return TFMatrix::constant(state_space(), input_space(), b_); }
TFMatrix PlantSS::c_tf() const { return TFMatrix::constant(output_space(), state_space(), c_); }
TFMatrix PlantSS::d_tf() const { return TFMatrix::constant(output_space(), input_space(), d_); }

TFMatrix PlantSS::shift_minus_a() const {
  return RatFun::z() * TFMatrix::identity(state_space()) - a_tf();
}

TFMatrix PlantSS::resolvent() const { return shift_minus_a().inverse(); }

TFMatrix PlantSS::state_transfer() const { return resolvent() * b_tf(); }

TFMatrix PlantSS::transfer() const { return c_tf() * state_transfer() + d_tf(); }

bool PlantSS::is_schur_stable(double tol) const { return spectral_radius(a_.to_eigen()) < 1.0 - tol; }

}  // namespace rscalc
