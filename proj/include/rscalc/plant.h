#pragma once

#include "rscalc/exact_matrix.h"
#include "rscalc/tfmatrix.h"

namespace rscalc {

/// Signal names shared by every closed loop built from a plant.
namespace signal {
inline const std::string kState = "x";
inline const std::string kInput = "u";
inline const std::string kOutput = "y";
inline const std::string kDelta = "delta";
}  // namespace signal

/// Discrete-time state-space plant x[t+1] = A x[t] + B u[t],
/// y[t] = C x[t] + D u[t], with exact rational data.
class PlantSS {
 public:
  PlantSS(QMatrix a, QMatrix b, QMatrix c, QMatrix d);
  /// C = I, D = O.
  static PlantSS state_feedback(QMatrix a, QMatrix b);

  const QMatrix& a() const { return a_; }
  const QMatrix& b() const { return b_; }
  const QMatrix& c() const { return c_; }
  const QMatrix& d() const { return d_; }

  int num_states() const { return a_.rows(); }
  int num_inputs() const { return b_.cols(); }
  int num_outputs() const { return c_.rows(); }

  SignalSpace state_space() const { return SignalSpace::single(signal::kState, num_states()); }
  SignalSpace input_space() const { return SignalSpace::single(signal::kInput, num_inputs()); }
  SignalSpace output_space() const { return SignalSpace::single(signal::kOutput, num_outputs()); }

  TFMatrix a_tf() const;  // x <- x
  TFMatrix b_tf() const;  // x <- u
  TFMatrix c_tf() const;  // y <- x
  TFMatrix d_tf() const;  // y <- u
  /// zI - A.
  TFMatrix shift_minus_a() const;
  /// (zI - A)^-1, strictly proper.
  TFMatrix resolvent() const;
  /// (zI - A)^-1 B, the state-feedback plant (x <- u).
  TFMatrix state_transfer() const;
  /// C (zI - A)^-1 B + D (y <- u).
  TFMatrix transfer() const;

  bool is_schur_stable(double tol = 0.0) const;

 private:
  QMatrix a_, b_, c_, d_;
};

}  // namespace rscalc
