#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rscalc/parameterizations.h"

namespace rscalc {

/// Finite impulse response sum_{k=1}^{T} taps[k-1] z^-k, an element of
/// z^-1 RH-infinity with finite support.
class FirPhi {
 public:
  FirPhi() = default;
  /// Throws std::invalid_argument for an empty list or inconsistent shapes.
  explicit FirPhi(std::vector<QMatrix> taps);

  int horizon() const { return static_cast<int>(taps_.size()); }
  int rows() const { return taps_.empty() ? 0 : taps_.front().rows(); }
  int cols() const { return taps_.empty() ? 0 : taps_.front().cols(); }
  bool empty() const { return taps_.empty(); }
  /// Coefficient of z^-k, 1 <= k <= horizon.
  const QMatrix& tap(int k) const { return taps_.at(static_cast<size_t>(k) - 1); }
  const std::vector<QMatrix>& taps() const { return taps_; }

  TFMatrix to_tf(const SignalSpace& rows, const SignalSpace& cols) const;

  friend bool operator==(const FirPhi&, const FirPhi&) = default;

 private:
  std::vector<QMatrix> taps_;
};

/// FIR state-feedback system response pair.
struct FirSlp {
  FirPhi phi_x;  // x <- x
  FirPhi phi_u;  // u <- x

  TFMatrix phi_x_tf(const PlantSS& plant) const;
  TFMatrix phi_u_tf(const PlantSS& plant) const;
  /// Validates the pair against the plant; throws ConstraintError.
  SlpStateFeedback to_slp(const PlantSS& plant, double tol = kDefaultPoleTolerance) const;
};

/// Phi_u taps as given, with the smallest exact correction making the terminal
/// condition A Phi_x[T] + B Phi_u[T] = O hold; Phi_x then follows from
/// Phi_x[1] = I, Phi_x[k+1] = A Phi_x[k] + B Phi_u[k]. Throws InfeasibleError if
/// no FIR pair of this horizon exists.
FirSlp complete_fir_slp(const PlantSS& plant, const std::vector<QMatrix>& phi_u_taps);

enum class VariantKind { kOriginal, kDeployment, kDesignSeparation };

std::string to_string(VariantKind kind);
/// "original_sls", "deployment", "design_separation"; throws std::invalid_argument.
VariantKind parse_variant_kind(const std::string& text);

/// Controller realization over eta = (x, u, delta) for a state-feedback plant.
struct RealizationVariant {
  VariantKind kind = VariantKind::kOriginal;
  FirPhi phi_x;
  FirPhi phi_u;
  /// Design separation only.
  FirPhi pc;
  FirPhi mc;

  static RealizationVariant original(FirSlp phi);
  static RealizationVariant deployment(FirSlp phi);
  static RealizationVariant design_separation(FirSlp phi, FirPhi pc, FirPhi mc);
};

/// Signal space (x, u, delta) of the realizations below.
SignalSpace sls_signal_space(const PlantSS& plant);

/// R over (x, u, delta). The x-row is [A + (1 - z) I, B, O] for all variants;
///   original:          u-row [O, O, z Phi_u], delta-row [I, O, I - z Phi_x]
///   deployment:        u-row [O, O, z Phi_u], delta-row [z^-1 (zI - A), -z^-1 B, O]
///   design separation: u-row [O, O, z Mc],    delta-row [I, O, I - z Pc]
Realization build_realization(const RealizationVariant& v, const PlantSS& plant);

struct CertificationReport {
  VariantKind kind = VariantKind::kOriginal;
  /// R off-diagonal blocks proper and S_r in RH-infinity.
  bool pass = false;
  ConditionReport conditions;
  StabilityMatrix stability{SignalSpace(), TFMatrix()};
  /// Deployment: whether A is Schur stable (the hypothesis of the
  /// deployment result), reported separately from the direct check.
  std::optional<bool> a_schur_stable;
  /// Design separation: S_delta,x in z^-1 RH-infinity (sufficient condition).
  std::optional<bool> sufficient_condition;
  /// Design separation: the realization constraint on (Pc, Mc).
  std::optional<bool> li_constraint;
};

/// Computes S_r = (I - R_r)^-1 exactly and checks it. Throws SingularError if
/// I - R_r is singular.
CertificationReport certify_realization(const RealizationVariant& v, const PlantSS& plant,
                                        double tol = kDefaultPoleTolerance);

std::string describe(const CertificationReport& report);

/// [Phi_x; Phi_u] [zI - A, -B] [Pc; Mc] == [Pc; Mc], exactly. Throws
/// ConstraintError unless I - z Pc and z Mc are proper.
bool li_constraint_check(const TFMatrix& pc, const TFMatrix& mc, const SlpStateFeedback& p, const PlantSS& plant);

struct SynthesisResult {
  FirSlp phi;
  /// Max absolute violation of the affine constraints by the floating-point
  /// KKT solution, before rationalization.
  double float_residual = 0.0;
  /// H2 cost sum_k |Qw^1/2 Phi_x[k]|_F^2 + |Rw^1/2 Phi_u[k]|_F^2 of the exact taps.
  double cost = 0.0;
};

/// FIR H2 state-feedback synthesis at horizon T. One equality-constrained
/// least-squares problem per disturbance column, solved via its KKT system;
/// the Phi_u taps are then rationalized and corrected so the constraints hold
/// exactly. Throws InfeasibleError when A^T is not in the range of
/// [A^{T-1} B, ..., B], and ConvergenceError if the KKT residual exceeds 1e-10.
SynthesisResult synthesize_sf_h2(const PlantSS& plant, const QMatrix& qw, const QMatrix& rw, int horizon);

struct LqrSolution {
  /// u = gain * x.
  Eigen::MatrixXd gain;
  Eigen::MatrixXd cost_to_go;
  int iterations = 0;
  /// max |P - (Q + A'PA - A'PB (R + B'PB)^-1 B'PA)| at the returned P.
  double riccati_residual = 0.0;
};

/// Fixed-point iteration of the discrete Riccati recursion from P = Qw until
/// successive iterates differ by less than tol (max abs entry). Throws
/// ConvergenceError on non-finite iterates, on exhausting max_iter, or if the
/// resulting gain does not make A + B K Schur stable.
LqrSolution dare_lqr(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::MatrixXd& qw,
                     const Eigen::MatrixXd& rw, int max_iter = 10000, double tol = 1e-12);
LqrSolution dare_lqr(const PlantSS& plant, const QMatrix& qw, const QMatrix& rw, int max_iter = 10000,
                     double tol = 1e-12);

struct StabilizingGains {
  QMatrix f;  // A + B F Schur
  QMatrix l;  // A + L C Schur
};

/// LQR gain for (A, B) and the dual gain for (A', C'), both with identity
/// weights, rationalized to small denominators while keeping them stabilizing.
StabilizingGains lqr_stabilizing_gains(const PlantSS& plant);

/// Time-domain sample sequences, t = 0..horizon, one vector per sample.
using SignalTrace = std::vector<Eigen::VectorXd>;

struct SimTrace {
  int horizon = 0;
  std::map<std::string, SignalTrace> signals;
  std::map<std::string, SignalTrace> disturbance;
};

/// Disturbance per signal name; missing names and missing samples are zero.
using DisturbanceSchedule = std::map<std::string, SignalTrace>;

/// Double-precision execution of the variant's update equations for
/// t = 0..horizon from zero initial conditions. Each step computes x[t] (from
/// x[t+1] = A x[t] + B u[t] + d_x[t]), then delta[t], then u[t]:
///   original:          Phi_x[1] delta[t] = x[t] + d_delta[t] - sum_{k>=2} Phi_x[k] delta[t+1-k]
///   design separation: same with Pc
///   deployment:        delta[t] = x[t] - A x[t-1] - B u[t-1] + d_delta[t]
///   u[t] = sum_{k>=1} Phi_u[k] delta[t+1-k] + d_u[t] (Mc for design separation).
/// Throws ConstraintError if Phi_x[1] (or Pc[1]) is singular.
SimTrace simulate(const RealizationVariant& v, const PlantSS& plant, const DisturbanceSchedule& d, int horizon);

struct ChannelDeviation {
  std::string signal;  // disturbance channel block
  int index = 0;       // entry within the block
  double max_deviation = 0.0;
  int worst_lag = 0;
  std::string worst_signal;
};

struct ImpulseReport {
  bool pass = false;
  double max_deviation = 0.0;
  double tol = 0.0;
  int horizon = 0;
  std::vector<ChannelDeviation> channels;
};

/// For every disturbance channel, simulates a unit impulse at t = 0 and
/// compares all signals at lags 0..horizon with the Markov parameters of the
/// matching column of S_r. Channels run concurrently.
ImpulseReport impulse_match(const RealizationVariant& v, const PlantSS& plant, int horizon, double tol = 1e-9);
/// Same comparison with the exact reference taken from `reference` and the
/// simulation run on `simulated` (used to detect corrupted taps).
ImpulseReport impulse_match(const RealizationVariant& reference, const RealizationVariant& simulated,
                            const PlantSS& plant, int horizon, double tol = 1e-9);

}  // namespace rscalc
