#pragma once

#include "rscalc/plant.h"
#include "rscalc/realization.h"

namespace rscalc {

/// @name Closed loops of a plant and a controller
/// Positive feedback throughout: u = K y + d_u.
//@{

/// eta = (y, u), R = [[O, G], [K, O]]. The names of G's row and column
/// spaces become the signal names, so G may map u to y or u to x.
Realization plant_controller_realization(const TFMatrix& g, const TFMatrix& k);

/// eta = (x, u), R = [[A + (1 - z) I, B], [K, O]] with K mapping x to u.
Realization state_feedback_realization(const PlantSS& plant, const TFMatrix& k);

/// eta = (x, u, y), R = [[A + (1 - z) I, B, O], [O, O, K], [C, D, O]].
Realization output_feedback_realization(const PlantSS& plant, const TFMatrix& k);

/// S of `r` if the loop meets the causality/stability conditions, else throws
/// StabilityError naming the failing blocks.
StabilityMatrix stable_closed_loop(const Realization& r, double tol = kDefaultPoleTolerance);
//@}

/// Doubly coprime factors of G = Ml^-1 Nl = Nr Mr^-1 with
/// [[Ml, -Nl], [-Vl, Ul]] [[Ur, Nr], [Vr, Mr]] = I.
/// Spaces: Ml, Ur on y; Ul, Mr on u; Nl, Nr map u to y; Vl, Vr map y to u.
class CoprimeFactors {
 public:
  /// Validates the double Bezout identity exactly and membership of all eight
  /// factors in RH-infinity numerically; Ml and Mr must have proper inverses.
  /// Throws ConstraintError.
  CoprimeFactors(TFMatrix ml, TFMatrix nl, TFMatrix vl, TFMatrix ul, TFMatrix ur, TFMatrix nr, TFMatrix vr,
                 TFMatrix mr, double tol = kDefaultPoleTolerance);

  const TFMatrix& ml() const { return ml_; }
  const TFMatrix& nl() const { return nl_; }
  const TFMatrix& vl() const { return vl_; }
  const TFMatrix& ul() const { return ul_; }
  const TFMatrix& ur() const { return ur_; }
  const TFMatrix& nr() const { return nr_; }
  const TFMatrix& vr() const { return vr_; }
  const TFMatrix& mr() const { return mr_; }

  /// Nr Mr^-1.
  TFMatrix plant() const;

 private:
  TFMatrix ml_, nl_, vl_, ul_, ur_, nr_, vr_, mr_;
};

/// State-space factorization from gains F (A + BF Schur) and L (A + LC Schur).
/// Throws ConstraintError for non-stabilizing gains.
CoprimeFactors coprime_factorize(const PlantSS& plant, const QMatrix& f, const QMatrix& l,
                                 double tol = kDefaultPoleTolerance);

class YoulaParam {
 public:
  /// Throws ConstraintError unless Q is in RH-infinity.
  explicit YoulaParam(TFMatrix q, double tol = kDefaultPoleTolerance);
  const TFMatrix& q() const { return q_; }

 private:
  TFMatrix q_;
};

/// K = (Vr - Mr Q)(Ur - Nr Q)^-1.
TFMatrix youla_to_controller(const CoprimeFactors& f, const YoulaParam& q);
/// Q = Mr^-1 (Vr - S_uy Ml^-1) from the plant/controller loop.
YoulaParam controller_to_youla(const CoprimeFactors& f, const TFMatrix& k, double tol = kDefaultPoleTolerance);

/// Closed-loop maps of the plant/controller loop: Y = S_yy, W = S_yu,
/// U = S_uy, Z = S_uu.
class IopParam {
 public:
  /// Checks [I, -G][[Y, W], [U, Z]] = [I, O] and [[Y, W], [U, Z]][-G; I] = [O; I]
  /// exactly and RH-infinity membership numerically.
  IopParam(TFMatrix g, TFMatrix y, TFMatrix w, TFMatrix u, TFMatrix z, double tol = kDefaultPoleTolerance);

  const TFMatrix& g() const { return g_; }
  const TFMatrix& y() const { return y_; }
  const TFMatrix& w() const { return w_; }
  const TFMatrix& u() const { return u_; }
  const TFMatrix& z() const { return z_; }

  friend bool operator==(const IopParam&, const IopParam&) = default;

 private:
  TFMatrix g_, y_, w_, u_, z_;
};

IopParam iop_from_controller(const TFMatrix& g, const TFMatrix& k, double tol = kDefaultPoleTolerance);
/// K = U Y^-1.
TFMatrix iop_to_controller(const IopParam& p);

class SlpStateFeedback {
 public:
  /// Checks (zI - A) Phi_x - B Phi_u = I exactly and Phi_x, Phi_u in
  /// z^-1 RH-infinity numerically.
  SlpStateFeedback(const PlantSS& plant, TFMatrix phi_x, TFMatrix phi_u, double tol = kDefaultPoleTolerance);

  const TFMatrix& phi_x() const { return phi_x_; }
  const TFMatrix& phi_u() const { return phi_u_; }

  friend bool operator==(const SlpStateFeedback&, const SlpStateFeedback&) = default;

 private:
  TFMatrix phi_x_, phi_u_;
};

/// K = Phi_u Phi_x^-1.
TFMatrix slp_sf_to_controller(const SlpStateFeedback& p);
SlpStateFeedback slp_sf_from_controller(const PlantSS& plant, const TFMatrix& k,
                                        double tol = kDefaultPoleTolerance);
/// Full S of the state-feedback loop: first column [Phi_x; Phi_u], the
/// u-column completed as e_u + [Phi_x; Phi_u] B.
StabilityMatrix slp_sf_stability(const SlpStateFeedback& p, const PlantSS& plant);

class SlpOutputFeedback {
 public:
  /// Checks [zI - A, -B][[Phi_xx, Phi_xy], [Phi_ux, Phi_uy]] = [I, O] and
  /// [[Phi_xx, Phi_xy], [Phi_ux, Phi_uy]][zI - A; -C] = [I; O] exactly;
  /// Phi_xx, Phi_ux, Phi_xy in z^-1 RH-infinity and Phi_uy in RH-infinity.
  SlpOutputFeedback(const PlantSS& plant, TFMatrix phi_xx, TFMatrix phi_ux, TFMatrix phi_xy, TFMatrix phi_uy,
                    double tol = kDefaultPoleTolerance);

  const TFMatrix& phi_xx() const { return phi_xx_; }
  const TFMatrix& phi_ux() const { return phi_ux_; }
  const TFMatrix& phi_xy() const { return phi_xy_; }
  const TFMatrix& phi_uy() const { return phi_uy_; }

  friend bool operator==(const SlpOutputFeedback&, const SlpOutputFeedback&) = default;

 private:
  TFMatrix phi_xx_, phi_ux_, phi_xy_, phi_uy_;
};

/// K = K0 (I + D K0)^-1 with K0 = Phi_uy - Phi_ux Phi_xx^-1 Phi_xy.
TFMatrix slp_of_to_controller(const SlpOutputFeedback& p, const QMatrix& d);
SlpOutputFeedback slp_of_from_controller(const PlantSS& plant, const TFMatrix& k,
                                         double tol = kDefaultPoleTolerance);
/// Full S over (x, u, y) from the four SLP blocks: the y-row from
/// S_y = C S_x + D S_u + e_y and the u-column from e_u + S_x B + S_y D.
StabilityMatrix slp_of_stability(const SlpOutputFeedback& p, const PlantSS& plant);

/// {Phi_yx, Phi_ux, Phi_yy, Phi_uy} = {S_yx, S_ux, S_yy, S_uy}.
class MixedParam1 {
 public:
  /// Checks [I, -G][[Phi_yx, Phi_yy], [Phi_ux, Phi_uy]] = [C (zI - A)^-1, I]
  /// and [[Phi_yx, Phi_yy], [Phi_ux, Phi_uy]][zI - A; -C] = O exactly; all
  /// four blocks in RH-infinity.
  MixedParam1(const PlantSS& plant, TFMatrix phi_yx, TFMatrix phi_ux, TFMatrix phi_yy, TFMatrix phi_uy,
              double tol = kDefaultPoleTolerance);

  const TFMatrix& phi_yx() const { return phi_yx_; }
  const TFMatrix& phi_ux() const { return phi_ux_; }
  const TFMatrix& phi_yy() const { return phi_yy_; }
  const TFMatrix& phi_uy() const { return phi_uy_; }

  friend bool operator==(const MixedParam1&, const MixedParam1&) = default;

 private:
  TFMatrix phi_yx_, phi_ux_, phi_yy_, phi_uy_;
};

/// {Phi_xy, Phi_uy, Phi_xu, Phi_uu} = {S_xy, S_uy, S_xu, S_uu}.
class MixedParam2 {
 public:
  /// Checks [zI - A, -B][[Phi_xy, Phi_xu], [Phi_uy, Phi_uu]] = O and
  /// Phi_xu - Phi_xy G = (zI - A)^-1 B, Phi_uu - Phi_uy G = I exactly; all
  /// four blocks in RH-infinity.
  MixedParam2(const PlantSS& plant, TFMatrix phi_xy, TFMatrix phi_uy, TFMatrix phi_xu, TFMatrix phi_uu,
              double tol = kDefaultPoleTolerance);

  const TFMatrix& phi_xy() const { return phi_xy_; }
  const TFMatrix& phi_uy() const { return phi_uy_; }
  const TFMatrix& phi_xu() const { return phi_xu_; }
  const TFMatrix& phi_uu() const { return phi_uu_; }

  friend bool operator==(const MixedParam2&, const MixedParam2&) = default;

 private:
  TFMatrix phi_xy_, phi_uy_, phi_xu_, phi_uu_;
};

/// K = Phi_uy Phi_yy^-1.
TFMatrix mixed1_to_controller(const MixedParam1& p);
MixedParam1 mixed1_from_controller(const PlantSS& plant, const TFMatrix& k, double tol = kDefaultPoleTolerance);
/// K = Phi_uu^-1 Phi_uy.
TFMatrix mixed2_to_controller(const MixedParam2& p);
MixedParam2 mixed2_from_controller(const PlantSS& plant, const TFMatrix& k, double tol = kDefaultPoleTolerance);

/// @name Direct maps into the IOP bundle
//@{
/// [[Y, W], [U, Z]] = [[(Ur - Nr Q) Ml, (Ur - Nr Q) Nl], [(Vr - Mr Q) Ml, I + (Vr - Mr Q) Nl]].
IopParam youla_to_iop(const CoprimeFactors& f, const YoulaParam& q, double tol = kDefaultPoleTolerance);

/// IOP of the loop with G = (zI - A)^-1 B (signals x, u): Y = Phi_x (zI - A),
/// W = Phi_x B, U = Phi_u (zI - A), Z = I + Phi_u B.
IopParam slp_sf_to_iop(const SlpStateFeedback& p, const PlantSS& plant, double tol = kDefaultPoleTolerance);

/// T = diag(zI - A, I) over (x, u), relating the state-feedback loop to the
/// plant/controller loop with G = (zI - A)^-1 B.
Transformation slp_sf_iop_transformation(const PlantSS& plant);

/// Y = C Phi_xy + D Phi_uy + I, U = Phi_uy, Z = Phi_ux B + Phi_uy D + I,
/// W = (C Phi_xx + D Phi_ux) B + (C Phi_xy + D Phi_uy + I) D.
IopParam slp_of_to_iop(const SlpOutputFeedback& p, const PlantSS& plant, double tol = kDefaultPoleTolerance);
//@}

}  // namespace rscalc
