#include "rscalc/parameterizations.h"

#include "rscalc/error.h"

namespace rscalc {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConstraintError(what);
}

void require_rh_inf(const TFMatrix& m, double tol, const std::string& name) {
  require(in_rh_inf(m, tol), name + " is not stable proper");
}

void require_zinv_rh_inf(const TFMatrix& m, double tol, const std::string& name) {
  require(in_zinv_rh_inf(m, tol), name + " is not strictly proper and stable");
}

TFMatrix eye(const SignalSpace& s) { return TFMatrix::identity(s); }

/// A + (1 - z) I, the diagonal state block of the loops built from a plant.
TFMatrix state_diagonal(const PlantSS& plant) {
  return plant.a_tf() + (1 - RatFun::z()) * eye(plant.state_space());
}

/// (zI - M)^-1 for a square M acting on the state space.
TFMatrix shifted_resolvent(const QMatrix& m, const SignalSpace& x) {
  return (RatFun::z() * eye(x) - TFMatrix::constant(x, x, m)).inverse();
}

TFMatrix checked_inverse(const TFMatrix& m, const std::string& name) {
  try {
    return m.inverse();
  } catch (const SingularError&) {
    throw SingularError(name + " is singular");
  }
}

}  // namespace

Realization plant_controller_realization(const TFMatrix& g, const TFMatrix& k) {
  if (k.rows() != g.cols() || k.cols() != g.rows()) {
    throw std::invalid_argument("controller must map " + to_string(g.rows()) + " to " + to_string(g.cols()));
  }
  const SignalSpace& ys = g.rows();
  const SignalSpace& us = g.cols();
  const TFMatrix r = TFMatrix::stack({{TFMatrix::zero(ys, ys), g}, {k, TFMatrix::zero(us, us)}});
  std::vector<BlockPair> zeros;
  for (const auto& a : ys.blocks()) {
    for (const auto& b : ys.blocks()) zeros.push_back({a.name, b.name});
  }
  for (const auto& a : us.blocks()) {
    for (const auto& b : us.blocks()) zeros.push_back({a.name, b.name});
  }
  return Realization(r.rows(), r, std::move(zeros));
}

Realization state_feedback_realization(const PlantSS& plant, const TFMatrix& k) {
  const SignalSpace xs = plant.state_space();
  const SignalSpace us = plant.input_space();
  if (k.rows() != us || k.cols() != xs) throw std::invalid_argument("state-feedback controller must map x to u");
  const TFMatrix r = TFMatrix::stack({{state_diagonal(plant), plant.b_tf()}, {k, TFMatrix::zero(us, us)}});
  return Realization(r.rows(), r, {{signal::kInput, signal::kInput}});
}

Realization output_feedback_realization(const PlantSS& plant, const TFMatrix& k) {
  const SignalSpace xs = plant.state_space();
  const SignalSpace us = plant.input_space();
  const SignalSpace ys = plant.output_space();
  if (k.rows() != us || k.cols() != ys) throw std::invalid_argument("output-feedback controller must map y to u");
  const TFMatrix r = TFMatrix::stack({
      {state_diagonal(plant), plant.b_tf(), TFMatrix::zero(xs, ys)},
      {TFMatrix::zero(us, xs), TFMatrix::zero(us, us), k},
      {plant.c_tf(), plant.d_tf(), TFMatrix::zero(ys, ys)},
  });
  return Realization(r.rows(), r,
                     {{signal::kState, signal::kOutput},
                      {signal::kInput, signal::kState},
                      {signal::kInput, signal::kInput},
                      {signal::kOutput, signal::kOutput}});
}

StabilityMatrix stable_closed_loop(const Realization& r, double tol) {
  StabilityMatrix s = stability_from_realization(r);
  ConditionReport report = check_conditions(r, s, tol);
  if (!report.pass) throw StabilityError("closed loop is not internally stable", std::move(report));
  return s;
}

// ---------------------------------------------------------------------------
// Youla

CoprimeFactors::CoprimeFactors(TFMatrix ml, TFMatrix nl, TFMatrix vl, TFMatrix ul, TFMatrix ur, TFMatrix nr,
                               TFMatrix vr, TFMatrix mr, double tol)
    : ml_(std::move(ml)),
      nl_(std::move(nl)),
      vl_(std::move(vl)),
      ul_(std::move(ul)),
      ur_(std::move(ur)),
      nr_(std::move(nr)),
      vr_(std::move(vr)),
      mr_(std::move(mr)) {
  const TFMatrix left = TFMatrix::stack({{ml_, -nl_}, {-vl_, ul_}});
  const TFMatrix right = TFMatrix::stack({{ur_, nr_}, {vr_, mr_}});
  require(left * right == eye(left.rows()), "coprime factors violate the double Bezout identity");
  const std::pair<const TFMatrix*, const char*> all[] = {{&ml_, "Ml"}, {&nl_, "Nl"}, {&vl_, "Vl"}, {&ul_, "Ul"},
                                                         {&ur_, "Ur"}, {&nr_, "Nr"}, {&vr_, "Vr"}, {&mr_, "Mr"}};
  for (const auto& [m, name] : all) require_rh_inf(*m, tol, name);
  // The inverses carry the unstable poles of G, so only properness is required.
  try {
    require(classify(ml_.inverse(), tol).all_proper, "Ml^-1 is not proper");
    require(classify(mr_.inverse(), tol).all_proper, "Mr^-1 is not proper");
  } catch (const SingularError&) {
    throw ConstraintError("Ml or Mr is singular");
  }
}

TFMatrix CoprimeFactors::plant() const { return nr_ * mr_.inverse(); }

CoprimeFactors coprime_factorize(const PlantSS& plant, const QMatrix& f, const QMatrix& l, double tol) {
  const int n = plant.num_states();
  if (f.rows() != plant.num_inputs() || f.cols() != n) throw std::invalid_argument("F must be (inputs x states)");
  if (l.rows() != n || l.cols() != plant.num_outputs()) throw std::invalid_argument("L must be (states x outputs)");
  const QMatrix a_f = plant.a() + plant.b() * f;
  const QMatrix a_l = plant.a() + l * plant.c();
  require(spectral_radius(a_f.to_eigen()) < 1.0 - tol, "A + BF is not Schur stable");
  require(spectral_radius(a_l.to_eigen()) < 1.0 - tol, "A + LC is not Schur stable");

  const SignalSpace xs = plant.state_space();
  const SignalSpace us = plant.input_space();
  const SignalSpace ys = plant.output_space();
  const TFMatrix res_f = shifted_resolvent(a_f, xs);
  const TFMatrix res_l = shifted_resolvent(a_l, xs);
  const TFMatrix f_tf = TFMatrix::constant(us, xs, f);
  const TFMatrix l_tf = TFMatrix::constant(xs, ys, l);
  const TFMatrix b = plant.b_tf();
  const TFMatrix d = plant.d_tf();
  const TFMatrix c_f = plant.c_tf() + d * f_tf;
  const TFMatrix b_l = b + l_tf * d;

  TFMatrix mr = eye(us) + f_tf * res_f * b;
  TFMatrix nr = d + c_f * res_f * b;
  TFMatrix vr = -(f_tf * res_f * l_tf);
  TFMatrix ur = eye(ys) - c_f * res_f * l_tf;
  TFMatrix ul = eye(us) - f_tf * res_l * b_l;
  TFMatrix vl = -(f_tf * res_l * l_tf);
  TFMatrix nl = d + plant.c_tf() * res_l * b_l;
  TFMatrix ml = eye(ys) + plant.c_tf() * res_l * l_tf;
  return CoprimeFactors(std::move(ml), std::move(nl), std::move(vl), std::move(ul), std::move(ur), std::move(nr),
                        std::move(vr), std::move(mr), tol);
}

YoulaParam::YoulaParam(TFMatrix q, double tol) : q_(std::move(q)) { require_rh_inf(q_, tol, "Q"); }

TFMatrix youla_to_controller(const CoprimeFactors& f, const YoulaParam& q) {
  const TFMatrix num = f.vr() - f.mr() * q.q();
  const TFMatrix den = f.ur() - f.nr() * q.q();
  return num * checked_inverse(den, "Ur - Nr Q");
}

YoulaParam controller_to_youla(const CoprimeFactors& f, const TFMatrix& k, double tol) {
  const Realization r = plant_controller_realization(f.plant(), k);
  const StabilityMatrix s = stable_closed_loop(r, tol);
  const TFMatrix s_uy = s.s().block(signal::kInput, signal::kOutput);
  return YoulaParam(f.mr().inverse() * (f.vr() - s_uy * f.ml().inverse()), tol);
}

// ---------------------------------------------------------------------------
// IOP

IopParam::IopParam(TFMatrix g, TFMatrix y, TFMatrix w, TFMatrix u, TFMatrix z, double tol)
    : g_(std::move(g)), y_(std::move(y)), w_(std::move(w)), u_(std::move(u)), z_(std::move(z)) {
  const TFMatrix iy = eye(g_.rows());
  const TFMatrix iu = eye(g_.cols());
  require(y_ - g_ * u_ == iy, "IOP identity Y - G U = I fails");
  require((w_ - g_ * z_).is_zero(), "IOP identity W - G Z = O fails");
  require((w_ - y_ * g_).is_zero(), "IOP identity W - Y G = O fails");
  require(z_ - u_ * g_ == iu, "IOP identity Z - U G = I fails");
  require_rh_inf(y_, tol, "Y");
  require_rh_inf(w_, tol, "W");
  require_rh_inf(u_, tol, "U");
  require_rh_inf(z_, tol, "Z");
}

IopParam iop_from_controller(const TFMatrix& g, const TFMatrix& k, double tol) {
  const StabilityMatrix s = stable_closed_loop(plant_controller_realization(g, k), tol);
  const std::string& yn = g.rows().blocks().front().name;
  const std::string& un = g.cols().blocks().front().name;
  if (g.rows().blocks().size() != 1 || g.cols().blocks().size() != 1) {
    throw std::invalid_argument("IOP needs a plant between two single signal blocks");
  }
  return IopParam(g, s.s().block(yn, yn), s.s().block(yn, un), s.s().block(un, yn), s.s().block(un, un), tol);
}

TFMatrix iop_to_controller(const IopParam& p) { return p.u() * checked_inverse(p.y(), "Y"); }

// ---------------------------------------------------------------------------
// State-feedback SLP

SlpStateFeedback::SlpStateFeedback(const PlantSS& plant, TFMatrix phi_x, TFMatrix phi_u, double tol)
    : phi_x_(std::move(phi_x)), phi_u_(std::move(phi_u)) {
  require(plant.shift_minus_a() * phi_x_ - plant.b_tf() * phi_u_ == eye(plant.state_space()),
          "(zI - A) Phi_x - B Phi_u = I fails");
  require_zinv_rh_inf(phi_x_, tol, "Phi_x");
  require_zinv_rh_inf(phi_u_, tol, "Phi_u");
}

TFMatrix slp_sf_to_controller(const SlpStateFeedback& p) {
  return p.phi_u() * checked_inverse(p.phi_x(), "Phi_x");
}

SlpStateFeedback slp_sf_from_controller(const PlantSS& plant, const TFMatrix& k, double tol) {
  const StabilityMatrix s = stable_closed_loop(state_feedback_realization(plant, k), tol);
  return SlpStateFeedback(plant, s.s().block(signal::kState, signal::kState),
                          s.s().block(signal::kInput, signal::kState), tol);
}

StabilityMatrix slp_sf_stability(const SlpStateFeedback& p, const PlantSS& plant) {
  const Realization r = state_feedback_realization(plant, slp_sf_to_controller(p));
  const TFMatrix x_col = TFMatrix::stack({{p.phi_x()}, {p.phi_u()}});
  const TFMatrix u_col = dependency_complete(r, {{signal::kState, x_col}}, signal::kInput);
  TFMatrix s(r.space(), r.space());
  for (const auto& row : r.space().blocks()) {
    s.set_block(row.name, signal::kState, x_col.row_block(row.name));
    s.set_block(row.name, signal::kInput, u_col.row_block(row.name));
  }
  return StabilityMatrix(r.space(), std::move(s));
}

// ---------------------------------------------------------------------------
// Output-feedback SLP

SlpOutputFeedback::SlpOutputFeedback(const PlantSS& plant, TFMatrix phi_xx, TFMatrix phi_ux, TFMatrix phi_xy,
                                     TFMatrix phi_uy, double tol)
    : phi_xx_(std::move(phi_xx)), phi_ux_(std::move(phi_ux)), phi_xy_(std::move(phi_xy)), phi_uy_(std::move(phi_uy)) {
  const TFMatrix zia = plant.shift_minus_a();
  const TFMatrix ix = eye(plant.state_space());
  require(zia * phi_xx_ - plant.b_tf() * phi_ux_ == ix, "(zI - A) Phi_xx - B Phi_ux = I fails");
  require((zia * phi_xy_ - plant.b_tf() * phi_uy_).is_zero(), "(zI - A) Phi_xy - B Phi_uy = O fails");
  require(phi_xx_ * zia - phi_xy_ * plant.c_tf() == ix, "Phi_xx (zI - A) - Phi_xy C = I fails");
  require((phi_ux_ * zia - phi_uy_ * plant.c_tf()).is_zero(), "Phi_ux (zI - A) - Phi_uy C = O fails");
  require_zinv_rh_inf(phi_xx_, tol, "Phi_xx");
  require_zinv_rh_inf(phi_ux_, tol, "Phi_ux");
  require_zinv_rh_inf(phi_xy_, tol, "Phi_xy");
  require_rh_inf(phi_uy_, tol, "Phi_uy");
}

TFMatrix slp_of_to_controller(const SlpOutputFeedback& p, const QMatrix& d) {
  const TFMatrix k0 = p.phi_uy() - p.phi_ux() * checked_inverse(p.phi_xx(), "Phi_xx") * p.phi_xy();
  if (d.is_zero()) return k0;
  const TFMatrix d_tf = TFMatrix::constant(k0.cols(), k0.rows(), d);
  return k0 * checked_inverse(eye(k0.cols()) + d_tf * k0, "I + D K0");
}

SlpOutputFeedback slp_of_from_controller(const PlantSS& plant, const TFMatrix& k, double tol) {
  const StabilityMatrix s = stable_closed_loop(output_feedback_realization(plant, k), tol);
  const TFMatrix& sm = s.s();
  using namespace signal;
  return SlpOutputFeedback(plant, sm.block(kState, kState), sm.block(kInput, kState), sm.block(kState, kOutput),
                           sm.block(kInput, kOutput), tol);
}

StabilityMatrix slp_of_stability(const SlpOutputFeedback& p, const PlantSS& plant) {
  using namespace signal;
  const Realization r = output_feedback_realization(plant, slp_of_to_controller(p, plant.d()));
  const TFMatrix c = plant.c_tf();
  const TFMatrix d = plant.d_tf();
  const TFMatrix s_yx = c * p.phi_xx() + d * p.phi_ux();
  const TFMatrix s_yy = c * p.phi_xy() + d * p.phi_uy() + eye(plant.output_space());
  const TFMatrix x_col = TFMatrix::stack({{p.phi_xx()}, {p.phi_ux()}, {s_yx}});
  const TFMatrix y_col = TFMatrix::stack({{p.phi_xy()}, {p.phi_uy()}, {s_yy}});
  const TFMatrix u_col = dependency_complete(r, {{kState, x_col}, {kOutput, y_col}}, kInput);
  TFMatrix s(r.space(), r.space());
  for (const auto& row : r.space().blocks()) {
    s.set_block(row.name, kState, x_col.row_block(row.name));
    s.set_block(row.name, kInput, u_col.row_block(row.name));
    s.set_block(row.name, kOutput, y_col.row_block(row.name));
  }
  return StabilityMatrix(r.space(), std::move(s));
}

// ---------------------------------------------------------------------------
// Mixed

MixedParam1::MixedParam1(const PlantSS& plant, TFMatrix phi_yx, TFMatrix phi_ux, TFMatrix phi_yy, TFMatrix phi_uy,
                         double tol)
    : phi_yx_(std::move(phi_yx)), phi_ux_(std::move(phi_ux)), phi_yy_(std::move(phi_yy)), phi_uy_(std::move(phi_uy)) {
  const TFMatrix g = plant.transfer();
  const TFMatrix zia = plant.shift_minus_a();
  require(phi_yx_ - g * phi_ux_ == plant.c_tf() * plant.resolvent(), "Phi_yx - G Phi_ux = C (zI - A)^-1 fails");
  require(phi_yy_ - g * phi_uy_ == eye(plant.output_space()), "Phi_yy - G Phi_uy = I fails");
  require((phi_yx_ * zia - phi_yy_ * plant.c_tf()).is_zero(), "Phi_yx (zI - A) - Phi_yy C = O fails");
  require((phi_ux_ * zia - phi_uy_ * plant.c_tf()).is_zero(), "Phi_ux (zI - A) - Phi_uy C = O fails");
  require_rh_inf(phi_yx_, tol, "Phi_yx");
  require_rh_inf(phi_ux_, tol, "Phi_ux");
  require_rh_inf(phi_yy_, tol, "Phi_yy");
  require_rh_inf(phi_uy_, tol, "Phi_uy");
}

MixedParam2::MixedParam2(const PlantSS& plant, TFMatrix phi_xy, TFMatrix phi_uy, TFMatrix phi_xu, TFMatrix phi_uu,
                         double tol)
    : phi_xy_(std::move(phi_xy)), phi_uy_(std::move(phi_uy)), phi_xu_(std::move(phi_xu)), phi_uu_(std::move(phi_uu)) {
  const TFMatrix g = plant.transfer();
  const TFMatrix zia = plant.shift_minus_a();
  require((zia * phi_xy_ - plant.b_tf() * phi_uy_).is_zero(), "(zI - A) Phi_xy - B Phi_uy = O fails");
  require((zia * phi_xu_ - plant.b_tf() * phi_uu_).is_zero(), "(zI - A) Phi_xu - B Phi_uu = O fails");
  require(phi_xu_ - phi_xy_ * g == plant.state_transfer(), "Phi_xu - Phi_xy G = (zI - A)^-1 B fails");
  require(phi_uu_ - phi_uy_ * g == eye(plant.input_space()), "Phi_uu - Phi_uy G = I fails");
  require_rh_inf(phi_xy_, tol, "Phi_xy");
  require_rh_inf(phi_uy_, tol, "Phi_uy");
  require_rh_inf(phi_xu_, tol, "Phi_xu");
  require_rh_inf(phi_uu_, tol, "Phi_uu");
}

TFMatrix mixed1_to_controller(const MixedParam1& p) { return p.phi_uy() * checked_inverse(p.phi_yy(), "Phi_yy"); }

MixedParam1 mixed1_from_controller(const PlantSS& plant, const TFMatrix& k, double tol) {
  using namespace signal;
  const TFMatrix s = stable_closed_loop(output_feedback_realization(plant, k), tol).s();
  return MixedParam1(plant, s.block(kOutput, kState), s.block(kInput, kState), s.block(kOutput, kOutput),
                     s.block(kInput, kOutput), tol);
}

TFMatrix mixed2_to_controller(const MixedParam2& p) { return checked_inverse(p.phi_uu(), "Phi_uu") * p.phi_uy(); }

MixedParam2 mixed2_from_controller(const PlantSS& plant, const TFMatrix& k, double tol) {
  using namespace signal;
  const TFMatrix s = stable_closed_loop(output_feedback_realization(plant, k), tol).s();
  return MixedParam2(plant, s.block(kState, kOutput), s.block(kInput, kOutput), s.block(kState, kInput),
                     s.block(kInput, kInput), tol);
}

// ---------------------------------------------------------------------------
// Direct maps

IopParam youla_to_iop(const CoprimeFactors& f, const YoulaParam& q, double tol) {
  const TFMatrix left = f.ur() - f.nr() * q.q();
  const TFMatrix right = f.vr() - f.mr() * q.q();
  return IopParam(f.plant(), left * f.ml(), left * f.nl(), right * f.ml(), eye(f.mr().rows()) + right * f.nl(), tol);
}

IopParam slp_sf_to_iop(const SlpStateFeedback& p, const PlantSS& plant, double tol) {
  const TFMatrix zia = plant.shift_minus_a();
  const TFMatrix b = plant.b_tf();
  return IopParam(plant.state_transfer(), p.phi_x() * zia, p.phi_x() * b, p.phi_u() * zia,
                  eye(plant.input_space()) + p.phi_u() * b, tol);
}

Transformation slp_sf_iop_transformation(const PlantSS& plant) {
  const SignalSpace xs = plant.state_space();
  const SignalSpace us = plant.input_space();
  const TFMatrix t = TFMatrix::stack({{plant.shift_minus_a(), TFMatrix::zero(xs, us)},
                                      {TFMatrix::zero(us, xs), eye(us)}});
  const TFMatrix t_inv = TFMatrix::stack({{plant.resolvent(), TFMatrix::zero(xs, us)},
                                          {TFMatrix::zero(us, xs), eye(us)}});
  return Transformation(t, t_inv);
}

IopParam slp_of_to_iop(const SlpOutputFeedback& p, const PlantSS& plant, double tol) {
  const TFMatrix c = plant.c_tf();
  const TFMatrix d = plant.d_tf();
  const TFMatrix b = plant.b_tf();
  const TFMatrix y = c * p.phi_xy() + d * p.phi_uy() + eye(plant.output_space());
  const TFMatrix z = p.phi_ux() * b + p.phi_uy() * d + eye(plant.input_space());
  const TFMatrix w = (c * p.phi_xx() + d * p.phi_ux()) * b + y * d;
  return IopParam(plant.transfer(), y, w, p.phi_uy(), z, tol);
}

}  // namespace rscalc
