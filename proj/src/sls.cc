#include "rscalc/sls.h"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>
#include <stdexcept>

#include "rscalc/error.h"

namespace rscalc {

namespace {

QMatrix power(const QMatrix& a, int k) {
  QMatrix out = QMatrix::identity(a.rows());
  for (int i = 0; i < k; ++i) out = out * a;
  return out;
}

QMatrix vstack(const std::vector<QMatrix>& blocks) {
  int rows = 0;
  for (const auto& b : blocks) rows += b.rows();
  QMatrix out(rows, blocks.front().cols());
  int r = 0;
  for (const auto& b : blocks) {
    out.set_block(r, 0, b);
    r += b.rows();
  }
  return out;
}

/// [A^{T-1} B, ..., A B, B]: column block k-1 multiplies Phi_u[k] in Phi_x[T+1].
QMatrix reachability(const PlantSS& plant, int horizon) {
  const int n = plant.num_states();
  const int m = plant.num_inputs();
  QMatrix c(n, m * horizon);
  QMatrix apow = QMatrix::identity(n);
  for (int k = horizon; k >= 1; --k) {
    c.set_block(0, (k - 1) * m, apow * plant.b());
    apow = apow * plant.a();
  }
  return c;
}

void require_feasible(const PlantSS& plant, int horizon, const QMatrix& c_t) {
  const QMatrix a_t = power(plant.a(), horizon);
  if (exact_rank(c_t) != exact_rank(hstack(c_t, a_t))) {
    throw InfeasibleError("no FIR system response of horizon " + std::to_string(horizon) +
                          " exists: A^T is outside the range of [A^{T-1} B ... B]");
  }
}

std::vector<Eigen::MatrixXd> to_eigen(const FirPhi& f) {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(f.taps().size());
  for (const auto& t : f.taps()) out.push_back(t.to_eigen());
  return out;
}

void require_shape(const FirPhi& f, int rows, int cols, const char* name) {
  if (f.empty() || f.rows() != rows || f.cols() != cols) {
    throw std::invalid_argument(std::string(name) + " must have " + std::to_string(rows) + "x" +
                                std::to_string(cols) + " taps");
  }
}

void validate_variant(const RealizationVariant& v, const PlantSS& plant) {
  const int n = plant.num_states();
  const int m = plant.num_inputs();
  require_shape(v.phi_x, n, n, "Phi_x");
  require_shape(v.phi_u, m, n, "Phi_u");
  if (v.kind == VariantKind::kDesignSeparation) {
    require_shape(v.pc, n, n, "Pc");
    require_shape(v.mc, m, n, "Mc");
  }
}

SignalSpace delta_space(const PlantSS& plant) { return SignalSpace::single(signal::kDelta, plant.num_states()); }

}  // namespace

// ---------------------------------------------------------------------------
// FIR responses

FirPhi::FirPhi(std::vector<QMatrix> taps) : taps_(std::move(taps)) {
  if (taps_.empty()) throw std::invalid_argument("FIR response needs at least one tap");
  for (const auto& t : taps_) {
    if (t.rows() != taps_.front().rows() || t.cols() != taps_.front().cols() || t.empty()) {
      throw std::invalid_argument("FIR taps have inconsistent shapes");
    }
  }
}

TFMatrix FirPhi::to_tf(const SignalSpace& rows, const SignalSpace& cols) const {
  if (rows.total() != this->rows() || cols.total() != this->cols()) {
    throw std::invalid_argument("FIR response does not match the requested signal spaces");
  }
  const int t = horizon();
  TFMatrix out(rows, cols);
  for (int i = 0; i < this->rows(); ++i) {
    for (int j = 0; j < this->cols(); ++j) {
      std::vector<Rational> num(static_cast<size_t>(t) + 1);
      for (int k = 1; k <= t; ++k) num[t - k] = tap(k)(i, j);
      out(i, j) = RatFun(Poly(std::move(num)), Poly::monomial(t));
    }
  }
  return out;
}

TFMatrix FirSlp::phi_x_tf(const PlantSS& plant) const {
  return phi_x.to_tf(plant.state_space(), plant.state_space());
}

TFMatrix FirSlp::phi_u_tf(const PlantSS& plant) const {
  return phi_u.to_tf(plant.input_space(), plant.state_space());
}

SlpStateFeedback FirSlp::to_slp(const PlantSS& plant, double tol) const {
  return SlpStateFeedback(plant, phi_x_tf(plant), phi_u_tf(plant), tol);
}

FirSlp complete_fir_slp(const PlantSS& plant, const std::vector<QMatrix>& phi_u_taps) {
  const int n = plant.num_states();
  const int m = plant.num_inputs();
  const int horizon = static_cast<int>(phi_u_taps.size());
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  for (const auto& t : phi_u_taps) {
    if (t.rows() != m || t.cols() != n) throw std::invalid_argument("Phi_u taps must be (inputs x states)");
  }
  const QMatrix c_t = reachability(plant, horizon);
  require_feasible(plant, horizon, c_t);

  // Phi_x[T+1] = A^T + C_T U must vanish; add the least-norm correction C_T' Y.
  QMatrix u = vstack(phi_u_taps);
  const QMatrix residual = power(plant.a(), horizon) + c_t * u;
  if (!residual.is_zero()) {
    const QMatrix y = exact_solve(c_t * c_t.transpose(), -residual);
    u = u + c_t.transpose() * y;
  }

  std::vector<QMatrix> xs;
  std::vector<QMatrix> us;
  QMatrix x = QMatrix::identity(n);
  for (int k = 1; k <= horizon; ++k) {
    const QMatrix uk = u.block((k - 1) * m, 0, m, n);
    xs.push_back(x);
    us.push_back(uk);
    x = plant.a() * x + plant.b() * uk;
  }
  if (!x.is_zero()) throw std::logic_error("terminal condition not met after exact correction");
  return {FirPhi(std::move(xs)), FirPhi(std::move(us))};
}

// ---------------------------------------------------------------------------
// Realizations

std::string to_string(VariantKind kind) {
  switch (kind) {
    case VariantKind::kOriginal:
      return "original_sls";
    case VariantKind::kDeployment:
      return "deployment";
    case VariantKind::kDesignSeparation:
      return "design_separation";
  }
  return "unknown";
}

VariantKind parse_variant_kind(const std::string& text) {
  if (text == "original_sls" || text == "original") return VariantKind::kOriginal;
  if (text == "deployment") return VariantKind::kDeployment;
  if (text == "design_separation") return VariantKind::kDesignSeparation;
  throw std::invalid_argument("unknown realization variant '" + text + "'");
}

RealizationVariant RealizationVariant::original(FirSlp phi) {
  return {VariantKind::kOriginal, std::move(phi.phi_x), std::move(phi.phi_u), {}, {}};
}

RealizationVariant RealizationVariant::deployment(FirSlp phi) {
  return {VariantKind::kDeployment, std::move(phi.phi_x), std::move(phi.phi_u), {}, {}};
}

RealizationVariant RealizationVariant::design_separation(FirSlp phi, FirPhi pc, FirPhi mc) {
  return {VariantKind::kDesignSeparation, std::move(phi.phi_x), std::move(phi.phi_u), std::move(pc), std::move(mc)};
}

SignalSpace sls_signal_space(const PlantSS& plant) {
  return SignalSpace({{signal::kState, plant.num_states()},
                      {signal::kInput, plant.num_inputs()},
                      {signal::kDelta, plant.num_states()}});
}

Realization build_realization(const RealizationVariant& v, const PlantSS& plant) {
  validate_variant(v, plant);
  using namespace signal;
  const SignalSpace space = sls_signal_space(plant);
  const SignalSpace xs = plant.state_space();
  const SignalSpace us = plant.input_space();
  const SignalSpace ds = delta_space(plant);
  const RatFun z = RatFun::z();
  const TFMatrix id = TFMatrix::identity(ds);

  TFMatrix r(space, space);
  r.set_block(kState, kState, plant.a_tf() + (1 - z) * TFMatrix::identity(xs));
  r.set_block(kState, kInput, plant.b_tf());
  std::vector<BlockPair> zeros = {{kState, kDelta}, {kInput, kState}, {kInput, kInput}};
  switch (v.kind) {
    case VariantKind::kOriginal:
    case VariantKind::kDesignSeparation: {
      const FirPhi& p = v.kind == VariantKind::kOriginal ? v.phi_x : v.pc;
      const FirPhi& mc = v.kind == VariantKind::kOriginal ? v.phi_u : v.mc;
      r.set_block(kInput, kDelta, z * mc.to_tf(us, ds));
      r.set_block(kDelta, kState, TFMatrix::constant(ds, xs, QMatrix::identity(xs.total())));
      r.set_block(kDelta, kDelta, id - z * p.to_tf(ds, ds));
      zeros.push_back({kDelta, kInput});
      break;
    }
    case VariantKind::kDeployment: {
      const RatFun zi = RatFun::z_inv();
      r.set_block(kInput, kDelta, z * v.phi_u.to_tf(us, ds));
      r.set_block(kDelta, kState, zi * (z * TFMatrix::identity(xs) - plant.a_tf()).relabeled(ds, xs));
      r.set_block(kDelta, kInput, -(zi * plant.b_tf().relabeled(ds, us)));
      zeros.push_back({kDelta, kDelta});
      break;
    }
  }
  return Realization(space, std::move(r), std::move(zeros));
}

bool li_constraint_check(const TFMatrix& pc, const TFMatrix& mc, const SlpStateFeedback& p, const PlantSS& plant) {
  const RatFun z = RatFun::z();
  if (!classify(z * pc).all_proper || !classify(z * mc).all_proper) {
    throw ConstraintError("realization is not causal: I - z Pc and z Mc must be proper");
  }
  const TFMatrix x_from = pc.relabeled(plant.state_space(), pc.cols());
  const TFMatrix u_from = mc.relabeled(plant.input_space(), mc.cols());
  // Delta_c = (zI - A) Pc - B Mc; both rows of the identity share it.
  const TFMatrix delta_c = plant.shift_minus_a() * x_from - plant.b_tf() * u_from;
  return p.phi_x() * delta_c == x_from && p.phi_u() * delta_c == u_from;
}

CertificationReport certify_realization(const RealizationVariant& v, const PlantSS& plant, double tol) {
  const Realization r = build_realization(v, plant);
  CertificationReport report;
  report.kind = v.kind;
  report.stability = stability_from_realization(r);
  report.conditions = check_conditions(r, report.stability, tol);
  report.pass = report.conditions.pass;
  if (v.kind == VariantKind::kDeployment) report.a_schur_stable = plant.is_schur_stable(tol);
  if (v.kind == VariantKind::kDesignSeparation) {
    report.sufficient_condition = in_zinv_rh_inf(report.stability.s().block(signal::kDelta, signal::kState), tol);
    try {
      const SlpStateFeedback p = FirSlp{v.phi_x, v.phi_u}.to_slp(plant, tol);
      report.li_constraint = li_constraint_check(v.pc.to_tf(plant.state_space(), plant.state_space()),
                                                 v.mc.to_tf(plant.input_space(), plant.state_space()), p, plant);
    } catch (const ConstraintError&) {
      report.li_constraint = false;
    }
  }
  return report;
}

std::string describe(const CertificationReport& report) {
  std::ostringstream os;
  os << to_string(report.kind) << ": " << (report.pass ? "internally stable" : "NOT internally stable") << " ("
     << describe(report.conditions) << ")";
  if (report.a_schur_stable) os << "; A Schur stable: " << (*report.a_schur_stable ? "yes" : "no");
  if (report.sufficient_condition) {
    os << "; S_delta,x in z^-1 RH-inf: " << (*report.sufficient_condition ? "yes" : "no");
  }
  if (report.li_constraint) os << "; realization constraint: " << (*report.li_constraint ? "holds" : "fails");
  return os.str();
}

// ---------------------------------------------------------------------------
// Synthesis

LqrSolution dare_lqr(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::MatrixXd& qw,
                     const Eigen::MatrixXd& rw, int max_iter, double tol) {
  const auto step = [&](const Eigen::MatrixXd& p) -> Eigen::MatrixXd {
    const Eigen::MatrixXd btp = b.transpose() * p;
    const Eigen::MatrixXd g = (rw + btp * b).ldlt().solve(btp * a);
    return qw + a.transpose() * p * a - a.transpose() * p * b * g;
  };
  Eigen::MatrixXd p = qw;
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::MatrixXd next = step(p);
    if (!next.allFinite()) throw ConvergenceError("Riccati iteration produced non-finite values");
    const double change = (next - p).cwiseAbs().maxCoeff();
    p = std::move(next);
    if (change < tol * std::max(1.0, p.cwiseAbs().maxCoeff())) {
      LqrSolution sol;
      sol.cost_to_go = p;
      sol.gain = -(rw + b.transpose() * p * b).ldlt().solve(b.transpose() * p * a);
      sol.iterations = it;
      sol.riccati_residual = (step(p) - p).cwiseAbs().maxCoeff();
      if (spectral_radius(a + b * sol.gain) >= 1.0) {
        throw ConvergenceError("Riccati iteration settled on a non-stabilizing gain");
      }
      return sol;
    }
  }
  throw ConvergenceError("Riccati iteration did not converge in " + std::to_string(max_iter) + " iterations");
}

LqrSolution dare_lqr(const PlantSS& plant, const QMatrix& qw, const QMatrix& rw, int max_iter, double tol) {
  return dare_lqr(plant.a().to_eigen(), plant.b().to_eigen(), qw.to_eigen(), rw.to_eigen(), max_iter, tol);
}

namespace {

/// Rationalizes a stabilizing gain with the coarsest tolerance that keeps
/// a + b * gain Schur stable.
QMatrix rationalize_gain(const Eigen::MatrixXd& gain, const QMatrix& a, const QMatrix& b) {
  for (double tol = 1e-3; tol >= 1e-13; tol *= 1e-2) {
    QMatrix g = QMatrix::rationalized(gain, tol);
    if (spectral_radius((a + b * g).to_eigen()) < 1.0 - 1e-6) return g;
  }
  throw ConvergenceError("could not rationalize a stabilizing gain");
}

}  // namespace

StabilizingGains lqr_stabilizing_gains(const PlantSS& plant) {
  const int n = plant.num_states();
  const Eigen::MatrixXd a = plant.a().to_eigen();
  const auto state = dare_lqr(a, plant.b().to_eigen(), Eigen::MatrixXd::Identity(n, n),
                              Eigen::MatrixXd::Identity(plant.num_inputs(), plant.num_inputs()));
  const auto dual = dare_lqr(a.transpose(), plant.c().to_eigen().transpose(), Eigen::MatrixXd::Identity(n, n),
                             Eigen::MatrixXd::Identity(plant.num_outputs(), plant.num_outputs()));
  StabilizingGains g;
  g.f = rationalize_gain(state.gain, plant.a(), plant.b());
  g.l = rationalize_gain(dual.gain, plant.a().transpose(), plant.c().transpose()).transpose();
  return g;
}

SynthesisResult synthesize_sf_h2(const PlantSS& plant, const QMatrix& qw, const QMatrix& rw, int horizon) {
  const int n = plant.num_states();
  const int m = plant.num_inputs();
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  if (qw.rows() != n || qw.cols() != n || rw.rows() != m || rw.cols() != m) {
    throw std::invalid_argument("weights must be (states x states) and (inputs x inputs)");
  }
  require_feasible(plant, horizon, reachability(plant, horizon));

  // Unknowns z = (x_1..x_T, u_1..u_T); constraints x_1 = e_j,
  // x_{k+1} - A x_k - B u_k = 0 (k < T), A x_T + B u_T = 0.
  const Eigen::MatrixXd a = plant.a().to_eigen();
  const Eigen::MatrixXd b = plant.b().to_eigen();
  const int nx = n * horizon;
  const int nz = nx + m * horizon;
  const int nc = n * (horizon + 1);
  auto xi = [&](int k) { return (k - 1) * n; };
  auto ui = [&](int k) { return nx + (k - 1) * m; };

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(nz, nz);
  for (int k = 1; k <= horizon; ++k) {
    h.block(xi(k), xi(k), n, n) = qw.to_eigen();
    h.block(ui(k), ui(k), m, m) = rw.to_eigen();
  }
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(nc, nz);
  e.block(0, xi(1), n, n).setIdentity();
  for (int k = 1; k < horizon; ++k) {
    e.block(k * n, xi(k + 1), n, n).setIdentity();
    e.block(k * n, xi(k), n, n) = -a;
    e.block(k * n, ui(k), n, m) = -b;
  }
  e.block(horizon * n, xi(horizon), n, n) = a;
  e.block(horizon * n, ui(horizon), n, m) = b;

  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(nz + nc, nz + nc);
  kkt.topLeftCorner(nz, nz) = 2.0 * h;
  kkt.topRightCorner(nz, nc) = e.transpose();
  kkt.bottomLeftCorner(nc, nz) = e;
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(nz + nc, n);
  rhs.block(nz, 0, n, n).setIdentity();  // one column per disturbance direction e_j

  const Eigen::MatrixXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);
  const Eigen::MatrixXd zs = sol.topRows(nz);
  SynthesisResult result;
  result.float_residual = (e * zs - rhs.bottomRows(nc)).cwiseAbs().maxCoeff();
  if (!std::isfinite(result.float_residual) || result.float_residual > 1e-10) {
    throw ConvergenceError("KKT solution violates the constraints by " + std::to_string(result.float_residual));
  }

  std::vector<QMatrix> u_taps;
  for (int k = 1; k <= horizon; ++k) u_taps.push_back(QMatrix::rationalized(zs.block(ui(k), 0, m, n), 1e-13));
  result.phi = complete_fir_slp(plant, u_taps);

  const Eigen::MatrixXd qd = qw.to_eigen();
  const Eigen::MatrixXd rd = rw.to_eigen();
  for (int k = 1; k <= horizon; ++k) {
    const Eigen::MatrixXd xk = result.phi.phi_x.tap(k).to_eigen();
    const Eigen::MatrixXd uk = result.phi.phi_u.tap(k).to_eigen();
    result.cost += (xk.transpose() * qd * xk).trace() + (uk.transpose() * rd * uk).trace();
  }
  return result;
}

// ---------------------------------------------------------------------------
// Simulation

SimTrace simulate(const RealizationVariant& v, const PlantSS& plant, const DisturbanceSchedule& d, int horizon) {
  validate_variant(v, plant);
  if (horizon < 0) throw std::invalid_argument("horizon must be nonnegative");
  const int n = plant.num_states();
  const int m = plant.num_inputs();
  const Eigen::MatrixXd a = plant.a().to_eigen();
  const Eigen::MatrixXd b = plant.b().to_eigen();
  const bool separated = v.kind == VariantKind::kDesignSeparation;
  const std::vector<Eigen::MatrixXd> p = to_eigen(separated ? v.pc : v.phi_x);
  const std::vector<Eigen::MatrixXd> mu = to_eigen(separated ? v.mc : v.phi_u);

  Eigen::FullPivLU<Eigen::MatrixXd> lead;
  if (v.kind != VariantKind::kDeployment) {
    lead.compute(p.front());
    if (!lead.isInvertible()) throw ConstraintError("leading tap of the delta recursion is singular");
  }

  const int samples = horizon + 1;
  auto dist = [&](const std::string& name, int dim) {
    SignalTrace out(samples, Eigen::VectorXd::Zero(dim));
    auto it = d.find(name);
    if (it == d.end()) return out;
    for (int t = 0; t < samples && t < static_cast<int>(it->second.size()); ++t) {
      if (it->second[t].size() != dim) throw std::invalid_argument("disturbance on " + name + " has wrong size");
      out[t] = it->second[t];
    }
    return out;
  };
  SimTrace trace;
  trace.horizon = horizon;
  const SignalTrace dx = dist(signal::kState, n);
  const SignalTrace du = dist(signal::kInput, m);
  const SignalTrace dd = dist(signal::kDelta, n);
  SignalTrace x(samples), u(samples), delta(samples);

  for (int t = 0; t < samples; ++t) {
    x[t] = t == 0 ? Eigen::VectorXd::Zero(n) : Eigen::VectorXd(a * x[t - 1] + b * u[t - 1] + dx[t - 1]);
    if (v.kind == VariantKind::kDeployment) {
      delta[t] = x[t] + dd[t];
      if (t > 0) delta[t] -= a * x[t - 1] + b * u[t - 1];
    } else {
      Eigen::VectorXd rhs = x[t] + dd[t];
      for (int k = 2; k <= static_cast<int>(p.size()) && t + 1 - k >= 0; ++k) rhs -= p[k - 1] * delta[t + 1 - k];
      delta[t] = lead.solve(rhs);
    }
    u[t] = du[t];
    for (int k = 1; k <= static_cast<int>(mu.size()) && t + 1 - k >= 0; ++k) u[t] += mu[k - 1] * delta[t + 1 - k];
  }
  trace.signals[signal::kState] = std::move(x);
  trace.signals[signal::kInput] = std::move(u);
  trace.signals[signal::kDelta] = std::move(delta);
  trace.disturbance[signal::kState] = dx;
  trace.disturbance[signal::kInput] = du;
  trace.disturbance[signal::kDelta] = dd;
  return trace;
}

ImpulseReport impulse_match(const RealizationVariant& reference, const RealizationVariant& simulated,
                            const PlantSS& plant, int horizon, double tol) {
  if (horizon < 0) throw std::invalid_argument("horizon must be nonnegative");
  const StabilityMatrix s = stability_from_realization(build_realization(reference, plant));
  const SignalSpace& space = s.space();

  auto run_channel = [&](const SignalBlock& block, int index) {
    ChannelDeviation dev;
    dev.signal = block.name;
    dev.index = index;
    DisturbanceSchedule d;
    SignalTrace impulse(1, Eigen::VectorXd::Zero(block.dim));
    impulse[0](index) = 1.0;
    d[block.name] = impulse;
    const SimTrace trace = simulate(simulated, plant, d, horizon);
    const int col = space.offset(block.name) + index;
    for (const auto& row_block : space.blocks()) {
      const SignalTrace& sig = trace.signals.at(row_block.name);
      for (int i = 0; i < row_block.dim; ++i) {
        const std::vector<Rational> h = series(s.s()(space.offset(row_block.name) + i, col), horizon);
        for (int t = 0; t <= horizon; ++t) {
          const double err = std::abs(sig[t](i) - to_double(h[t]));
          if (!(err <= dev.max_deviation)) {
            dev.max_deviation = std::isnan(err) ? INFINITY : err;
            dev.worst_lag = t;
            dev.worst_signal = row_block.name;
          }
        }
      }
    }
    return dev;
  };

  std::vector<std::future<ChannelDeviation>> jobs;
  for (const auto& block : space.blocks()) {
    for (int i = 0; i < block.dim; ++i) jobs.push_back(std::async(std::launch::async, run_channel, block, i));
  }
  ImpulseReport report;
  report.tol = tol;
  report.horizon = horizon;
  for (auto& j : jobs) {
    report.channels.push_back(j.get());
    report.max_deviation = std::max(report.max_deviation, report.channels.back().max_deviation);
  }
  report.pass = report.max_deviation <= tol;
  return report;
}

ImpulseReport impulse_match(const RealizationVariant& v, const PlantSS& plant, int horizon, double tol) {
  return impulse_match(v, v, plant, horizon, tol);
}

}  // namespace rscalc
