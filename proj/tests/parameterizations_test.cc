#include "rscalc/parameterizations.h"

#include <random>

#include <gtest/gtest.h>

#include "rscalc/error.h"
#include "test_support.h"

namespace rscalc {
namespace {

using testing::q;
using testing::zinv;

const SignalSpace kX = SignalSpace::single("x", 1);
const SignalSpace kU = SignalSpace::single("u", 1);
const SignalSpace kY = SignalSpace::single("y", 1);

TFMatrix scalar(const SignalSpace& rows, const SignalSpace& cols, RatFun v) { return TFMatrix(rows, cols, {std::move(v)}); }

/// 1 / (z - c)
RatFun pole(const Rational& c) { return RatFun(Poly::constant(1), testing::linear(c)); }

PlantSS scalar_plant(Rational a, Rational b, Rational c, Rational d) {
  return PlantSS({{std::move(a)}}, {{std::move(b)}}, {{std::move(c)}}, {{std::move(d)}});
}

TEST(Plant, TransferFunctions) {
  const PlantSS p = scalar_plant(q(1, 2), 1, 2, 1);
  EXPECT_EQ(p.transfer(), scalar(kY, kU, RatFun(2) * pole(q(1, 2)) + 1));
  EXPECT_EQ(p.state_transfer(), scalar(kX, kU, pole(q(1, 2))));
  EXPECT_TRUE(p.is_schur_stable());
  EXPECT_FALSE(scalar_plant(2, 1, 1, 0).is_schur_stable());
  EXPECT_THROW(PlantSS(QMatrix{{1}}, QMatrix{{1, 2}}, QMatrix{{1}}, QMatrix{{0}}), std::invalid_argument);
}

TEST(CoprimeFactorize, StablePlantZeroGains) {
  const PlantSS p = scalar_plant(0, 1, 1, 0);
  const auto f = coprime_factorize(p, QMatrix::zero(1, 1), QMatrix::zero(1, 1));
  const TFMatrix g = scalar(kY, kU, zinv());
  EXPECT_EQ(f.ml(), TFMatrix::identity(kY));
  EXPECT_EQ(f.ur(), TFMatrix::identity(kY));
  EXPECT_EQ(f.ul(), TFMatrix::identity(kU));
  EXPECT_EQ(f.mr(), TFMatrix::identity(kU));
  EXPECT_TRUE(f.vl().is_zero());
  EXPECT_TRUE(f.vr().is_zero());
  EXPECT_EQ(f.nl(), g);
  EXPECT_EQ(f.nr(), g);
}

TEST(CoprimeFactorize, ScalarUnstableDeadbeatGains) {
  // A + BF = A + LC = 0: every factor is a polynomial in z^-1. Hand substitution:
  // Mr = 1 - 2/z, Nr = 1/z, Vr = -4/z, Ur = 1 + 2/z, Ml = 1 - 2/z, Nl = 1/z, Vl = -4/z, Ul = 1 + 2/z.
  const PlantSS p = scalar_plant(2, 1, 1, 0);
  const auto f = coprime_factorize(p, QMatrix{{-2}}, QMatrix{{-2}});
  EXPECT_EQ(f.mr(), scalar(kU, kU, 1 - RatFun(2) * zinv()));
  EXPECT_EQ(f.nr(), scalar(kY, kU, zinv()));
  EXPECT_EQ(f.vr(), scalar(kU, kY, RatFun(-4) * zinv()));
  EXPECT_EQ(f.ur(), scalar(kY, kY, 1 + RatFun(2) * zinv()));
  EXPECT_EQ(f.ml(), scalar(kY, kY, 1 - RatFun(2) * zinv()));
  EXPECT_EQ(f.nl(), scalar(kY, kU, zinv()));
  EXPECT_EQ(f.vl(), scalar(kU, kY, RatFun(-4) * zinv()));
  EXPECT_EQ(f.ul(), scalar(kU, kU, 1 + RatFun(2) * zinv()));
  EXPECT_EQ(f.plant(), p.transfer());
}

TEST(CoprimeFactorize, RejectsNonStabilizingGains) {
  const PlantSS p = scalar_plant(2, 1, 1, 0);
  EXPECT_THROW(coprime_factorize(p, QMatrix{{q(-1, 2)}}, QMatrix{{-2}}), ConstraintError);
  EXPECT_THROW(coprime_factorize(p, QMatrix{{-2}}, QMatrix{{0}}), ConstraintError);
}

TEST(CoprimeFactorize, FixturesSatisfyBezout) {
  for (const auto& fx : testing::output_feedback_plants()) {
    SCOPED_TRACE(fx.name);
    const auto f = coprime_factorize(fx.plant, fx.f, fx.l);
    EXPECT_EQ(f.plant(), fx.plant.transfer());
    EXPECT_EQ(f.ml().inverse() * f.nl(), fx.plant.transfer());
  }
}

TEST(Youla, StablePlantForms) {
  const PlantSS p = scalar_plant(0, 1, 1, 0);
  const auto f = coprime_factorize(p, QMatrix::zero(1, 1), QMatrix::zero(1, 1));
  EXPECT_TRUE(youla_to_controller(f, YoulaParam(TFMatrix::zero(kU, kY))).is_zero());
  // K = -q (1 - G q)^-1 with q = 1/2: -1/2 / (1 - 1/(2z)) = -z / (2z - 1).
  const TFMatrix k = youla_to_controller(f, YoulaParam(scalar(kU, kY, q(1, 2))));
  EXPECT_EQ(k, scalar(kU, kY, RatFun(Poly({0, q(-1, 2)}), testing::linear(q(1, 2)))));
  EXPECT_EQ(controller_to_youla(f, k).q(), scalar(kU, kY, q(1, 2)));
  EXPECT_TRUE(controller_to_youla(f, TFMatrix::zero(kU, kY)).q().is_zero());
}

TEST(Youla, ZeroParameterIsObserverController) {
  const auto fx = testing::output_feedback_plants()[3];
  const auto f = coprime_factorize(fx.plant, fx.f, fx.l);
  const TFMatrix k0 = f.vr() * f.ur().inverse();
  EXPECT_EQ(youla_to_controller(f, YoulaParam(TFMatrix::zero(kU, kY))), k0);
  EXPECT_TRUE(controller_to_youla(f, k0).q().is_zero());
}

TEST(Youla, RejectsUnstableParameter) {
  EXPECT_THROW(YoulaParam(scalar(kU, kY, pole(2))), ConstraintError);
  EXPECT_THROW(YoulaParam(scalar(kU, kY, RatFun::z())), ConstraintError);
}

TEST(Youla, RejectsDestabilizingController) {
  const PlantSS p = scalar_plant(0, 1, 1, 0);
  const auto f = coprime_factorize(p, QMatrix::zero(1, 1), QMatrix::zero(1, 1));
  EXPECT_THROW(controller_to_youla(f, scalar(kU, kY, 2)), StabilityError);
}

TEST(Iop, FromControllerExamples) {
  const TFMatrix g = scalar(kY, kU, zinv());
  const auto open = iop_from_controller(g, TFMatrix::zero(kU, kY));
  EXPECT_EQ(open.y(), TFMatrix::identity(kY));
  EXPECT_TRUE(open.u().is_zero());
  EXPECT_EQ(open.w(), g);
  EXPECT_EQ(open.z(), TFMatrix::identity(kU));

  // Adjugate: det(I - R) = (2z - 1) / (2z).
  const auto p = iop_from_controller(g, scalar(kU, kY, q(1, 2)));
  const RatFun inv_det = RatFun(Poly({0, 1}), testing::linear(q(1, 2)));  // z / (z - 1/2)
  EXPECT_EQ(p.y(), scalar(kY, kY, inv_det));
  EXPECT_EQ(p.u(), scalar(kU, kY, RatFun(q(1, 2)) * inv_det));
  EXPECT_EQ(p.w(), scalar(kY, kU, pole(q(1, 2))));
  EXPECT_EQ(p.z(), scalar(kU, kU, inv_det));
  EXPECT_EQ(iop_to_controller(p), scalar(kU, kY, q(1, 2)));
  EXPECT_TRUE(iop_to_controller(open).is_zero());

  try {
    iop_from_controller(g, scalar(kU, kY, 2));
    FAIL() << "expected StabilityError";
  } catch (const StabilityError& e) {
    EXPECT_FALSE(e.report().pass);
    EXPECT_EQ(e.report().findings.front().kind, FindingKind::kUnstableStabilityEntry);
  }
}

TEST(Iop, EmptyPlant) {
  const TFMatrix g = TFMatrix::zero(kY, kU);
  const IopParam p(g, TFMatrix::identity(kY), TFMatrix::zero(kY, kU), TFMatrix::zero(kU, kY),
                   TFMatrix::identity(kU));
  EXPECT_TRUE(iop_to_controller(p).is_zero());
}

TEST(Iop, RejectsViolatingBundle) {
  const TFMatrix g = scalar(kY, kU, zinv());
  EXPECT_THROW(IopParam(g, TFMatrix::identity(kY), TFMatrix::zero(kY, kU), TFMatrix::zero(kU, kY),
                        TFMatrix::identity(kU)),
               ConstraintError);
}

SlpStateFeedback scalar_sf_example(const PlantSS& p) {
  return SlpStateFeedback(p, scalar(kX, kX, zinv()), scalar(kU, kX, RatFun(q(-1, 2)) * zinv()));
}

TEST(SlpStateFeedback, ScalarExample) {
  const PlantSS p = PlantSS::state_feedback({{q(1, 2)}}, {{1}});
  const auto phi = slp_sf_from_controller(p, scalar(kU, kX, q(-1, 2)));
  EXPECT_EQ(phi, scalar_sf_example(p));
  EXPECT_EQ(slp_sf_to_controller(phi), scalar(kU, kX, q(-1, 2)));
  // Completed stability matrix equals the adjugate oracle.
  const auto s = slp_sf_stability(phi, p);
  EXPECT_EQ(s.s(), TFMatrix(s.space(), s.space(),
                            {zinv(), zinv(), RatFun(q(-1, 2)) * zinv(), 1 - RatFun(q(1, 2)) * zinv()}));
  EXPECT_TRUE(check_conditions(state_feedback_realization(p, slp_sf_to_controller(phi)), s).pass);
}

TEST(SlpStateFeedback, OpenLoopStablePlant) {
  const PlantSS p = PlantSS::state_feedback({{q(1, 2)}}, {{1}});
  const auto phi = slp_sf_from_controller(p, TFMatrix::zero(kU, kX));
  EXPECT_EQ(phi.phi_x(), scalar(kX, kX, pole(q(1, 2))));
  EXPECT_TRUE(phi.phi_u().is_zero());
  EXPECT_TRUE(slp_sf_to_controller(phi).is_zero());
}

TEST(SlpStateFeedback, Rejections) {
  const PlantSS p = PlantSS::state_feedback({{q(1, 2)}}, {{1}});
  EXPECT_THROW(SlpStateFeedback(p, scalar(kX, kX, zinv()), scalar(kU, kX, zinv())), ConstraintError);
  const PlantSS uncontrollable = PlantSS::state_feedback({{2}}, {{0}});
  EXPECT_THROW(slp_sf_from_controller(uncontrollable, scalar(kU, kX, -5)), StabilityError);
}

TEST(SlpOutputFeedback, ScalarThreeByThreeOracle) {
  // A = 0, B = C = 1, D = 0, K = 1/2: x = (d_x + d_u + d_y / 2) / (z - 1/2).
  const PlantSS p = scalar_plant(0, 1, 1, 0);
  const auto phi = slp_of_from_controller(p, scalar(kU, kY, q(1, 2)));
  const RatFun r = pole(q(1, 2));
  EXPECT_EQ(phi.phi_xx(), scalar(kX, kX, r));
  EXPECT_EQ(phi.phi_ux(), scalar(kU, kX, RatFun(q(1, 2)) * r));
  EXPECT_EQ(phi.phi_xy(), scalar(kX, kY, RatFun(q(1, 2)) * r));
  EXPECT_EQ(phi.phi_uy(), scalar(kU, kY, RatFun(q(1, 2)) * RatFun::z() * r));
  EXPECT_EQ(slp_of_to_controller(phi, p.d()), scalar(kU, kY, q(1, 2)));

  const auto s = slp_of_stability(phi, p);
  const auto direct = stability_from_realization(output_feedback_realization(p, scalar(kU, kY, q(1, 2))));
  EXPECT_EQ(s.s(), direct.s());
}

TEST(SlpOutputFeedback, OpenLoopAndShortcut) {
  const PlantSS p = scalar_plant(q(1, 2), 1, 1, 0);
  const auto phi = slp_of_from_controller(p, TFMatrix::zero(kU, kY));
  EXPECT_EQ(phi.phi_xx(), scalar(kX, kX, pole(q(1, 2))));
  EXPECT_TRUE(phi.phi_ux().is_zero());
  EXPECT_TRUE(phi.phi_xy().is_zero());
  EXPECT_TRUE(phi.phi_uy().is_zero());
  EXPECT_TRUE(slp_of_to_controller(phi, p.d()).is_zero());
}

TEST(SlpOutputFeedback, FeedthroughRoundTrip) {
  const PlantSS p = scalar_plant(q(1, 2), 1, 1, 1);
  const auto f = coprime_factorize(p, QMatrix::zero(1, 1), QMatrix::zero(1, 1));
  const TFMatrix k = youla_to_controller(f, YoulaParam(scalar(kU, kY, RatFun(q(1, 4)) * zinv())));
  const auto phi = slp_of_from_controller(p, k);
  EXPECT_EQ(slp_of_to_controller(phi, p.d()), k);
  EXPECT_EQ(slp_of_stability(phi, p).s(), stability_from_realization(output_feedback_realization(p, k)).s());
}

TEST(SlpOutputFeedback, RejectsViolatingBundle) {
  const PlantSS p = scalar_plant(q(1, 2), 1, 1, 0);
  const TFMatrix r = scalar(kX, kX, pole(q(1, 2)));
  EXPECT_THROW(SlpOutputFeedback(p, r, TFMatrix::zero(kU, kX), scalar(kX, kY, zinv()), TFMatrix::zero(kU, kY)),
               ConstraintError);
}

TEST(Mixed, ZeroAndScalarControllers) {
  const PlantSS p = scalar_plant(0, 1, 1, 0);
  EXPECT_TRUE(mixed1_to_controller(mixed1_from_controller(p, TFMatrix::zero(kU, kY))).is_zero());
  EXPECT_TRUE(mixed2_to_controller(mixed2_from_controller(p, TFMatrix::zero(kU, kY))).is_zero());
  const TFMatrix k = scalar(kU, kY, q(1, 2));
  EXPECT_EQ(mixed1_to_controller(mixed1_from_controller(p, k)), k);
  EXPECT_EQ(mixed2_to_controller(mixed2_from_controller(p, k)), k);
}

TEST(Mixed, RejectsViolatingBundles) {
  const PlantSS p = scalar_plant(0, 1, 1, 0);
  const auto m1 = mixed1_from_controller(p, scalar(kU, kY, q(1, 2)));
  EXPECT_THROW(MixedParam1(p, m1.phi_yx(), m1.phi_ux(), m1.phi_yy() + TFMatrix::identity(kY), m1.phi_uy()),
               ConstraintError);
  const auto m2 = mixed2_from_controller(p, scalar(kU, kY, q(1, 2)));
  EXPECT_THROW(MixedParam2(p, m2.phi_xy(), m2.phi_uy(), m2.phi_xu(), m2.phi_uu() + TFMatrix::identity(kU)),
               ConstraintError);
}

TEST(YoulaToIop, ZeroParameterStablePlant) {
  const PlantSS p = scalar_plant(0, 1, 1, 0);
  const auto f = coprime_factorize(p, QMatrix::zero(1, 1), QMatrix::zero(1, 1));
  const auto iop = youla_to_iop(f, YoulaParam(TFMatrix::zero(kU, kY)));
  EXPECT_EQ(iop.y(), TFMatrix::identity(kY));
  EXPECT_EQ(iop.w(), p.transfer());
  EXPECT_TRUE(iop.u().is_zero());
  EXPECT_EQ(iop.z(), TFMatrix::identity(kU));
}

TEST(YoulaToIop, MatchesControllerExtraction) {
  // K = 1/2 on G = 1/z with trivial factors (A = 0, F = L = 0), where Q = -S_uy = -K (1 - G K)^-1.
  const PlantSS p = scalar_plant(0, 1, 1, 0);
  const auto f = coprime_factorize(p, QMatrix::zero(1, 1), QMatrix::zero(1, 1));
  const TFMatrix k = scalar(kU, kY, q(1, 2));
  const YoulaParam qp = controller_to_youla(f, k);
  EXPECT_EQ(youla_to_iop(f, qp), iop_from_controller(p.transfer(), k));
}

TEST(SlpSfToIop, ScalarExample) {
  const PlantSS p = PlantSS::state_feedback({{q(1, 2)}}, {{1}});
  const auto phi = scalar_sf_example(p);
  const auto iop = slp_sf_to_iop(phi, p);
  // S T with T = diag(z - 1/2, 1).
  EXPECT_EQ(iop.y(), scalar(kX, kX, 1 - RatFun(q(1, 2)) * zinv()));
  EXPECT_EQ(iop.w(), scalar(kX, kU, zinv()));
  EXPECT_EQ(iop.u(), scalar(kU, kX, RatFun(q(-1, 2)) * (1 - RatFun(q(1, 2)) * zinv())));
  EXPECT_EQ(iop.z(), scalar(kU, kU, 1 - RatFun(q(1, 2)) * zinv()));
  EXPECT_EQ(iop, iop_from_controller(p.state_transfer(), slp_sf_to_controller(phi)));
  EXPECT_EQ(iop_to_controller(iop), scalar(kU, kX, q(-1, 2)));
}

TEST(SlpSfToIop, OpenLoop) {
  const PlantSS p = PlantSS::state_feedback({{q(1, 2)}}, {{1}});
  const auto iop = slp_sf_to_iop(slp_sf_from_controller(p, TFMatrix::zero(kU, kX)), p);
  EXPECT_EQ(iop.y(), TFMatrix::identity(kX));
  EXPECT_TRUE(iop.u().is_zero());
}

TEST(SlpSfToIop, TransformationRelatesLoops) {
  const PlantSS p = PlantSS::state_feedback({{q(1, 2)}}, {{1}});
  const TFMatrix k = scalar(kU, kX, q(-1, 2));
  const Realization sf = state_feedback_realization(p, k);
  const Realization pc_loop = plant_controller_realization(p.state_transfer(), k);
  const Transformation t = slp_sf_iop_transformation(p);
  EXPECT_TRUE(verify_equivalent(sf, pc_loop, t));
  const auto eq = transform(sf, stability_from_realization(sf), t);
  EXPECT_EQ(eq.realization.r(), pc_loop.r());
  EXPECT_EQ(eq.stability.s(), stability_from_realization(pc_loop).s());
}

TEST(SlpOfToIop, ZeroDAndFeedthrough) {
  for (const auto& p : {scalar_plant(q(1, 2), 1, 1, 0), scalar_plant(q(1, 2), 1, 1, 1)}) {
    const auto f = coprime_factorize(p, QMatrix::zero(1, 1), QMatrix::zero(1, 1));
    const TFMatrix k = youla_to_controller(f, YoulaParam(scalar(kU, kY, RatFun(q(-1, 3)) * zinv())));
    const auto phi = slp_of_from_controller(p, k);
    EXPECT_EQ(slp_of_to_iop(phi, p), iop_from_controller(p.transfer(), k));
  }
  const PlantSS p = scalar_plant(q(1, 2), 1, 1, 0);
  const auto iop = slp_of_to_iop(slp_of_from_controller(p, TFMatrix::zero(kU, kY)), p);
  EXPECT_TRUE(iop.u().is_zero());
  EXPECT_EQ(iop.y(), TFMatrix::identity(kY));
}

// Round trips and commuting maps on random admissible controllers.
TEST(ParameterizationProperty, OutputFeedbackRoundTrips) {
  std::mt19937 rng(23);
  for (const auto& fx : testing::output_feedback_plants()) {
    SCOPED_TRACE(fx.name);
    const auto f = coprime_factorize(fx.plant, fx.f, fx.l);
    const TFMatrix g = fx.plant.transfer();
    for (int trial = 0; trial < 3; ++trial) {
      const YoulaParam qp(testing::random_fir(rng, f.vr().rows(), f.vr().cols(), 0, 2));
      const TFMatrix k = youla_to_controller(f, qp);
      EXPECT_EQ(controller_to_youla(f, k).q(), qp.q());

      const auto iop = iop_from_controller(g, k);
      EXPECT_EQ(iop_to_controller(iop), k);
      EXPECT_EQ(youla_to_iop(f, qp), iop);

      const auto of = slp_of_from_controller(fx.plant, k);
      EXPECT_EQ(slp_of_to_controller(of, fx.plant.d()), k);
      EXPECT_EQ(slp_of_to_iop(of, fx.plant), iop);

      EXPECT_EQ(mixed1_to_controller(mixed1_from_controller(fx.plant, k)), k);
      EXPECT_EQ(mixed2_to_controller(mixed2_from_controller(fx.plant, k)), k);
    }
  }
}

TEST(ParameterizationProperty, StateFeedbackRoundTrips) {
  std::mt19937 rng(29);
  for (const auto& fx : testing::state_feedback_plants()) {
    SCOPED_TRACE(fx.name);
    const auto f = coprime_factorize(fx.plant, fx.f, fx.l);
    const SignalSpace xs = fx.plant.state_space();
    const SignalSpace us = fx.plant.input_space();
    for (int trial = 0; trial < 3; ++trial) {
      const TFMatrix k = testing::random_admissible_controller(rng, f).relabeled(us, xs);
      const auto phi = slp_sf_from_controller(fx.plant, k);
      EXPECT_EQ(slp_sf_to_controller(phi), k);
      EXPECT_EQ(slp_sf_from_controller(fx.plant, slp_sf_to_controller(phi)), phi);
      EXPECT_EQ(slp_sf_stability(phi, fx.plant).s(),
                stability_from_realization(state_feedback_realization(fx.plant, k)).s());
      const auto iop = slp_sf_to_iop(phi, fx.plant);
      EXPECT_EQ(iop, iop_from_controller(fx.plant.state_transfer(), k));
      EXPECT_TRUE(verify_equivalent(state_feedback_realization(fx.plant, k),
                                    plant_controller_realization(fx.plant.state_transfer(), k),
                                    slp_sf_iop_transformation(fx.plant)));
    }
  }
}

}  // namespace
}  // namespace rscalc
