#include "rscalc/serialization.h"

#include <random>

#include <gtest/gtest.h>

#include "rscalc/error.h"
#include "test_support.h"

namespace rscalc {
namespace {

using testing::q;

TEST(Values, RatFunLayout) {
  // (1/2 + z) / (z^2 - 3).
  const RatFun r(testing::poly({q(1, 2), 1}), testing::poly({-3, 0, 1}));
  const Json j = to_json(r);
  EXPECT_EQ(j, Json::parse(R"({"num": ["1/2", "1"], "den": ["-3", "0", "1"]})"));
  EXPECT_EQ(ratfun_from_json(j), r);
  EXPECT_EQ(ratfun_from_json(Json::parse(R"({"num": ["0.25"], "den": ["0", "1"]})")),
            RatFun(q(1, 4)) * RatFun::z_inv());
  EXPECT_EQ(ratfun_from_json(Json("2/6")), RatFun(q(1, 3)));
}

TEST(Values, DecimalsAreExact) {
  EXPECT_EQ(rational_from_json(Json("0.125")), q(1, 8));
  EXPECT_EQ(rational_from_json(Json("-1.5e-2")), q(-3, 200));
  EXPECT_EQ(rational_from_json(Json(7)), Rational(7));
  EXPECT_THROW(rational_from_json(Json(0.5)), ParseError);
  EXPECT_THROW(rational_from_json(Json("1/0")), ParseError);
  EXPECT_THROW(rational_from_json(Json("abc")), ParseError);
}

TEST(Values, DoublesRoundTrip) {
  for (double v : {0.1, -1.0 / 3.0, 1e-300, 12345.678, 0.0}) {
    EXPECT_EQ(double_from_json(to_json(v)), v);
  }
  EXPECT_DOUBLE_EQ(double_from_json(Json("1/4")), 0.25);
}

TEST(Values, TFMatrixRoundTrip) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const SignalSpace rows = testing::random_space(rng, 2, 2);
    const SignalSpace cols = testing::random_space(rng, 2, 2);
    const TFMatrix m = testing::random_tfmatrix(rng, rows, cols, 2);
    const Json j = to_json(m);
    EXPECT_EQ(tfmatrix_from_json(Json::parse(j.dump())), m);
  }
}

TEST(Values, MalformedTFMatrix) {
  Json j = to_json(TFMatrix::identity(SignalSpace::single("x", 2)));
  j["entries"][0].erase(1);
  EXPECT_THROW(tfmatrix_from_json(j), ParseError);
  Json d = to_json(TFMatrix::identity(SignalSpace::single("x", 1)));
  d["entries"][0][0]["den"] = Json::array({"0"});
  EXPECT_THROW(tfmatrix_from_json(d), ParseError);
  Json s = to_json(TFMatrix::identity(SignalSpace::single("x", 1)));
  s["rows"] = Json::parse(R"([{"name": "x", "dim": 1}, {"name": "x", "dim": 1}])");
  EXPECT_THROW(tfmatrix_from_json(s), ParseError);
}

TEST(Documents, PlantRoundTrip) {
  for (const auto& fx : testing::output_feedback_plants()) {
    const Json doc = plant_document(fx.plant, StabilizingGains{fx.f, fx.l});
    const PlantSS p = plant_from_json(Json::parse(doc.dump()));
    EXPECT_EQ(p.a(), fx.plant.a());
    EXPECT_EQ(p.b(), fx.plant.b());
    EXPECT_EQ(p.c(), fx.plant.c());
    EXPECT_EQ(p.d(), fx.plant.d());
    const auto g = gains_from_json(doc);
    ASSERT_TRUE(g.has_value());
    EXPECT_EQ(g->f, fx.f);
    EXPECT_EQ(g->l, fx.l);
  }
  const PlantSS sf = plant_from_json(Json::parse(R"({"kind": "plant", "schema_version": 1,
      "A": [["0.5"]], "B": [["1"]]})"));
  EXPECT_EQ(sf.c(), QMatrix::identity(1));
  EXPECT_EQ(sf.d(), QMatrix::zero(1, 1));
}

TEST(Documents, KindAndVersionChecked) {
  Json doc = plant_document(PlantSS::state_feedback({{1}}, {{1}}));
  EXPECT_EQ(doc["kind"], "plant");
  EXPECT_EQ(doc["schema_version"], kSchemaVersion);
  Json wrong_version = doc;
  wrong_version["schema_version"] = 2;
  EXPECT_THROW(plant_from_json(wrong_version), ParseError);
  Json wrong_kind = doc;
  wrong_kind["kind"] = "realization";
  EXPECT_THROW(plant_from_json(wrong_kind), ParseError);
  Json missing = doc;
  missing.erase("B");
  EXPECT_THROW(plant_from_json(missing), ParseError);
  Json bad_dims = doc;
  bad_dims["B"] = Json::parse(R"([["1"], ["2"]])");
  EXPECT_THROW(plant_from_json(bad_dims), ParseError);
  EXPECT_THROW(parse_document("{not json"), ParseError);
}

TEST(Documents, RealizationRoundTrip) {
  const PlantSS p = PlantSS::state_feedback({{q(1, 2)}}, {{1}});
  const FirSlp phi{FirPhi({QMatrix{{1}}}), FirPhi({QMatrix{{q(-1, 2)}}})};
  const Realization r = build_realization(RealizationVariant::deployment(phi), p);
  const Realization back = realization_from_document(Json::parse(realization_document(r).dump()));
  EXPECT_EQ(back.space(), r.space());
  EXPECT_EQ(back.r(), r.r());
  EXPECT_EQ(back.structural_zeros(), r.structural_zeros());

  const SignalSpace s({{"a", 1}, {"b", 1}});
  Json doc = realization_document(Realization(s, TFMatrix::identity(s)));
  doc["structural_zeros"] = Json::parse(R"([["a", "a"]])");
  EXPECT_THROW(realization_from_document(doc), ParseError);
}

TEST(Documents, StabilityRoundTrip) {
  const SignalSpace s({{"a", 1}, {"b", 2}});
  const StabilityMatrix m(s, TFMatrix::identity(s));
  const StabilityMatrix back = stability_from_document(stability_document(m));
  EXPECT_EQ(back.s(), m.s());
}

TEST(Documents, BundlesRoundTrip) {
  const auto fixtures = testing::output_feedback_plants();
  std::mt19937 rng(17);
  for (const auto& fx : fixtures) {
    const CoprimeFactors factors = coprime_factorize(fx.plant, fx.f, fx.l);
    const TFMatrix k = testing::random_admissible_controller(rng, factors);
    const std::vector<ParameterBundle> bundles = {
        make_bundle(fx.plant, k),
        make_bundle(fx.plant, StabilizingGains{fx.f, fx.l}, controller_to_youla(factors, k)),
        make_bundle(fx.plant, iop_from_controller(fx.plant.transfer(), k)),
        make_bundle(fx.plant, slp_of_from_controller(fx.plant, k)),
        make_bundle(fx.plant, mixed1_from_controller(fx.plant, k)),
        make_bundle(fx.plant, mixed2_from_controller(fx.plant, k)),
    };
    for (const auto& b : bundles) {
      const Json doc = bundle_document(b);
      const ParameterBundle back = bundle_from_document(Json::parse(doc.dump()));
      EXPECT_EQ(back.kind, b.kind);
      EXPECT_EQ(back.blocks, b.blocks);
      EXPECT_EQ(back.plant.a(), b.plant.a());
      EXPECT_EQ(back.gains.has_value(), b.gains.has_value());
      EXPECT_EQ(bundle_document(back), doc);
    }
  }
}

TEST(Documents, ParameterizationNames) {
  for (const char* n : {"controller", "youla", "iop", "slp_sf", "slp_of", "mixed1", "mixed2"}) {
    EXPECT_EQ(to_string(parse_parameterization(n)), n);
  }
  EXPECT_THROW(parse_parameterization("sls"), std::invalid_argument);
}

TEST(Documents, VariantFromFirDocument) {
  const PlantSS p = PlantSS::state_feedback({{q(1, 2)}}, {{1}});
  const FirSlp phi{FirPhi({QMatrix{{1}}}), FirPhi({QMatrix{{q(-1, 2)}}})};
  const Json fir = fir_document(p, phi);
  EXPECT_THROW(variant_from_document(fir, std::nullopt), ParseError);
  const VariantJob ds = variant_from_document(fir, VariantKind::kDesignSeparation);
  EXPECT_EQ(ds.variant.pc, phi.phi_x);
  EXPECT_EQ(ds.variant.mc, phi.phi_u);

  const auto v = RealizationVariant::design_separation(phi, FirPhi({QMatrix{{2}}}), phi.phi_u);
  const Json vdoc = variant_document(p, v);
  const VariantJob back = variant_from_document(Json::parse(vdoc.dump()), std::nullopt);
  EXPECT_EQ(back.variant.kind, v.kind);
  EXPECT_EQ(back.variant.pc, v.pc);
  EXPECT_EQ(back.variant.phi_u, v.phi_u);
  // An explicit kind overrides the declared one.
  EXPECT_EQ(variant_from_document(vdoc, VariantKind::kOriginal).variant.kind, VariantKind::kOriginal);

  Json bad = fir;
  bad["phi_x"]["horizon"] = 3;
  EXPECT_THROW(variant_from_document(bad, VariantKind::kOriginal), ParseError);
}

TEST(Documents, SynthesisProblemDefaults) {
  const Json doc = Json::parse(R"({"kind": "synthesis_problem", "schema_version": 1,
      "plant": {"kind": "plant", "schema_version": 1, "A": [["1", "1"], ["0", "1"]], "B": [["0"], ["1"]]}})");
  const SynthesisProblem p = synthesis_problem_from_document(doc);
  EXPECT_EQ(p.qw, QMatrix::identity(2));
  EXPECT_EQ(p.rw, QMatrix::identity(1));
  EXPECT_EQ(p.horizon, 0);
  const SynthesisProblem back = synthesis_problem_from_document(synthesis_problem_document({p.plant, p.qw, p.rw, 7}));
  EXPECT_EQ(back.horizon, 7);
}

TEST(Documents, TracesRoundTrip) {
  std::map<std::string, SignalTrace> t;
  t["x"] = {Eigen::Vector2d(0.1, -2.0), Eigen::Vector2d(1e-17, 3.0)};
  t["u"] = {Eigen::VectorXd::Constant(1, 1.0 / 3.0)};
  const auto back = traces_from_json(Json::parse(to_json(t).dump()));
  ASSERT_EQ(back.size(), 2u);
  for (const auto& [name, trace] : t) {
    ASSERT_EQ(back.at(name).size(), trace.size());
    for (size_t i = 0; i < trace.size(); ++i) EXPECT_EQ(back.at(name)[i], trace[i]);
  }
}

TEST(Reports, CertificationFields) {
  const PlantSS p = PlantSS::state_feedback({{2}}, {{1}});
  const FirSlp phi{FirPhi({QMatrix{{1}}}), FirPhi({QMatrix{{-2}}})};
  const Json j = certification_report(certify_realization(RealizationVariant::deployment(phi), p));
  EXPECT_EQ(j["kind"], "report");
  EXPECT_EQ(j["command"], "certify");
  EXPECT_EQ(j["variant"], "deployment");
  EXPECT_EQ(j["pass"], false);
  EXPECT_EQ(j["a_schur_stable"], false);
  bool cites_xu = false;
  for (const auto& f : j["conditions"]["findings"]) {
    cites_xu |= f["row_block"] == "x" && f["col_block"] == "u" && f["kind"] == to_string(FindingKind::kUnstableStabilityEntry);
  }
  EXPECT_TRUE(cites_xu);
  EXPECT_EQ(stability_from_document(j["stability"]).s().block("x", "u"), p.state_transfer());
}

}  // namespace
}  // namespace rscalc
