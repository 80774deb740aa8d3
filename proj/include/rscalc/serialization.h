#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>
#include <json.hpp>

#include "rscalc/parameterizations.h"
#include "rscalc/sls.h"

namespace rscalc {

using Json = nlohmann::json;

/// Version written to and required in every document.
inline constexpr int kSchemaVersion = 1;

/// @name Values
/// Exact rationals are "p/q" strings; parsing also accepts integer and
/// decimal strings ("-3", "0.125", "1e-3") and JSON integers, all exactly.
/// Doubles are shortest round-trip decimal strings. Parse failures throw
/// ParseError.
//@{
Json to_json(const Rational& q);
Rational rational_from_json(const Json& j);

/// {"num": [...], "den": [...]}, ascending powers of z.
Json to_json(const RatFun& r);
RatFun ratfun_from_json(const Json& j);

/// [{"name": ..., "dim": ...}, ...].
Json to_json(const SignalSpace& s);
SignalSpace signal_space_from_json(const Json& j);

/// {"rows": space, "cols": space, "entries": [[ratfun, ...], ...]}.
Json to_json(const TFMatrix& m);
TFMatrix tfmatrix_from_json(const Json& j);

/// Nested rows of exact strings.
Json to_json(const QMatrix& m);
QMatrix qmatrix_from_json(const Json& j);

Json to_json(double v);
double double_from_json(const Json& j);
Json to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd real_matrix_from_json(const Json& j);
//@}

/// @name Documents
/// Every document carries "kind" and "schema_version".
//@{
/// Parses text into a JSON value; throws ParseError.
Json parse_document(std::string_view text);
/// Kind of a document after checking its schema version; throws ParseError.
std::string document_kind(const Json& doc);

/// kind "plant": {"A", "B", "C", "D"}; "C" and "D" may be omitted for a
/// state-feedback plant. Optional "F" and "L" gains are returned separately.
Json plant_document(const PlantSS& plant, const std::optional<StabilizingGains>& gains = std::nullopt);
PlantSS plant_from_json(const Json& j);
std::optional<StabilizingGains> gains_from_json(const Json& j);

/// kind "realization": {"space", "R", "structural_zeros": [[row, col], ...]}.
Json realization_document(const Realization& r);
Realization realization_from_document(const Json& doc);

/// kind "stability_matrix": {"space", "S"}.
Json stability_document(const StabilityMatrix& s);
StabilityMatrix stability_from_document(const Json& doc);

enum class Parameterization { kController, kYoula, kIop, kSlpSf, kSlpOf, kMixed1, kMixed2 };

/// "controller", "youla", "iop", "slp_sf", "slp_of", "mixed1", "mixed2".
std::string to_string(Parameterization p);
/// Throws std::invalid_argument.
Parameterization parse_parameterization(const std::string& text);

/// Named transfer matrices of one parameterization of a plant's controller.
/// Block names: controller {K}; youla {Q}; iop {G, Y, W, U, Z};
/// slp_sf {Phi_x, Phi_u}; slp_of {Phi_xx, Phi_ux, Phi_xy, Phi_uy};
/// mixed1 {Phi_yx, Phi_ux, Phi_yy, Phi_uy}; mixed2 {Phi_xy, Phi_uy, Phi_xu, Phi_uu}.
/// Youla bundles also carry the gains defining the coprime factors.
struct ParameterBundle {
  Parameterization kind;
  PlantSS plant;
  std::map<std::string, TFMatrix> blocks;
  std::optional<StabilizingGains> gains;

  /// Throws ParseError for a missing block.
  const TFMatrix& at(const std::string& name) const;
};

ParameterBundle make_bundle(const PlantSS& plant, const TFMatrix& controller);
ParameterBundle make_bundle(const PlantSS& plant, const StabilizingGains& gains, const YoulaParam& p);
ParameterBundle make_bundle(const PlantSS& plant, const IopParam& p);
ParameterBundle make_bundle(const PlantSS& plant, const SlpStateFeedback& p);
ParameterBundle make_bundle(const PlantSS& plant, const SlpOutputFeedback& p);
ParameterBundle make_bundle(const PlantSS& plant, const MixedParam1& p);
ParameterBundle make_bundle(const PlantSS& plant, const MixedParam2& p);

/// kind "parameter_bundle": {"parameterization", "plant", "blocks", "gains"?}.
Json bundle_document(const ParameterBundle& b);
ParameterBundle bundle_from_document(const Json& doc);

/// kind "coprime_factors": {"plant", "gains", "blocks": {Ml, Nl, Vl, Ul, Ur, Nr, Vr, Mr}}.
Json factors_document(const PlantSS& plant, const StabilizingGains& gains, const CoprimeFactors& f);

/// {"horizon": T, "taps": [matrix, ...]}.
Json to_json(const FirPhi& f);
FirPhi fir_from_json(const Json& j);

/// kind "fir_slp": {"plant", "phi_x", "phi_u"}.
Json fir_document(const PlantSS& plant, const FirSlp& phi);

/// kind "realization_variant": {"plant", "variant", "phi_x", "phi_u", "pc"?, "mc"?}.
Json variant_document(const PlantSS& plant, const RealizationVariant& v);

/// Plant and variant from a "realization_variant" document, or from a
/// "fir_slp" document with the variant kind given separately (design
/// separation then uses Pc = Phi_x, Mc = Phi_u).
struct VariantJob {
  PlantSS plant;
  RealizationVariant variant;
};
VariantJob variant_from_document(const Json& doc, std::optional<VariantKind> kind);

/// kind "synthesis_problem": {"plant", "Qw", "Rw", "horizon"}.
struct SynthesisProblem {
  PlantSS plant;
  QMatrix qw;
  QMatrix rw;
  int horizon = 0;
};
Json synthesis_problem_document(const SynthesisProblem& p);
SynthesisProblem synthesis_problem_from_document(const Json& doc);

/// {signal: [[sample entries], ...]} for t = 0, 1, ...
Json to_json(const std::map<std::string, SignalTrace>& traces);
std::map<std::string, SignalTrace> traces_from_json(const Json& j);

/// kind "sim_trace": {"horizon", "signals", "disturbance"}.
Json trace_document(const SimTrace& trace);
//@}

/// @name Reports
/// kind "report" with "command" and "pass", plus command-specific details.
//@{
Json to_json(const ConditionReport& r);
Json verify_report(const ConditionReport& conditions, bool lemma_holds);
Json certification_report(const CertificationReport& r);
Json impulse_report(const ImpulseReport& r);
Json synthesis_report(const SynthesisResult& r);
Json simple_report(const std::string& command, bool pass, const std::string& message);
//@}

}  // namespace rscalc
