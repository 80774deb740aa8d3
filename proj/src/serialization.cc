#include "rscalc/serialization.h"

#include <charconv>
#include <cstdlib>
#include <stdexcept>

#include "rscalc/error.h"

namespace rscalc {

namespace {

const Json& field(const Json& j, const char* name) {
  if (!j.is_object()) throw ParseError(std::string("expected an object holding '") + name + "'");
  auto it = j.find(name);
  if (it == j.end()) throw ParseError(std::string("missing field '") + name + "'");
  return *it;
}

const Json& array_field(const Json& j, const char* name) {
  const Json& a = field(j, name);
  if (!a.is_array()) throw ParseError(std::string("field '") + name + "' must be an array");
  return a;
}

const Json& as_array(const Json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + " must be an array");
  return j;
}

std::string as_string(const Json& j, const char* what) {
  if (!j.is_string()) throw ParseError(std::string(what) + " must be a string");
  return j.get<std::string>();
}

int as_int(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw ParseError(std::string(what) + " must be an integer");
  return j.get<int>();
}

Json document(const std::string& kind) {
  Json j = Json::object();
  j["kind"] = kind;
  j["schema_version"] = kSchemaVersion;
  return j;
}

void require_kind(const Json& doc, const std::string& kind) {
  const std::string actual = document_kind(doc);
  if (actual != kind) throw ParseError("expected a '" + kind + "' document, got '" + actual + "'");
}

std::vector<Rational> rationals_from_json(const Json& j, const char* what) {
  std::vector<Rational> out;
  for (const Json& e : as_array(j, what)) out.push_back(rational_from_json(e));
  return out;
}

template <typename F>
auto with_parse_context(const std::string& what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw ParseError(what + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(what + ": " + e.what());
  } catch (const std::domain_error& e) {
    throw ParseError(what + ": " + e.what());
  }
}

Json blocks_json(const std::map<std::string, TFMatrix>& blocks) {
  Json j = Json::object();
  for (const auto& [name, m] : blocks) j[name] = to_json(m);
  return j;
}

}  // namespace

Json to_json(const Rational& q) { return format_rational(q); }

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return parse_rational(j.dump());
  throw ParseError("exact number must be a string or an integer, got " + j.dump());
}

Json to_json(const RatFun& r) {
  Json num = Json::array();
  Json den = Json::array();
  for (const auto& c : r.num().coeffs()) num.push_back(to_json(c));
  for (const auto& c : r.den().coeffs()) den.push_back(to_json(c));
  return {{"num", num}, {"den", den}};
}

RatFun ratfun_from_json(const Json& j) {
  if (j.is_string() || j.is_number_integer()) return RatFun(rational_from_json(j));
  Poly num(rationals_from_json(field(j, "num"), "num"));
  Poly den(rationals_from_json(field(j, "den"), "den"));
  if (den.is_zero()) throw ParseError("zero denominator polynomial");
  return RatFun(std::move(num), std::move(den));
}

Json to_json(const SignalSpace& s) {
  Json j = Json::array();
  for (const auto& b : s.blocks()) j.push_back({{"name", b.name}, {"dim", b.dim}});
  return j;
}

SignalSpace signal_space_from_json(const Json& j) {
  std::vector<SignalBlock> blocks;
  for (const Json& b : as_array(j, "signal space")) {
    blocks.push_back({as_string(field(b, "name"), "block name"), as_int(field(b, "dim"), "block dim")});
  }
  return with_parse_context("signal space", [&] { return SignalSpace(std::move(blocks)); });
}

Json to_json(const TFMatrix& m) {
  Json entries = Json::array();
  for (int i = 0; i < m.num_rows(); ++i) {
    Json row = Json::array();
    for (int k = 0; k < m.num_cols(); ++k) row.push_back(to_json(m(i, k)));
    entries.push_back(row);
  }
  return {{"rows", to_json(m.rows())}, {"cols", to_json(m.cols())}, {"entries", entries}};
}

TFMatrix tfmatrix_from_json(const Json& j) {
  SignalSpace rows = signal_space_from_json(field(j, "rows"));
  SignalSpace cols = signal_space_from_json(field(j, "cols"));
  const Json& entries = array_field(j, "entries");
  if (static_cast<int>(entries.size()) != rows.total()) throw ParseError("transfer matrix row count mismatch");
  std::vector<RatFun> flat;
  for (const Json& row : entries) {
    if (!row.is_array() || static_cast<int>(row.size()) != cols.total()) {
      throw ParseError("transfer matrix column count mismatch");
    }
    for (const Json& e : row) flat.push_back(ratfun_from_json(e));
  }
  return TFMatrix(std::move(rows), std::move(cols), std::move(flat));
}

Json to_json(const QMatrix& m) {
  Json j = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
    j.push_back(row);
  }
  return j;
}

QMatrix qmatrix_from_json(const Json& j) {
  const Json& rows = as_array(j, "matrix");
  if (rows.empty()) throw ParseError("matrix must have at least one row");
  const size_t cols = as_array(rows.front(), "matrix row").size();
  if (cols == 0) throw ParseError("matrix must have at least one column");
  std::vector<Rational> flat;
  for (const Json& row : rows) {
    if (as_array(row, "matrix row").size() != cols) throw ParseError("ragged matrix");
    for (const Json& e : row) flat.push_back(rational_from_json(e));
  }
  return QMatrix(static_cast<int>(rows.size()), static_cast<int>(cols), std::move(flat));
}

Json to_json(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double double_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  const std::string s = as_string(j, "real number");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    // Exact strings such as "1/3" are accepted and rounded.
    return to_double(parse_rational(s));
  }
  return v;
}

Json to_json(const Eigen::MatrixXd& m) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
    j.push_back(row);
  }
  return j;
}

Eigen::MatrixXd real_matrix_from_json(const Json& j) {
  const Json& rows = as_array(j, "matrix");
  if (rows.empty()) return Eigen::MatrixXd(0, 0);
  const size_t cols = as_array(rows.front(), "matrix row").size();
  Eigen::MatrixXd m(rows.size(), cols);
  for (size_t i = 0; i < rows.size(); ++i) {
    if (as_array(rows[i], "matrix row").size() != cols) throw ParseError("ragged matrix");
    for (size_t k = 0; k < cols; ++k) m(i, k) = double_from_json(rows[i][k]);
  }
  return m;
}

Json parse_document(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

std::string document_kind(const Json& doc) {
  const std::string kind = as_string(field(doc, "kind"), "kind");
  const int version = as_int(field(doc, "schema_version"), "schema_version");
  if (version != kSchemaVersion) {
    throw ParseError("unsupported schema_version " + std::to_string(version) + " for '" + kind + "'");
  }
  return kind;
}

Json plant_document(const PlantSS& plant, const std::optional<StabilizingGains>& gains) {
  Json j = document("plant");
  j["A"] = to_json(plant.a());
  j["B"] = to_json(plant.b());
  j["C"] = to_json(plant.c());
  j["D"] = to_json(plant.d());
  if (gains) {
    j["F"] = to_json(gains->f);
    j["L"] = to_json(gains->l);
  }
  return j;
}

PlantSS plant_from_json(const Json& j) {
  require_kind(j, "plant");
  QMatrix a = qmatrix_from_json(field(j, "A"));
  QMatrix b = qmatrix_from_json(field(j, "B"));
  if (!j.contains("C") && !j.contains("D")) {
    return with_parse_context("plant", [&] { return PlantSS::state_feedback(a, b); });
  }
  QMatrix c = qmatrix_from_json(field(j, "C"));
  QMatrix d = qmatrix_from_json(field(j, "D"));
  return with_parse_context("plant", [&] { return PlantSS(a, b, c, d); });
}

std::optional<StabilizingGains> gains_from_json(const Json& j) {
  if (!j.contains("F") && !j.contains("L")) return std::nullopt;
  return StabilizingGains{qmatrix_from_json(field(j, "F")), qmatrix_from_json(field(j, "L"))};
}

Json realization_document(const Realization& r) {
  Json j = document("realization");
  j["space"] = to_json(r.space());
  j["R"] = to_json(r.r());
  Json zeros = Json::array();
  for (const auto& z : r.structural_zeros()) zeros.push_back({z.row, z.col});
  j["structural_zeros"] = zeros;
  return j;
}

Realization realization_from_document(const Json& doc) {
  require_kind(doc, "realization");
  SignalSpace space = signal_space_from_json(field(doc, "space"));
  TFMatrix r = tfmatrix_from_json(field(doc, "R"));
  std::vector<BlockPair> zeros;
  if (doc.contains("structural_zeros")) {
    for (const Json& z : array_field(doc, "structural_zeros")) {
      if (!z.is_array() || z.size() != 2) throw ParseError("structural zero must be a [row, col] pair");
      zeros.push_back({as_string(z[0], "block name"), as_string(z[1], "block name")});
    }
  }
  return with_parse_context("realization", [&] { return Realization(space, r, zeros); });
}

Json stability_document(const StabilityMatrix& s) {
  Json j = document("stability_matrix");
  j["space"] = to_json(s.space());
  j["S"] = to_json(s.s());
  return j;
}

StabilityMatrix stability_from_document(const Json& doc) {
  require_kind(doc, "stability_matrix");
  SignalSpace space = signal_space_from_json(field(doc, "space"));
  TFMatrix s = tfmatrix_from_json(field(doc, "S"));
  return with_parse_context("stability matrix", [&] { return StabilityMatrix(space, s); });
}

std::string to_string(Parameterization p) {
  switch (p) {
    case Parameterization::kController: return "controller";
    case Parameterization::kYoula: return "youla";
    case Parameterization::kIop: return "iop";
    case Parameterization::kSlpSf: return "slp_sf";
    case Parameterization::kSlpOf: return "slp_of";
    case Parameterization::kMixed1: return "mixed1";
    case Parameterization::kMixed2: return "mixed2";
  }
  return "unknown";
}

Parameterization parse_parameterization(const std::string& text) {
  for (auto p : {Parameterization::kController, Parameterization::kYoula, Parameterization::kIop,
                 Parameterization::kSlpSf, Parameterization::kSlpOf, Parameterization::kMixed1,
                 Parameterization::kMixed2}) {
    if (to_string(p) == text) return p;
  }
  throw std::invalid_argument("unknown parameterization '" + text + "'");
}

const TFMatrix& ParameterBundle::at(const std::string& name) const {
  auto it = blocks.find(name);
  if (it == blocks.end()) throw ParseError(to_string(kind) + " bundle is missing block '" + name + "'");
  return it->second;
}

ParameterBundle make_bundle(const PlantSS& plant, const TFMatrix& controller) {
  return {Parameterization::kController, plant, {{"K", controller}}, std::nullopt};
}

ParameterBundle make_bundle(const PlantSS& plant, const StabilizingGains& gains, const YoulaParam& p) {
  return {Parameterization::kYoula, plant, {{"Q", p.q()}}, gains};
}

ParameterBundle make_bundle(const PlantSS& plant, const IopParam& p) {
  return {Parameterization::kIop,
          plant,
          {{"G", p.g()}, {"Y", p.y()}, {"W", p.w()}, {"U", p.u()}, {"Z", p.z()}},
          std::nullopt};
}

ParameterBundle make_bundle(const PlantSS& plant, const SlpStateFeedback& p) {
  return {Parameterization::kSlpSf, plant, {{"Phi_x", p.phi_x()}, {"Phi_u", p.phi_u()}}, std::nullopt};
}

ParameterBundle make_bundle(const PlantSS& plant, const SlpOutputFeedback& p) {
  return {Parameterization::kSlpOf,
          plant,
          {{"Phi_xx", p.phi_xx()}, {"Phi_ux", p.phi_ux()}, {"Phi_xy", p.phi_xy()}, {"Phi_uy", p.phi_uy()}},
          std::nullopt};
}

ParameterBundle make_bundle(const PlantSS& plant, const MixedParam1& p) {
  return {Parameterization::kMixed1,
          plant,
          {{"Phi_yx", p.phi_yx()}, {"Phi_ux", p.phi_ux()}, {"Phi_yy", p.phi_yy()}, {"Phi_uy", p.phi_uy()}},
          std::nullopt};
}

ParameterBundle make_bundle(const PlantSS& plant, const MixedParam2& p) {
  return {Parameterization::kMixed2,
          plant,
          {{"Phi_xy", p.phi_xy()}, {"Phi_uy", p.phi_uy()}, {"Phi_xu", p.phi_xu()}, {"Phi_uu", p.phi_uu()}},
          std::nullopt};
}

Json bundle_document(const ParameterBundle& b) {
  Json j = document("parameter_bundle");
  j["parameterization"] = to_string(b.kind);
  j["plant"] = plant_document(b.plant);
  j["blocks"] = blocks_json(b.blocks);
  if (b.gains) j["gains"] = {{"F", to_json(b.gains->f)}, {"L", to_json(b.gains->l)}};
  return j;
}

ParameterBundle bundle_from_document(const Json& doc) {
  require_kind(doc, "parameter_bundle");
  const Parameterization kind = with_parse_context(
      "parameter bundle", [&] { return parse_parameterization(as_string(field(doc, "parameterization"), "parameterization")); });
  ParameterBundle b{kind, plant_from_json(field(doc, "plant")), {}, std::nullopt};
  const Json& blocks = field(doc, "blocks");
  if (!blocks.is_object()) throw ParseError("'blocks' must be an object");
  for (const auto& [name, m] : blocks.items()) b.blocks.emplace(name, tfmatrix_from_json(m));
  if (doc.contains("gains")) b.gains = gains_from_json(field(doc, "gains"));
  return b;
}

Json factors_document(const PlantSS& plant, const StabilizingGains& gains, const CoprimeFactors& f) {
  Json j = document("coprime_factors");
  j["plant"] = plant_document(plant);
  j["gains"] = {{"F", to_json(gains.f)}, {"L", to_json(gains.l)}};
  j["blocks"] = blocks_json({{"Ml", f.ml()},
                             {"Nl", f.nl()},
                             {"Vl", f.vl()},
                             {"Ul", f.ul()},
                             {"Ur", f.ur()},
                             {"Nr", f.nr()},
                             {"Vr", f.vr()},
                             {"Mr", f.mr()}});
  return j;
}

Json to_json(const FirPhi& f) {
  Json taps = Json::array();
  for (const auto& t : f.taps()) taps.push_back(to_json(t));
  return {{"horizon", f.horizon()}, {"taps", taps}};
}

FirPhi fir_from_json(const Json& j) {
  std::vector<QMatrix> taps;
  for (const Json& t : array_field(j, "taps")) taps.push_back(qmatrix_from_json(t));
  if (j.contains("horizon") && as_int(field(j, "horizon"), "horizon") != static_cast<int>(taps.size())) {
    throw ParseError("FIR horizon does not match the number of taps");
  }
  return with_parse_context("FIR response", [&] { return FirPhi(std::move(taps)); });
}

Json fir_document(const PlantSS& plant, const FirSlp& phi) {
  Json j = document("fir_slp");
  j["plant"] = plant_document(plant);
  j["phi_x"] = to_json(phi.phi_x);
  j["phi_u"] = to_json(phi.phi_u);
  return j;
}

Json variant_document(const PlantSS& plant, const RealizationVariant& v) {
  Json j = document("realization_variant");
  j["variant"] = to_string(v.kind);
  j["plant"] = plant_document(plant);
  j["phi_x"] = to_json(v.phi_x);
  j["phi_u"] = to_json(v.phi_u);
  if (v.kind == VariantKind::kDesignSeparation) {
    j["pc"] = to_json(v.pc);
    j["mc"] = to_json(v.mc);
  }
  return j;
}

VariantJob variant_from_document(const Json& doc, std::optional<VariantKind> kind) {
  const std::string doc_kind = document_kind(doc);
  if (doc_kind != "realization_variant" && doc_kind != "fir_slp") {
    throw ParseError("expected a 'realization_variant' or 'fir_slp' document, got '" + doc_kind + "'");
  }
  PlantSS plant = plant_from_json(field(doc, "plant"));
  FirSlp phi{fir_from_json(field(doc, "phi_x")), fir_from_json(field(doc, "phi_u"))};
  if (doc_kind == "realization_variant") {
    const VariantKind declared = with_parse_context(
        "realization variant", [&] { return parse_variant_kind(as_string(field(doc, "variant"), "variant")); });
    if (!kind) kind = declared;
  }
  if (!kind) throw ParseError("a 'fir_slp' document needs an explicit variant");
  switch (*kind) {
    case VariantKind::kOriginal: return {plant, RealizationVariant::original(std::move(phi))};
    case VariantKind::kDeployment: return {plant, RealizationVariant::deployment(std::move(phi))};
    case VariantKind::kDesignSeparation: {
      FirPhi pc = doc.contains("pc") ? fir_from_json(field(doc, "pc")) : phi.phi_x;
      FirPhi mc = doc.contains("mc") ? fir_from_json(field(doc, "mc")) : phi.phi_u;
      return {plant, RealizationVariant::design_separation(std::move(phi), std::move(pc), std::move(mc))};
    }
  }
  throw ParseError("unknown variant");
}

Json synthesis_problem_document(const SynthesisProblem& p) {
  Json j = document("synthesis_problem");
  j["plant"] = plant_document(p.plant);
  j["Qw"] = to_json(p.qw);
  j["Rw"] = to_json(p.rw);
  j["horizon"] = p.horizon;
  return j;
}

SynthesisProblem synthesis_problem_from_document(const Json& doc) {
  require_kind(doc, "synthesis_problem");
  PlantSS plant = plant_from_json(field(doc, "plant"));
  QMatrix qw = doc.contains("Qw") ? qmatrix_from_json(field(doc, "Qw")) : QMatrix::identity(plant.num_states());
  QMatrix rw = doc.contains("Rw") ? qmatrix_from_json(field(doc, "Rw")) : QMatrix::identity(plant.num_inputs());
  const int horizon = doc.contains("horizon") ? as_int(field(doc, "horizon"), "horizon") : 0;
  return {std::move(plant), std::move(qw), std::move(rw), horizon};
}

Json to_json(const std::map<std::string, SignalTrace>& traces) {
  Json j = Json::object();
  for (const auto& [name, trace] : traces) {
    Json samples = Json::array();
    for (const auto& v : trace) {
      Json sample = Json::array();
      for (Eigen::Index i = 0; i < v.size(); ++i) sample.push_back(to_json(v(i)));
      samples.push_back(sample);
    }
    j[name] = samples;
  }
  return j;
}

std::map<std::string, SignalTrace> traces_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("signal traces must be an object");
  std::map<std::string, SignalTrace> out;
  for (const auto& [name, samples] : j.items()) {
    SignalTrace trace;
    for (const Json& s : as_array(samples, "signal trace")) {
      const Json& entries = as_array(s, "sample");
      Eigen::VectorXd v(entries.size());
      for (size_t i = 0; i < entries.size(); ++i) v(i) = double_from_json(entries[i]);
      trace.push_back(std::move(v));
    }
    out.emplace(name, std::move(trace));
  }
  return out;
}

Json trace_document(const SimTrace& trace) {
  Json j = document("sim_trace");
  j["horizon"] = trace.horizon;
  j["signals"] = to_json(trace.signals);
  j["disturbance"] = to_json(trace.disturbance);
  return j;
}

Json to_json(const ConditionReport& r) {
  Json findings = Json::array();
  for (const auto& f : r.findings) {
    findings.push_back({{"kind", to_string(f.kind)},
                        {"row_block", f.row_block},
                        {"col_block", f.col_block},
                        {"row", f.row},
                        {"col", f.col}});
  }
  return {{"pass", r.pass}, {"findings", findings}};
}

Json verify_report(const ConditionReport& conditions, bool lemma_holds) {
  Json j = document("report");
  j["command"] = "verify";
  j["pass"] = conditions.pass && lemma_holds;
  j["lemma"] = lemma_holds;
  j["conditions"] = to_json(conditions);
  return j;
}

Json certification_report(const CertificationReport& r) {
  Json j = document("report");
  j["command"] = "certify";
  j["variant"] = to_string(r.kind);
  j["pass"] = r.pass;
  j["conditions"] = to_json(r.conditions);
  if (r.a_schur_stable) j["a_schur_stable"] = *r.a_schur_stable;
  if (r.sufficient_condition) j["sufficient_condition"] = *r.sufficient_condition;
  if (r.li_constraint) j["li_constraint"] = *r.li_constraint;
  j["stability"] = stability_document(r.stability);
  return j;
}

Json impulse_report(const ImpulseReport& r) {
  Json j = document("report");
  j["command"] = "simulate";
  j["pass"] = r.pass;
  j["max_deviation"] = to_json(r.max_deviation);
  j["tol"] = to_json(r.tol);
  j["horizon"] = r.horizon;
  Json channels = Json::array();
  for (const auto& c : r.channels) {
    channels.push_back({{"signal", c.signal},
                        {"index", c.index},
                        {"max_deviation", to_json(c.max_deviation)},
                        {"worst_lag", c.worst_lag},
                        {"worst_signal", c.worst_signal}});
  }
  j["channels"] = channels;
  return j;
}

Json synthesis_report(const SynthesisResult& r) {
  Json j = document("report");
  j["command"] = "synthesize";
  j["pass"] = true;
  j["horizon"] = r.phi.phi_x.horizon();
  j["float_residual"] = to_json(r.float_residual);
  j["cost"] = to_json(r.cost);
  return j;
}

Json simple_report(const std::string& command, bool pass, const std::string& message) {
  Json j = document("report");
  j["command"] = command;
  j["pass"] = pass;
  j["message"] = message;
  return j;
}

}  // namespace rscalc
