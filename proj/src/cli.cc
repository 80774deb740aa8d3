#include "rscalc/cli.h"

#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "rscalc/error.h"

namespace rscalc {

namespace {

constexpr int kDefaultSimulationHorizon = 50;
constexpr double kDefaultImpulseTolerance = 1e-9;

const char* pass_text(bool pass) { return pass ? "PASS" : "FAIL"; }

bool is_state_feedback(const PlantSS& plant) {
  return plant.num_outputs() == plant.num_states() && plant.c() == QMatrix::identity(plant.num_states()) &&
         plant.d().is_zero();
}

// A controller measuring x; a y-measuring controller of a plant with C = I,
// D = O is relabeled.
TFMatrix state_measuring(const TFMatrix& k, const PlantSS& plant) {
  if (k.cols() == plant.state_space()) return k;
  if (k.cols() == plant.output_space() && is_state_feedback(plant)) {
    return k.relabeled(k.rows(), plant.state_space());
  }
  throw ConstraintError("controller must measure the state; the plant is not state feedback (C = I, D = O)");
}

TFMatrix output_measuring(const TFMatrix& k, const PlantSS& plant) {
  if (k.cols() == plant.output_space()) return k;
  if (k.cols() == plant.state_space() && is_state_feedback(plant)) {
    return k.relabeled(k.rows(), plant.output_space());
  }
  throw ConstraintError("controller must measure the output y");
}

StabilizingGains require_gains(const ParameterBundle& b) {
  if (!b.gains) throw ParseError("youla bundle needs 'gains' {F, L}");
  return *b.gains;
}

TFMatrix controller_of(const ParameterBundle& b, double tol) {
  const PlantSS& p = b.plant;
  switch (b.kind) {
    case Parameterization::kController:
      return b.at("K");
    case Parameterization::kYoula: {
      const StabilizingGains g = require_gains(b);
      return youla_to_controller(coprime_factorize(p, g.f, g.l, tol), YoulaParam(b.at("Q"), tol));
    }
    case Parameterization::kIop:
      return iop_to_controller(IopParam(b.at("G"), b.at("Y"), b.at("W"), b.at("U"), b.at("Z"), tol));
    case Parameterization::kSlpSf:
      return slp_sf_to_controller(SlpStateFeedback(p, b.at("Phi_x"), b.at("Phi_u"), tol));
    case Parameterization::kSlpOf:
      return slp_of_to_controller(
          SlpOutputFeedback(p, b.at("Phi_xx"), b.at("Phi_ux"), b.at("Phi_xy"), b.at("Phi_uy"), tol), p.d());
    case Parameterization::kMixed1:
      return mixed1_to_controller(MixedParam1(p, b.at("Phi_yx"), b.at("Phi_ux"), b.at("Phi_yy"), b.at("Phi_uy"), tol));
    case Parameterization::kMixed2:
      return mixed2_to_controller(MixedParam2(p, b.at("Phi_xy"), b.at("Phi_uy"), b.at("Phi_xu"), b.at("Phi_uu"), tol));
  }
  throw ParseError("unknown parameterization");
}

ParameterBundle bundle_from_controller(const PlantSS& p, const TFMatrix& k, Parameterization to,
                                       const std::optional<StabilizingGains>& gains, double tol) {
  switch (to) {
    case Parameterization::kController:
      return make_bundle(p, k);
    case Parameterization::kYoula: {
      const StabilizingGains g = gains ? *gains : lqr_stabilizing_gains(p);
      return make_bundle(p, g, controller_to_youla(coprime_factorize(p, g.f, g.l, tol), output_measuring(k, p), tol));
    }
    case Parameterization::kIop:
      if (k.cols() == p.state_space()) return make_bundle(p, iop_from_controller(p.state_transfer(), k, tol));
      return make_bundle(p, iop_from_controller(p.transfer(), k, tol));
    case Parameterization::kSlpSf:
      return make_bundle(p, slp_sf_from_controller(p, state_measuring(k, p), tol));
    case Parameterization::kSlpOf:
      return make_bundle(p, slp_of_from_controller(p, output_measuring(k, p), tol));
    case Parameterization::kMixed1:
      return make_bundle(p, mixed1_from_controller(p, output_measuring(k, p), tol));
    case Parameterization::kMixed2:
      return make_bundle(p, mixed2_from_controller(p, output_measuring(k, p), tol));
  }
  throw ParseError("unknown parameterization");
}

JobResult finished(bool pass, Json report, std::optional<Json> output, std::string text) {
  return {pass ? kExitPass : kExitCheckFailed, std::move(report), std::move(output), std::move(text)};
}

JobResult run_verify(const JobSpec& job, const Json& input, double tol) {
  const Realization r = realization_from_document(input);
  const StabilityMatrix s = stability_from_realization(r);
  const bool lemma = verify_lemma(r, s);
  const ConditionReport conditions = check_conditions(r, s, tol);
  const bool pass = conditions.pass && lemma;
  std::ostringstream text;
  text << job.command << ": " << pass_text(pass) << "\nlemma: " << pass_text(lemma) << "\n"
       << describe(conditions) << "\n";
  return finished(pass, verify_report(conditions, lemma), stability_document(s), text.str());
}

JobResult run_convert(const JobSpec& job, const Json& input, double tol) {
  if (!job.to) throw ParseError("convert needs --to <parameterization>");
  const Parameterization to = parse_parameterization(*job.to);
  const ParameterBundle in = bundle_from_document(input);
  const ParameterBundle out = convert_bundle(in, to, tol);
  const std::string message = to_string(in.kind) + " -> " + to_string(out.kind);
  return finished(true, simple_report(job.command, true, message), bundle_document(out),
                  job.command + ": PASS\n" + message + "\n");
}

JobResult run_synthesize(const JobSpec& job, const Json& input) {
  const std::string kind = document_kind(input);
  SynthesisProblem problem = kind == "plant"
                                 ? SynthesisProblem{plant_from_json(input), QMatrix(), QMatrix(), 0}
                                 : synthesis_problem_from_document(input);
  if (kind == "plant") {
    problem.qw = QMatrix::identity(problem.plant.num_states());
    problem.rw = QMatrix::identity(problem.plant.num_inputs());
  }
  if (job.horizon) problem.horizon = *job.horizon;
  if (problem.horizon <= 0) throw ParseError("synthesize needs a positive horizon (--horizon)");
  const SynthesisResult res = synthesize_sf_h2(problem.plant, problem.qw, problem.rw, problem.horizon);
  std::ostringstream text;
  text << job.command << ": PASS\nhorizon " << problem.horizon << ", cost " << res.cost << ", KKT residual "
       << res.float_residual << "\n";
  return finished(true, synthesis_report(res), fir_document(problem.plant, res.phi), text.str());
}

std::optional<VariantKind> requested_variant(const JobSpec& job) {
  if (!job.variant) return std::nullopt;
  return parse_variant_kind(*job.variant);
}

JobResult run_certify(const JobSpec& job, const Json& input, double tol) {
  const VariantJob v = variant_from_document(input, requested_variant(job));
  const CertificationReport rep = certify_realization(v.variant, v.plant, tol);
  return finished(rep.pass, certification_report(rep), realization_document(build_realization(v.variant, v.plant)),
                  job.command + ": " + pass_text(rep.pass) + "\n" + describe(rep) + "\n");
}

JobResult run_simulate(const JobSpec& job, const Json& input, double tol) {
  const VariantJob v = variant_from_document(input, requested_variant(job));
  const int horizon = job.horizon.value_or(kDefaultSimulationHorizon);
  if (horizon < 0) throw ParseError("horizon must be nonnegative");
  DisturbanceSchedule d;
  if (input.contains("disturbance")) {
    d = traces_from_json(input.at("disturbance"));
  } else {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(v.plant.num_states());
    e(0) = 1.0;
    d[signal::kState] = {e};
  }
  const SimTrace trace = simulate(v.variant, v.plant, d, horizon);
  const ImpulseReport rep = impulse_match(v.variant, v.plant, horizon, tol);
  std::ostringstream text;
  text << job.command << ": " << pass_text(rep.pass) << "\nimpulse match over horizon " << horizon
       << ", max deviation " << rep.max_deviation << " (tol " << tol << ")\n";
  return finished(rep.pass, impulse_report(rep), trace_document(trace), text.str());
}

JobResult run_factorize(const JobSpec& job, const Json& input, double tol) {
  const PlantSS plant = plant_from_json(input);
  const std::optional<StabilizingGains> given = gains_from_json(input);
  const StabilizingGains gains = given ? *given : lqr_stabilizing_gains(plant);
  const CoprimeFactors f = coprime_factorize(plant, gains.f, gains.l, tol);
  return finished(true, simple_report(job.command, true, "doubly coprime factors satisfy the Bezout identity"),
                  factors_document(plant, gains, f), job.command + ": PASS\n");
}

JobResult dispatch(const JobSpec& job, const Json& input) {
  const std::string& c = job.command;
  if (c == "verify") return run_verify(job, input, job.tol.value_or(kDefaultPoleTolerance));
  if (c == "convert") return run_convert(job, input, job.tol.value_or(kDefaultPoleTolerance));
  if (c == "synthesize") return run_synthesize(job, input);
  if (c == "certify") return run_certify(job, input, job.tol.value_or(kDefaultPoleTolerance));
  if (c == "simulate") return run_simulate(job, input, job.tol.value_or(kDefaultImpulseTolerance));
  if (c == "factorize") return run_factorize(job, input, job.tol.value_or(kDefaultPoleTolerance));
  throw ParseError("unknown command '" + c + "'");
}

JobResult failure(const JobSpec& job, int code, const std::string& category, const std::string& message) {
  Json report = simple_report(job.command, false, message);
  report["error"] = category;
  return {code, std::move(report), std::nullopt, job.command + ": FAIL (" + category + ")\n" + message + "\n"};
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw ParseError("failed writing '" + path + "'");
}

}  // namespace

ParameterBundle convert_bundle(const ParameterBundle& in, Parameterization to, double tol) {
  if (to == Parameterization::kIop) {
    switch (in.kind) {
      case Parameterization::kYoula: {
        const StabilizingGains g = require_gains(in);
        return make_bundle(in.plant,
                           youla_to_iop(coprime_factorize(in.plant, g.f, g.l, tol), YoulaParam(in.at("Q"), tol), tol));
      }
      case Parameterization::kSlpSf:
        return make_bundle(in.plant,
                           slp_sf_to_iop(SlpStateFeedback(in.plant, in.at("Phi_x"), in.at("Phi_u"), tol), in.plant, tol));
      case Parameterization::kSlpOf:
        return make_bundle(in.plant, slp_of_to_iop(SlpOutputFeedback(in.plant, in.at("Phi_xx"), in.at("Phi_ux"),
                                                                     in.at("Phi_xy"), in.at("Phi_uy"), tol),
                                                   in.plant, tol));
      default:
        break;
    }
  }
  return bundle_from_controller(in.plant, controller_of(in, tol), to, in.gains, tol);
}

JobResult run_document(const JobSpec& job, const Json& input) {
  try {
    return dispatch(job, input);
  } catch (const SingularError& e) {
    return failure(job, kExitSingular, "singular", e.what());
  } catch (const StabilityError& e) {
    return failure(job, kExitCheckFailed, "stability", e.what());
  } catch (const ConstraintError& e) {
    return failure(job, kExitCheckFailed, "constraint", e.what());
  } catch (const InfeasibleError& e) {
    return failure(job, kExitCheckFailed, "infeasible", e.what());
  } catch (const ConvergenceError& e) {
    return failure(job, kExitCheckFailed, "convergence", e.what());
  } catch (const ParseError& e) {
    return failure(job, kExitParseError, "parse", e.what());
  } catch (const std::invalid_argument& e) {
    return failure(job, kExitParseError, "parse", e.what());
  } catch (const Json::exception& e) {
    return failure(job, kExitParseError, "parse", e.what());
  }
}

std::string document_text(const Json& doc) { return doc.dump(2) + "\n"; }

JobResult run(const JobSpec& job) {
  JobResult result;
  std::ifstream in(job.input, std::ios::binary);
  if (!in) {
    result = failure(job, kExitParseError, "parse", "cannot read input '" + job.input + "'");
  } else {
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
      result = run_document(job, parse_document(buf.str()));
    } catch (const ParseError& e) {
      result = failure(job, kExitParseError, "parse", e.what());
    }
  }
  try {
    if (!job.out.empty() && result.output) write_file(job.out, document_text(*result.output));
    if (!job.report.empty()) write_file(job.report, document_text(result.report));
  } catch (const ParseError& e) {
    return failure(job, kExitParseError, "io", e.what());
  }
  return result;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact realization and stability calculus for linear feedback loops", "rscalc"};
  app.require_subcommand(1);
  JobSpec job;
  double tol = 0.0;
  int horizon = 0;
  std::string variant;
  std::string to;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"verify", "check the realization-stability conditions of a realization document"},
      {"convert", "convert a parameter bundle to another parameterization"},
      {"synthesize", "FIR H2 state-feedback synthesis"},
      {"certify", "certify a state-feedback SLS realization variant"},
      {"simulate", "simulate a realization variant and cross-check impulse responses"},
      {"factorize", "doubly coprime factorization of a plant"},
  };
  for (const auto& [name, description] : commands) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("input", job.input, "input document")->required();
    sub->add_option("--tol", tol, "tolerance");
    sub->add_option("--horizon", horizon, "horizon");
    sub->add_option("--variant", variant, "original_sls, deployment or design_separation");
    sub->add_option("--to", to, "target parameterization");
    sub->add_option("--out", job.out, "output document path");
    sub->add_option("--report", job.report, "structured report path");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitParseError;
  }
  const CLI::App* sub = app.get_subcommands().front();
  job.command = sub->get_name();
  if (sub->count("--tol") > 0) job.tol = tol;
  if (sub->count("--horizon") > 0) job.horizon = horizon;
  if (sub->count("--variant") > 0) job.variant = variant;
  if (sub->count("--to") > 0) job.to = to;
  const JobResult result = run(job);
  (result.exit_code == kExitPass ? out : err) << result.text;
  return result.exit_code;
}

}  // namespace rscalc
