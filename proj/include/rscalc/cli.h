#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "rscalc/serialization.h"

namespace rscalc {

/// Exit statuses of the command-line front end.
enum ExitCode : int {
  kExitPass = 0,
  kExitCheckFailed = 1,
  kExitParseError = 2,
  kExitSingular = 3,
};

/// One invocation. `tol` is the pole tolerance for verify, convert, certify
/// and factorize, and the impulse-match tolerance for simulate.
struct JobSpec {
  /// verify, convert, synthesize, certify, simulate or factorize.
  std::string command;
  std::string input;
  std::optional<double> tol;
  std::optional<int> horizon;
  std::optional<std::string> variant;
  std::optional<std::string> to;
  /// Paths for the produced document and the structured report; empty to skip.
  std::string out;
  std::string report;
};

struct JobResult {
  int exit_code = kExitPass;
  /// Structured report (kind "report").
  Json report;
  /// Produced document, if the command got that far.
  std::optional<Json> output;
  /// Human-readable summary.
  std::string text;
};

/// Runs a job on an already parsed input document. Never throws for
/// library failures; they are mapped to exit codes and reported.
JobResult run_document(const JobSpec& job, const Json& input);

/// Reads job.input, runs it and writes the out/report files.
JobResult run(const JobSpec& job);

/// Serialized form written to --out and --report files.
std::string document_text(const Json& doc);

/// Converts a parameter bundle to another parameterization, going through
/// the direct maps into the IOP bundle where they exist and through the
/// controller otherwise. Youla targets use the bundle's gains when present,
/// else lqr_stabilizing_gains.
ParameterBundle convert_bundle(const ParameterBundle& in, Parameterization to, double tol);

/// Parses argv with CLI11 and runs the job; returns the exit code.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rscalc
