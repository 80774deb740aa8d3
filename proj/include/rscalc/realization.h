#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rscalc/tfmatrix.h"

namespace rscalc {

struct BlockPair {
  std::string row;
  std::string col;
  friend bool operator==(const BlockPair&, const BlockPair&) = default;
};

/// A closed loop eta = R eta + d over a signal space. Every dimension of eta
/// carries its own disturbance channel.
class Realization {
 public:
  /// Throws std::invalid_argument if R is not square over `space` or a
  /// declared structural zero block is not exactly zero.
  Realization(SignalSpace space, TFMatrix r, std::vector<BlockPair> structural_zeros = {});

  const SignalSpace& space() const { return space_; }
  const TFMatrix& r() const { return r_; }
  const std::vector<BlockPair>& structural_zeros() const { return structural_zeros_; }

 private:
  SignalSpace space_;
  TFMatrix r_;
  std::vector<BlockPair> structural_zeros_;
};

/// Map eta = S d from the stacked disturbances to the stacked signals.
class StabilityMatrix {
 public:
  StabilityMatrix(SignalSpace space, TFMatrix s);

  const SignalSpace& space() const { return space_; }
  const TFMatrix& s() const { return s_; }

 private:
  SignalSpace space_;
  TFMatrix s_;
};

/// Invertible disturbance change of basis d = T w. Both T and its inverse
/// are kept; the constructor checks they multiply to the identity.
class Transformation {
 public:
  Transformation(TFMatrix t, TFMatrix t_inv);
  /// Inverts T exactly; throws SingularError.
  static Transformation from(const TFMatrix& t);

  const TFMatrix& t() const { return t_; }
  const TFMatrix& t_inv() const { return t_inv_; }
  Transformation inverted() const { return Transformation(t_inv_, t_); }

 private:
  TFMatrix t_;
  TFMatrix t_inv_;
};

/// S = (I - R)^-1. Throws SingularError ("no stability matrix exists").
StabilityMatrix stability_from_realization(const Realization& r);

/// (I - R) S = S (I - R) = I, checked exactly.
bool verify_lemma(const Realization& r, const StabilityMatrix& s);

enum class FindingKind {
  kImproperRealizationBlock,  // off-diagonal R block not proper
  kImproperStabilityEntry,    // S entry not proper
  kUnstableStabilityEntry,    // S entry proper with a pole on or outside the margin
};

std::string to_string(FindingKind kind);

struct Finding {
  FindingKind kind;
  std::string row_block;
  std::string col_block;
  /// Entry indices inside the block; -1 for whole-block findings.
  int row = -1;
  int col = -1;
};

struct ConditionReport {
  bool pass = true;
  std::vector<Finding> findings;
};

/// Off-diagonal blocks of R proper and every entry of S stable proper.
/// Diagonal blocks of R are not constrained.
ConditionReport check_conditions(const Realization& r, const StabilityMatrix& s,
                                 double tol = kDefaultPoleTolerance);

std::string describe(const ConditionReport& report);

/// Raised when a closed loop fails the causality/stability conditions.
class StabilityError : public std::runtime_error {
 public:
  StabilityError(const std::string& what, ConditionReport report)
      : std::runtime_error(what + ": " + describe(report)), report_(std::move(report)) {}
  const ConditionReport& report() const { return report_; }

 private:
  ConditionReport report_;
};

/// Column S_{:,target} from the other columns, valid when R_{target,target}
/// is zero: S_{:,target} = e_target + sum_{b != target} S_{:,b} R_{b,target}.
/// `partial_columns` maps each other block name to its column block S_{:,b}.
TFMatrix dependency_complete(const Realization& r, const std::map<std::string, TFMatrix>& partial_columns,
                             const std::string& target);

struct EquivalentSystem {
  Realization realization;
  StabilityMatrix stability;
};

/// R_eq = I - T^-1 (I - R), S_eq = S T.
EquivalentSystem transform(const Realization& r, const StabilityMatrix& s, const Transformation& t);

/// (I - R2) = T^-1 (I - R1), checked exactly.
bool verify_equivalent(const Realization& r1, const Realization& r2, const Transformation& t);

}  // namespace rscalc
