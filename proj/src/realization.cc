#include "rscalc/realization.h"

#include <sstream>

#include "rscalc/error.h"

namespace rscalc {

namespace {

void require_square_over(const TFMatrix& m, const SignalSpace& space, const char* what) {
  if (m.rows() != space || m.cols() != space) {
    throw std::invalid_argument(std::string(what) + " must be square over " + to_string(space));
  }
}

}  // namespace

Realization::Realization(SignalSpace space, TFMatrix r, std::vector<BlockPair> structural_zeros)
    : space_(std::move(space)), r_(std::move(r)), structural_zeros_(std::move(structural_zeros)) {
  require_square_over(r_, space_, "realization matrix");
  for (const auto& z : structural_zeros_) {
    if (!r_.block(z.row, z.col).is_zero()) {
      throw std::invalid_argument("structural zero block (" + z.row + ", " + z.col + ") is not zero");
    }
  }
}

StabilityMatrix::StabilityMatrix(SignalSpace space, TFMatrix s) : space_(std::move(space)), s_(std::move(s)) {
  require_square_over(s_, space_, "stability matrix");
}

Transformation::Transformation(TFMatrix t, TFMatrix t_inv) : t_(std::move(t)), t_inv_(std::move(t_inv)) {
  if (!t_.is_square() || t_.rows() != t_.cols()) {
    throw std::invalid_argument("transformation must be square over one signal space");
  }
  const TFMatrix eye = TFMatrix::identity(t_.rows());
  if (t_ * t_inv_ != eye || t_inv_ * t_ != eye) {
    throw std::invalid_argument("transformation inverse does not match");
  }
}

Transformation Transformation::from(const TFMatrix& t) { return Transformation(t, t.inverse()); }

StabilityMatrix stability_from_realization(const Realization& r) {
  const TFMatrix i_minus_r = TFMatrix::identity(r.space()) - r.r();
  try {
    return StabilityMatrix(r.space(), i_minus_r.inverse());
  } catch (const SingularError&) {
    throw SingularError("I - R is singular: no stability matrix exists");
  }
}

bool verify_lemma(const Realization& r, const StabilityMatrix& s) {
  if (r.space() != s.space()) throw std::invalid_argument("verify_lemma: signal spaces differ");
  const TFMatrix eye = TFMatrix::identity(r.space());
  const TFMatrix i_minus_r = eye - r.r();
  return i_minus_r * s.s() == eye && s.s() * i_minus_r == eye;
}

std::string to_string(FindingKind kind) {
  switch (kind) {
    case FindingKind::kImproperRealizationBlock:
      return "improper_realization_block";
    case FindingKind::kImproperStabilityEntry:
      return "improper_stability_entry";
    case FindingKind::kUnstableStabilityEntry:
      return "unstable_stability_entry";
  }
  return "unknown";
}

ConditionReport check_conditions(const Realization& r, const StabilityMatrix& s, double tol) {
  if (!verify_lemma(r, s)) {
    throw std::invalid_argument("check_conditions: (R, S) do not satisfy (I - R) S = S (I - R) = I");
  }
  ConditionReport report;
  const auto& blocks = r.space().blocks();
  for (const auto& a : blocks) {
    for (const auto& b : blocks) {
      if (a.name == b.name) continue;
      if (!classify(r.r().block(a.name, b.name)).all_proper) {
        report.findings.push_back({FindingKind::kImproperRealizationBlock, a.name, b.name});
      }
    }
  }
  for (const auto& a : blocks) {
    for (const auto& b : blocks) {
      const TFMatrix sab = s.s().block(a.name, b.name);
      for (int i = 0; i < sab.num_rows(); ++i) {
        for (int j = 0; j < sab.num_cols(); ++j) {
          const RatFun& e = sab(i, j);
          if (!is_proper(e)) {
            report.findings.push_back({FindingKind::kImproperStabilityEntry, a.name, b.name, i, j});
          } else if (!is_stable(e, tol)) {
            report.findings.push_back({FindingKind::kUnstableStabilityEntry, a.name, b.name, i, j});
          }
        }
      }
    }
  }
  report.pass = report.findings.empty();
  return report;
}

std::string describe(const ConditionReport& report) {
  if (report.pass) return "all conditions hold";
  std::ostringstream os;
  for (size_t k = 0; k < report.findings.size(); ++k) {
    const Finding& f = report.findings[k];
    if (k) os << "; ";
    os << to_string(f.kind) << " at (" << f.row_block << ", " << f.col_block << ")";
    if (f.row >= 0) os << "[" << f.row << "," << f.col << "]";
  }
  return os.str();
}

TFMatrix dependency_complete(const Realization& r, const std::map<std::string, TFMatrix>& partial_columns,
                             const std::string& target) {
  const SignalSpace& space = r.space();
  if (!r.r().block(target, target).is_zero()) {
    throw std::invalid_argument("dependency_complete: diagonal block R_" + target + target + " is not zero");
  }
  TFMatrix column = TFMatrix::embed(space, target);
  for (const auto& b : space.blocks()) {
    if (b.name == target) continue;
    auto it = partial_columns.find(b.name);
    if (it == partial_columns.end()) {
      throw std::invalid_argument("dependency_complete: missing column S_{:," + b.name + "}");
    }
    const TFMatrix& sb = it->second;
    if (sb.rows() != space || sb.num_cols() != b.dim) {
      throw std::invalid_argument("dependency_complete: column S_{:," + b.name + "} has the wrong shape");
    }
    const TFMatrix rbt = r.r().block(b.name, target);
    if (rbt.is_zero()) continue;
    column = column + sb.relabeled(space, SignalSpace::single(b.name, b.dim)) * rbt;
  }
  return column;
}

EquivalentSystem transform(const Realization& r, const StabilityMatrix& s, const Transformation& t) {
  if (!verify_lemma(r, s)) throw std::invalid_argument("transform: (R, S) do not satisfy the lemma");
  const TFMatrix eye = TFMatrix::identity(r.space());
  Realization r_eq(r.space(), eye - t.t_inv() * (eye - r.r()));
  StabilityMatrix s_eq(r.space(), s.s() * t.t());
  return {std::move(r_eq), std::move(s_eq)};
}

bool verify_equivalent(const Realization& r1, const Realization& r2, const Transformation& t) {
  if (r1.space() != r2.space()) throw std::invalid_argument("verify_equivalent: signal spaces differ");
  const TFMatrix eye = TFMatrix::identity(r1.space());
  return eye - r2.r() == t.t_inv() * (eye - r1.r());
}

}  // namespace rscalc
