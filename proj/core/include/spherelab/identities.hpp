#pragma once

// Declarative registry of the operator identities obeyed by the sphere
// operators. Each family is data: a name, a citation describing the relation,
// and one builder per precision returning (lhs, rhs) pairs. The CLI and the
// test suite run the same registry.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spherelab/operators.hpp"

namespace spherelab {

template <class Real>
struct IdentitySide {
  std::string component;
  BasicLinOp<Real> lhs;
  BasicLinOp<Real> rhs;
};

enum class CheckKind {
  equality,     ///< pass iff deviation <= tolerance
  lower_bound,  ///< pass iff deviation > tolerance (negative control)
};

struct IdentityCheck {
  std::string name;  ///< family name; reports are named "<name>/<component>"
  std::string citation;
  std::vector<std::string> components;
  CheckKind kind = CheckKind::equality;
  Precision precision = Precision::standard;
  double tolerance = 1e-10;

  std::function<std::vector<IdentitySide<double>>(const OperatorSet&)> build;
  std::function<std::vector<IdentitySide<Quad>>(const ExtOperatorSet&)> build_extended;

  std::size_t size() const noexcept { return components.size(); }
};

enum class CheckStatus { pass, fail, inconclusive };

const char* to_string(CheckStatus s);
const char* to_string(CheckKind k);

struct IdentityReport {
  std::string name;
  std::string family;
  std::string citation;
  CheckKind kind = CheckKind::equality;
  Precision precision = Precision::standard;
  int n_max = 0;
  double eta = 0.0;
  Sector sector = Sector::integer_j;
  int width = 0;  ///< guard width including any extra guard
  std::size_t guarded_dim = 0;
  double tolerance = 0.0;
  double relative_deviation = 0.0;    ///< NaN when inconclusive
  double all_sector_deviation = 0.0;  ///< same guard, both parities; NaN when empty
  CheckStatus status = CheckStatus::inconclusive;
  bool pass = false;
  std::string note;
};

struct SubspacePolicy {
  Sector sector = Sector::integer_j;
  int extra_guard = 0;
  /// Restrict every check to n <= max_total, so runs at different n_max
  /// compare the same block.
  std::optional<int> max_total;
  /// Overrides the per-family tolerance of equality checks.
  std::optional<double> tolerance;
};

/// The twelve identity families plus the P tangency negative control.
std::vector<IdentityCheck> standard_suite();

/// Evaluates every check. Extended-precision checks use `extended` when given,
/// otherwise an extended operator set is built once on demand. Reports are
/// sorted by name; the same inputs give bit-identical reports.
std::vector<IdentityReport> run(const std::vector<IdentityCheck>& checks, const OperatorSet& set,
                                const SubspacePolicy& policy = {},
                                const ExtOperatorSet* extended = nullptr);

/// Summed scalar checks.
std::size_t scalar_count(const std::vector<IdentityCheck>& checks);

}  // namespace spherelab
