#pragma once

// Coherent states on the sphere as joint eigenvectors of the commuting
// annihilation operators Z_i, found variationally as the smallest right
// singular vector of the stacked system (Z_i - z_i), restricted to rows inside
// the guard band. The truncated exact eigenstate is a null vector of that
// system, so the residual certifies the result.

#include <array>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "spherelab/operators.hpp"

namespace spherelab {

struct CoherentLabel {
  ComplexVec3 z{};
};

/// Throws InvalidArgument unless z.z = 1 (complex bilinear) to `tolerance`.
void validate(const CoherentLabel& label, double tolerance = 1e-10);

/// Label of the classical phase point (x, p).
CoherentLabel label_of(const ClassicalPhasePoint& pt, double eta);

struct SolveOptions {
  double residual_threshold = 1e-6;
  double tail_threshold = 1e-8;
  double gap_threshold = 1e-10;
  int guard = 2;  ///< rows n <= n_max - guard are imposed; Z has grade (2,2)
  Sector sector = Sector::integer_j;
  std::array<bool, 3> components{true, true, true};
  /// Restrict rows and columns to m = 0 (n1 = n2) states. Only meaningful
  /// with the z component alone, which preserves m.
  bool axial = false;
  /// Diagonal row/column balancing before the SVD.
  bool balance = true;
};

struct CoherentState {
  BasisPtr basis;
  CoherentLabel label;
  Eigen::VectorXcd coeffs;  ///< unit norm, largest entry real positive
  double residual = 0.0;    ///< max_i ||(Z_i - z_i) psi|| over guarded rows
  double tail_mass = 0.0;   ///< weight on the top `guard` bands
  double smallest_singular = 0.0;
  double second_singular = 0.0;
  bool degenerate = false;
  bool residual_warning = false;
  bool tail_warning = false;
  std::size_t unknowns = 0;
  std::size_t equations = 0;

  bool ok() const noexcept { return !degenerate && !residual_warning && !tail_warning; }
};

struct Expectations {
  ComplexVec3 N{}, Pi{}, J{}, Z{};
  std::array<double, 3> var_N{}, var_Pi{};
  std::complex<double> N_dot_N{};
  std::complex<double> tangency{};  ///< <N.Pi + Pi.N>
  double tail_mass = 0.0;           ///< bound on guard-band contamination
};

/// Solves for many labels against one Z.
///
/// The coefficients of the displayed Z that lower n are products of e^{+eta S}
/// factors, while the raising ones come out as differences of such factors
/// and are exponentially small. In double precision their absolute error is
/// ~u e^{eta S}. The eigen-equation weighs them against exponentially
/// decaying amplitudes, which limits a double-built solve to ~1e-6. The
/// solver therefore builds Z with the same construction in extended
/// precision, then rounds each entry to double.
class CoherentSolver {
 public:
  CoherentSolver(BasisPtr basis, double eta);
  explicit CoherentSolver(const ExtOperatorSet& extended);

  const BasisPtr& basis() const noexcept { return basis_; }
  double eta() const noexcept { return eta_; }
  const VecOp& Z() const noexcept { return Z_; }

  /// Throws InvalidArgument for invalid labels or options.
  CoherentState solve(const CoherentLabel& label, const SolveOptions& options = {}) const;

  /// Like the free function, but <Z> uses the rounded extended-precision Z.
  Expectations expectations(const CoherentState& state, const OperatorSet& set) const;

 private:
  BasisPtr basis_;
  double eta_;
  VecOp Z_;
};

/// Convenience: CoherentSolver(set.basis, set.eta).solve(label, options).
CoherentState solve(const OperatorSet& set, const CoherentLabel& label,
                    const SolveOptions& options = {});

/// Expectation values <psi|O|psi>. <Z> is evaluated as z + <psi|(Z - z)|psi>
/// with set.Z.
Expectations expectations(const CoherentState& state, const OperatorSet& set);

/// |<a|b>|.
double overlap(const CoherentState& a, const CoherentState& b);

}  // namespace spherelab
