#pragma once

// Named operators of a particle on the unit sphere, built from Schwinger
// bosons on a truncated Fock basis. Units: hbar = 1, radius a = 1.
//
//   J_k   = a^dag (sigma_k / 2) a                       grade (0,0)
//   S     = sqrt(J^2 + 1/4) = (n+1)/2                   diagonal
//   A     = (1/2(a2a2 - a1a1), -i/2(a2a2 + a1a1), a2a1) grade (0,2)
//   B     = i/2 (A^dag - A)                             grade (2,2)
//   N     = 1/2 (f A + A^dag f),  f = 1/sqrt(S(S+1))    unit direction
//   Pi    = 1/2 (sqrt(S) B 1/sqrt(S) + 1/sqrt(S) B sqrt(S))
//   Pi_sym= 1/2 (J x N - N x J)
//   P     = J x N                                       not Hermitian
//   Z     = e^{eta/2} ([cosh(eta S) - sinh(eta S)/(2S)] N + i sinh(eta S)/S Pi)
//
// Functions of S are always applied with fused_apply in the order written
// above; no construction reorders them.

#include <array>
#include <complex>

#include "spherelab/fock.hpp"

namespace spherelab {

template <class Real>
struct BasicOperatorSet {
  using real_type = Real;

  BasisPtr basis;
  double eta;
  BasicVecOp<Real> J;
  BasicLinOp<Real> S;
  BasicVecOp<Real> A;
  BasicVecOp<Real> B;
  BasicVecOp<Real> N;
  BasicVecOp<Real> Pi;
  BasicVecOp<Real> Pi_sym;
  BasicVecOp<Real> P;
  BasicVecOp<Real> Z;
};

using OperatorSet = BasicOperatorSet<double>;
using ExtOperatorSet = BasicOperatorSet<Quad>;

/// Throws OverflowError when e^{eta (n_max+1)/2} sqrt(dim) leaves the double range.
void check_overflow(const FockBasis& basis, double eta);

template <class Real>
BasicVecOp<Real> angular_momentum(const BasisPtr& basis);

template <class Real>
BasicLinOp<Real> shifted_S(const BasisPtr& basis);

template <class Real>
BasicVecOp<Real> A_vec(const BasisPtr& basis);

template <class Real>
BasicVecOp<Real> B_vec(const BasicVecOp<Real>& A);

template <class Real>
BasicVecOp<Real> direction_N(const BasicVecOp<Real>& A);

template <class Real>
BasicVecOp<Real> momentum_Pi(const BasicVecOp<Real>& B);

template <class Real>
BasicVecOp<Real> momentum_Pi_sym(const BasicVecOp<Real>& J, const BasicVecOp<Real>& N);

template <class Real>
BasicVecOp<Real> nonhermitian_P(const BasicVecOp<Real>& J, const BasicVecOp<Real>& N);

/// Z from N and the S-dressed Pi.
template <class Real>
BasicVecOp<Real> annihilation_Z_general(const BasicVecOp<Real>& N, const BasicVecOp<Real>& Pi,
                                        double eta);

/// Z from N and the non-Hermitian P = J x N, with the [cosh + sinh/(2S)] coefficient.
template <class Real>
BasicVecOp<Real> annihilation_Z_viaP(const BasicVecOp<Real>& N, const BasicVecOp<Real>& P,
                                     double eta);

/// Closed Schwinger form at eta = 1:
///   Z+ = e^{1/2}/2 ( e^S/sqrt(S(S+1)) a2a2 - e^{-S}/sqrt(S(S-1)) a1^dag a1^dag )
///   Z- = e^{1/2}/2 (-e^S/sqrt(S(S+1)) a1a1 + e^{-S}/sqrt(S(S-1)) a2^dag a2^dag )
///   Zz = e^{1/2}/2 ( e^S/sqrt(S(S+1)) a2a1 + e^{-S}/sqrt(S(S-1)) a2^dag a1^dag )
template <class Real>
BasicVecOp<Real> annihilation_Z_closed(const BasisPtr& basis);

/// Coefficient of N in Z: e^{eta/2} (cosh(eta S) - sinh(eta S)/(2S)).
template <class Real>
SFunction<Real> z_alpha(double eta);
/// Coefficient of i Pi in Z: e^{eta/2} sinh(eta S)/S.
template <class Real>
SFunction<Real> z_beta(double eta);

// Convenience overloads that build their inputs from a basis.
template <class Real>
BasicVecOp<Real> direction_N(const BasisPtr& basis) {
  return direction_N(A_vec<Real>(basis));
}
template <class Real>
BasicVecOp<Real> momentum_Pi(const BasisPtr& basis) {
  return momentum_Pi(B_vec(A_vec<Real>(basis)));
}
template <class Real>
BasicVecOp<Real> momentum_Pi_sym(const BasisPtr& basis) {
  return momentum_Pi_sym(angular_momentum<Real>(basis), direction_N<Real>(basis));
}
template <class Real>
BasicVecOp<Real> nonhermitian_P(const BasisPtr& basis) {
  return nonhermitian_P(angular_momentum<Real>(basis), direction_N<Real>(basis));
}
template <class Real>
BasicVecOp<Real> annihilation_Z_general(const BasisPtr& basis, double eta) {
  check_overflow(*basis, eta);
  return annihilation_Z_general(direction_N<Real>(basis), momentum_Pi<Real>(basis), eta);
}
template <class Real>
BasicVecOp<Real> annihilation_Z_viaP(const BasisPtr& basis, double eta) {
  check_overflow(*basis, eta);
  return annihilation_Z_viaP(direction_N<Real>(basis), nonhermitian_P<Real>(basis), eta);
}

/// Builds every operator above. Throws OverflowError for eta outside range,
/// InvalidArgument for eta <= 0.
template <class Real>
BasicOperatorSet<Real> build_operator_set(const BasisPtr& basis, double eta);

struct ClassicalPhasePoint {
  std::array<double, 3> x{};  ///< position, |x| = 1
  std::array<double, 3> p{};  ///< tangent momentum, x.p = 0
};

using ComplexVec3 = std::array<std::complex<double>, 3>;

/// Throws InvalidArgument unless |x|^2 = 1 and x.p = 0 to 1e-12.
void validate(const ClassicalPhasePoint& pt);

/// z = cosh(eta l) x + i sinh(eta l)/l p with l = |x cross p|; the l -> 0
/// limit of sinh(eta l)/l is eta.
ComplexVec3 classical_annihilation(const ClassicalPhasePoint& pt, double eta);

/// Complex bilinear z.z (no conjugation).
std::complex<double> bilinear_dot(const ComplexVec3& u, const ComplexVec3& v);

#define SPHERELAB_OPERATORS_EXTERN(R)                                                  \
  extern template BasicVecOp<R> angular_momentum<R>(const BasisPtr&);                  \
  extern template BasicLinOp<R> shifted_S<R>(const BasisPtr&);                         \
  extern template BasicVecOp<R> A_vec<R>(const BasisPtr&);                             \
  extern template BasicVecOp<R> B_vec<R>(const BasicVecOp<R>&);                        \
  extern template BasicVecOp<R> direction_N<R>(const BasicVecOp<R>&);                  \
  extern template BasicVecOp<R> momentum_Pi<R>(const BasicVecOp<R>&);                  \
  extern template BasicVecOp<R> momentum_Pi_sym<R>(const BasicVecOp<R>&, const BasicVecOp<R>&); \
  extern template BasicVecOp<R> nonhermitian_P<R>(const BasicVecOp<R>&, const BasicVecOp<R>&);  \
  extern template BasicVecOp<R> annihilation_Z_general<R>(const BasicVecOp<R>&, const BasicVecOp<R>&, double); \
  extern template BasicVecOp<R> annihilation_Z_viaP<R>(const BasicVecOp<R>&, const BasicVecOp<R>&, double); \
  extern template BasicVecOp<R> annihilation_Z_closed<R>(const BasisPtr&);             \
  extern template SFunction<R> z_alpha<R>(double);                                     \
  extern template SFunction<R> z_beta<R>(double);                                      \
  extern template BasicOperatorSet<R> build_operator_set<R>(const BasisPtr&, double);

SPHERELAB_OPERATORS_EXTERN(double)
SPHERELAB_OPERATORS_EXTERN(Quad)

#undef SPHERELAB_OPERATORS_EXTERN

}  // namespace spherelab
