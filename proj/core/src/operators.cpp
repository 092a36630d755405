#include "spherelab/operators.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace spherelab {

namespace {

template <class Real>
using C = complex_t<Real>;

template <class Real>
C<Real> cplx(double re, double im = 0.0) {
  return C<Real>(Real(re), Real(im));
}

/// Wraps a real-valued function of S into an SFunction.
template <class Real, class F>
SFunction<Real> real_fn(F f) {
  return [f](const Real& S) { return C<Real>(f(S), Real(0)); };
}

template <class Real>
BasicLinOp<Real> lower(const BasisPtr& b, int mode) {
  return ladder<Real>(b, mode, LadderKind::lower);
}

template <class Real>
BasicLinOp<Real> raise(const BasisPtr& b, int mode) {
  return ladder<Real>(b, mode, LadderKind::raise);
}

}  // namespace

void check_overflow(const FockBasis& basis, double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    std::ostringstream os;
    os << "eta must be a finite positive number (got " << eta << ")";
    throw InvalidArgument(os.str());
  }
  const double log_peak = eta * (basis.n_max() + 1) / 2.0 + eta / 2.0 +
                          0.5 * std::log(static_cast<double>(basis.dim()));
  if (log_peak >= std::log(std::numeric_limits<double>::max())) {
    std::ostringstream os;
    os << "exp(eta*S) overflows at the top of the basis (eta=" << eta
       << ", n_max=" << basis.n_max() << "); reduce eta or n_max";
    throw OverflowError(os.str());
  }
}

template <class Real>
BasicVecOp<Real> angular_momentum(const BasisPtr& basis) {
  const auto a1 = lower<Real>(basis, 1);
  const auto a2 = lower<Real>(basis, 2);
  const auto a1d = raise<Real>(basis, 1);
  const auto a2d = raise<Real>(basis, 2);
  const auto half = cplx<Real>(0.5);
  const auto neg_half_i = cplx<Real>(0.0, -0.5);  // 1/(2i)
  const auto hop12 = a1d * a2;
  const auto hop21 = a2d * a1;
  const Grade g{0, 0};
  return {(half * (hop12 + hop21)).narrowed(g), (neg_half_i * (hop12 - hop21)).narrowed(g),
          (half * (a1d * a1 - a2d * a2)).narrowed(g)};
}

template <class Real>
BasicLinOp<Real> shifted_S(const BasisPtr& basis) {
  return diag_S_fn<Real>(basis, real_fn<Real>([](const Real& S) { return S; }));
}

template <class Real>
BasicVecOp<Real> A_vec(const BasisPtr& basis) {
  const auto a1 = lower<Real>(basis, 1);
  const auto a2 = lower<Real>(basis, 2);
  const auto a22 = a2 * a2;
  const auto a11 = a1 * a1;
  return {cplx<Real>(0.5) * (a22 - a11), cplx<Real>(0.0, -0.5) * (a22 + a11), a2 * a1};
}

template <class Real>
BasicVecOp<Real> B_vec(const BasicVecOp<Real>& A) {
  return cplx<Real>(0.0, 0.5) * (adjoint(A) - A);
}

template <class Real>
BasicVecOp<Real> direction_N(const BasicVecOp<Real>& A) {
  using std::sqrt;
  const auto f = real_fn<Real>([](const Real& S) { return Real(1) / sqrt(S * (S + Real(1))); });
  const auto half = cplx<Real>(0.5);
  std::array<BasicLinOp<Real>, 3> out{BasicLinOp<Real>::zero(A.basis_ptr()),
                                      BasicLinOp<Real>::zero(A.basis_ptr()),
                                      BasicLinOp<Real>::zero(A.basis_ptr())};
  for (std::size_t k = 0; k < 3; ++k) {
    out[k] = half * (fused_apply(f, A[k]) + fused_apply_right(adjoint(A[k]), f));
  }
  return {out[0], out[1], out[2]};
}

template <class Real>
BasicVecOp<Real> momentum_Pi(const BasicVecOp<Real>& B) {
  using std::sqrt;
  const auto root = real_fn<Real>([](const Real& S) { return sqrt(S); });
  const auto inv_root = real_fn<Real>([](const Real& S) { return Real(1) / sqrt(S); });
  const auto half = cplx<Real>(0.5);
  std::array<BasicLinOp<Real>, 3> out{BasicLinOp<Real>::zero(B.basis_ptr()),
                                      BasicLinOp<Real>::zero(B.basis_ptr()),
                                      BasicLinOp<Real>::zero(B.basis_ptr())};
  for (std::size_t k = 0; k < 3; ++k) {
    out[k] = half * (fused_apply(root, fused_apply_right(B[k], inv_root)) +
                     fused_apply(inv_root, fused_apply_right(B[k], root)));
  }
  return {out[0], out[1], out[2]};
}

template <class Real>
BasicVecOp<Real> momentum_Pi_sym(const BasicVecOp<Real>& J, const BasicVecOp<Real>& N) {
  return cplx<Real>(0.5) * (cross(J, N) - cross(N, J));
}

template <class Real>
BasicVecOp<Real> nonhermitian_P(const BasicVecOp<Real>& J, const BasicVecOp<Real>& N) {
  return cross(J, N);
}

template <class Real>
SFunction<Real> z_alpha(double eta) {
  return real_fn<Real>([eta](const Real& S) {
    using std::cosh;
    using std::exp;
    using std::sinh;
    const Real e(eta);
    return exp(e / Real(2)) * (cosh(e * S) - sinh(e * S) / (Real(2) * S));
  });
}

template <class Real>
SFunction<Real> z_beta(double eta) {
  return real_fn<Real>([eta](const Real& S) {
    using std::exp;
    using std::sinh;
    const Real e(eta);
    return exp(e / Real(2)) * sinh(e * S) / S;
  });
}

template <class Real>
BasicVecOp<Real> annihilation_Z_general(const BasicVecOp<Real>& N, const BasicVecOp<Real>& Pi,
                                        double eta) {
  check_overflow(N.basis(), eta);
  const auto n_coeff = real_fn<Real>([eta](const Real& S) {
    using std::cosh;
    using std::sinh;
    const Real e(eta);
    return cosh(e * S) - sinh(e * S) / (Real(2) * S);
  });
  const auto pi_coeff = real_fn<Real>([eta](const Real& S) {
    using std::sinh;
    return sinh(Real(eta) * S) / S;
  });
  using std::exp;
  const C<Real> prefactor(exp(Real(eta) / Real(2)), Real(0));
  const C<Real> i = cplx<Real>(0.0, 1.0);
  return prefactor * (fused_apply(n_coeff, N) + i * fused_apply(pi_coeff, Pi));
}

template <class Real>
BasicVecOp<Real> annihilation_Z_viaP(const BasicVecOp<Real>& N, const BasicVecOp<Real>& P,
                                     double eta) {
  check_overflow(N.basis(), eta);
  const auto n_coeff = real_fn<Real>([eta](const Real& S) {
    using std::cosh;
    using std::sinh;
    const Real e(eta);
    return cosh(e * S) + sinh(e * S) / (Real(2) * S);
  });
  const auto p_coeff = real_fn<Real>([eta](const Real& S) {
    using std::sinh;
    return sinh(Real(eta) * S) / S;
  });
  using std::exp;
  const C<Real> prefactor(exp(Real(eta) / Real(2)), Real(0));
  const C<Real> i = cplx<Real>(0.0, 1.0);
  return prefactor * (fused_apply(n_coeff, N) + i * fused_apply(p_coeff, P));
}

template <class Real>
BasicVecOp<Real> annihilation_Z_closed(const BasisPtr& basis) {
  check_overflow(*basis, 1.0);
  using std::exp;
  using std::sqrt;
  const auto grow = real_fn<Real>([](const Real& S) { return exp(S) / sqrt(S * (S + Real(1))); });
  const auto decay =
      real_fn<Real>([](const Real& S) { return exp(-S) / sqrt(S * (S - Real(1))); });
  const auto a1 = lower<Real>(basis, 1);
  const auto a2 = lower<Real>(basis, 2);
  const auto a1d = raise<Real>(basis, 1);
  const auto a2d = raise<Real>(basis, 2);
  const C<Real> pre(exp(Real(1) / Real(2)) / Real(2), Real(0));

  const auto z_plus = pre * (fused_apply(grow, a2 * a2) - fused_apply(decay, a1d * a1d));
  const auto z_minus = pre * (fused_apply(decay, a2d * a2d) - fused_apply(grow, a1 * a1));
  const auto z_z = pre * (fused_apply(grow, a2 * a1) + fused_apply(decay, a2d * a1d));

  const C<Real> half = cplx<Real>(0.5);
  const C<Real> half_over_i = cplx<Real>(0.0, -0.5);
  return {half * (z_plus + z_minus), half_over_i * (z_plus - z_minus), z_z};
}

template <class Real>
BasicOperatorSet<Real> build_operator_set(const BasisPtr& basis, double eta) {
  check_overflow(*basis, eta);
  auto J = angular_momentum<Real>(basis);
  auto S = shifted_S<Real>(basis);
  auto A = A_vec<Real>(basis);
  auto B = B_vec(A);
  auto N = direction_N(A);
  auto Pi = momentum_Pi(B);
  auto Pi_sym = momentum_Pi_sym(J, N);
  auto P = nonhermitian_P(J, N);
  auto Z = annihilation_Z_general(N, Pi, eta);
  return BasicOperatorSet<Real>{basis,          eta,          std::move(J), std::move(S),
                                std::move(A),   std::move(B), std::move(N), std::move(Pi),
                                std::move(Pi_sym), std::move(P), std::move(Z)};
}

// ---------------------------------------------------------------------------
// Classical labels

void validate(const ClassicalPhasePoint& pt) {
  double xx = 0.0;
  double xp = 0.0;
  double pp = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    if (!std::isfinite(pt.x[i]) || !std::isfinite(pt.p[i])) {
      throw InvalidArgument("phase point has non-finite components");
    }
    xx += pt.x[i] * pt.x[i];
    xp += pt.x[i] * pt.p[i];
    pp += pt.p[i] * pt.p[i];
  }
  constexpr double tol = 1e-12;
  if (std::abs(xx - 1.0) > tol) {
    std::ostringstream os;
    os << "phase point is off the unit sphere: x.x = " << xx;
    throw InvalidArgument(os.str());
  }
  if (std::abs(xp) > tol * std::max(1.0, std::sqrt(pp))) {
    std::ostringstream os;
    os << "momentum is not tangent: x.p = " << xp;
    throw InvalidArgument(os.str());
  }
}

ComplexVec3 classical_annihilation(const ClassicalPhasePoint& pt, double eta) {
  validate(pt);
  if (!(eta > 0.0) || !std::isfinite(eta)) throw InvalidArgument("eta must be positive");
  const auto& x = pt.x;
  const auto& p = pt.p;
  const std::array<double, 3> l{x[1] * p[2] - x[2] * p[1], x[2] * p[0] - x[0] * p[2],
                                x[0] * p[1] - x[1] * p[0]};
  const double ell = std::sqrt(l[0] * l[0] + l[1] * l[1] + l[2] * l[2]);
  const double c = std::cosh(eta * ell);
  const double s_over_l = ell == 0.0 ? eta : std::sinh(eta * ell) / ell;
  ComplexVec3 z;
  for (std::size_t i = 0; i < 3; ++i) z[i] = {c * x[i], s_over_l * p[i]};
  return z;
}

std::complex<double> bilinear_dot(const ComplexVec3& u, const ComplexVec3& v) {
  return u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
}

#define SPHERELAB_OPERATORS_INSTANTIATE(R)                                             \
  template BasicVecOp<R> angular_momentum<R>(const BasisPtr&);                         \
  template BasicLinOp<R> shifted_S<R>(const BasisPtr&);                                \
  template BasicVecOp<R> A_vec<R>(const BasisPtr&);                                    \
  template BasicVecOp<R> B_vec<R>(const BasicVecOp<R>&);                               \
  template BasicVecOp<R> direction_N<R>(const BasicVecOp<R>&);                         \
  template BasicVecOp<R> momentum_Pi<R>(const BasicVecOp<R>&);                         \
  template BasicVecOp<R> momentum_Pi_sym<R>(const BasicVecOp<R>&, const BasicVecOp<R>&); \
  template BasicVecOp<R> nonhermitian_P<R>(const BasicVecOp<R>&, const BasicVecOp<R>&);  \
  template BasicVecOp<R> annihilation_Z_general<R>(const BasicVecOp<R>&, const BasicVecOp<R>&, double); \
  template BasicVecOp<R> annihilation_Z_viaP<R>(const BasicVecOp<R>&, const BasicVecOp<R>&, double); \
  template BasicVecOp<R> annihilation_Z_closed<R>(const BasisPtr&);                    \
  template SFunction<R> z_alpha<R>(double);                                            \
  template SFunction<R> z_beta<R>(double);                                             \
  template BasicOperatorSet<R> build_operator_set<R>(const BasisPtr&, double);

SPHERELAB_OPERATORS_INSTANTIATE(double)
SPHERELAB_OPERATORS_INSTANTIATE(Quad)

}  // namespace spherelab
