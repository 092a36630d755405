#pragma once

// Truncated two-mode bosonic Fock space and its graded operator algebra.
//
// Basis ordering is part of the public contract: states are grouped by total
// quanta n = n1 + n2 ascending, and within a group by n1 descending, so the
// index of (n1, n2) is n(n+1)/2 + (n - n1). Exported matrices depend on it.
//
// Every LinOp carries a Grade: the largest amount by which it can raise or
// lower n. Raising operators annihilate states that would leave the basis, so
// an expression is only trusted on states with n <= n_max - grade.up; that
// guard band is what makes identity checks truncation-exact.

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spherelab/error.hpp"
#include "spherelab/scalar.hpp"

namespace spherelab {

using Index = Eigen::Index;

struct FockState {
  int n1 = 0;
  int n2 = 0;

  int total() const noexcept { return n1 + n2; }
  auto operator<=>(const FockState&) const = default;
};

class FockBasis {
 public:
  /// Throws InvalidArgument for n_max < 2.
  explicit FockBasis(int n_max);

  int n_max() const noexcept { return n_max_; }
  Index dim() const noexcept { return dim_; }

  FockState state(Index i) const;
  int total(Index i) const { return totals_[static_cast<std::size_t>(i)]; }
  std::optional<Index> find(FockState s) const noexcept;
  /// Like find(), but throws InvalidArgument for states outside the basis.
  Index index(FockState s) const;

  /// First index of the total-n block; n is clamped to [0, n_max + 1].
  Index block_begin(int n) const noexcept;
  /// One past the last index of the total-n block, same clamping.
  Index block_end(int n) const noexcept;

  /// S = (n+1)/2 on the total-n block.
  template <class Real>
  static Real shifted_value(int n) {
    return Real(n + 1) / Real(2);
  }

  bool operator==(const FockBasis& other) const noexcept {
    return n_max_ == other.n_max_;
  }

 private:
  int n_max_;
  Index dim_;
  std::vector<int> totals_;
};

using BasisPtr = std::shared_ptr<const FockBasis>;

BasisPtr build_basis(int n_max);

struct Grade {
  int up = 0;
  int down = 0;

  bool operator==(const Grade&) const = default;
};

/// Grade of a product: shifts add.
inline Grade compose(Grade a, Grade b) { return {a.up + b.up, a.down + b.down}; }
/// Grade of a sum.
inline Grade widest(Grade a, Grade b) {
  return {std::max(a.up, b.up), std::max(a.down, b.down)};
}

template <class Real>
class BasicLinOp {
 public:
  using real_type = Real;
  using complex_type = complex_t<Real>;
  using matrix_type = Eigen::Matrix<complex_type, Eigen::Dynamic, Eigen::Dynamic>;

  /// Validates the shape and that no nonzero entry lies outside `grade`.
  BasicLinOp(BasisPtr basis, matrix_type matrix, Grade grade);

  static BasicLinOp zero(BasisPtr basis);
  static BasicLinOp identity(BasisPtr basis);

  const FockBasis& basis() const noexcept { return *basis_; }
  const BasisPtr& basis_ptr() const noexcept { return basis_; }
  const matrix_type& matrix() const noexcept { return matrix_; }
  Grade grade() const noexcept { return grade_; }
  Index dim() const noexcept { return matrix_.rows(); }
  /// Guard width: the furthest any intermediate state can climb above the input.
  int width() const noexcept { return grade_.up; }

  complex_type operator()(Index row, Index col) const { return matrix_(row, col); }

  /// Same matrix with tighter grade metadata. Throws InvalidArgument when an
  /// entry falls outside `grade`; used for monomials whose sum-rule bound is loose
  /// (a1^dag a2 has true grade (0,0)).
  BasicLinOp narrowed(Grade grade) const;

  /// Smallest grade consistent with the stored entries.
  Grade measured_grade() const;

  struct unchecked_t {};
  static constexpr unchecked_t unchecked{};
  BasicLinOp(BasisPtr basis, matrix_type matrix, Grade grade, unchecked_t) noexcept
      : basis_(std::move(basis)), matrix_(std::move(matrix)), grade_(grade) {}

 private:
  BasisPtr basis_;
  matrix_type matrix_;
  Grade grade_;
};

using LinOp = BasicLinOp<double>;
using ExtLinOp = BasicLinOp<Quad>;

template <class Real>
using SFunction = std::function<complex_t<Real>(const Real& S)>;

enum class LadderKind { lower, raise };

/// a_mode or its adjoint; mode is 1 or 2. Raising into n_max + 1 gives zero.
template <class Real>
BasicLinOp<Real> ladder(const BasisPtr& basis, int mode, LadderKind kind);

template <class Real>
BasicLinOp<Real> operator+(const BasicLinOp<Real>& a, const BasicLinOp<Real>& b);
template <class Real>
BasicLinOp<Real> operator-(const BasicLinOp<Real>& a, const BasicLinOp<Real>& b);
template <class Real>
BasicLinOp<Real> operator-(const BasicLinOp<Real>& a);
/// Matrix product. Only entries inside both grade bands are visited.
template <class Real>
BasicLinOp<Real> operator*(const BasicLinOp<Real>& a, const BasicLinOp<Real>& b);
template <class Real>
BasicLinOp<Real> operator*(const complex_t<Real>& s, const BasicLinOp<Real>& a);
template <class Real>
BasicLinOp<Real> adjoint(const BasicLinOp<Real>& a);
template <class Real>
BasicLinOp<Real> commutator(const BasicLinOp<Real>& a, const BasicLinOp<Real>& b);
template <class Real>
BasicLinOp<Real> anticommutator(const BasicLinOp<Real>& a, const BasicLinOp<Real>& b);

template <class Real>
BasicLinOp<Real> operator*(const BasicLinOp<Real>& a, const complex_t<Real>& s) {
  return s * a;
}

/// Diagonal f(S), S = (n+1)/2. Throws SingularFunction naming the first n
/// where f is not finite.
template <class Real>
BasicLinOp<Real> diag_S_fn(const BasisPtr& basis, const SFunction<Real>& f);

/// f(S) placed to the left of `monomial`: row i is scaled by f((n_i+1)/2).
/// f is evaluated only on rows the monomial actually reaches, so a factor such
/// as 1/sqrt(S(S-1)) is fine after a +2 shift even though S = 1 occurs in the
/// basis.
template <class Real>
BasicLinOp<Real> fused_apply(const SFunction<Real>& f, const BasicLinOp<Real>& monomial);

/// f(S) placed to the right of `monomial`: column j is scaled by f((n_j+1)/2).
template <class Real>
BasicLinOp<Real> fused_apply_right(const BasicLinOp<Real>& monomial, const SFunction<Real>& f);

template <class Real>
class BasicVecOp {
 public:
  using op_type = BasicLinOp<Real>;

  BasicVecOp(op_type x, op_type y, op_type z);

  const op_type& x() const noexcept { return c_[0]; }
  const op_type& y() const noexcept { return c_[1]; }
  const op_type& z() const noexcept { return c_[2]; }
  const op_type& operator[](std::size_t i) const { return c_.at(i); }

  const FockBasis& basis() const noexcept { return c_[0].basis(); }
  const BasisPtr& basis_ptr() const noexcept { return c_[0].basis_ptr(); }

  auto begin() const noexcept { return c_.begin(); }
  auto end() const noexcept { return c_.end(); }

 private:
  std::array<op_type, 3> c_;
};

using VecOp = BasicVecOp<double>;
using ExtVecOp = BasicVecOp<Quad>;

/// (U x V)_i = sum_jk eps_ijk U_j V_k, U_j always to the left.
template <class Real>
BasicVecOp<Real> cross(const BasicVecOp<Real>& u, const BasicVecOp<Real>& v);
template <class Real>
BasicLinOp<Real> dot(const BasicVecOp<Real>& u, const BasicVecOp<Real>& v);

template <class Real>
BasicVecOp<Real> operator+(const BasicVecOp<Real>& u, const BasicVecOp<Real>& v);
template <class Real>
BasicVecOp<Real> operator-(const BasicVecOp<Real>& u, const BasicVecOp<Real>& v);
template <class Real>
BasicVecOp<Real> operator*(const complex_t<Real>& s, const BasicVecOp<Real>& u);
template <class Real>
BasicVecOp<Real> adjoint(const BasicVecOp<Real>& u);
template <class Real>
BasicVecOp<Real> fused_apply(const SFunction<Real>& f, const BasicVecOp<Real>& u);

/// Which part of the basis an evaluation covers.
enum class Sector {
  integer_j,  ///< even n only: j = n/2 integer, the states of a particle on the sphere
  all,
};

const char* to_string(Sector s);
std::optional<Sector> parse_sector(const std::string& s);

struct Subspace {
  std::vector<Index> indices;
  bool warning = false;  ///< width exceeded n_max; indices is empty

  std::size_t size() const noexcept { return indices.size(); }
  bool empty() const noexcept { return indices.empty(); }
};

/// All states with n <= n_max - width.
Subspace guarded_subspace(const FockBasis& basis, int width);

/// Guarded states restricted to a sector and, optionally, to n <= max_total.
Subspace guarded_subspace(const FockBasis& basis, int width, Sector sector,
                          std::optional<int> max_total = std::nullopt);

/// max |<i|expr - ref|j>| / (1 + max |<i|ref|j>|) over i, j in the subspace.
template <class Real>
double residual(const BasicLinOp<Real>& expr, const BasicLinOp<Real>& ref,
                const Subspace& subspace);

/// max |<i|op|j>| over i, j in the subspace.
template <class Real>
double max_abs(const BasicLinOp<Real>& op, const Subspace& subspace);

void require_same_basis(const FockBasis& a, const FockBasis& b, const char* what);

/// Rounds an extended-precision operator to double entry by entry; grade kept.
LinOp rounded(const ExtLinOp& a);
VecOp rounded(const ExtVecOp& v);

// Explicit instantiations live in fock.cpp.
#define SPHERELAB_FOCK_EXTERN(R)                                                         \
  extern template class BasicLinOp<R>;                                                   \
  extern template class BasicVecOp<R>;                                                   \
  extern template BasicLinOp<R> ladder<R>(const BasisPtr&, int, LadderKind);             \
  extern template BasicLinOp<R> operator+ <R>(const BasicLinOp<R>&, const BasicLinOp<R>&); \
  extern template BasicLinOp<R> operator- <R>(const BasicLinOp<R>&, const BasicLinOp<R>&); \
  extern template BasicLinOp<R> operator- <R>(const BasicLinOp<R>&);                     \
  extern template BasicLinOp<R> operator* <R>(const BasicLinOp<R>&, const BasicLinOp<R>&); \
  extern template BasicLinOp<R> operator* <R>(const complex_t<R>&, const BasicLinOp<R>&); \
  extern template BasicLinOp<R> adjoint<R>(const BasicLinOp<R>&);                        \
  extern template BasicLinOp<R> commutator<R>(const BasicLinOp<R>&, const BasicLinOp<R>&); \
  extern template BasicLinOp<R> anticommutator<R>(const BasicLinOp<R>&, const BasicLinOp<R>&); \
  extern template BasicLinOp<R> diag_S_fn<R>(const BasisPtr&, const SFunction<R>&);      \
  extern template BasicLinOp<R> fused_apply<R>(const SFunction<R>&, const BasicLinOp<R>&); \
  extern template BasicLinOp<R> fused_apply_right<R>(const BasicLinOp<R>&, const SFunction<R>&); \
  extern template BasicVecOp<R> cross<R>(const BasicVecOp<R>&, const BasicVecOp<R>&);    \
  extern template BasicLinOp<R> dot<R>(const BasicVecOp<R>&, const BasicVecOp<R>&);      \
  extern template BasicVecOp<R> operator+ <R>(const BasicVecOp<R>&, const BasicVecOp<R>&); \
  extern template BasicVecOp<R> operator- <R>(const BasicVecOp<R>&, const BasicVecOp<R>&); \
  extern template BasicVecOp<R> operator* <R>(const complex_t<R>&, const BasicVecOp<R>&); \
  extern template BasicVecOp<R> adjoint<R>(const BasicVecOp<R>&);                        \
  extern template BasicVecOp<R> fused_apply<R>(const SFunction<R>&, const BasicVecOp<R>&); \
  extern template double residual<R>(const BasicLinOp<R>&, const BasicLinOp<R>&, const Subspace&); \
  extern template double max_abs<R>(const BasicLinOp<R>&, const Subspace&);

SPHERELAB_FOCK_EXTERN(double)
SPHERELAB_FOCK_EXTERN(Quad)

#undef SPHERELAB_FOCK_EXTERN

}  // namespace spherelab
