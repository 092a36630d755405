#include "spherelab/fock.hpp"

#include <algorithm>
#include <sstream>

namespace spherelab {

namespace {

Index block_offset(int n) { return static_cast<Index>(n) * (n + 1) / 2; }

template <class Complex>
bool is_zero(const Complex& z) {
  return z == Complex{};
}

}  // namespace

// ---------------------------------------------------------------------------
// FockBasis

FockBasis::FockBasis(int n_max) : n_max_(n_max), dim_(0) {
  if (n_max < 2) {
    std::ostringstream os;
    os << "FockBasis: n_max must be >= 2 (got " << n_max << ")";
    throw InvalidArgument(os.str());
  }
  dim_ = block_offset(n_max + 1);
  totals_.reserve(static_cast<std::size_t>(dim_));
  for (int n = 0; n <= n_max; ++n) {
    totals_.insert(totals_.end(), static_cast<std::size_t>(n + 1), n);
  }
}

FockState FockBasis::state(Index i) const {
  if (i < 0 || i >= dim_) throw InvalidArgument("FockBasis::state: index out of range");
  const int n = total(i);
  const int n1 = n - static_cast<int>(i - block_offset(n));
  return {n1, n - n1};
}

std::optional<Index> FockBasis::find(FockState s) const noexcept {
  if (s.n1 < 0 || s.n2 < 0 || s.total() > n_max_) return std::nullopt;
  const int n = s.total();
  return block_offset(n) + (n - s.n1);
}

Index FockBasis::index(FockState s) const {
  if (auto i = find(s)) return *i;
  std::ostringstream os;
  os << "FockBasis: state (" << s.n1 << "," << s.n2 << ") outside n_max=" << n_max_;
  throw InvalidArgument(os.str());
}

Index FockBasis::block_begin(int n) const noexcept {
  return block_offset(std::clamp(n, 0, n_max_ + 1));
}

Index FockBasis::block_end(int n) const noexcept {
  return block_offset(std::clamp(n + 1, 0, n_max_ + 1));
}

BasisPtr build_basis(int n_max) { return std::make_shared<const FockBasis>(n_max); }

void require_same_basis(const FockBasis& a, const FockBasis& b, const char* what) {
  if (!(a == b)) {
    std::ostringstream os;
    os << what << ": basis mismatch (n_max " << a.n_max() << " vs " << b.n_max() << ")";
    throw BasisMismatch(os.str());
  }
}

// ---------------------------------------------------------------------------
// BasicLinOp

template <class Real>
BasicLinOp<Real>::BasicLinOp(BasisPtr basis, matrix_type matrix, Grade grade)
    : basis_(std::move(basis)), matrix_(std::move(matrix)), grade_(grade) {
  if (!basis_) throw InvalidArgument("LinOp: null basis");
  if (matrix_.rows() != basis_->dim() || matrix_.cols() != basis_->dim()) {
    throw InvalidArgument("LinOp: matrix shape does not match basis dimension");
  }
  if (grade.up < 0 || grade.down < 0) throw InvalidArgument("LinOp: negative grade");
  const Grade m = measured_grade();
  if (m.up > grade.up || m.down > grade.down) {
    std::ostringstream os;
    os << "LinOp: entries reach grade (" << m.up << "," << m.down
       << ") outside declared (" << grade.up << "," << grade.down << ")";
    throw InvalidArgument(os.str());
  }
}

template <class Real>
BasicLinOp<Real> BasicLinOp<Real>::zero(BasisPtr basis) {
  const Index d = basis->dim();
  return BasicLinOp(std::move(basis), matrix_type::Zero(d, d), Grade{}, unchecked);
}

template <class Real>
BasicLinOp<Real> BasicLinOp<Real>::identity(BasisPtr basis) {
  const Index d = basis->dim();
  return BasicLinOp(std::move(basis), matrix_type::Identity(d, d), Grade{}, unchecked);
}

template <class Real>
Grade BasicLinOp<Real>::measured_grade() const {
  Grade g;
  const FockBasis& b = *basis_;
  for (Index j = 0; j < matrix_.cols(); ++j) {
    const int nj = b.total(j);
    for (Index i = 0; i < matrix_.rows(); ++i) {
      if (is_zero(matrix_(i, j))) continue;
      const int shift = b.total(i) - nj;
      if (shift > g.up) g.up = shift;
      if (-shift > g.down) g.down = -shift;
    }
  }
  return g;
}

template <class Real>
BasicLinOp<Real> BasicLinOp<Real>::narrowed(Grade grade) const {
  return BasicLinOp(basis_, matrix_, grade);
}

// ---------------------------------------------------------------------------
// Algebra

template <class Real>
BasicLinOp<Real> ladder(const BasisPtr& basis, int mode, LadderKind kind) {
  if (mode != 1 && mode != 2) throw InvalidArgument("ladder: mode must be 1 or 2");
  using std::sqrt;
  using Op = BasicLinOp<Real>;
  const Index d = basis->dim();
  typename Op::matrix_type m = Op::matrix_type::Zero(d, d);
  for (Index i = 0; i < d; ++i) {
    const FockState s = basis->state(i);
    const int occ = mode == 1 ? s.n1 : s.n2;
    if (kind == LadderKind::lower) {
      if (occ == 0) continue;
      FockState t = s;
      (mode == 1 ? t.n1 : t.n2) -= 1;
      m(basis->index(t), i) = complex_t<Real>(sqrt(Real(occ)), Real(0));
    } else {
      FockState t = s;
      (mode == 1 ? t.n1 : t.n2) += 1;
      if (auto k = basis->find(t)) m(*k, i) = complex_t<Real>(sqrt(Real(occ + 1)), Real(0));
    }
  }
  const Grade g = kind == LadderKind::lower ? Grade{0, 1} : Grade{1, 0};
  return Op(basis, std::move(m), g, Op::unchecked);
}

template <class Real>
BasicLinOp<Real> operator+(const BasicLinOp<Real>& a, const BasicLinOp<Real>& b) {
  require_same_basis(a.basis(), b.basis(), "LinOp +");
  return BasicLinOp<Real>(a.basis_ptr(), a.matrix() + b.matrix(), widest(a.grade(), b.grade()),
                          BasicLinOp<Real>::unchecked);
}

template <class Real>
BasicLinOp<Real> operator-(const BasicLinOp<Real>& a, const BasicLinOp<Real>& b) {
  require_same_basis(a.basis(), b.basis(), "LinOp -");
  return BasicLinOp<Real>(a.basis_ptr(), a.matrix() - b.matrix(), widest(a.grade(), b.grade()),
                          BasicLinOp<Real>::unchecked);
}

template <class Real>
BasicLinOp<Real> operator-(const BasicLinOp<Real>& a) {
  return BasicLinOp<Real>(a.basis_ptr(), -a.matrix(), a.grade(), BasicLinOp<Real>::unchecked);
}

template <class Real>
BasicLinOp<Real> operator*(const BasicLinOp<Real>& a, const BasicLinOp<Real>& b) {
  require_same_basis(a.basis(), b.basis(), "LinOp *");
  using Op = BasicLinOp<Real>;
  const FockBasis& basis = a.basis();
  const Index d = basis.dim();
  const auto& am = a.matrix();
  const auto& bm = b.matrix();
  typename Op::matrix_type c = Op::matrix_type::Zero(d, d);
  // Column gather: C(:,j) = sum_k A(:,k) B(k,j), with k limited to the band of
  // B around n_j and the rows limited to the band of A around n_k.
  for (Index j = 0; j < d; ++j) {
    const int nj = basis.total(j);
    const Index k0 = basis.block_begin(nj - b.grade().down);
    const Index k1 = basis.block_end(nj + b.grade().up);
    for (Index k = k0; k < k1; ++k) {
      const auto& bkj = bm(k, j);
      if (is_zero(bkj)) continue;
      const int nk = basis.total(k);
      const Index i0 = basis.block_begin(nk - a.grade().down);
      const Index i1 = basis.block_end(nk + a.grade().up);
      c.col(j).segment(i0, i1 - i0) += am.col(k).segment(i0, i1 - i0) * bkj;
    }
  }
  return Op(a.basis_ptr(), std::move(c), compose(a.grade(), b.grade()), Op::unchecked);
}

template <class Real>
BasicLinOp<Real> operator*(const complex_t<Real>& s, const BasicLinOp<Real>& a) {
  return BasicLinOp<Real>(a.basis_ptr(), a.matrix() * s, a.grade(), BasicLinOp<Real>::unchecked);
}

template <class Real>
BasicLinOp<Real> adjoint(const BasicLinOp<Real>& a) {
  return BasicLinOp<Real>(a.basis_ptr(), a.matrix().adjoint(), Grade{a.grade().down, a.grade().up},
                          BasicLinOp<Real>::unchecked);
}

template <class Real>
BasicLinOp<Real> commutator(const BasicLinOp<Real>& a, const BasicLinOp<Real>& b) {
  return a * b - b * a;
}

template <class Real>
BasicLinOp<Real> anticommutator(const BasicLinOp<Real>& a, const BasicLinOp<Real>& b) {
  return a * b + b * a;
}

namespace {

template <class Real>
complex_t<Real> evaluate_checked(const SFunction<Real>& f, int n, const char* what) {
  const complex_t<Real> v = f(FockBasis::shifted_value<Real>(n));
  if (!is_finite_complex(v)) {
    std::ostringstream os;
    os << what << ": function of S is not finite at S=" << (n + 1) << "/2 (total n=" << n << ")";
    throw SingularFunction(n, os.str());
  }
  return v;
}

}  // namespace

template <class Real>
BasicLinOp<Real> diag_S_fn(const BasisPtr& basis, const SFunction<Real>& f) {
  using Op = BasicLinOp<Real>;
  const Index d = basis->dim();
  typename Op::matrix_type m = Op::matrix_type::Zero(d, d);
  for (int n = 0; n <= basis->n_max(); ++n) {
    const auto v = evaluate_checked<Real>(f, n, "diag_S_fn");
    for (Index i = basis->block_begin(n); i < basis->block_end(n); ++i) m(i, i) = v;
  }
  return Op(basis, std::move(m), Grade{}, Op::unchecked);
}

template <class Real>
BasicLinOp<Real> fused_apply(const SFunction<Real>& f, const BasicLinOp<Real>& monomial) {
  using Op = BasicLinOp<Real>;
  const FockBasis& basis = monomial.basis();
  typename Op::matrix_type m = monomial.matrix();
  for (int n = 0; n <= basis.n_max(); ++n) {
    const Index r0 = basis.block_begin(n);
    const Index r1 = basis.block_end(n);
    // Only columns within the grade band can reach this row block.
    const Index c0 = basis.block_begin(n - monomial.grade().up);
    const Index c1 = basis.block_end(n + monomial.grade().down);
    bool reached = false;
    for (Index j = c0; j < c1 && !reached; ++j) {
      for (Index i = r0; i < r1; ++i) {
        if (!is_zero(m(i, j))) {
          reached = true;
          break;
        }
      }
    }
    if (!reached) continue;
    const auto v = evaluate_checked<Real>(f, n, "fused_apply");
    m.block(r0, c0, r1 - r0, c1 - c0) *= v;
  }
  return Op(monomial.basis_ptr(), std::move(m), monomial.grade(), Op::unchecked);
}

template <class Real>
BasicLinOp<Real> fused_apply_right(const BasicLinOp<Real>& monomial, const SFunction<Real>& f) {
  using Op = BasicLinOp<Real>;
  const FockBasis& basis = monomial.basis();
  typename Op::matrix_type m = monomial.matrix();
  for (int n = 0; n <= basis.n_max(); ++n) {
    const Index c0 = basis.block_begin(n);
    const Index c1 = basis.block_end(n);
    const Index r0 = basis.block_begin(n - monomial.grade().down);
    const Index r1 = basis.block_end(n + monomial.grade().up);
    bool reached = false;
    for (Index j = c0; j < c1 && !reached; ++j) {
      for (Index i = r0; i < r1; ++i) {
        if (!is_zero(m(i, j))) {
          reached = true;
          break;
        }
      }
    }
    if (!reached) continue;
    const auto v = evaluate_checked<Real>(f, n, "fused_apply_right");
    m.block(r0, c0, r1 - r0, c1 - c0) *= v;
  }
  return Op(monomial.basis_ptr(), std::move(m), monomial.grade(), Op::unchecked);
}

// ---------------------------------------------------------------------------
// BasicVecOp

template <class Real>
BasicVecOp<Real>::BasicVecOp(op_type x, op_type y, op_type z)
    : c_{std::move(x), std::move(y), std::move(z)} {
  require_same_basis(c_[0].basis(), c_[1].basis(), "VecOp");
  require_same_basis(c_[0].basis(), c_[2].basis(), "VecOp");
}

template <class Real>
BasicVecOp<Real> cross(const BasicVecOp<Real>& u, const BasicVecOp<Real>& v) {
  return {u.y() * v.z() - u.z() * v.y(), u.z() * v.x() - u.x() * v.z(),
          u.x() * v.y() - u.y() * v.x()};
}

template <class Real>
BasicLinOp<Real> dot(const BasicVecOp<Real>& u, const BasicVecOp<Real>& v) {
  return u.x() * v.x() + u.y() * v.y() + u.z() * v.z();
}

template <class Real>
BasicVecOp<Real> operator+(const BasicVecOp<Real>& u, const BasicVecOp<Real>& v) {
  return {u.x() + v.x(), u.y() + v.y(), u.z() + v.z()};
}

template <class Real>
BasicVecOp<Real> operator-(const BasicVecOp<Real>& u, const BasicVecOp<Real>& v) {
  return {u.x() - v.x(), u.y() - v.y(), u.z() - v.z()};
}

template <class Real>
BasicVecOp<Real> operator*(const complex_t<Real>& s, const BasicVecOp<Real>& u) {
  return {s * u.x(), s * u.y(), s * u.z()};
}

template <class Real>
BasicVecOp<Real> adjoint(const BasicVecOp<Real>& u) {
  return {adjoint(u.x()), adjoint(u.y()), adjoint(u.z())};
}

template <class Real>
BasicVecOp<Real> fused_apply(const SFunction<Real>& f, const BasicVecOp<Real>& u) {
  return {fused_apply(f, u.x()), fused_apply(f, u.y()), fused_apply(f, u.z())};
}

// ---------------------------------------------------------------------------
// Guard bands and deviations

const char* to_string(Sector s) { return s == Sector::integer_j ? "integer_j" : "all"; }

std::optional<Sector> parse_sector(const std::string& s) {
  if (s == "integer_j" || s == "integer") return Sector::integer_j;
  if (s == "all") return Sector::all;
  return std::nullopt;
}

Subspace guarded_subspace(const FockBasis& basis, int width) {
  return guarded_subspace(basis, width, Sector::all);
}

Subspace guarded_subspace(const FockBasis& basis, int width, Sector sector,
                          std::optional<int> max_total) {
  Subspace out;
  if (width < 0) throw InvalidArgument("guarded_subspace: negative width");
  if (width > basis.n_max()) {
    out.warning = true;
    return out;
  }
  int top = basis.n_max() - width;
  if (max_total) top = std::min(top, *max_total);
  for (int n = 0; n <= top; ++n) {
    if (sector == Sector::integer_j && n % 2 != 0) continue;
    for (Index i = basis.block_begin(n); i < basis.block_end(n); ++i) out.indices.push_back(i);
  }
  return out;
}

template <class Real>
double residual(const BasicLinOp<Real>& expr, const BasicLinOp<Real>& ref,
                const Subspace& subspace) {
  require_same_basis(expr.basis(), ref.basis(), "residual");
  using std::abs;
  Real num(0);
  Real den(0);
  const auto& e = expr.matrix();
  const auto& r = ref.matrix();
  for (Index j : subspace.indices) {
    for (Index i : subspace.indices) {
      const Real d = abs(e(i, j) - r(i, j));
      const Real m = abs(r(i, j));
      if (d > num) num = d;
      if (m > den) den = m;
    }
  }
  return to_double(num / (Real(1) + den));
}

template <class Real>
double max_abs(const BasicLinOp<Real>& op, const Subspace& subspace) {
  using std::abs;
  Real out(0);
  for (Index j : subspace.indices) {
    for (Index i : subspace.indices) {
      const Real m = abs(op.matrix()(i, j));
      if (m > out) out = m;
    }
  }
  return to_double(out);
}

#define SPHERELAB_FOCK_INSTANTIATE(R)                                                    \
  template class BasicLinOp<R>;                                                          \
  template class BasicVecOp<R>;                                                          \
  template BasicLinOp<R> ladder<R>(const BasisPtr&, int, LadderKind);                    \
  template BasicLinOp<R> operator+ <R>(const BasicLinOp<R>&, const BasicLinOp<R>&);      \
  template BasicLinOp<R> operator- <R>(const BasicLinOp<R>&, const BasicLinOp<R>&);      \
  template BasicLinOp<R> operator- <R>(const BasicLinOp<R>&);                            \
  template BasicLinOp<R> operator* <R>(const BasicLinOp<R>&, const BasicLinOp<R>&);      \
  template BasicLinOp<R> operator* <R>(const complex_t<R>&, const BasicLinOp<R>&);       \
  template BasicLinOp<R> adjoint<R>(const BasicLinOp<R>&);                               \
  template BasicLinOp<R> commutator<R>(const BasicLinOp<R>&, const BasicLinOp<R>&);      \
  template BasicLinOp<R> anticommutator<R>(const BasicLinOp<R>&, const BasicLinOp<R>&);  \
  template BasicLinOp<R> diag_S_fn<R>(const BasisPtr&, const SFunction<R>&);             \
  template BasicLinOp<R> fused_apply<R>(const SFunction<R>&, const BasicLinOp<R>&);      \
  template BasicLinOp<R> fused_apply_right<R>(const BasicLinOp<R>&, const SFunction<R>&); \
  template BasicVecOp<R> cross<R>(const BasicVecOp<R>&, const BasicVecOp<R>&);           \
  template BasicLinOp<R> dot<R>(const BasicVecOp<R>&, const BasicVecOp<R>&);             \
  template BasicVecOp<R> operator+ <R>(const BasicVecOp<R>&, const BasicVecOp<R>&);      \
  template BasicVecOp<R> operator- <R>(const BasicVecOp<R>&, const BasicVecOp<R>&);      \
  template BasicVecOp<R> operator* <R>(const complex_t<R>&, const BasicVecOp<R>&);       \
  template BasicVecOp<R> adjoint<R>(const BasicVecOp<R>&);                               \
  template BasicVecOp<R> fused_apply<R>(const SFunction<R>&, const BasicVecOp<R>&);      \
  template double residual<R>(const BasicLinOp<R>&, const BasicLinOp<R>&, const Subspace&); \
  template double max_abs<R>(const BasicLinOp<R>&, const Subspace&);

SPHERELAB_FOCK_INSTANTIATE(double)
SPHERELAB_FOCK_INSTANTIATE(Quad)

LinOp rounded(const ExtLinOp& a) {
  LinOp::matrix_type m = a.matrix().unaryExpr([](const complex_t<Quad>& z) {
    return std::complex<double>(static_cast<double>(z.real()), static_cast<double>(z.imag()));
  });
  return LinOp(a.basis_ptr(), std::move(m), a.grade(), LinOp::unchecked);
}

VecOp rounded(const ExtVecOp& v) { return {rounded(v.x()), rounded(v.y()), rounded(v.z())}; }

}  // namespace spherelab
