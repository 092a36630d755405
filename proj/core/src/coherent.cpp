#include "spherelab/coherent.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SVD>

namespace spherelab {

namespace {

using cd = std::complex<double>;

bool in_sector(const FockState& s, const SolveOptions& o) {
  if (o.sector == Sector::integer_j && s.total() % 2 != 0) return false;
  if (o.axial && s.n1 != s.n2) return false;
  return true;
}

std::vector<Index> select(const FockBasis& basis, int max_total, const SolveOptions& o) {
  std::vector<Index> out;
  for (Index i = 0; i < basis.block_end(max_total); ++i)
    if (in_sector(basis.state(i), o)) out.push_back(i);
  return out;
}

}  // namespace

void validate(const CoherentLabel& label, double tolerance) {
  for (const auto& c : label.z) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw InvalidArgument("coherent label has non-finite components");
    }
  }
  const cd zz = bilinear_dot(label.z, label.z);
  if (std::abs(zz - cd(1.0, 0.0)) > tolerance) {
    std::ostringstream os;
    os << "coherent label must satisfy z.z = 1; got z.z = " << zz.real() << (zz.imag() < 0 ? "" : "+")
       << zz.imag() << "i";
    throw InvalidArgument(os.str());
  }
}

CoherentLabel label_of(const ClassicalPhasePoint& pt, double eta) {
  return {classical_annihilation(pt, eta)};
}

CoherentSolver::CoherentSolver(BasisPtr basis, double eta)
    : basis_(basis),
      eta_(eta),
      Z_(rounded(annihilation_Z_general<Quad>(std::move(basis), eta))) {}

CoherentSolver::CoherentSolver(const ExtOperatorSet& extended)
    : basis_(extended.basis), eta_(extended.eta), Z_(rounded(extended.Z)) {}

CoherentState solve(const OperatorSet& set, const CoherentLabel& label,
                    const SolveOptions& options) {
  return CoherentSolver(set.basis, set.eta).solve(label, options);
}

namespace {

Expectations expectations_with(const CoherentState& state, const OperatorSet& set,
                               const VecOp& Z);

}  // namespace

Expectations CoherentSolver::expectations(const CoherentState& state,
                                          const OperatorSet& set) const {
  require_same_basis(*basis_, *set.basis, "expectations");
  return expectations_with(state, set, Z_);
}

CoherentState CoherentSolver::solve(const CoherentLabel& label, const SolveOptions& o) const {
  validate(label);
  const auto& basis = *basis_;
  const VecOp& Z = Z_;
  const int n_max = basis.n_max();
  if (o.guard < 0 || o.guard >= n_max) throw InvalidArgument("guard must lie in [0, n_max)");
  if (std::none_of(o.components.begin(), o.components.end(), [](bool b) { return b; })) {
    throw InvalidArgument("solve needs at least one Z component");
  }
  if (o.axial && (o.components[0] || o.components[1])) {
    throw InvalidArgument("axial restriction only applies to Z_z alone");
  }
  for (const auto& op : Z) {
    if (!op.matrix().allFinite()) throw OverflowError("Z has non-finite entries");
  }

  const auto cols = select(basis, n_max, o);
  const auto rows = select(basis, n_max - o.guard, o);
  const Index nc = static_cast<Index>(cols.size());
  const Index nr = static_cast<Index>(rows.size());
  std::vector<int> active;
  for (int k = 0; k < 3; ++k)
    if (o.components[static_cast<std::size_t>(k)]) active.push_back(k);

  // Column scale d_n tracks the expected decay of psi_n: a row in block n
  // balances the lowering block (n+2 -> n) against z psi_n.
  double znorm = 0.0;
  for (const auto& c : label.z) znorm += std::norm(c);
  znorm = std::sqrt(znorm);
  std::vector<double> d(static_cast<std::size_t>(n_max + 1), 1.0);
  if (o.balance) {
    for (int n = 0; n + 2 <= n_max; ++n) {
      double lower = 0.0;
      for (int k : active) {
        const auto& m = Z[static_cast<std::size_t>(k)].matrix();
        for (Index r = basis.block_begin(n); r < basis.block_end(n); ++r)
          for (Index c = basis.block_begin(n + 2); c < basis.block_end(n + 2); ++c)
            lower = std::max(lower, std::abs(m(r, c)));
      }
      const double next = lower > 0.0 ? d[static_cast<std::size_t>(n)] * znorm / lower
                                      : d[static_cast<std::size_t>(n)];
      d[static_cast<std::size_t>(n + 2)] = std::max(next, 1e-280);
    }
  }
  auto scale = [&](Index i) { return d[static_cast<std::size_t>(basis.total(i))]; };

  Eigen::MatrixXcd A(nr * static_cast<Index>(active.size()), nc);
  for (std::size_t b = 0; b < active.size(); ++b) {
    const auto& m = Z[static_cast<std::size_t>(active[b])].matrix();
    const cd zk = label.z[static_cast<std::size_t>(active[b])];
    for (Index r = 0; r < nr; ++r) {
      const Index i = rows[static_cast<std::size_t>(r)];
      const double rs = 1.0 / (scale(i) * std::max(1.0, znorm));
      for (Index c = 0; c < nc; ++c) {
        const Index j = cols[static_cast<std::size_t>(c)];
        cd v = m(i, j);
        if (i == j) v -= zk;
        A(static_cast<Index>(b) * nr + r, c) = v * rs * scale(j);
      }
    }
  }

  // A wide system (fewer equations than unknowns) has a null space the thin
  // factorization would drop; pad its spectrum with zeros.
  const bool wide = A.rows() < A.cols();
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(A, wide ? Eigen::ComputeFullV : Eigen::ComputeThinV);
  Eigen::VectorXd sv = Eigen::VectorXd::Zero(nc);
  sv.head(svd.singularValues().size()) = svd.singularValues();
  const Index last = nc - 1;
  Eigen::VectorXcd y = svd.matrixV().col(last);

  CoherentState st;
  st.basis = basis_;
  st.label = label;
  st.unknowns = static_cast<std::size_t>(nc);
  st.equations = static_cast<std::size_t>(A.rows());
  st.smallest_singular = sv(last);
  st.second_singular = last > 0 ? sv(last - 1) : sv(last);
  st.degenerate = last == 0 || (st.second_singular - st.smallest_singular) <
                                   o.gap_threshold * std::max(1.0, sv(0));

  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(basis.dim());
  for (Index c = 0; c < nc; ++c) {
    const Index j = cols[static_cast<std::size_t>(c)];
    psi(j) = y(c) * scale(j);
  }
  psi.normalize();
  Index peak = 0;
  psi.cwiseAbs().maxCoeff(&peak);
  psi *= std::abs(psi(peak)) / psi(peak);
  st.coeffs = std::move(psi);

  // Residual over every guarded row, unscaled.
  double res = 0.0;
  const Index guarded_end = basis.block_end(n_max - o.guard);
  for (int k : active) {
    Eigen::VectorXcd v = Z[static_cast<std::size_t>(k)].matrix() * st.coeffs -
                         label.z[static_cast<std::size_t>(k)] * st.coeffs;
    res = std::max(res, v.head(guarded_end).norm());
  }
  st.residual = res;

  const Index top = basis.block_begin(n_max - o.guard + 1);
  st.tail_mass = st.coeffs.tail(basis.dim() - top).squaredNorm();
  st.residual_warning = !(st.residual <= o.residual_threshold);
  st.tail_warning = !(st.tail_mass <= o.tail_threshold);
  return st;
}

Expectations expectations(const CoherentState& state, const OperatorSet& set) {
  return expectations_with(state, set, set.Z);
}

namespace {

Expectations expectations_with(const CoherentState& state, const OperatorSet& set,
                               const VecOp& Z) {
  if (!state.basis) throw InvalidArgument("coherent state has no basis");
  require_same_basis(*state.basis, *set.basis, "expectations");
  const auto& psi = state.coeffs;
  Expectations e;
  auto ev = [&](const LinOp& op) -> cd { return psi.dot(op.matrix() * psi); };

  std::array<Eigen::VectorXcd, 3> Npsi, Pipsi;
  for (std::size_t k = 0; k < 3; ++k) {
    Npsi[k] = set.N[k].matrix() * psi;
    Pipsi[k] = set.Pi[k].matrix() * psi;
    e.N[k] = psi.dot(Npsi[k]);
    e.Pi[k] = psi.dot(Pipsi[k]);
    e.J[k] = ev(set.J[k]);
    e.Z[k] = state.label.z[k] +
             psi.dot(Z[k].matrix() * psi - state.label.z[k] * psi);
    // Hermitian: <O^2> = ||O psi||^2
    e.var_N[k] = Npsi[k].squaredNorm() - std::norm(e.N[k]);
    e.var_Pi[k] = Pipsi[k].squaredNorm() - std::norm(e.Pi[k]);
    e.N_dot_N += Npsi[k].squaredNorm();
    e.tangency += Npsi[k].dot(Pipsi[k]) + Pipsi[k].dot(Npsi[k]);
  }
  e.tail_mass = state.tail_mass;
  return e;
}

}  // namespace

double overlap(const CoherentState& a, const CoherentState& b) {
  if (!a.basis || !b.basis) throw InvalidArgument("coherent state has no basis");
  require_same_basis(*a.basis, *b.basis, "overlap");
  return std::abs(a.coeffs.dot(b.coeffs));
}

}  // namespace spherelab
