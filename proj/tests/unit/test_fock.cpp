#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "spherelab/fock.hpp"

using namespace spherelab;
using cd = std::complex<double>;

namespace {

LinOp lower(const BasisPtr& b, int mode) { return ladder<double>(b, mode, LadderKind::lower); }
LinOp raise(const BasisPtr& b, int mode) { return ladder<double>(b, mode, LadderKind::raise); }

// Random operator with entries only inside the grade band.
LinOp random_graded(const BasisPtr& b, Grade g, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  LinOp::matrix_type m = LinOp::matrix_type::Zero(b->dim(), b->dim());
  for (Index c = 0; c < b->dim(); ++c)
    for (Index r = 0; r < b->dim(); ++r) {
      const int shift = b->total(r) - b->total(c);
      if (shift <= g.up && -shift <= g.down && d(rng) > 0.3) m(r, c) = cd(d(rng), d(rng));
    }
  return LinOp(b, m, g);
}

}  // namespace

TEST(FockBasis, OrderingAndIndex) {
  const FockBasis b(5);
  EXPECT_EQ(b.dim(), 21);
  EXPECT_EQ(b.state(0), (FockState{0, 0}));
  EXPECT_EQ(b.state(1), (FockState{1, 0}));
  EXPECT_EQ(b.state(2), (FockState{0, 1}));
  EXPECT_EQ(b.state(3), (FockState{2, 0}));
  for (Index i = 0; i < b.dim(); ++i) {
    const auto s = b.state(i);
    EXPECT_EQ(b.index(s), i);
    EXPECT_EQ(oracle::index(s.n1, s.n2), i);
    EXPECT_EQ(b.total(i), s.total());
  }
  EXPECT_FALSE(b.find({6, 0}).has_value());
  EXPECT_THROW(b.index({3, 3}), InvalidArgument);
  EXPECT_EQ(b.block_begin(2), 3);
  EXPECT_EQ(b.block_end(2), 6);
  EXPECT_EQ(b.block_begin(-3), 0);
  EXPECT_EQ(b.block_end(99), b.dim());
}

TEST(FockBasis, RejectsTinyTruncation) {
  EXPECT_THROW(FockBasis(1), InvalidArgument);
  EXPECT_NO_THROW(FockBasis(2));
}

TEST(FockBasis, ShiftedValue) {
  EXPECT_DOUBLE_EQ(FockBasis::shifted_value<double>(0), 0.5);
  EXPECT_DOUBLE_EQ(FockBasis::shifted_value<double>(7), 4.0);
}

TEST(Ladder, MatrixElementsAndHardTruncation) {
  const auto b = build_basis(4);
  const auto a1d = raise(b, 1);
  const auto a2 = lower(b, 2);
  EXPECT_NEAR(std::abs(a1d(b->index({3, 0}), b->index({2, 0})) - std::sqrt(3.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(a2(b->index({1, 1}), b->index({1, 2})) - std::sqrt(2.0)), 0.0, 1e-15);
  // raising out of the top block gives zero
  const auto top = b->index({2, 2});
  EXPECT_EQ(a1d.matrix().col(top).norm(), 0.0);
  EXPECT_EQ(a1d.grade(), (Grade{1, 0}));
  EXPECT_EQ(a2.grade(), (Grade{0, 1}));
  EXPECT_THROW(ladder<double>(b, 3, LadderKind::raise), InvalidArgument);
}

TEST(Ladder, MatchesOracle) {
  const auto b = build_basis(6);
  for (int mode : {1, 2})
    for (bool up : {false, true}) {
      const auto op = ladder<double>(b, mode, up ? LadderKind::raise : LadderKind::lower);
      EXPECT_LT(oracle::max_diff(oracle::from(op), oracle::ladder(6, mode, up), 6), 1e-15);
    }
}

TEST(Ladder, CanonicalCommutatorBelowTop) {
  const auto b = build_basis(6);
  const auto c = commutator(lower(b, 1), raise(b, 1));
  // [a, a^dag] = 1 except on the top block, where a^dag truncates
  const auto sub = guarded_subspace(*b, 1, Sector::all);
  EXPECT_LT(residual(c, LinOp::identity(b), sub), 1e-15);
  const auto top = b->index({6, 0});
  EXPECT_NEAR(c(top, top).real(), -6.0, 1e-14);
}

TEST(LinOp, GradeArithmetic) {
  const auto b = build_basis(6);
  const auto a1d = raise(b, 1);
  const auto a2 = lower(b, 2);
  EXPECT_EQ((a1d * a1d).grade(), (Grade{2, 0}));
  EXPECT_EQ((a1d * a2).grade(), (Grade{1, 1}));
  EXPECT_EQ((a1d + a2).grade(), (Grade{1, 1}));
  EXPECT_EQ(adjoint(a1d).grade(), (Grade{0, 1}));
  EXPECT_EQ((a1d * a2).narrowed({0, 0}).grade(), (Grade{0, 0}));
  EXPECT_EQ((a1d * a2).measured_grade(), (Grade{0, 0}));
  EXPECT_THROW(a1d.narrowed({0, 0}), InvalidArgument);
  EXPECT_EQ((a1d * a1d).width(), 2);
}

TEST(LinOp, ConstructorRejectsEntriesOutsideGrade) {
  const auto b = build_basis(3);
  LinOp::matrix_type m = LinOp::matrix_type::Zero(b->dim(), b->dim());
  m(b->index({1, 0}), 0) = 1.0;  // raises n by one
  EXPECT_THROW(LinOp(b, m, Grade{0, 0}), InvalidArgument);
  EXPECT_NO_THROW(LinOp(b, m, Grade{1, 0}));
  EXPECT_THROW(LinOp(b, LinOp::matrix_type::Zero(3, 3), Grade{}), InvalidArgument);
}

TEST(LinOp, BandProductMatchesDenseProduct) {
  std::mt19937_64 rng(1234);
  const auto b = build_basis(9);
  const Grade grades[] = {{0, 0}, {1, 0}, {0, 2}, {2, 2}, {1, 3}};
  for (auto ga : grades)
    for (auto gb : grades) {
      const auto x = random_graded(b, ga, rng);
      const auto y = random_graded(b, gb, rng);
      const auto p = x * y;
      EXPECT_LT((p.matrix() - x.matrix() * y.matrix()).cwiseAbs().maxCoeff(), 1e-13);
      EXPECT_EQ(p.grade(), compose(ga, gb));
    }
}

TEST(LinOp, BasisMismatchThrows) {
  const auto a = build_basis(3);
  const auto c = build_basis(4);
  EXPECT_THROW(raise(a, 1) * raise(c, 1), BasisMismatch);
  EXPECT_THROW(raise(a, 1) + raise(c, 1), BasisMismatch);
}

TEST(FusedApply, EquivalentToDiagonalProductWhereDefined) {
  const auto b = build_basis(8);
  const SFunction<double> f = [](const double& S) { return cd(std::exp(S) / (S + 1.0), 0.0); };
  const auto mono = raise(b, 1) * raise(b, 2);
  const auto left = fused_apply(f, mono);
  const auto right = fused_apply_right(mono, f);
  const auto D = diag_S_fn(b, f);
  EXPECT_LT((left.matrix() - D.matrix() * mono.matrix()).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LT((right.matrix() - mono.matrix() * D.matrix()).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_EQ(left.grade(), mono.grade());
}

TEST(FusedApply, SingularFactorOnlyEvaluatedOnReachedRows) {
  const auto b = build_basis(6);
  // 1/(S-1) is infinite at S = 1 (n = 1) but a1^dag a1^dag never lands there
  const SFunction<double> f = [](const double& S) { return cd(1.0 / (S - 1.0), 0.0); };
  const auto mono = raise(b, 1) * raise(b, 1);
  EXPECT_NO_THROW(fused_apply(f, mono));
  try {
    diag_S_fn(b, f);
    FAIL() << "expected SingularFunction";
  } catch (const SingularFunction& e) {
    EXPECT_EQ(e.total_n(), 1);
  }
  EXPECT_THROW(fused_apply(f, LinOp::identity(b)), SingularFunction);
}

TEST(Subspace, GuardBandSizes) {
  const FockBasis b(10);
  EXPECT_EQ(guarded_subspace(b, 0).size(), static_cast<std::size_t>(b.dim()));
  EXPECT_EQ(guarded_subspace(b, 4).size(), 28u);                       // n <= 6
  EXPECT_EQ(guarded_subspace(b, 4, Sector::integer_j).size(), 16u);    // n = 0,2,4,6
  EXPECT_EQ(guarded_subspace(b, 4, Sector::all, 3).size(), 10u);       // capped at n <= 3
  const auto empty = guarded_subspace(b, 11);
  EXPECT_TRUE(empty.empty());
  EXPECT_TRUE(empty.warning);
  EXPECT_EQ(parse_sector("all"), Sector::all);
  EXPECT_EQ(parse_sector("integer_j"), Sector::integer_j);
  EXPECT_FALSE(parse_sector("odd").has_value());
}

TEST(Residual, Definition) {
  const auto b = build_basis(3);
  const auto id = LinOp::identity(b);
  const auto two = cd(2.0) * id;
  const auto sub = guarded_subspace(*b, 0);
  // max |2 - 1| / (1 + 1)
  EXPECT_DOUBLE_EQ(residual(two, id, sub), 0.5);
  EXPECT_DOUBLE_EQ(residual(two, LinOp::zero(b), sub), 2.0);
  EXPECT_DOUBLE_EQ(max_abs(two, sub), 2.0);
}

TEST(VecOp, CrossAndDot) {
  const auto b = build_basis(4);
  const auto a1d = raise(b, 1), a2d = raise(b, 2), a1 = lower(b, 1);
  const VecOp u(a1d, a2d, a1);
  const VecOp v(a1, a1d, a2d);
  const auto w = cross(u, v);
  EXPECT_LT((w.z().matrix() - (a1d * a1d - a2d * a1).matrix()).cwiseAbs().maxCoeff(), 1e-15);
  const auto d = dot(u, v);
  EXPECT_LT((d.matrix() - (a1d * a1 + a2d * a1d + a1 * a2d).matrix()).cwiseAbs().maxCoeff(),
            1e-15);
  EXPECT_THROW(VecOp(a1, a1, raise(build_basis(5), 1)), BasisMismatch);
}

TEST(Precision, QuadMatchesDoubleLadderAndRounds) {
  const auto b = build_basis(5);
  const auto q = ladder<Quad>(b, 1, LadderKind::raise);
  const auto d = raise(b, 1);
  EXPECT_EQ((rounded(q).matrix() - d.matrix()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(rounded(q).grade(), d.grade());
}
