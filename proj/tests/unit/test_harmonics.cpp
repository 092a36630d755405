#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "spherelab/error.hpp"
#include "spherelab/harmonics.hpp"

using namespace spherelab;
using cd = std::complex<double>;
using std::numbers::pi;

TEST(Quadrature, GaussLegendreWeightsAndExactness) {
  std::vector<double> x, w;
  gauss_legendre(10, x, w);
  ASSERT_EQ(x.size(), 10u);
  double sum = 0.0;
  for (double v : w) sum += v;
  EXPECT_NEAR(sum, 2.0, 1e-14);
  EXPECT_TRUE(std::is_sorted(x.begin(), x.end()));
  // exact through degree 19
  for (int k = 0; k <= 19; ++k) {
    double q = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) q += w[i] * std::pow(x[i], k);
    const double exact = (k % 2 == 1) ? 0.0 : 2.0 / (k + 1);
    EXPECT_NEAR(q, exact, 1e-14) << k;
  }
  EXPECT_THROW(gauss_legendre(0, x, w), InvalidArgument);
}

TEST(Quadrature, GridShape) {
  const auto t = build_table(8);
  EXPECT_EQ(t.grid.L(), 20u);
  EXPECT_EQ(t.grid.M(), 40u);
  EXPECT_EQ(t.j_table, 9);
  EXPECT_EQ(t.Y.rows(), HarmonicTable::count(9));
  EXPECT_EQ(t.Y.cols(), static_cast<Index>(t.grid.size()));
  EXPECT_NEAR(t.weights.sum(), 4.0 * pi, 1e-12);
  EXPECT_THROW(build_table(0), InvalidArgument);
}

class Orthonormality : public ::testing::TestWithParam<int> {};

TEST_P(Orthonormality, GramIsIdentity) {
  const auto t = build_table(GetParam());
  const auto G = gram_matrix(t);
  EXPECT_LT((G - Eigen::MatrixXcd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff(), 1e-13);
}

INSTANTIATE_TEST_SUITE_P(Harmonics, Orthonormality, ::testing::Values(2, 8, 12));

TEST(Harmonics, ClosedFormsWithCondonShortley) {
  const auto t = build_table(3);
  const auto& g = t.grid;
  double worst = 0.0;
  for (std::size_t it = 0; it < g.L(); ++it)
    for (std::size_t ip = 0; ip < g.M(); ++ip) {
      const Index node = static_cast<Index>(it * g.M() + ip);
      const double c = g.cos_theta[it], s = std::sin(g.theta[it]), ph = g.phi[ip];
      const cd y00(0.5 / std::sqrt(pi), 0.0);
      const cd y10(std::sqrt(3.0 / (4 * pi)) * c, 0.0);
      const cd y11 = -std::sqrt(3.0 / (8 * pi)) * s * std::exp(cd(0, ph));
      const cd y1m = std::sqrt(3.0 / (8 * pi)) * s * std::exp(cd(0, -ph));
      const cd y20(std::sqrt(5.0 / (16 * pi)) * (3 * c * c - 1), 0.0);
      worst = std::max({worst, std::abs(t.Y(HarmonicTable::lm_index(0, 0), node) - y00),
                        std::abs(t.Y(HarmonicTable::lm_index(1, 0), node) - y10),
                        std::abs(t.Y(HarmonicTable::lm_index(1, 1), node) - y11),
                        std::abs(t.Y(HarmonicTable::lm_index(1, -1), node) - y1m),
                        std::abs(t.Y(HarmonicTable::lm_index(2, 0), node) - y20)});
      // d_th Y00 = 0, d_th Y10 = -sqrt(3/4pi) sin
      worst = std::max({worst, std::abs(t.dtheta(HarmonicTable::lm_index(0, 0), node)),
                        std::abs(t.dtheta(HarmonicTable::lm_index(1, 0), node) +
                                 std::sqrt(3.0 / (4 * pi)) * s)});
    }
  EXPECT_LT(worst, 1e-14);
}

TEST(Harmonics, WithoutCondonShortleyOnlyPositiveMFlips) {
  const auto a = build_table(3);
  const auto b = build_table(3, {.condon_shortley = false});
  EXPECT_FALSE(b.condon_shortley);
  for (int m = -3; m <= 3; ++m) {
    const Index r = HarmonicTable::lm_index(3, m);
    const double sign = (m > 0 && m % 2 == 1) ? -1.0 : 1.0;
    EXPECT_LT((b.Y.row(r) - sign * a.Y.row(r)).cwiseAbs().maxCoeff(), 1e-15) << m;
  }
}

TEST(Oracle, SpotValuesOnTheLowestBlock) {
  const auto t = build_table(4);
  const auto Nz = oracle_matrix(Axis::z, OracleKind::N, t);
  const auto Piz = oracle_matrix(Axis::z, OracleKind::Pi, t);
  const Index s = HarmonicTable::lm_index(0, 0), p = HarmonicTable::lm_index(1, 0);
  EXPECT_LT(std::abs(Nz(p, s) - cd(1 / std::sqrt(3.0), 0)), 1e-14);
  EXPECT_LT(std::abs(Piz(p, s) - cd(0, 1 / std::sqrt(3.0))), 1e-14);
  EXPECT_LT(std::abs(Nz(s, s)), 1e-15);
}

TEST(Oracle, HermitianOnSquareBlock) {
  const auto t = build_table(6);
  const Index d = HarmonicTable::count(6);
  for (auto kind : {OracleKind::N, OracleKind::Pi})
    for (auto axis : {Axis::x, Axis::y, Axis::z}) {
      const Eigen::MatrixXcd m = oracle_matrix(axis, kind, t).topRows(d);
      EXPECT_LT((m - m.adjoint()).cwiseAbs().maxCoeff(), 1e-13)
          << to_string(kind) << to_string(axis);
    }
}

TEST(Oracle, PiSquaredFromQuadrature) {
  const int j_max = 7;
  const auto t = build_table(j_max);
  Eigen::MatrixXcd pi2 = Eigen::MatrixXcd::Zero(HarmonicTable::count(j_max),
                                                 HarmonicTable::count(j_max));
  Eigen::MatrixXcd nn = pi2;
  for (auto axis : {Axis::x, Axis::y, Axis::z}) {
    // rows run to j_max + 1, so every intermediate state is present
    const auto P = oracle_matrix(axis, OracleKind::Pi, t, j_max + 1);
    const auto N = oracle_matrix(axis, OracleKind::N, t, j_max + 1);
    pi2 += P.adjoint() * P;
    nn += N.adjoint() * N;
  }
  for (int j = 0; j <= j_max; ++j)
    for (int m = -j; m <= j; ++m) {
      const Index i = HarmonicTable::lm_index(j, m);
      EXPECT_NEAR(pi2(i, i).real(), j * (j + 1) + 1.0, 1e-11);
      EXPECT_NEAR(nn(i, i).real(), 1.0, 1e-13);
    }
  EXPECT_THROW(oracle_matrix(Axis::z, OracleKind::N, t, j_max + 2), InvalidArgument);
}

TEST(Embedding, SchwingerLabels) {
  EXPECT_EQ(embed(0, 0, 4), (FockState{0, 0}));
  EXPECT_EQ(embed(1, -1, 4), (FockState{0, 2}));
  EXPECT_EQ(embed(2, 1, 4), (FockState{3, 1}));
  EXPECT_THROW(embed(1, 2, 4), InvalidArgument);
  EXPECT_THROW(embed(-1, 0, 4), InvalidArgument);
  EXPECT_THROW(embed(3, 0, 4), InvalidArgument);
}

TEST(Embedding, RaisingElementAgreesInBothPictures) {
  const auto t = build_table(3);
  const auto Lp = lplus_oracle(t);
  const auto set = build_operator_set<double>(build_basis(8), 1.0);
  const auto& b = *set.basis;
  const cd jplus = set.J.x()(b.index(embed(1, 1, 8)), b.index(embed(1, 0, 8))) +
                   cd(0, 1) * set.J.y()(b.index(embed(1, 1, 8)), b.index(embed(1, 0, 8)));
  const cd lplus = Lp(HarmonicTable::lm_index(1, 1), HarmonicTable::lm_index(1, 0));
  EXPECT_LT(std::abs(jplus - cd(std::sqrt(2.0), 0)), 1e-14);
  EXPECT_LT(std::abs(lplus - cd(std::sqrt(2.0), 0)), 1e-13);
}

TEST(Xcheck, AgreesWithSchwingerConstruction) {
  const int j_max = 6;
  const auto t = build_table(j_max);
  const auto set = build_operator_set<double>(build_basis(2 * j_max + 2), 1.0);
  const auto rep = xcheck(set, t, j_max);
  EXPECT_TRUE(rep.calibration.passed);
  EXPECT_LT(rep.calibration.jz_deviation, 1e-12);
  EXPECT_LT(rep.calibration.jplus_deviation, 1e-12);
  ASSERT_EQ(rep.entries.size(), 6u);
  for (const auto& e : rep.entries) EXPECT_LT(e.max_deviation, 1e-9);
  EXPECT_LT(rep.max_deviation(), 1e-9);
}

TEST(Xcheck, PhaseConventionMismatchIsCaught) {
  const auto t = build_table(4, {.condon_shortley = false});
  const auto set = build_operator_set<double>(build_basis(10), 1.0);
  const auto cal = calibrate(set, t, 4);
  EXPECT_FALSE(cal.passed);
  EXPECT_GT(cal.jplus_deviation, 0.1);
  EXPECT_FALSE(cal.diagnostic.empty());
  EXPECT_THROW(xcheck(set, t, 4), CalibrationError);
}

TEST(Xcheck, RequiresHeadroom) {
  const auto t = build_table(6);
  const auto small = build_operator_set<double>(build_basis(12), 1.0);
  EXPECT_THROW(xcheck(small, t, 6), InvalidArgument);  // needs n_max >= 14
  const auto big = build_operator_set<double>(build_basis(20), 1.0);
  EXPECT_THROW(xcheck(big, t, 7), InvalidArgument);  // table too small
  EXPECT_NO_THROW(xcheck(big, t, 5));
}
