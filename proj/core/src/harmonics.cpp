#include "spherelab/harmonics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace spherelab {

namespace {

using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;
constexpr cd I{0.0, 1.0};

double ladder_coeff(int j, int m) {
  return std::sqrt(static_cast<double>((j - m) * (j + m + 1)));
}

void check_axis(Axis a) {
  if (a != Axis::x && a != Axis::y && a != Axis::z) throw InvalidArgument("bad axis");
}

// Node-wise action of N or Pi on the column state (j, m).
Eigen::VectorXcd apply_op(Axis axis, OracleKind kind, const HarmonicTable& t, int j, int m) {
  const auto& g = t.grid;
  const Index row = HarmonicTable::lm_index(j, m);
  Eigen::VectorXcd out(static_cast<Index>(g.size()));
  for (std::size_t it = 0; it < g.L(); ++it) {
    const double ct = g.cos_theta[it];
    const double st = std::sin(g.theta[it]);
    for (std::size_t ip = 0; ip < g.M(); ++ip) {
      const Index node = static_cast<Index>(it * g.M() + ip);
      const double cp = std::cos(g.phi[ip]);
      const double sp = std::sin(g.phi[ip]);
      const cd y = t.Y(row, node);
      cd v;
      if (kind == OracleKind::N) {
        switch (axis) {
          case Axis::x: v = st * cp * y; break;
          case Axis::y: v = st * sp * y; break;
          case Axis::z: v = ct * y; break;
        }
      } else {
        const cd d = t.dtheta(row, node);
        const cd dphi = I * double(m) * y;
        switch (axis) {
          case Axis::x: v = -I * (ct * cp * d - sp / st * dphi - st * cp * y); break;
          case Axis::y: v = -I * (ct * sp * d + cp / st * dphi - st * sp * y); break;
          case Axis::z: v = -I * (-st * d - ct * y); break;
        }
      }
      out(node) = v;
    }
  }
  return out;
}

// <Y_rows | f_cols> with f given node-wise per column.
Eigen::MatrixXcd project(const HarmonicTable& t, Index rows, const Eigen::MatrixXcd& f) {
  return t.Y.topRows(rows).conjugate() * t.weights.asDiagonal() * f;
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw InvalidArgument("Gauss-Legendre order must be positive");
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute the derivative at the converged node
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
}

HarmonicTable build_table(int j_max, const TableOptions& options) {
  if (j_max < 1) throw InvalidArgument("j_max must be at least 1");
  HarmonicTable t;
  t.j_max = j_max;
  t.j_table = j_max + 1;
  t.condon_shortley = options.condon_shortley;

  auto& g = t.grid;
  gauss_legendre(2 * j_max + 4, g.cos_theta, g.theta_weights);
  for (double x : g.cos_theta) g.theta.push_back(std::acos(x));
  const int M = 4 * j_max + 8;
  for (int k = 0; k < M; ++k) g.phi.push_back(2.0 * pi * k / M);

  const Index nodes = static_cast<Index>(g.size());
  const Index rows = HarmonicTable::count(t.j_table);
  t.Y.resize(rows, nodes);
  t.dtheta.resize(rows, nodes);
  t.weights.resize(nodes);

  for (std::size_t it = 0; it < g.L(); ++it) {
    for (std::size_t ip = 0; ip < g.M(); ++ip) {
      const Index node = static_cast<Index>(it * g.M() + ip);
      t.weights(node) = g.theta_weights[it] * 2.0 * pi / M;
      for (int j = 0; j <= t.j_table; ++j) {
        for (int m = 0; m <= j; ++m) {
          // std::sph_legendre carries the (-1)^m Condon-Shortley phase.
          double v = std::sph_legendre(static_cast<unsigned>(j), static_cast<unsigned>(m),
                                       g.theta[it]);
          if (!options.condon_shortley && (m % 2 == 1)) v = -v;
          const cd y = v * std::exp(I * (m * g.phi[ip]));
          t.Y(HarmonicTable::lm_index(j, m), node) = y;
          if (m > 0) {
            const double sign = (m % 2 == 0) ? 1.0 : -1.0;
            const double back = options.condon_shortley ? sign : 1.0;
            t.Y(HarmonicTable::lm_index(j, -m), node) = back * std::conj(y);
          }
        }
      }
    }
  }

  // d_th Y_jm = m cot(th) Y_jm + sqrt((j-m)(j+m+1)) e^{-i ph} Y_{j,m+1}
  for (std::size_t it = 0; it < g.L(); ++it) {
    const double cot = g.cos_theta[it] / std::sin(g.theta[it]);
    for (std::size_t ip = 0; ip < g.M(); ++ip) {
      const Index node = static_cast<Index>(it * g.M() + ip);
      const cd down = std::exp(-I * g.phi[ip]);
      for (int j = 0; j <= t.j_table; ++j) {
        for (int m = -j; m <= j; ++m) {
          cd d = double(m) * cot * t.Y(HarmonicTable::lm_index(j, m), node);
          if (m < j) d += ladder_coeff(j, m) * down * t.Y(HarmonicTable::lm_index(j, m + 1), node);
          t.dtheta(HarmonicTable::lm_index(j, m), node) = d;
        }
      }
    }
  }
  return t;
}

const char* to_string(Axis a) {
  switch (a) {
    case Axis::x: return "x";
    case Axis::y: return "y";
    case Axis::z: return "z";
  }
  return "?";
}

const char* to_string(OracleKind k) { return k == OracleKind::N ? "N" : "Pi"; }

Eigen::MatrixXcd oracle_matrix(Axis axis, OracleKind kind, const HarmonicTable& table,
                               int j_rows) {
  check_axis(axis);
  if (j_rows < 0) j_rows = table.j_max;
  if (j_rows > table.j_table) {
    std::ostringstream os;
    os << "oracle rows up to j=" << j_rows << " need a table with j_max >= " << j_rows - 1
       << " (have " << table.j_max << ")";
    throw InvalidArgument(os.str());
  }
  const Index cols = HarmonicTable::count(table.j_max);
  Eigen::MatrixXcd f(static_cast<Index>(table.grid.size()), cols);
  for (int j = 0; j <= table.j_max; ++j)
    for (int m = -j; m <= j; ++m)
      f.col(HarmonicTable::lm_index(j, m)) = apply_op(axis, kind, table, j, m);
  return project(table, HarmonicTable::count(j_rows), f);
}

Eigen::MatrixXcd gram_matrix(const HarmonicTable& table) {
  return project(table, table.Y.rows(), table.Y.transpose());
}

Eigen::MatrixXcd lz_oracle(const HarmonicTable& table) {
  const Index cols = HarmonicTable::count(table.j_max);
  Eigen::MatrixXcd f(static_cast<Index>(table.grid.size()), cols);
  for (int j = 0; j <= table.j_max; ++j)
    for (int m = -j; m <= j; ++m) {
      const Index c = HarmonicTable::lm_index(j, m);
      f.col(c) = double(m) * table.Y.row(c).transpose();  // -i d_ph
    }
  return project(table, cols, f);
}

Eigen::MatrixXcd lplus_oracle(const HarmonicTable& table) {
  const auto& g = table.grid;
  const Index cols = HarmonicTable::count(table.j_max);
  Eigen::MatrixXcd f(static_cast<Index>(g.size()), cols);
  for (int j = 0; j <= table.j_max; ++j) {
    for (int m = -j; m <= j; ++m) {
      const Index c = HarmonicTable::lm_index(j, m);
      // sin(th) d_th Y_jm = j cos(th) Y_jm - sqrt((2j+1)/(2j-1) (j^2-m^2)) Y_{j-1,m}
      const double back =
          (std::abs(m) < j) ? std::sqrt((2.0 * j + 1) / (2.0 * j - 1) * (j * j - m * m)) : 0.0;
      for (std::size_t it = 0; it < g.L(); ++it) {
        const double ct = g.cos_theta[it];
        const double st = std::sin(g.theta[it]);
        for (std::size_t ip = 0; ip < g.M(); ++ip) {
          const Index node = static_cast<Index>(it * g.M() + ip);
          const cd y = table.Y(c, node);
          cd sd = double(j) * ct * y;
          if (back != 0.0) sd -= back * table.Y(HarmonicTable::lm_index(j - 1, m), node);
          // e^{i ph} (d_th - m cot(th)) Y
          f(node, c) = std::exp(I * g.phi[ip]) * (sd - double(m) * ct * y) / st;
        }
      }
    }
  }
  return project(table, cols, f);
}

FockState embed(int j, int m, int n_max) {
  if (j < 0 || std::abs(m) > j) {
    std::ostringstream os;
    os << "invalid (j, m) = (" << j << ", " << m << ")";
    throw InvalidArgument(os.str());
  }
  if (2 * j > n_max) {
    std::ostringstream os;
    os << "j = " << j << " needs n = " << 2 * j << " > n_max = " << n_max;
    throw InvalidArgument(os.str());
  }
  return {j + m, j - m};
}

namespace {

struct Worst {
  double value = 0.0;
  int jr = 0, mr = 0, jc = 0, mc = 0;
};

// Compares a harmonic-picture matrix over j <= j_max with a Schwinger operator.
Worst compare(const Eigen::MatrixXcd& oracle, const LinOp& op, int j_max) {
  const auto& basis = op.basis();
  Worst w;
  for (int jr = 0; jr <= j_max; ++jr)
    for (int mr = -jr; mr <= jr; ++mr)
      for (int jc = 0; jc <= j_max; ++jc)
        for (int mc = -jc; mc <= jc; ++mc) {
          const Index r = basis.index(embed(jr, mr, basis.n_max()));
          const Index c = basis.index(embed(jc, mc, basis.n_max()));
          const double d = std::abs(oracle(HarmonicTable::lm_index(jr, mr),
                                           HarmonicTable::lm_index(jc, mc)) -
                                    op(r, c));
          if (d > w.value) w = {d, jr, mr, jc, mc};
        }
  return w;
}

void check_xcheck_config(const OperatorSet& set, const HarmonicTable& table, int j_max) {
  if (j_max < 1 || j_max > table.j_max) {
    std::ostringstream os;
    os << "j_max = " << j_max << " must lie in [1, " << table.j_max << "] for this table";
    throw InvalidArgument(os.str());
  }
  const int n_max = set.basis->n_max();
  if (2 * j_max + 2 > n_max) {
    std::ostringstream os;
    os << "j_max = " << j_max << " needs n_max >= " << 2 * j_max + 2 << " (have " << n_max
       << ")";
    throw InvalidArgument(os.str());
  }
}

}  // namespace

CalibrationReport calibrate(const OperatorSet& set, const HarmonicTable& table, int j_max,
                            double tolerance) {
  check_xcheck_config(set, table, j_max);
  CalibrationReport rep;
  rep.tolerance = tolerance;
  const LinOp jplus = set.J.x() + cd(0.0, 1.0) * set.J.y();
  const auto wz = compare(lz_oracle(table), set.J.z(), j_max);
  const auto wp = compare(lplus_oracle(table), jplus, j_max);
  rep.jz_deviation = wz.value;
  rep.jplus_deviation = wp.value;
  rep.passed = wz.value <= tolerance && wp.value <= tolerance;
  if (!rep.passed) {
    const auto& w = wz.value > wp.value ? wz : wp;
    std::ostringstream os;
    os << "J calibration failed: " << (wz.value > wp.value ? "J_z" : "J_+") << " element <"
       << w.jr << "," << w.mr << "|.|" << w.jc << "," << w.mc << "> differs by " << w.value
       << " (tolerance " << tolerance << "); check the spherical-harmonic phase convention";
    rep.diagnostic = os.str();
  }
  return rep;
}

double XcheckReport::max_deviation() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, e.max_deviation);
  return m;
}

XcheckReport xcheck(const OperatorSet& set, const HarmonicTable& table, int j_max) {
  XcheckReport rep;
  rep.j_max = j_max;
  rep.n_max = set.basis->n_max();
  rep.calibration = calibrate(set, table, j_max);
  if (!rep.calibration.passed) throw CalibrationError(rep.calibration.diagnostic);

  for (auto kind : {OracleKind::N, OracleKind::Pi}) {
    const auto& vec = kind == OracleKind::N ? set.N : set.Pi;
    for (auto axis : {Axis::x, Axis::y, Axis::z}) {
      const auto w = compare(oracle_matrix(axis, kind, table),
                             vec[static_cast<std::size_t>(axis)], j_max);
      rep.entries.push_back({kind, axis, w.value, w.jr, w.mr, w.jc, w.mc});
    }
  }
  return rep;
}

}  // namespace spherelab
