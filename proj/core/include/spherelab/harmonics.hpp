#pragma once

// Independent realization of N and Pi on spherical harmonics: N is
// multiplication by the unit vector, Pi the geometric momentum
//   Pi_x = -i (cos(th) cos(ph) d_th - sin(ph)/sin(th) d_ph - sin(th) cos(ph))
//   Pi_y = -i (cos(th) sin(ph) d_th + cos(ph)/sin(th) d_ph - sin(th) sin(ph))
//   Pi_z = -i (-sin(th) d_th - cos(th))
// Matrix elements come from Gauss-Legendre x uniform-phi quadrature, which is
// exact for the band-limited integrands involved. Used as ground truth for the
// Schwinger-boson construction on the integer-j sector.

#include <vector>

#include <Eigen/Dense>

#include "spherelab/operators.hpp"

namespace spherelab {

struct SphGrid {
  std::vector<double> cos_theta;      ///< Gauss-Legendre nodes in cos(theta), ascending
  std::vector<double> theta;          ///< acos of the nodes
  std::vector<double> theta_weights;  ///< sum to 2
  std::vector<double> phi;            ///< 2 pi k / M

  std::size_t L() const noexcept { return cos_theta.size(); }
  std::size_t M() const noexcept { return phi.size(); }
  std::size_t size() const noexcept { return L() * M(); }
};

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

struct TableOptions {
  /// Include the (-1)^m Condon-Shortley phase. Turning it off is a negative
  /// control: calibration against the Schwinger construction must then fail.
  bool condon_shortley = true;
};

/// Samples of Y_jm and its theta derivative on a grid, for j <= j_max + 1.
/// Columns are grid nodes (theta-major); rows are (j, m) in lm_index order.
struct HarmonicTable {
  int j_max = 0;
  int j_table = 0;  ///< j_max + 1 headroom
  bool condon_shortley = true;
  SphGrid grid;
  Eigen::MatrixXcd Y;
  Eigen::MatrixXcd dtheta;  ///< d/dtheta Y_jm via the m-ladder identity
  Eigen::VectorXd weights;  ///< full quadrature weight per node

  static Index lm_index(int j, int m) noexcept { return Index(j) * j + j + m; }
  static Index count(int j_max) noexcept { return Index(j_max + 1) * (j_max + 1); }
};

/// Grid L = 2 j_max + 4, M = 4 j_max + 8. Throws InvalidArgument for j_max < 1.
HarmonicTable build_table(int j_max, const TableOptions& options = {});

enum class Axis { x, y, z };
enum class OracleKind { N, Pi };

const char* to_string(Axis a);
const char* to_string(OracleKind k);

/// <j'm'|op|jm> for j <= table.j_max (columns) and j' <= j_rows (rows);
/// j_rows defaults to table.j_max. Throws InvalidArgument when j_rows exceeds
/// the table's headroom.
Eigen::MatrixXcd oracle_matrix(Axis axis, OracleKind kind, const HarmonicTable& table,
                               int j_rows = -1);

/// Gram matrix <Y_j'm'|Y_jm> over the whole table.
Eigen::MatrixXcd gram_matrix(const HarmonicTable& table);

/// L_z and L_+ = e^{i ph}(d_th + i cot(th) d_ph) by quadrature over j <= j_max.
/// d_th comes from an m-preserving recurrence in j, so a phase error in the
/// table shows up here instead of cancelling.
Eigen::MatrixXcd lz_oracle(const HarmonicTable& table);
Eigen::MatrixXcd lplus_oracle(const HarmonicTable& table);

/// (n1, n2) = (j + m, j - m). Throws InvalidArgument for |m| > j, j < 0, or
/// 2j > n_max.
FockState embed(int j, int m, int n_max);

struct CalibrationReport {
  double jz_deviation = 0.0;
  double jplus_deviation = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string diagnostic;
};

/// Compares J_z and J_+ between the harmonic and Schwinger pictures under embed.
CalibrationReport calibrate(const OperatorSet& set, const HarmonicTable& table, int j_max,
                            double tolerance = 1e-10);

struct XcheckEntry {
  OracleKind kind = OracleKind::N;
  Axis axis = Axis::x;
  double max_deviation = 0.0;
  /// Where the largest deviation sits: <j_row m_row| op |j_col m_col>.
  int j_row = 0, m_row = 0, j_col = 0, m_col = 0;
};

struct XcheckReport {
  int j_max = 0;
  int n_max = 0;
  CalibrationReport calibration;
  std::vector<XcheckEntry> entries;  ///< N then Pi, each x, y, z

  double max_deviation() const;
};

/// Full cross-representation comparison. Throws InvalidArgument unless
/// 1 <= j_max <= table.j_max and 2 j_max + 2 <= n_max; throws CalibrationError
/// when J disagrees between the two pictures.
XcheckReport xcheck(const OperatorSet& set, const HarmonicTable& table, int j_max);

}  // namespace spherelab
