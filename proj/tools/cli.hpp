#pragma once

// spherelab command-line front end. The command functions are a library so
// tests can drive them without spawning processes.

#include <array>
#include <complex>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spherelab/coherent.hpp"
#include "spherelab/fock.hpp"

namespace spherelab::cli {

enum ExitCode : int {
  kOk = 0,
  kFailed = 1,
  kInconclusive = 2,
  kOverflow = 3,
  kCalibration = 4,
  kInvalid = 5,  ///< invalid label, unknown operator, or bad configuration
};

enum class Format { json, csv };

struct RunConfig {
  int n_max = 40;
  double eta = 1.0;
  double tol = 1e-10;
  int guard_extra = 2;
  int j_max = 8;
  std::string output_path;  ///< empty: standard output
  Format format = Format::json;
  Sector sector = Sector::integer_j;
  bool condon_shortley = true;  ///< xcheck negative control when false
};

/// Throws InvalidArgument when a field is out of range.
void validate(const RunConfig& config);

/// "a", "bi", "a+bi", "a-bi", "i", "-i".
std::complex<double> parse_complex(const std::string& text);
/// Three comma-separated complex numbers.
ComplexVec3 parse_complex3(const std::string& text);
/// Three comma-separated reals.
std::array<double, 3> parse_real3(const std::string& text);

/// Either a label or a classical phase point.
struct CoherentInput {
  std::optional<ComplexVec3> z;
  std::optional<std::array<double, 3>> x;
  std::optional<std::array<double, 3>> p;
};

const std::vector<std::string>& exportable_operators();

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_xcheck(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_coherent(const RunConfig& config, const CoherentInput& input, std::ostream& out,
                 std::ostream& err);
int cmd_export(const RunConfig& config, const std::string& op, std::ostream& out,
               std::ostream& err);

/// Parses argv and dispatches. Never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spherelab::cli
