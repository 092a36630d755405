#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

using namespace spherelab;
using namespace spherelab::cli;
using json = nlohmann::json;
using cd = std::complex<double>;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "spherelab");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "spherelab_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(ParseComplex, Forms) {
  EXPECT_EQ(parse_complex("1.5"), cd(1.5, 0));
  EXPECT_EQ(parse_complex("-2"), cd(-2, 0));
  EXPECT_EQ(parse_complex("i"), cd(0, 1));
  EXPECT_EQ(parse_complex("-i"), cd(0, -1));
  EXPECT_EQ(parse_complex("3i"), cd(0, 3));
  EXPECT_EQ(parse_complex("1+2i"), cd(1, 2));
  EXPECT_EQ(parse_complex("1-i"), cd(1, -1));
  EXPECT_EQ(parse_complex(" 1e-3 + 2e+1i "), cd(1e-3, 20));
  EXPECT_EQ(parse_complex("-1.5e2-0.5i"), cd(-150, -0.5));
  EXPECT_THROW(parse_complex(""), InvalidArgument);
  EXPECT_THROW(parse_complex("abc"), InvalidArgument);
  EXPECT_THROW(parse_complex("1+2j"), InvalidArgument);
}

TEST(ParseComplex, Triples) {
  const auto z = parse_complex3("0,0,1");
  EXPECT_EQ(z[2], cd(1, 0));
  EXPECT_THROW(parse_complex3("1,2"), InvalidArgument);
  const auto x = parse_real3("1, 0, 0");
  EXPECT_EQ(x[0], 1.0);
  EXPECT_THROW(parse_real3("1,i,0"), InvalidArgument);
}

TEST(Config, Validation) {
  RunConfig c;
  EXPECT_NO_THROW(validate(c));
  c.n_max = 1;
  EXPECT_THROW(validate(c), InvalidArgument);
  c = {};
  c.eta = 0.0;
  EXPECT_THROW(validate(c), InvalidArgument);
  c = {};
  c.tol = -1;
  EXPECT_THROW(validate(c), InvalidArgument);
}

TEST(Verify, JsonDocumentAndFailureExit) {
  // n_max 14 keeps the plus-sign cross relation visibly wrong
  const auto r = invoke({"verify", "--nmax", "14"});
  EXPECT_EQ(r.code, kFailed);
  const auto doc = json::parse(r.out);
  EXPECT_EQ(doc["schema_version"], 1);
  EXPECT_EQ(doc["command"], "verify");
  EXPECT_EQ(doc["config"]["n_max"], 14);
  EXPECT_EQ(doc["reports"].size(), 45u);
  EXPECT_EQ(doc["summary"]["total"], 45);
  EXPECT_EQ(doc["summary"]["failed"], 3);
  EXPECT_EQ(doc["summary"]["passed"], 42);
  for (const auto& rep : doc["reports"]) {
    for (const char* key : {"name", "family", "citation", "kind", "precision", "width",
                            "guarded_dim", "tolerance", "relative_deviation", "status", "pass"})
      EXPECT_TRUE(rep.contains(key)) << key;
  }
  EXPECT_NE(r.err.find("FAIL cross_relations_pi_j/PixJ.x"), std::string::npos);
}

TEST(Verify, InconclusiveAtTinyTruncation) {
  const auto r = invoke({"verify", "--nmax", "2"});
  EXPECT_EQ(r.code, kInconclusive);
  const auto doc = json::parse(r.out);
  EXPECT_GT(doc["summary"]["inconclusive"].get<int>(), 0);
  EXPECT_EQ(doc["summary"]["failed"], 0);
  // NaN deviations are written as null
  bool saw_null = false;
  for (const auto& rep : doc["reports"]) saw_null = saw_null || rep["relative_deviation"].is_null();
  EXPECT_TRUE(saw_null);
}

TEST(Verify, OverflowAndBadInput) {
  EXPECT_EQ(invoke({"verify", "--nmax", "40", "--eta", "50"}).code, kOverflow);
  EXPECT_EQ(invoke({"verify", "--eta", "-1"}).code, kInvalid);
  EXPECT_EQ(invoke({"verify", "--format", "csv", "--nmax", "4"}).code, kInvalid);
  EXPECT_EQ(invoke({"verify", "--bogus"}).code, kInvalid);
  EXPECT_EQ(invoke({}).code, kInvalid);
}

TEST(Verify, DeterministicOutput) {
  const auto a = invoke({"verify", "--nmax", "10"});
  const auto b = invoke({"verify", "--nmax", "10"});
  EXPECT_EQ(a.out, b.out);
}

TEST(Xcheck, PassesAndReportsCalibration) {
  const auto r = invoke({"xcheck", "--jmax", "5", "--nmax", "12"});
  EXPECT_EQ(r.code, kOk) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_TRUE(doc["pass"].get<bool>());
  EXPECT_TRUE(doc["calibration"]["passed"].get<bool>());
  EXPECT_EQ(doc["entries"].size(), 6u);
  EXPECT_LT(doc["max_deviation"].get<double>(), 1e-10);
}

TEST(Xcheck, ExitCodes) {
  EXPECT_EQ(invoke({"xcheck", "--jmax", "8", "--nmax", "12"}).code, kInvalid);
  EXPECT_EQ(invoke({"xcheck", "--jmax", "4", "--nmax", "10", "--no-condon-shortley"}).code,
            kCalibration);
}

TEST(Coherent, LabelAndPhasePointFormsAgree) {
  const auto a = invoke({"coherent", "--nmax", "16", "--z", "0,0,1"});
  const auto b = invoke({"coherent", "--nmax", "16", "--x", "0,0,1"});
  EXPECT_EQ(a.code, kOk) << a.err;
  EXPECT_EQ(b.code, kOk) << b.err;
  EXPECT_EQ(a.out, b.out);
  const auto doc = json::parse(a.out);
  EXPECT_LT(doc["residual"].get<double>(), 1e-8);
  EXPECT_TRUE(doc["warnings"].empty());
  EXPECT_TRUE(doc["expectations"].contains("N_dot_N"));
}

TEST(Coherent, RejectsBadInput) {
  EXPECT_EQ(invoke({"coherent", "--nmax", "8", "--z", "1,1,0"}).code, kInvalid);
  EXPECT_EQ(invoke({"coherent", "--nmax", "8"}).code, kInvalid);
  EXPECT_EQ(invoke({"coherent", "--nmax", "8", "--z", "0,0,1", "--x", "0,0,1"}).code, kInvalid);
  EXPECT_EQ(invoke({"coherent", "--nmax", "8", "--x", "0,0,1", "--p", "0,0,1"}).code, kInvalid);
  EXPECT_EQ(invoke({"coherent", "--nmax", "8", "--z", "0,0,1", "--format", "csv"}).code,
            kInvalid);
}

TEST(Coherent, CoefficientTable) {
  const auto path = scratch("coeffs.csv");
  const auto r =
      invoke({"coherent", "--nmax", "12", "--z", "0,0,1", "--format", "csv", "--out", path});
  ASSERT_EQ(r.code, kOk) << r.err;
  std::istringstream lines(slurp(path));
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "n1,n2,re,im");
  int rows = 0;
  double norm = 0.0;
  while (std::getline(lines, line)) {
    ++rows;
    double re = 0, im = 0;
    int n1 = 0, n2 = 0;
    ASSERT_EQ(std::sscanf(line.c_str(), "%d,%d,%lf,%lf", &n1, &n2, &re, &im), 4);
    norm += re * re + im * im;
  }
  EXPECT_EQ(rows, 91);
  EXPECT_NEAR(norm, 1.0, 1e-12);
}

TEST(Export, VacuumElementOfNz) {
  const auto r = invoke({"export", "Nz", "--nmax", "2"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(r.out.rfind("row_n1,row_n2,col_n1,col_n2,re,im\n", 0), 0u);
  EXPECT_NE(r.out.find("\n1,1,0,0,0.57735026918962584,0\n"), std::string::npos);
}

TEST(Export, FileAndSidecar) {
  const auto path = scratch("zz.csv");
  ASSERT_EQ(invoke({"export", "Zz", "--nmax", "6", "--out", path}).code, kOk);
  const auto first = slurp(path);
  ASSERT_EQ(invoke({"export", "Zz", "--nmax", "6", "--out", path}).code, kOk);
  EXPECT_EQ(slurp(path), first);
  const auto side = json::parse(slurp(path.string() + ".json"));
  EXPECT_EQ(side["operator"], "Zz");
  EXPECT_EQ(side["dim"], 28);
  EXPECT_EQ(side["grade"]["up"], 2);
  EXPECT_EQ(side["basis"][1], json::array({1, 0}));
  EXPECT_EQ(side["precision"], "float128 rounded to double");
}

TEST(Export, EveryNamedOperatorAndUnknownName) {
  for (const auto& op : exportable_operators()) {
    EXPECT_EQ(invoke({"export", op, "--nmax", "3"}).code, kOk) << op;
  }
  EXPECT_EQ(invoke({"export", "Foo"}).code, kInvalid);
  EXPECT_EQ(invoke({"export", "Jz", "--format", "json"}).code, kInvalid);
}
