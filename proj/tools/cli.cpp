#include "cli.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "spherelab/harmonics.hpp"
#include "spherelab/identities.hpp"

namespace spherelab::cli {

namespace {

using json = nlohmann::ordered_json;
using cd = std::complex<double>;

constexpr int kSchemaVersion = 1;

const char* to_string(Format f) { return f == Format::json ? "json" : "csv"; }

json config_json(const RunConfig& c) {
  return {{"n_max", c.n_max},     {"eta", c.eta},   {"tol", c.tol},
          {"guard_extra", c.guard_extra}, {"j_max", c.j_max}, {"sector", to_string(c.sector)},
          {"format", to_string(c.format)}};
}

json complex_json(cd z) { return json::array({z.real(), z.imag()}); }

json vec3_json(const ComplexVec3& v) {
  return json::array({complex_json(v[0]), complex_json(v[1]), complex_json(v[2])});
}

// NaN is not representable in JSON; inconclusive deviations become null.
json real_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open output file '" + path + "'");
  f << text;
  if (!f) throw Error("failed writing '" + path + "'");
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.output_path.empty()) {
    out << text;
  } else {
    write_text(c.output_path, text);
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(std::string_view s, const std::string& whole) {
  double v = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw InvalidArgument("cannot parse number in '" + whole + "'");
  }
  return v;
}

std::vector<std::string> split3(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    parts.push_back(b == std::string::npos ? "" : item.substr(b, e - b + 1));
  }
  if (parts.size() != 3 || text.empty() || text.back() == ',') {
    throw InvalidArgument("expected three comma-separated values, got '" + text + "'");
  }
  return parts;
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const OverflowError& e) {
    err << "error: " << e.what() << "\n";
    return kOverflow;
  } catch (const CalibrationError& e) {
    err << "error: " << e.what() << "\n";
    return kCalibration;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailed;
  }
}

json report_json(const IdentityReport& r) {
  return {{"name", r.name},
          {"family", r.family},
          {"citation", r.citation},
          {"kind", to_string(r.kind)},
          {"precision", to_string(r.precision)},
          {"n_max", r.n_max},
          {"eta", r.eta},
          {"sector", to_string(r.sector)},
          {"width", r.width},
          {"guarded_dim", r.guarded_dim},
          {"tolerance", r.tolerance},
          {"relative_deviation", real_or_null(r.relative_deviation)},
          {"all_sector_deviation", real_or_null(r.all_sector_deviation)},
          {"status", to_string(r.status)},
          {"pass", r.pass},
          {"note", r.note}};
}

LinOp export_operator(const std::string& name, const BasisPtr& basis, double eta) {
  const auto axis = [&]() -> std::size_t {
    switch (name.back()) {
      case 'x': return 0;
      case 'y': return 1;
      default: return 2;
    }
  };
  const std::string stem = name == "S" ? "S" : name.substr(0, name.size() - 1);
  if (stem == "S") return shifted_S<double>(basis);
  if (stem == "J") return angular_momentum<double>(basis)[axis()];
  if (stem == "N") return direction_N<double>(basis)[axis()];
  if (stem == "Pi") return momentum_Pi<double>(basis)[axis()];
  if (stem == "P") return nonhermitian_P<double>(basis)[axis()];
  if (stem == "Z") {
    // Same construction in extended precision, rounded entrywise.
    return rounded(annihilation_Z_general<Quad>(basis, eta)[axis()]);
  }
  throw InvalidArgument("unknown operator '" + name + "'");
}

}  // namespace

void validate(const RunConfig& c) {
  std::ostringstream os;
  if (c.n_max < 2) os << "n_max must be at least 2 (got " << c.n_max << "); ";
  if (!(c.eta > 0.0) || !std::isfinite(c.eta)) os << "eta must be positive; ";
  if (!(c.tol > 0.0) || !std::isfinite(c.tol)) os << "tol must be positive; ";
  if (c.guard_extra < 0) os << "guard must be non-negative; ";
  if (c.j_max < 1) os << "j_max must be at least 1; ";
  const auto msg = os.str();
  if (!msg.empty()) throw InvalidArgument(msg.substr(0, msg.size() - 2));
}

std::complex<double> parse_complex(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw InvalidArgument("empty complex number");
  if (s.back() != 'i') return {parse_double(s, text), 0.0};

  const std::string body = s.substr(0, s.size() - 1);
  // The split is the last sign that is neither leading nor an exponent sign.
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const std::string re_text = split == std::string::npos ? "" : body.substr(0, split);
  const std::string im_text = split == std::string::npos ? body : body.substr(split);
  double im = 0.0;
  if (im_text.empty() || im_text == "+") {
    im = 1.0;
  } else if (im_text == "-") {
    im = -1.0;
  } else {
    im = parse_double(im_text, text);
  }
  const double re = re_text.empty() ? 0.0 : parse_double(re_text, text);
  return {re, im};
}

ComplexVec3 parse_complex3(const std::string& text) {
  const auto parts = split3(text);
  return {parse_complex(parts[0]), parse_complex(parts[1]), parse_complex(parts[2])};
}

std::array<double, 3> parse_real3(const std::string& text) {
  const auto parts = split3(text);
  return {parse_double(parts[0], text), parse_double(parts[1], text),
          parse_double(parts[2], text)};
}

const std::vector<std::string>& exportable_operators() {
  static const std::vector<std::string> names = {"Jx",  "Jy",  "Jz",  "S",  "Nx", "Ny",
                                                 "Nz",  "Pix", "Piy", "Piz", "Zx", "Zy",
                                                 "Zz",  "Px",  "Py",  "Pz"};
  return names;
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(config);
    if (config.format != Format::json) throw InvalidArgument("verify writes JSON only");
    const auto basis = build_basis(config.n_max);
    const auto set = build_operator_set<double>(basis, config.eta);
    SubspacePolicy policy;
    policy.sector = config.sector;
    policy.extra_guard = config.guard_extra;
    policy.tolerance = config.tol;
    const auto reports = run(standard_suite(), set, policy);

    std::size_t passed = 0, failed = 0, inconclusive = 0;
    json arr = json::array();
    for (const auto& r : reports) {
      arr.push_back(report_json(r));
      switch (r.status) {
        case CheckStatus::pass: ++passed; break;
        case CheckStatus::fail: ++failed; break;
        case CheckStatus::inconclusive: ++inconclusive; break;
      }
    }
    json doc = {{"schema_version", kSchemaVersion},
                {"command", "verify"},
                {"config", config_json(config)},
                {"reports", arr},
                {"summary",
                 {{"total", reports.size()},
                  {"passed", passed},
                  {"failed", failed},
                  {"inconclusive", inconclusive}}}};
    emit(config, dump(doc), out);
    for (const auto& r : reports) {
      if (r.status == CheckStatus::fail) {
        err << "FAIL " << r.name << ": deviation " << r.relative_deviation << " (tolerance "
            << r.tolerance << ")\n";
      }
    }
    if (failed > 0) return int(kFailed);
    if (inconclusive > 0) {
      err << inconclusive << " check(s) inconclusive; raise --nmax\n";
      return int(kInconclusive);
    }
    return int(kOk);
  });
}

int cmd_xcheck(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(config);
    if (config.format != Format::json) throw InvalidArgument("xcheck writes JSON only");
    if (2 * config.j_max + 2 > config.n_max) {
      std::ostringstream os;
      os << "xcheck with j_max=" << config.j_max << " needs n_max >= " << 2 * config.j_max + 2
         << " (got " << config.n_max << ")";
      throw InvalidArgument(os.str());
    }
    const auto basis = build_basis(config.n_max);
    const auto set = build_operator_set<double>(basis, config.eta);
    const auto table = build_table(config.j_max, {config.condon_shortley});
    const auto rep = xcheck(set, table, config.j_max);

    json entries = json::array();
    bool all = true;
    for (const auto& e : rep.entries) {
      const bool ok = e.max_deviation < config.tol;
      all = all && ok;
      entries.push_back({{"kind", to_string(e.kind)},
                         {"component", to_string(e.axis)},
                         {"max_deviation", e.max_deviation},
                         {"pass", ok},
                         {"worst", {{"j_row", e.j_row}, {"m_row", e.m_row},
                                    {"j_col", e.j_col}, {"m_col", e.m_col}}}});
    }
    json doc = {{"schema_version", kSchemaVersion},
                {"command", "xcheck"},
                {"config", config_json(config)},
                {"calibration",
                 {{"jz_deviation", rep.calibration.jz_deviation},
                  {"jplus_deviation", rep.calibration.jplus_deviation},
                  {"passed", rep.calibration.passed}}},
                {"entries", entries},
                {"max_deviation", rep.max_deviation()},
                {"pass", all}};
    emit(config, dump(doc), out);
    return all ? int(kOk) : int(kFailed);
  });
}

int cmd_coherent(const RunConfig& config, const CoherentInput& input, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&] {
    validate(config);
    if (input.z && (input.x || input.p)) {
      throw InvalidArgument("give either --z or --x/--p, not both");
    }
    CoherentLabel label;
    if (input.z) {
      label.z = *input.z;
    } else if (input.x) {
      ClassicalPhasePoint pt{*input.x, input.p.value_or(std::array<double, 3>{0, 0, 0})};
      validate(pt);
      label = label_of(pt, config.eta);
    } else {
      throw InvalidArgument("coherent needs --z or --x/--p");
    }
    validate(label);
    if (config.format == Format::csv && config.output_path.empty()) {
      throw InvalidArgument("--format csv needs --out for the coefficient table");
    }

    const auto basis = build_basis(config.n_max);
    const auto set = build_operator_set<double>(basis, config.eta);
    const CoherentSolver solver(basis, config.eta);
    SolveOptions opts;
    opts.sector = config.sector;
    const auto st = solver.solve(label, opts);
    const auto ex = solver.expectations(st, set);

    json warnings = json::array();
    if (st.residual_warning) warnings.push_back("residual above threshold");
    if (st.tail_warning) warnings.push_back("tail mass above threshold");
    if (st.degenerate) warnings.push_back("smallest singular value is degenerate");
    json doc = {
        {"schema_version", kSchemaVersion},
        {"command", "coherent"},
        {"config", config_json(config)},
        {"label", vec3_json(label.z)},
        {"residual", st.residual},
        {"tail_mass", st.tail_mass},
        {"smallest_singular", st.smallest_singular},
        {"second_singular", st.second_singular},
        {"warnings", warnings},
        {"expectations",
         {{"J", vec3_json(ex.J)},
          {"N", vec3_json(ex.N)},
          {"Pi", vec3_json(ex.Pi)},
          {"Z", vec3_json(ex.Z)},
          {"var_N", ex.var_N},
          {"var_Pi", ex.var_Pi},
          {"N_dot_N", complex_json(ex.N_dot_N)},
          {"tangency", complex_json(ex.tangency)}}}};

    if (config.format == Format::csv) {
      std::ostringstream csv;
      csv << "n1,n2,re,im\n";
      for (Index i = 0; i < basis->dim(); ++i) {
        const auto s = basis->state(i);
        csv << s.n1 << ',' << s.n2 << ',' << format_g17(st.coeffs(i).real()) << ','
            << format_g17(st.coeffs(i).imag()) << '\n';
      }
      write_text(config.output_path, csv.str());
      out << dump(doc);
    } else {
      emit(config, dump(doc), out);
    }
    for (const auto& w : warnings) err << "warning: " << w.get<std::string>() << "\n";
    return int(kOk);
  });
}

int cmd_export(const RunConfig& config, const std::string& op, std::ostream& out,
               std::ostream& err) {
  return guarded(err, [&] {
    const auto& names = exportable_operators();
    if (std::find(names.begin(), names.end(), op) == names.end()) {
      throw InvalidArgument("unknown operator '" + op + "'");
    }
    validate(config);
    if (config.format != Format::csv) throw InvalidArgument("export writes CSV only");
    const auto basis = build_basis(config.n_max);
    const LinOp m = export_operator(op, basis, config.eta);

    std::ostringstream csv;
    csv << "row_n1,row_n2,col_n1,col_n2,re,im\n";
    for (Index r = 0; r < basis->dim(); ++r) {
      const auto rs = basis->state(r);
      for (Index c = 0; c < basis->dim(); ++c) {
        const cd v = m(r, c);
        if (v == cd(0.0, 0.0)) continue;
        const auto cs = basis->state(c);
        csv << rs.n1 << ',' << rs.n2 << ',' << cs.n1 << ',' << cs.n2 << ','
            << format_g17(v.real()) << ',' << format_g17(v.imag()) << '\n';
      }
    }
    emit(config, csv.str(), out);

    if (!config.output_path.empty()) {
      json states = json::array();
      for (Index i = 0; i < basis->dim(); ++i) {
        const auto s = basis->state(i);
        states.push_back(json::array({s.n1, s.n2}));
      }
      json side = {
          {"schema_version", kSchemaVersion},
          {"operator", op},
          {"n_max", config.n_max},
          {"eta", config.eta},
          {"dim", basis->dim()},
          {"ordering", "total n = n1 + n2 ascending, then n1 descending"},
          {"grade", {{"up", m.grade().up}, {"down", m.grade().down}}},
          {"precision", op.front() == 'Z' ? "float128 rounded to double" : "double"},
          {"basis", states}};
      write_text(config.output_path + ".json", dump(side));
    }
    return int(kOk);
  });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"spherelab: operator algebra of a quantum particle on the unit sphere"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string format;
  std::string sector = "integer_j";
  std::string z_text, x_text, p_text, op_name;

  auto common = [&](CLI::App* sc, const char* default_format) {
    sc->add_option("--nmax", cfg.n_max, "Fock truncation (total quanta)")->capture_default_str();
    sc->add_option("--eta", cfg.eta, "coupling eta > 0")->capture_default_str();
    sc->add_option("--tol", cfg.tol, "pass tolerance")->capture_default_str();
    sc->add_option("--guard", cfg.guard_extra, "extra guard bands beyond the grade width")
        ->capture_default_str();
    sc->add_option("--out", cfg.output_path, "output file (default: stdout)");
    sc->add_option("--format", format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->default_str(default_format);
    sc->add_option("--sector", sector, "integer_j or all")
        ->check(CLI::IsMember({"integer_j", "integer", "all"}))
        ->capture_default_str();
  };

  auto* verify = app.add_subcommand("verify", "run the identity suite");
  common(verify, "json");
  auto* xc = app.add_subcommand("xcheck", "compare against the spherical-harmonic oracle");
  common(xc, "json");
  xc->add_option("--jmax", cfg.j_max, "largest j compared")->capture_default_str();
  bool no_cs = false;
  xc->add_flag("--no-condon-shortley", no_cs,
               "drop the Condon-Shortley phase (calibration must fail)");
  auto* coh = app.add_subcommand("coherent", "solve for a coherent state");
  common(coh, "json");
  coh->add_option("--z", z_text, "label z1,z2,z3 (complex, z.z = 1)");
  coh->add_option("--x", x_text, "classical position x1,x2,x3");
  coh->add_option("--p", p_text, "classical momentum p1,p2,p3");
  auto* exp = app.add_subcommand("export", "write an operator matrix as CSV");
  common(exp, "csv");
  exp->add_option("operator", op_name, "operator name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? int(kOk) : int(kInvalid);
  }

  auto* chosen = app.get_subcommands().front();
  const std::string default_format = chosen == exp ? "csv" : "json";
  cfg.format = (format.empty() ? default_format : format) == "csv" ? Format::csv : Format::json;
  cfg.sector = parse_sector(sector).value_or(Sector::integer_j);
  cfg.condon_shortley = !no_cs;

  if (chosen == verify) return cmd_verify(cfg, out, err);
  if (chosen == xc) return cmd_xcheck(cfg, out, err);
  if (chosen == exp) return cmd_export(cfg, op_name, out, err);
  return guarded(err, [&] {
    CoherentInput in;
    if (!z_text.empty()) in.z = parse_complex3(z_text);
    if (!x_text.empty()) in.x = parse_real3(x_text);
    if (!p_text.empty()) in.p = parse_real3(p_text);
    return cmd_coherent(cfg, in, out, err);
  });
}

}  // namespace spherelab::cli
