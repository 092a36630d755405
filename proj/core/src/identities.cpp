#include "spherelab/identities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "spherelab/parallel.hpp"

namespace spherelab {

namespace {

template <class Real>
using C = complex_t<Real>;

template <class Real>
C<Real> cplx(double re, double im = 0.0) {
  return C<Real>(Real(re), Real(im));
}

constexpr const char* kAxes[3] = {"x", "y", "z"};

int levi_civita(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  return ((j - i + 3) % 3 == 1) ? 1 : -1;
}

std::vector<std::string> pair_names() {
  std::vector<std::string> out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out.push_back(std::string(kAxes[i]) + kAxes[j]);
  return out;
}

std::vector<std::string> axis_names(const std::string& prefix = "") {
  return {prefix + "x", prefix + "y", prefix + "z"};
}

// sum_k eps_ijk V_k, times i
template <class Real>
BasicLinOp<Real> i_eps_contract(const BasicVecOp<Real>& v, int i, int j) {
  auto out = BasicLinOp<Real>::zero(v.basis_ptr());
  for (int k = 0; k < 3; ++k) {
    const int e = levi_civita(i, j, k);
    if (e != 0) out = out + cplx<Real>(0.0, e) * v[k];
  }
  return out;
}

template <class Real>
std::vector<IdentitySide<Real>> commutation_pairs(const BasicVecOp<Real>& J,
                                                  const BasicVecOp<Real>& V) {
  std::vector<IdentitySide<Real>> out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      out.push_back({std::string(kAxes[i]) + kAxes[j], commutator(J[i], V[j]),
                     i_eps_contract(V, i, j)});
  return out;
}

template <class Real>
std::vector<IdentitySide<Real>> componentwise(const std::string& prefix,
                                              const BasicVecOp<Real>& lhs,
                                              const BasicVecOp<Real>& rhs) {
  std::vector<IdentitySide<Real>> out;
  for (int k = 0; k < 3; ++k) out.push_back({prefix + kAxes[k], lhs[k], rhs[k]});
  return out;
}

template <class Real>
BasicVecOp<Real> times_op(const BasicVecOp<Real>& v, const BasicLinOp<Real>& op) {
  return {v.x() * op, v.y() * op, v.z() * op};
}

template <class Real>
BasicVecOp<Real> op_times(const BasicLinOp<Real>& op, const BasicVecOp<Real>& v) {
  return {op * v.x(), op * v.y(), op * v.z()};
}

// ---------------------------------------------------------------------------
// Family builders, generic over precision.

struct Su2 {
  template <class Real>
  auto operator()(const BasicOperatorSet<Real>& s) const {
    return commutation_pairs(s.J, s.J);
  }
};

struct CasimirShift {
  template <class Real>
  auto operator()(const BasicOperatorSet<Real>& s) const {
    const auto one = BasicLinOp<Real>::identity(s.basis);
    return std::vector<IdentitySide<Real>>{
        {"", s.S * s.S, dot(s.J, s.J) + cplx<Real>(0.25) * one}};
  }
};

struct PiSquared {
  template <class Real>
  auto operator()(const BasicOperatorSet<Real>& s) const {
    const auto one = BasicLinOp<Real>::identity(s.basis);
    return std::vector<IdentitySide<Real>>{{"", dot(s.Pi, s.Pi), dot(s.J, s.J) + one}};
  }
};

struct CrossJN {
  template <class Real>
  auto operator()(const BasicOperatorSet<Real>& s) const {
    const auto iN = cplx<Real>(0.0, 1.0) * s.N;
    auto out = componentwise("JxN.", cross(s.J, s.N), s.Pi + iN);
    auto second = componentwise("NxJ.", cross(s.N, s.J), iN - s.Pi);
    out.insert(out.end(), second.begin(), second.end());
    return out;
  }
};

struct CrossPiJ {
  template <class Real>
  auto operator()(const BasicOperatorSet<Real>& s) const {
    const auto one = BasicLinOp<Real>::identity(s.basis);
    const auto pi2 = dot(s.Pi, s.Pi);
    auto out = componentwise("PixJ.", cross(s.Pi, s.J), times_op(s.N, pi2 + one));
    auto second = componentwise("JxPi.", cross(s.J, s.Pi), op_times(one - pi2, s.N));
    out.insert(out.end(), second.begin(), second.end());
    return out;
  }
};

struct UnitDirection {
  template <class Real>
  auto operator()(const BasicOperatorSet<Real>& s) const {
    return std::vector<IdentitySide<Real>>{
        {"", dot(s.N, s.N), BasicLinOp<Real>::identity(s.basis)}};
  }
};

struct Tangency {
  template <class Real>
  auto operator()(const BasicOperatorSet<Real>& s) const {
    return std::vector<IdentitySide<Real>>{
        {"", dot(s.N, s.Pi) + dot(s.Pi, s.N), BasicLinOp<Real>::zero(s.basis)}};
  }
};

struct PTangencyViolation {
  template <class Real>
  auto operator()(const BasicOperatorSet<Real>& s) const {
    return std::vector<IdentitySide<Real>>{
        {"", dot(s.N, s.P) + dot(s.P, s.N), BasicLinOp<Real>::zero(s.basis)}};
  }
};

struct VectorOperatorZ {
  template <class Real>
  auto operator()(const BasicOperatorSet<Real>& s) const {
    return commutation_pairs(s.J, s.Z);
  }
};

struct ZViaP {
  template <class Real>
  auto operator()(const BasicOperatorSet<Real>& s) const {
    return componentwise("", annihilation_Z_viaP(s.N, s.P, s.eta), s.Z);
  }
};

struct ZClosedForm {
  template <class Real>
  auto operator()(const BasicOperatorSet<Real>& s) const {
    // The closed form is the eta = 1 operator whatever the set's coupling.
    auto reference = s.eta == 1.0 ? s.Z : annihilation_Z_general(s.N, s.Pi, 1.0);
    return componentwise("", annihilation_Z_closed<Real>(s.basis), reference);
  }
};

struct ZCommute {
  template <class Real>
  auto operator()(const BasicOperatorSet<Real>& s) const {
    const auto zero = BasicLinOp<Real>::zero(s.basis);
    return std::vector<IdentitySide<Real>>{{"xy", commutator(s.Z.x(), s.Z.y()), zero},
                                           {"yz", commutator(s.Z.y(), s.Z.z()), zero},
                                           {"zx", commutator(s.Z.z(), s.Z.x()), zero}};
  }
};

struct ZSquared {
  template <class Real>
  auto operator()(const BasicOperatorSet<Real>& s) const {
    return std::vector<IdentitySide<Real>>{
        {"", dot(s.Z, s.Z), BasicLinOp<Real>::identity(s.basis)}};
  }
};

template <class Builder>
IdentityCheck make_check(std::string name, std::string citation,
                         std::vector<std::string> components, Precision precision,
                         double tolerance, CheckKind kind = CheckKind::equality) {
  IdentityCheck c;
  c.name = std::move(name);
  c.citation = std::move(citation);
  c.components = std::move(components);
  c.kind = kind;
  c.precision = precision;
  c.tolerance = tolerance;
  c.build = [](const OperatorSet& s) { return Builder{}(s); };
  c.build_extended = [](const ExtOperatorSet& s) { return Builder{}(s); };
  return c;
}

// ---------------------------------------------------------------------------

template <class Real>
std::vector<IdentityReport> evaluate(const IdentityCheck& check,
                                     const BasicOperatorSet<Real>& set,
                                     const SubspacePolicy& policy) {
  const auto& fn = [&]() -> const auto& {
    if constexpr (std::is_same_v<Real, double>) {
      return check.build;
    } else {
      return check.build_extended;
    }
  }();
  if (!fn) throw InvalidArgument("identity check '" + check.name + "' has no builder");

  const auto sides = fn(set);
  if (sides.size() != check.components.size()) {
    throw InvalidArgument("identity check '" + check.name + "' built " +
                          std::to_string(sides.size()) + " sides, declared " +
                          std::to_string(check.components.size()));
  }

  const double tolerance = (check.kind == CheckKind::equality && policy.tolerance)
                               ? *policy.tolerance
                               : check.tolerance;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const auto& basis = *set.basis;

  std::vector<IdentityReport> out;
  out.reserve(sides.size());
  for (const auto& side : sides) {
    require_same_basis(side.lhs.basis(), basis, check.name.c_str());
    require_same_basis(side.rhs.basis(), basis, check.name.c_str());

    IdentityReport r;
    r.family = check.name;
    r.name = side.component.empty() ? check.name : check.name + "/" + side.component;
    r.citation = check.citation;
    r.kind = check.kind;
    r.precision = check.precision;
    r.n_max = basis.n_max();
    r.eta = set.eta;
    r.sector = policy.sector;
    r.width = std::max(side.lhs.width(), side.rhs.width()) + policy.extra_guard;
    r.tolerance = tolerance;

    const auto sub = guarded_subspace(basis, r.width, policy.sector, policy.max_total);
    const auto both = guarded_subspace(basis, r.width, Sector::all, policy.max_total);
    r.guarded_dim = sub.size();
    r.all_sector_deviation = both.empty() ? nan : residual(side.lhs, side.rhs, both);

    if (sub.empty()) {
      r.relative_deviation = nan;
      r.status = CheckStatus::inconclusive;
      std::ostringstream os;
      os << "guarded subspace is empty (width " << r.width << ", n_max " << r.n_max
         << "); raise n_max to at least " << r.width;
      r.note = os.str();
    } else {
      r.relative_deviation = residual(side.lhs, side.rhs, sub);
      const bool ok = check.kind == CheckKind::equality ? r.relative_deviation <= tolerance
                                                        : r.relative_deviation > tolerance;
      r.status = ok ? CheckStatus::pass : CheckStatus::fail;
    }
    r.pass = r.status == CheckStatus::pass;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::inconclusive: return "inconclusive";
  }
  return "?";
}

const char* to_string(CheckKind k) {
  return k == CheckKind::equality ? "equality" : "lower_bound";
}

std::vector<IdentityCheck> standard_suite() {
  using P = Precision;
  std::vector<IdentityCheck> s;
  s.push_back(make_check<Su2>(
      "su2_algebra", "Schwinger-boson angular momentum obeys [J_i, J_j] = i eps_ijk J_k",
      pair_names(), P::standard, 1e-13));
  s.push_back(make_check<CasimirShift>(
      "casimir_shift", "shifted angular momentum: S^2 = J^2 + 1/4", {""}, P::standard, 1e-13));
  s.push_back(make_check<PiSquared>(
      "pi_squared", "geometric momentum squared: Pi.Pi = J^2 + 1", {""}, P::standard, 1e-12));
  s.push_back(make_check<CrossJN>(
      "cross_relations_n_j", "J x N = Pi + iN and N x J = -Pi + iN",
      {"JxN.x", "JxN.y", "JxN.z", "NxJ.x", "NxJ.y", "NxJ.z"}, P::standard, 1e-12));
  s.push_back(make_check<CrossPiJ>(
      "cross_relations_pi_j", "Pi x J = N (Pi^2 + 1) and J x Pi = (1 - Pi^2) N",
      {"PixJ.x", "PixJ.y", "PixJ.z", "JxPi.x", "JxPi.y", "JxPi.z"}, P::standard, 1e-11));
  s.push_back(make_check<UnitDirection>(
      "unit_direction", "position on the unit sphere: N.N = 1", {""}, P::standard, 1e-12));
  s.push_back(make_check<Tangency>(
      "tangency", "momentum is tangent to the sphere: N.Pi + Pi.N = 0", {""}, P::standard,
      1e-12));
  s.push_back(make_check<PTangencyViolation>(
      "p_tangency_violation",
      "the naive momentum P = J x N is not tangent: N.P + P.N != 0 (must exceed the bound)",
      {""}, P::standard, 0.5, CheckKind::lower_bound));
  s.push_back(make_check<VectorOperatorZ>(
      "vector_operator_z", "Z is a vector operator: [J_i, Z_j] = i eps_ijk Z_k", pair_names(),
      P::extended, 1e-11));
  s.push_back(make_check<ZViaP>(
      "z_via_p",
      "Z built from N and P with [cosh(eta S) + sinh(eta S)/(2S)] equals Z built from N and Pi",
      axis_names(), P::extended, 1e-12));
  s.push_back(make_check<ZClosedForm>(
      "z_closed_form",
      "Schwinger-boson closed form of Z+, Z-, Zz equals the general Z at eta = 1",
      axis_names(), P::extended, 1e-10));
  s.push_back(make_check<ZCommute>(
      "z_commute", "annihilation operators commute: [Z_i, Z_j] = 0", {"xy", "yz", "zx"},
      P::extended, 1e-10));
  s.push_back(make_check<ZSquared>(
      "z_squared", "complex unit constraint: Z.Z = 1", {""}, P::extended, 1e-10));
  return s;
}

std::size_t scalar_count(const std::vector<IdentityCheck>& checks) {
  std::size_t n = 0;
  for (const auto& c : checks) n += c.size();
  return n;
}

std::vector<IdentityReport> run(const std::vector<IdentityCheck>& checks, const OperatorSet& set,
                                const SubspacePolicy& policy, const ExtOperatorSet* extended) {
  if (policy.extra_guard < 0) throw InvalidArgument("extra guard must be non-negative");
  if (policy.tolerance && !(*policy.tolerance > 0.0)) {
    throw InvalidArgument("tolerance must be positive");
  }

  std::unique_ptr<ExtOperatorSet> owned;
  const bool needs_extended = std::any_of(checks.begin(), checks.end(), [](const auto& c) {
    return c.precision == Precision::extended;
  });
  if (needs_extended && extended == nullptr) {
    owned = std::make_unique<ExtOperatorSet>(build_operator_set<Quad>(set.basis, set.eta));
    extended = owned.get();
  }
  if (extended != nullptr) {
    require_same_basis(*extended->basis, *set.basis, "extended operator set");
    if (extended->eta != set.eta) throw InvalidArgument("extended operator set has another eta");
  }

  std::vector<std::vector<IdentityReport>> per_check(checks.size());
  parallel_for(checks.size(), [&](std::size_t i) {
    const auto& c = checks[i];
    per_check[i] = c.precision == Precision::standard ? evaluate(c, set, policy)
                                                      : evaluate(c, *extended, policy);
  });

  std::vector<IdentityReport> out;
  for (auto& v : per_check) std::move(v.begin(), v.end(), std::back_inserter(out));
  std::sort(out.begin(), out.end(),
            [](const IdentityReport& a, const IdentityReport& b) { return a.name < b.name; });
  return out;
}

}  // namespace spherelab
