#include "warpverify/spec_io.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "warpverify/errors.hpp"
#include "warpverify/ode_family.hpp"

namespace warpverify {

namespace {

using json = nlohmann::ordered_json;

struct Issues {
  std::vector<std::string> list;
  void add(const std::string& s) { list.push_back(s); }
  bool empty() const { return list.empty(); }
};

const char* const kTopKeys[] = {"n1", "n2", "d", "lambda", "eps1", "eps2",
                                "alpha1", "alpha2", "phi1", "f1", "phi2", "f2", "domain"};
const char* const kProfileKeys[] = {"kind", "params", "path", "field"};

void check_unknown_keys(const json& obj, const char* const* allowed, std::size_t n_allowed,
                        const std::string& where, Issues& issues) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (std::size_t k = 0; k < n_allowed; ++k)
      if (it.key() == allowed[k]) known = true;
    if (!known) issues.add(where + ": unknown field '" + it.key() + "'");
  }
}

std::optional<int> get_int(const json& obj, const char* key, Issues& issues) {
  if (!obj.contains(key)) {
    issues.add(std::string("missing field '") + key + "'");
    return std::nullopt;
  }
  if (!obj[key].is_number_integer()) {
    issues.add(std::string("field '") + key + "' must be an integer");
    return std::nullopt;
  }
  return obj[key].get<int>();
}

std::optional<double> get_real(const json& obj, const char* key, Issues& issues) {
  if (!obj.contains(key)) {
    issues.add(std::string("missing field '") + key + "'");
    return std::nullopt;
  }
  if (!obj[key].is_number()) {
    issues.add(std::string("field '") + key + "' must be a number");
    return std::nullopt;
  }
  return obj[key].get<double>();
}

std::optional<Signature> get_signature(const json& obj, const char* key, Issues& issues) {
  if (!obj.contains(key)) {
    issues.add(std::string("missing field '") + key + "'");
    return std::nullopt;
  }
  const json& arr = obj[key];
  if (!arr.is_array() || arr.empty()) {
    issues.add(std::string("field '") + key + "' must be a nonempty array");
    return std::nullopt;
  }
  std::vector<int> eps;
  for (const auto& e : arr) {
    if (!e.is_number_integer() || (e.get<int>() != 1 && e.get<int>() != -1)) {
      issues.add(std::string("field '") + key + "' entries must be +1 or -1");
      return std::nullopt;
    }
    eps.push_back(e.get<int>());
  }
  return Signature(std::move(eps));
}

std::optional<DirectionVector> get_direction(const json& obj, const char* key, Issues& issues) {
  if (!obj.contains(key)) {
    issues.add(std::string("missing field '") + key + "'");
    return std::nullopt;
  }
  const json& arr = obj[key];
  if (!arr.is_array() || arr.empty()) {
    issues.add(std::string("field '") + key + "' must be a nonempty array");
    return std::nullopt;
  }
  std::vector<double> a;
  bool any_nonzero = false;
  for (const auto& e : arr) {
    if (!e.is_number()) {
      issues.add(std::string("field '") + key + "' entries must be numbers");
      return std::nullopt;
    }
    a.push_back(e.get<double>());
    if (a.back() != 0.0) any_nonzero = true;
  }
  if (!any_nonzero) {
    issues.add(std::string("field '") + key + "' must not be identically zero");
    return std::nullopt;
  }
  return DirectionVector(std::move(a));
}

std::optional<ProfileFunction> get_profile(const json& obj, const char* key, Issues& issues) {
  if (!obj.contains(key)) {
    issues.add(std::string("missing profile '") + key + "'");
    return std::nullopt;
  }
  const json& p = obj[key];
  if (!p.is_object()) {
    issues.add(std::string("profile '") + key + "' must be an object");
    return std::nullopt;
  }
  check_unknown_keys(p, kProfileKeys, std::size(kProfileKeys), std::string("profile '") + key + "'",
                     issues);
  if (!p.contains("kind") || !p["kind"].is_string()) {
    issues.add(std::string("profile '") + key + "' needs a string 'kind'");
    return std::nullopt;
  }
  const std::string kind = p["kind"].get<std::string>();
  std::vector<double> params;
  if (p.contains("params")) {
    if (!p["params"].is_array()) {
      issues.add(std::string("profile '") + key + "': 'params' must be an array");
      return std::nullopt;
    }
    for (const auto& e : p["params"]) {
      if (!e.is_number()) {
        issues.add(std::string("profile '") + key + "': params must be numbers");
        return std::nullopt;
      }
      params.push_back(e.get<double>());
    }
  }
  auto need = [&](std::size_t n) {
    if (params.size() != n) {
      std::ostringstream os;
      os << "profile '" << key << "': kind '" << kind << "' needs " << n << " params, got "
         << params.size();
      issues.add(os.str());
      return false;
    }
    return true;
  };
  try {
    if (kind == "constant") {
      if (!need(1)) return std::nullopt;
      return constant_profile(params[0]);
    }
    if (kind == "linear") {
      if (!need(2)) return std::nullopt;
      return linear_profile(params[0], params[1]);
    }
    if (kind == "quadratic") {
      if (!need(3)) return std::nullopt;
      return quadratic_profile(params[0], params[1], params[2]);
    }
    if (kind == "exp") {
      if (!need(3)) return std::nullopt;
      return exp_profile(params[0], params[1], params[2]);
    }
    if (kind == "trajectory") {
      if (!p.contains("path") || !p["path"].is_string() || !p.contains("field") ||
          !p["field"].is_string()) {
        issues.add(std::string("profile '") + key +
                   "': trajectory kind needs string 'path' and 'field'");
        return std::nullopt;
      }
      const std::string path = p["path"].get<std::string>();
      const std::string field = p["field"].get<std::string>();
      if (field != "beta" && field != "gamma_minus_1") {
        issues.add(std::string("profile '") + key +
                   "': trajectory field must be 'beta' or 'gamma_minus_1'");
        return std::nullopt;
      }
      Trajectory traj = read_trajectory_file(path);
      std::vector<TrajectorySample> s = traj.samples;
      if (s.size() < 2) {
        issues.add(std::string("profile '") + key + "': trajectory has fewer than 2 samples");
        return std::nullopt;
      }
      if (s.back().t < s.front().t) std::reverse(s.begin(), s.end());
      const std::size_t n = s.size();
      std::vector<double> knots(n), v(n), d1(n), d2(n);
      for (std::size_t k = 0; k < n; ++k) {
        knots[k] = s[k].t;
        const Velocities vel = omega_velocities(s[k].omega, s[k].beta, s[k].gamma, traj.params);
        const Accelerations acc =
            family_accelerations(s[k].beta, s[k].gamma, vel.beta_dot, vel.gamma_dot, traj.params);
        if (field == "beta") {
          v[k] = s[k].beta;
          d1[k] = vel.beta_dot;
          d2[k] = acc.beta_dd;
        } else {
          v[k] = s[k].gamma - 1.0;
          d1[k] = vel.gamma_dot;
          d2[k] = acc.gamma_dd;
        }
      }
      return hermite_quintic_profile(std::move(knots), std::move(v), std::move(d1), std::move(d2),
                                     ProfileDesc{"trajectory", {}, path, field});
    }
  } catch (const Error& e) {
    issues.add(std::string("profile '") + key + "': " + e.what());
    return std::nullopt;
  }
  issues.add(std::string("profile '") + key + "': unknown kind '" + kind +
             "' (expected constant | linear | quadratic | exp | trajectory)");
  return std::nullopt;
}

std::optional<DomainBox> get_domain(const json& obj, Issues& issues) {
  if (!obj.contains("domain")) {
    issues.add("missing field 'domain'");
    return std::nullopt;
  }
  const json& arr = obj["domain"];
  if (!arr.is_array() || arr.empty()) {
    issues.add("field 'domain' must be a nonempty array of [lo, hi] pairs");
    return std::nullopt;
  }
  std::vector<Interval> ivs;
  for (const auto& e : arr) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      issues.add("field 'domain' entries must be [lo, hi] number pairs");
      return std::nullopt;
    }
    const double lo = e[0].get<double>(), hi = e[1].get<double>();
    if (!(hi > lo)) {
      issues.add("field 'domain': intervals must satisfy hi > lo");
      return std::nullopt;
    }
    ivs.push_back({lo, hi});
  }
  return DomainBox(std::move(ivs));
}

}  // namespace

WarpSpec parse_spec_text(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecParseError({origin + ": " + e.what()});
  }
  Issues issues;
  if (!doc.is_object()) throw SpecParseError({origin + ": top level must be an object"});
  check_unknown_keys(doc, kTopKeys, std::size(kTopKeys), origin, issues);

  auto n1 = get_int(doc, "n1", issues);
  auto n2 = get_int(doc, "n2", issues);
  auto d = get_int(doc, "d", issues);
  auto lambda = get_real(doc, "lambda", issues);
  auto eps1 = get_signature(doc, "eps1", issues);
  auto eps2 = get_signature(doc, "eps2", issues);
  auto alpha1 = get_direction(doc, "alpha1", issues);
  auto alpha2 = get_direction(doc, "alpha2", issues);
  auto phi1 = get_profile(doc, "phi1", issues);
  auto f1 = get_profile(doc, "f1", issues);
  auto phi2 = get_profile(doc, "phi2", issues);
  auto f2 = get_profile(doc, "f2", issues);
  auto domain = get_domain(doc, issues);

  // Cross-field checks that do not need construction.
  if (n1 && *n1 < 3) issues.add("n1 must be >= 3 (the block-1 curvature forms require it)");
  if (n2 && *n2 < 3) issues.add("n2 must be >= 3 (the block-2 curvature forms require it)");
  if (d && *d < 2) issues.add("d must be >= 2 (the fiber trace divides by d-1)");
  if (n1 && eps1 && eps1->dim() != *n1) issues.add("eps1 length must equal n1");
  if (n2 && eps2 && eps2->dim() != *n2) issues.add("eps2 length must equal n2");
  if (n1 && alpha1 && alpha1->dim() != *n1) issues.add("alpha1 length must equal n1");
  if (n2 && alpha2 && alpha2->dim() != *n2) issues.add("alpha2 length must equal n2");
  if (n1 && n2 && d && domain && domain->dim() != *n1 + *n2 + *d)
    issues.add("domain must have n1+n2+d intervals");

  if (!issues.empty()) throw SpecParseError(issues.list);

  try {
    WarpSpec::Config cfg{*n1,
                         *n2,
                         *d,
                         std::move(*eps1),
                         std::move(*eps2),
                         std::move(*alpha1),
                         std::move(*alpha2),
                         std::move(*phi1),
                         std::move(*f1),
                         std::move(*phi2),
                         std::move(*f2),
                         *lambda,
                         std::move(*domain)};
    return WarpSpec(std::move(cfg));
  } catch (const Error& e) {
    throw SpecParseError({origin + ": " + e.what()});
  }
}

WarpSpec parse_spec(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw SpecParseError({"cannot open spec file: " + path});
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_spec_text(buf.str(), path);
}

namespace {

json profile_to_json(const ProfileFunction& p, const char* name) {
  const ProfileDesc& d = p.desc();
  if (d.kind == "custom")
    throw ParameterError(std::string("serialize_spec: profile '") + name +
                         "' is a custom function and has no file form");
  json j;
  j["kind"] = d.kind;
  if (d.kind == "trajectory") {
    if (d.path.empty())
      throw ParameterError(std::string("serialize_spec: trajectory profile '") + name +
                           "' has no backing file path");
    j["path"] = d.path;
    j["field"] = d.field;
  } else {
    j["params"] = d.params;
  }
  return j;
}

}  // namespace

std::string serialize_spec(const WarpSpec& spec) {
  json j;
  j["n1"] = spec.n1();
  j["n2"] = spec.n2();
  j["d"] = spec.d();
  j["lambda"] = spec.lambda();
  j["eps1"] = spec.eps1().entries();
  j["eps2"] = spec.eps2().entries();
  j["alpha1"] = spec.alpha1().entries();
  j["alpha2"] = spec.alpha2().entries();
  j["phi1"] = profile_to_json(spec.phi1(), "phi1");
  j["f1"] = profile_to_json(spec.f1(), "f1");
  j["phi2"] = profile_to_json(spec.phi2(), "phi2");
  j["f2"] = profile_to_json(spec.f2(), "f2");
  json dom = json::array();
  for (const auto& iv : spec.domain().intervals()) dom.push_back({iv.lo, iv.hi});
  j["domain"] = dom;
  return j.dump(2) + "\n";
}

}  // namespace warpverify
