#include "fracstable/kernel_json.hpp"

#include <fstream>
#include <set>

namespace fracstable {

namespace {

using nlohmann::json;

void expect_keys(const json& j, const std::set<std::string>& allowed,
                 const std::string& path) {
  if (!j.is_object()) throw spec_parse_error(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw spec_parse_error(path + "." + it.key(), "unknown field");
}

double get_number(const json& j, const std::string& key,
                  const std::string& path) {
  if (!j.contains(key)) throw spec_parse_error(path + "." + key, "missing");
  if (!j[key].is_number())
    throw spec_parse_error(path + "." + key, "expected a number");
  return j[key].get<double>();
}

json profile_to_json(const ProfileFn& f) {
  json params = json::object();
  using Family = ProfileFn::Family;
  switch (f.family()) {
    case Family::cosine:
      params["frequency"] = f.cosine_frequency();
      params["phase"] = f.cosine_phase();
      break;
    case Family::constant:
      params["value"] = f.constant_value();
      break;
    case Family::tabulated:
      params["values"] = f.knots();
      break;
    default:
      break;
  }
  return json{{"family", ProfileFn::family_name(f.family())},
              {"params", params}};
}

ProfileFn profile_from_json(const json& j, double q, const std::string& path) {
  expect_keys(j, {"family", "params"}, path);
  if (!j.contains("family") || !j["family"].is_string())
    throw spec_parse_error(path + ".family", "missing or not a string");
  std::string fam = j["family"].get<std::string>();
  json params = j.contains("params") ? j["params"] : json::object();
  std::string ppath = path + ".params";
  if (!params.is_object()) throw spec_parse_error(ppath, "expected an object");

  try {
    if (fam == "linear") {
      expect_keys(params, {}, ppath);
      return ProfileFn::linear(q);
    }
    if (fam == "tent") {
      expect_keys(params, {}, ppath);
      return ProfileFn::tent(q);
    }
    if (fam == "indicator") {
      expect_keys(params, {}, ppath);
      return ProfileFn::indicator(q);
    }
    if (fam == "cosine") {
      expect_keys(params, {"frequency", "phase"}, ppath);
      double freq = get_number(params, "frequency", ppath);
      double phase =
          params.contains("phase") ? get_number(params, "phase", ppath) : 0.0;
      return ProfileFn::cosine(q, freq, phase);
    }
    if (fam == "constant") {
      expect_keys(params, {"value"}, ppath);
      return ProfileFn::constant(q, get_number(params, "value", ppath));
    }
    if (fam == "tabulated") {
      expect_keys(params, {"values"}, ppath);
      if (!params.contains("values") || !params["values"].is_array())
        throw spec_parse_error(ppath + ".values", "missing or not an array");
      std::vector<double> ys;
      for (const auto& y : params["values"]) {
        if (!y.is_number())
          throw spec_parse_error(ppath + ".values", "expected numbers");
        ys.push_back(y.get<double>());
      }
      return ProfileFn::tabulated(q, std::move(ys));
    }
  } catch (const std::invalid_argument& e) {
    throw spec_parse_error(path, e.what());
  }
  throw spec_parse_error(path + ".family", "unknown family '" + fam + "'");
}

}  // namespace

nlohmann::json to_json(const KernelSpec& spec) {
  json atoms = json::array();
  for (const auto& a : spec.atoms) {
    atoms.push_back(json{{"weight", a.weight},
                         {"q", a.q},
                         {"b1", a.b1},
                         {"s", a.s},
                         {"F1", profile_to_json(a.F1)},
                         {"F2", profile_to_json(a.F2)},
                         {"F3", a.F3}});
  }
  return json{{"label", spec.label},
              {"alpha", spec.params.alpha},
              {"H", spec.params.H},
              {"atoms", atoms}};
}

KernelSpec kernel_spec_from_json(const nlohmann::json& j) {
  expect_keys(j, {"label", "alpha", "H", "atoms"}, "spec");
  double alpha = get_number(j, "alpha", "spec");
  double H = get_number(j, "H", "spec");
  std::string label;
  if (j.contains("label")) {
    if (!j["label"].is_string())
      throw spec_parse_error("spec.label", "expected a string");
    label = j["label"].get<std::string>();
  }
  StableParams params = [&] {
    try {
      return StableParams(alpha, H);
    } catch (const std::invalid_argument& e) {
      throw spec_parse_error("spec.alpha/H", e.what());
    }
  }();

  if (!j.contains("atoms") || !j["atoms"].is_array())
    throw spec_parse_error("spec.atoms", "missing or not an array");
  std::vector<AtomSpec> atoms;
  std::size_t idx = 0;
  for (const auto& ja : j["atoms"]) {
    std::string path = "spec.atoms[" + std::to_string(idx) + "]";
    expect_keys(ja, {"weight", "q", "b1", "s", "F1", "F2", "F3"}, path);
    double weight = get_number(ja, "weight", path);
    double q = get_number(ja, "q", path);
    double s = get_number(ja, "s", path);
    double F3 = ja.contains("F3") ? get_number(ja, "F3", path) : 0.0;
    if (!ja.contains("b1") || !ja["b1"].is_number_integer())
      throw spec_parse_error(path + ".b1", "expected integer +-1");
    int b1 = ja["b1"].get<int>();
    if (!ja.contains("F1"))
      throw spec_parse_error(path + ".F1", "missing");
    if (!ja.contains("F2"))
      throw spec_parse_error(path + ".F2", "missing");
    ProfileFn F1 = profile_from_json(ja["F1"], q, path + ".F1");
    ProfileFn F2 = profile_from_json(ja["F2"], q, path + ".F2");
    try {
      atoms.emplace_back(weight, q, b1, s, std::move(F1), std::move(F2), F3);
    } catch (const std::invalid_argument& e) {
      throw spec_parse_error(path, e.what());
    }
    ++idx;
  }
  try {
    return KernelSpec(params, std::move(atoms), label);
  } catch (const std::invalid_argument& e) {
    throw spec_parse_error("spec", e.what());
  }
}

nlohmann::json to_json(const NormReport& report) {
  return json{{"value", report.value},
              {"converged", report.converged},
              {"error_estimate", report.error_estimate}};
}

KernelSpec load_kernel_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw spec_parse_error("file", "cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw spec_parse_error("file", std::string("invalid JSON: ") + e.what());
  }
  return kernel_spec_from_json(j);
}

void save_kernel_spec(const KernelSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << to_json(spec).dump(2) << "\n";
}

}  // namespace fracstable
