#include "sgop/instance_io.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>
#include <type_traits>

#include "sgop/errors.hpp"

namespace sgop {

namespace {

using nlohmann::json;

constexpr double kGeneratorTangentTolerance = 1e-6;

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!keys.contains(key)) throw ParseError(path.empty() ? key : path + "." + key, "unknown key");
  }
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

const json& require_object(const json& doc, const std::string& path) {
  if (!doc.is_object()) throw ParseError(path, "expected an object");
  return doc;
}

double require_number(const json& value, const std::string& path) {
  if (!value.is_number()) throw ParseError(path, "expected a number");
  const double x = value.get<double>();
  if (!std::isfinite(x)) throw ParseError(path, "expected a finite number");
  return x;
}

int require_int(const json& value, const std::string& path) {
  if (!value.is_number_integer()) throw ParseError(path, "expected an integer");
  return value.get<int>();
}

json require_vec3(const json& value, const std::string& path) {
  if (!value.is_array() || value.size() != 3) throw ParseError(path, "expected an array of 3 numbers");
  for (std::size_t i = 0; i < 3; ++i) require_number(value[i], path + "[" + std::to_string(i) + "]");
  return value;
}

json require_number_list(const json& value, const std::string& path) {
  if (!value.is_array() || value.empty()) throw ParseError(path, "expected a nonempty array of numbers");
  for (std::size_t i = 0; i < value.size(); ++i) require_number(value[i], path + "[" + std::to_string(i) + "]");
  return value;
}

const json& member(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) throw ParseError(join(path, key), "missing required field");
  return obj.at(key);
}

Eigen::Vector3d vec3(const json& value) {
  return {value[0].get<double>(), value[1].get<double>(), value[2].get<double>()};
}

SpherePointd point(const json& value, const std::string& path) {
  try {
    return SpherePointd(vec3(value));
  } catch (const RangeError& e) {
    throw ParseError(path, e.what());
  }
}

TangentVectord tangent(const SpherePointd& base, const json& value, const std::string& path) {
  const Eigen::Vector3d v = vec3(value);
  if (std::abs(base.coords().dot(v)) > kGeneratorTangentTolerance * std::max(1.0, v.norm())) {
    throw ParseError(path, "vector is not tangent at the base point");
  }
  return TangentVectord::Project(base, v);
}

json canonical_objective(const json& obj) {
  const std::string path = "objective";
  require_object(obj, path);
  check_keys(obj, path, {"family", "params"});
  const json& family = member(obj, path, "family");
  if (!family.is_string()) throw ParseError("objective.family", "expected a string");
  const json params = obj.contains("params") ? obj.at("params") : json::object();
  require_object(params, "objective.params");
  const std::string name = family.get<std::string>();
  json out{{"family", name}, {"params", json::object()}};
  if (name == "identity") {
    check_keys(params, "objective.params", {});
  } else if (name == "rotation") {
    check_keys(params, "objective.params", {"axis", "angle"});
    out["params"]["axis"] = require_vec3(member(params, "objective.params", "axis"), "objective.params.axis");
    out["params"]["angle"] = require_number(member(params, "objective.params", "angle"), "objective.params.angle");
  } else if (name == "pull") {
    check_keys(params, "objective.params", {"anchor", "t"});
    out["params"]["anchor"] =
        require_vec3(member(params, "objective.params", "anchor"), "objective.params.anchor");
    out["params"]["t"] = require_number(member(params, "objective.params", "t"), "objective.params.t");
  } else {
    throw ParseError("objective.family", "unknown family '" + name + "' (identity, rotation, pull)");
  }
  return out;
}

json canonical_constraint(const json& term, const std::string& path) {
  require_object(term, path);
  const json& kind = member(term, path, "kind");
  if (!kind.is_string()) throw ParseError(join(path, "kind"), "expected a string");
  const std::string name = kind.get<std::string>();
  if (name == "ball") {
    check_keys(term, path, {"kind", "center", "radius"});
    return {{"kind", name},
            {"center", require_vec3(member(term, path, "center"), join(path, "center"))},
            {"radius", require_number(member(term, path, "radius"), join(path, "radius"))}};
  }
  if (name == "affine") {
    check_keys(term, path, {"kind", "normal", "offset"});
    return {{"kind", name},
            {"normal", require_vec3(member(term, path, "normal"), join(path, "normal"))},
            {"offset", require_number(member(term, path, "offset"), join(path, "offset"))}};
  }
  throw ParseError(join(path, "kind"), "unknown constraint kind '" + name + "' (ball, affine)");
}

json optional_section(const json& doc, const char* key) {
  if (!doc.contains(key)) return json::object();
  return require_object(doc.at(key), key);
}

}  // namespace

nlohmann::json canonicalize_instance(const nlohmann::json& doc) {
  require_object(doc, "<root>");
  check_keys(doc, "", {"schema", "description", "patch", "cone", "objective", "constraints",
                       "tolerances", "resolution", "search_grid", "scalarization", "candidate"});
  json out;
  const int schema = doc.contains("schema") ? require_int(doc.at("schema"), "schema") : kSchemaVersion;
  if (schema != kSchemaVersion) throw ParseError("schema", "unsupported schema version");
  out["schema"] = schema;
  if (doc.contains("description") && !doc.at("description").is_string()) {
    throw ParseError("description", "expected a string");
  }
  out["description"] = doc.value("description", std::string());

  const json& patch = require_object(member(doc, "", "patch"), "patch");
  check_keys(patch, "patch", {"center", "radius"});
  out["patch"] = {{"center", require_vec3(member(patch, "patch", "center"), "patch.center")},
                  {"radius", require_number(member(patch, "patch", "radius"), "patch.radius")}};

  const json& cone = require_object(member(doc, "", "cone"), "cone");
  check_keys(cone, "cone", {"base", "base_tangent_a", "base_tangent_b"});
  out["cone"] = {
      {"base", cone.contains("base") ? require_vec3(cone.at("base"), "cone.base") : out["patch"]["center"]},
      {"base_tangent_a", require_vec3(member(cone, "cone", "base_tangent_a"), "cone.base_tangent_a")},
      {"base_tangent_b", require_vec3(member(cone, "cone", "base_tangent_b"), "cone.base_tangent_b")}};

  out["objective"] = canonical_objective(member(doc, "", "objective"));

  const json& constraints = member(doc, "", "constraints");
  if (!constraints.is_array() || constraints.empty()) {
    throw ParseError("constraints", "expected a nonempty array");
  }
  out["constraints"] = json::array();
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    out["constraints"].push_back(
        canonical_constraint(constraints[i], "constraints[" + std::to_string(i) + "]"));
  }

  const json tol = optional_section(doc, "tolerances");
  check_keys(tol, "tolerances", {"membership", "feasibility", "antipodal", "certificate"});
  const Tolerances tol_default;
  out["tolerances"] = json::object();
  for (const auto& [key, fallback] :
       {std::pair{"membership", tol_default.membership}, std::pair{"feasibility", tol_default.feasibility},
        std::pair{"antipodal", tol_default.antipodal}, std::pair{"certificate", tol_default.certificate}}) {
    out["tolerances"][key] =
        tol.contains(key) ? require_number(tol.at(key), join("tolerances", key)) : fallback;
  }

  const json res = optional_section(doc, "resolution");
  check_keys(res, "resolution", {"radial", "angular"});
  const Resolution res_default;
  out["resolution"] = {
      {"radial", res.contains("radial") ? require_int(res.at("radial"), "resolution.radial") : res_default.radial},
      {"angular",
       res.contains("angular") ? require_int(res.at("angular"), "resolution.angular") : res_default.angular}};

  const json grid = optional_section(doc, "search_grid");
  check_keys(grid, "search_grid", {"n_angle", "lambda_levels", "lambda_scales", "gamma_levels"});
  const SearchGrid grid_default;
  out["search_grid"] = {
      {"n_angle",
       grid.contains("n_angle") ? require_int(grid.at("n_angle"), "search_grid.n_angle") : grid_default.n_angle},
      {"lambda_levels", grid.contains("lambda_levels")
                            ? require_number_list(grid.at("lambda_levels"), "search_grid.lambda_levels")
                            : json(grid_default.lambda_levels)},
      {"lambda_scales", grid.contains("lambda_scales")
                            ? require_number_list(grid.at("lambda_scales"), "search_grid.lambda_scales")
                            : json(grid_default.lambda_scales)},
      {"gamma_levels", grid.contains("gamma_levels")
                           ? require_number_list(grid.at("gamma_levels"), "search_grid.gamma_levels")
                           : json(grid_default.gamma_levels)}};

  const json scal = optional_section(doc, "scalarization");
  check_keys(scal, "scalarization", {"p", "y0", "tol", "max_rounds"});
  const ScalarizationSettings scal_default;
  json p = "auto";
  if (scal.contains("p")) {
    const json& raw = scal.at("p");
    if (raw.is_string()) {
      if (raw.get<std::string>() != "auto") throw ParseError("scalarization.p", "expected \"auto\" or a 3-vector");
    } else {
      p = require_vec3(raw, "scalarization.p");
    }
  }
  out["scalarization"] = {
      {"p", p},
      {"y0", scal.contains("y0") && !scal.at("y0").is_null() ? require_vec3(scal.at("y0"), "scalarization.y0")
                                                              : json(nullptr)},
      {"tol", scal.contains("tol") ? require_number(scal.at("tol"), "scalarization.tol") : scal_default.tol},
      {"max_rounds", scal.contains("max_rounds") ? require_int(scal.at("max_rounds"), "scalarization.max_rounds")
                                                 : scal_default.max_rounds}};

  out["candidate"] = doc.contains("candidate") && !doc.at("candidate").is_null()
                         ? require_vec3(doc.at("candidate"), "candidate")
                         : json(nullptr);
  return out;
}

GopInstance instance_from_json(const nlohmann::json& doc) {
  const json c = canonicalize_instance(doc);

  const SpherePointd center = point(c["patch"]["center"], "patch.center");
  std::optional<Patchd> patch;
  try {
    patch.emplace(center, c["patch"]["radius"].get<double>());
  } catch (const RangeError& e) {
    throw ParseError("patch.radius", e.what());
  }

  const SpherePointd base = point(c["cone"]["base"], "cone.base");
  std::optional<SectorConed> cone;
  try {
    cone.emplace(tangent(base, c["cone"]["base_tangent_a"], "cone.base_tangent_a"),
                 tangent(base, c["cone"]["base_tangent_b"], "cone.base_tangent_b"));
  } catch (const DegenerateError& e) {
    throw ParseError("cone", e.what());
  }

  ObjectiveSpec objective = IdentityObjective{};
  const json& obj = c["objective"];
  const std::string family = obj["family"].get<std::string>();
  if (family == "rotation") {
    objective = RotationObjective{vec3(obj["params"]["axis"]), obj["params"]["angle"].get<double>()};
  } else if (family == "pull") {
    objective = PullObjective{point(obj["params"]["anchor"], "objective.params.anchor"),
                              obj["params"]["t"].get<double>()};
  }

  std::vector<ConstraintTerm> constraints;
  for (std::size_t i = 0; i < c["constraints"].size(); ++i) {
    const json& term = c["constraints"][i];
    const std::string path = "constraints[" + std::to_string(i) + "]";
    if (term["kind"] == "ball") {
      constraints.emplace_back(BallConstraint{point(term["center"], path + ".center"), term["radius"].get<double>()});
    } else {
      constraints.emplace_back(AffineConstraint{vec3(term["normal"]), term["offset"].get<double>()});
    }
  }

  GopInstance inst{*patch, *cone, objective, constraints, {}, {}, {}, {}, std::nullopt};
  const json& tol = c["tolerances"];
  inst.tolerances = {tol["membership"].get<double>(), tol["feasibility"].get<double>(),
                     tol["antipodal"].get<double>(), tol["certificate"].get<double>()};
  inst.resolution = {c["resolution"]["radial"].get<int>(), c["resolution"]["angular"].get<int>()};
  const json& grid = c["search_grid"];
  inst.grid = {grid["n_angle"].get<int>(), grid["lambda_levels"].get<std::vector<double>>(),
               grid["lambda_scales"].get<std::vector<double>>(), grid["gamma_levels"].get<std::vector<double>>()};
  const json& scal = c["scalarization"];
  if (!scal["p"].is_string()) inst.scalarization.p = tangent(base, scal["p"], "scalarization.p").vec();
  if (!scal["y0"].is_null()) inst.scalarization.y0 = point(scal["y0"], "scalarization.y0");
  inst.scalarization.tol = scal["tol"].get<double>();
  inst.scalarization.max_rounds = scal["max_rounds"].get<int>();
  if (!c["candidate"].is_null()) inst.candidate = point(c["candidate"], "candidate");

  validate_instance(inst);
  return inst;
}

nlohmann::json to_json(const SpherePointd& x) { return json::array({x[0], x[1], x[2]}); }

nlohmann::json to_json(const TangentVectord& v) {
  return json::array({v.vec()[0], v.vec()[1], v.vec()[2]});
}

nlohmann::json to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

nlohmann::json to_json(const Resolution& r) { return {{"radial", r.radial}, {"angular", r.angular}}; }

nlohmann::json to_json(const Tolerances& t) {
  return {{"membership", t.membership},
          {"feasibility", t.feasibility},
          {"antipodal", t.antipodal},
          {"certificate", t.certificate}};
}

nlohmann::json to_json(const SearchGrid& g) {
  return {{"n_angle", g.n_angle},
          {"lambda_levels", g.lambda_levels},
          {"lambda_scales", g.lambda_scales},
          {"gamma_levels", g.gamma_levels}};
}

nlohmann::json instance_to_json(const GopInstance& inst) {
  json doc;
  doc["schema"] = kSchemaVersion;
  doc["description"] = "";
  doc["patch"] = {{"center", to_json(inst.patch.center())}, {"radius", inst.patch.radius()}};
  doc["cone"] = {{"base", to_json(inst.ref_point())},
                 {"base_tangent_a", to_json(inst.ref_cone.gen_a())},
                 {"base_tangent_b", to_json(inst.ref_cone.gen_b())}};
  doc["objective"] = std::visit(
      [](const auto& f) -> json {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, IdentityObjective>) {
          return {{"family", "identity"}, {"params", json::object()}};
        } else if constexpr (std::is_same_v<F, RotationObjective>) {
          return {{"family", "rotation"},
                  {"params", {{"axis", json::array({f.axis[0], f.axis[1], f.axis[2]})}, {"angle", f.angle}}}};
        } else {
          return {{"family", "pull"}, {"params", {{"anchor", to_json(f.anchor)}, {"t", f.t}}}};
        }
      },
      inst.objective);
  doc["constraints"] = json::array();
  for (const auto& term : inst.constraints) {
    if (const auto* ball = std::get_if<BallConstraint>(&term)) {
      doc["constraints"].push_back({{"kind", "ball"}, {"center", to_json(ball->center)}, {"radius", ball->radius}});
    } else {
      const auto& aff = std::get<AffineConstraint>(term);
      doc["constraints"].push_back({{"kind", "affine"},
                                    {"normal", json::array({aff.normal[0], aff.normal[1], aff.normal[2]})},
                                    {"offset", aff.offset}});
    }
  }
  doc["tolerances"] = to_json(inst.tolerances);
  doc["resolution"] = to_json(inst.resolution);
  doc["search_grid"] = to_json(inst.grid);
  const auto& s = inst.scalarization;
  doc["scalarization"] = {
      {"p", s.p ? json::array({(*s.p)[0], (*s.p)[1], (*s.p)[2]}) : json("auto")},
      {"y0", s.y0 ? to_json(*s.y0) : json(nullptr)},
      {"tol", s.tol},
      {"max_rounds", s.max_rounds}};
  doc["candidate"] = inst.candidate ? to_json(*inst.candidate) : json(nullptr);
  return doc;
}

std::string instance_digest(const nlohmann::json& canonical) {
  const std::string text = canonical.dump();
  unsigned char hash[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), hash, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", hash[i]);
    hex += buf;
  }
  return hex;
}

LoadedInstance load_instance(const nlohmann::json& doc) {
  json canonical = canonicalize_instance(doc);
  GopInstance inst = instance_from_json(canonical);
  std::string digest = instance_digest(canonical);
  return {std::move(inst), std::move(canonical), std::move(digest)};
}

LoadedInstance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("<file>", "cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("<file>", std::string("invalid JSON: ") + e.what());
  }
  return load_instance(doc);
}

SpherePointd parse_point(const std::string& text, const std::string& field) {
  const Eigen::VectorXd v = parse_vector(text, field);
  if (v.size() != 3) throw ParseError(field, "expected three comma-separated numbers");
  try {
    return SpherePointd(Eigen::Vector3d(v[0], v[1], v[2]));
  } catch (const RangeError& e) {
    throw ParseError(field, e.what());
  }
}

Eigen::VectorXd parse_vector(const std::string& text, const std::string& field) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ParseError(field, "cannot parse number '" + item + "'");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos || !std::isfinite(x)) {
      throw ParseError(field, "cannot parse number '" + item + "'");
    }
    values.push_back(x);
  }
  if (values.empty()) throw ParseError(field, "expected comma-separated numbers");
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace sgop
