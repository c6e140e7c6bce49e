// Acceptance suite: one [PASS]/[FAIL] line per criterion, nonzero exit if any fails.

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "sgop/instance_io.hpp"
#include "sgop/scalarization.hpp"
#include "sgop/separation.hpp"
#include "verify/properties.hpp"

namespace {

using nlohmann::json;
using namespace sgop;

constexpr std::uint64_t kSeed = 20240917;

struct Verdict {
  bool passed = true;
  std::vector<std::string> notes;

  void fail(const std::string& why) {
    passed = false;
    if (notes.size() < 8) notes.push_back(why);
  }
  void note(const std::string& what) { notes.push_back(what); }
};

Verdict from_properties(const std::vector<verify::PropertyResult>& results) {
  Verdict v;
  std::size_t checks = 0;
  for (const auto& r : results) {
    checks += r.checks;
    if (!r.passed()) {
      v.fail(r.name + ": " + std::to_string(r.failures) + "/" + std::to_string(r.checks) + " failed; first: " +
             r.first_failure);
    }
  }
  v.note(std::to_string(results.size()) + " properties, " + std::to_string(checks) + " checks");
  return v;
}

std::vector<verify::PropertyResult> only(std::vector<verify::PropertyResult> results,
                                         const std::vector<std::string>& prefixes) {
  std::erase_if(results, [&](const verify::PropertyResult& r) {
    return std::none_of(prefixes.begin(), prefixes.end(),
                        [&](const std::string& p) { return r.name.rfind(p, 0) == 0; });
  });
  return results;
}

std::vector<std::filesystem::path> fixtures() {
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(std::string(SGOP_DATA_DIR) + "/instances")) {
    if (entry.path().extension() == ".json") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

SpherePointd candidate_of(const GopInstance& inst) { return inst.candidate ? *inst.candidate : inst.ref_point(); }

std::string name_of(const std::filesystem::path& p) { return p.stem().string(); }

Verdict certificate_soundness() {
  Verdict v;
  int certificates = 0;
  for (const auto& path : fixtures()) {
    const auto inst = load_instance_file(path.string()).instance;
    const SpherePointd y = candidate_of(inst);
    const auto cloud = image_cloud(inst, y, inst.resolution);
    const bool efficient = brute_force_efficient(inst, y, inst.resolution).efficient;
    for (auto family : {SeparationFamily::kLinear, SeparationFamily::kNonlinear}) {
      if (certificate_search(inst, y, family, cloud, inst.grid, inst.resolution)) {
        ++certificates;
        if (!efficient) v.fail("false certificate on " + name_of(path));
      }
    }
  }
  v.note(std::to_string(certificates) + " certificates over " + std::to_string(fixtures().size()) + " fixtures");
  const auto random = only(verify::certificate_properties(kSeed + 9), {"linear certificate", "nonlinear certificate"});
  const auto rv = from_properties(random);
  if (!rv.passed) v.fail(rv.notes.front());
  for (const auto& r : random) v.note("randomized: " + std::to_string(r.checks) + " x " + r.name);
  return v;
}

Verdict saddle_equivalence() {
  Verdict v;
  std::ifstream in(std::string(SGOP_DATA_DIR) + "/saddle/saddle_cases.json");
  const json doc = json::parse(in);
  std::map<std::pair<std::string, bool>, int> counts;
  const auto dir = std::string(SGOP_DATA_DIR) + "/instances/";
  for (const auto& c : doc.at("cases")) {
    const auto inst = load_instance_file(dir + c.at("instance").get<std::string>()).instance;
    const SpherePointd y = candidate_of(inst);
    const bool linear = c.at("family") == "linear";
    const auto family = linear ? SeparationFamily::kLinear : SeparationFamily::kNonlinear;
    const ImageFrame frame = image_frame(inst, y);
    const auto cloud = image_cloud(inst, y, inst.resolution);
    const Eigen::VectorXd gy = evaluate_constraints(inst, y);
    const double tol = inst.tolerances.certificate;
    const auto cert = certificate_search(inst, y, family, cloud, inst.grid, inst.resolution);

    const json& jdir = c.at(linear ? "theta" : "phi");
    const json& jcoef = c.at(linear ? "lambda" : "gamma");
    TangentVectord direction = pick_interior_polar(frame.cone);
    Eigen::VectorXd coef = Eigen::VectorXd::Zero(inst.num_constraints());
    if (cert) {
      if (linear) {
        direction = std::get<LinearSepParams>(cert->params).theta;
        coef = std::get<LinearSepParams>(cert->params).lambda;
      } else {
        direction = std::get<NonlinearSepParams>(cert->params).phi;
        coef = std::get<NonlinearSepParams>(cert->params).gamma;
      }
    }
    if (!jdir.is_null()) {
      const auto d = jdir.get<std::vector<double>>();
      direction = parallel_transport(TangentVectord::Project(inst.ref_point(), Eigen::Vector3d(d[0], d[1], d[2])),
                                     frame.fy);
    }
    if (!jcoef.is_null()) {
      const auto k = jcoef.get<std::vector<double>>();
      coef = Eigen::Map<const Eigen::VectorXd>(k.data(), static_cast<Eigen::Index>(k.size()));
    }

    // The saddle inequalities unwound by hand: the multiplier term at y is
    // minimal over the grid (grid contains the zero element) and the cloud
    // maximum of omega does not exceed it.
    double at_y = 0.0;
    double max_omega = -std::numeric_limits<double>::infinity();
    bool saddle = false;
    if (linear) {
      at_y = coef.dot(gy);
      for (const auto& pt : cloud) max_omega = std::max(max_omega, omega1(pt, {direction, coef}));
      saddle = is_saddle_point1(inst, y, direction, coef, cloud, lambda_grid(inst.grid, gy.size()), tol);
    } else {
      at_y = omega_under(gy, coef);
      for (const auto& pt : cloud) max_omega = std::max(max_omega, omega2(pt, {direction, coef}));
      saddle = is_saddle_point2(inst, y, direction, coef, cloud, gamma_grid(inst.grid, gy.size()), tol);
    }
    const bool condition = at_y <= tol && max_omega <= at_y + tol;
    const bool expect = c.at("expect").get<bool>();
    const std::string label = c.at("instance").get<std::string>() + " [" + c.at("family").get<std::string>() + ", " +
                              c.at("note").get<std::string>() + "]";
    if (saddle != condition) v.fail("saddle test disagrees with the inequality conditions: " + label);
    if (saddle != expect) v.fail("unexpected saddle verdict " + std::to_string(saddle) + ": " + label);
    ++counts[{c.at("family").get<std::string>(), expect}];
  }
  for (const std::string family : {"linear", "nonlinear"}) {
    for (bool dir : {true, false}) {
      const int n = counts[{family, dir}];
      v.note(family + (dir ? " saddle" : " non-saddle") + " cases: " + std::to_string(n));
      if (n < 3) v.fail("fewer than 3 " + family + (dir ? " saddle" : " non-saddle") + " cases");
    }
  }
  return v;
}

Verdict zero_gap() {
  Verdict v;
  int zero = 0;
  int positive = 0;
  for (const auto& path : fixtures()) {
    const auto inst = load_instance_file(path.string()).instance;
    const SpherePointd y = candidate_of(inst);
    const auto cloud = image_cloud(inst, y, inst.resolution);
    const auto frame = image_frame(inst, y);
    const auto report = duality_gap(inst, y, polar_directions(frame.cone, inst.grid.n_angle),
                                    lambda_grid(inst.grid, inst.num_constraints()), cloud);
    const bool cert = certificate_search(inst, y, SeparationFamily::kLinear, cloud, inst.grid, inst.resolution)
                          .has_value();
    const bool is_zero = report.omega <= 1e-9;
    (is_zero ? zero : positive)++;
    if (is_zero != cert) {
      std::ostringstream os;
      os << name_of(path) << ": Omega=" << report.omega << " certificate=" << cert;
      v.fail(os.str());
    }
  }
  v.note(std::to_string(zero) + " zero-gap and " + std::to_string(positive) + " positive-gap fixtures");
  if (zero == 0 || positive == 0) v.fail("corpus does not exercise both gap outcomes");
  const auto random = only(verify::certificate_properties(kSeed + 9), {"Omega"});
  const auto rv = from_properties(random);
  if (!rv.passed) v.fail(rv.notes.front());
  v.note("randomized: " + std::to_string(random.front().checks) + " candidates");
  return v;
}

Verdict scalarization() {
  Verdict v = from_properties(verify::scalarization_containments(kSeed + 10, 50, 10));
  const auto procedure = from_properties(verify::scalarization_procedure(kSeed + 11));
  for (const auto& n : procedure.notes) procedure.passed ? v.note(n) : v.fail(n);
  int solved = 0;
  for (const auto& path : fixtures()) {
    const auto inst = load_instance_file(path.string()).instance;
    const SpherePointd y0 = inst.scalarization.y0 ? *inst.scalarization.y0 : candidate_of(inst);
    if (!is_feasible(inst, y0)) continue;  // K and G(y0) would be empty
    const double tol = inst.scalarization.tol;
    const auto r = solve_gop_via_scalarization(inst, y0, {inst.resolution, tol, inst.scalarization.max_rounds});
    ++solved;
    if (!r.certified) v.fail(name_of(path) + ": x0 not certified efficient");
    if (!r.stable) v.fail(name_of(path) + ": re-solve did not stabilize");
    const auto again = solve_quasi_min(inst, r.x_star, scalarizing_vector(inst, r.x_star), inst.resolution, tol);
    if (again.value < -1e-9) v.fail(name_of(path) + ": re-solve at x0 improves by " + std::to_string(-again.value));
  }
  v.note(std::to_string(solved) + " fixtures solved");
  return v;
}

std::pair<int, std::string> capture(const std::string& command) {
  std::string out;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string strip_timing(const std::string& text) {
  std::istringstream in(text);
  std::string out;
  for (std::string line; std::getline(in, line);) {
    if (line.find("\"timing_ms\"") == std::string::npos) out += line + "\n";
  }
  return out;
}

Verdict cli_determinism() {
  Verdict v;
  const std::string bin = SGOP_BINARY;
  const std::vector<std::string> commands = {"check-efficiency",
                                             "separate --family linear",
                                             "separate --family nonlinear",
                                             "saddle --family linear",
                                             "saddle --family nonlinear",
                                             "gap",
                                             "gap --gap-fix-lambda",
                                             "scalarize",
                                             "sample --what patch",
                                             "sample --what image --format json"};
  int runs = 0;
  for (const auto& path : fixtures()) {
    for (const auto& cmd : commands) {
      const auto space = cmd.find(' ');
      const std::string sub = cmd.substr(0, space);
      const std::string flags = space == std::string::npos ? "" : cmd.substr(space);
      const std::string line = bin + " " + sub + " '" + path.string() + "'" + flags + " --seed 7 2>/dev/null";
      const auto a = capture(line);
      const auto b = capture(line);
      ++runs;
      if (a.first != b.first || strip_timing(a.second) != strip_timing(b.second)) {
        v.fail("reports differ: " + name_of(path) + " " + cmd);
      }
      if (a.second.empty()) v.fail("empty report: " + name_of(path) + " " + cmd);
    }
  }
  const std::string verify = bin + " verify --suite gerstewitz --seed 7";
  if (strip_timing(capture(verify).second) != strip_timing(capture(verify).second)) {
    v.fail("verify reports differ");
  }
  v.note(std::to_string(runs + 1) + " commands run twice");
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string title;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "geometry round trip", [] { return from_properties(verify::geometry_round_trip(kSeed)); }},
      {2, "parallel transport vs RK4 oracle",
       [] {
         return from_properties(only(verify::transport_properties(kSeed + 2), {"closed-form", "transport preserves"}));
       }},
      {3, "oriented distance battery", [] { return from_properties(verify::oriented_distance_properties(kSeed + 4)); }},
      {4, "Gerstewitz battery", [] { return from_properties(verify::gerstewitz_properties(kSeed + 5)); }},
      {5, "efficiency equivalence", [] {
         return from_properties(only(verify::theorem_equivalence(kSeed + 6, 50, 5, {20, 36}), {"efficiency"}));
       }},
      {6, "separator construction", [] { return from_properties(verify::separator_properties(kSeed + 8)); }},
      {7, "certificate soundness", certificate_soundness},
      {8, "saddle equivalence", saddle_equivalence},
      {9, "zero-gap equivalence", zero_gap},
      {10, "scalarization", scalarization},
      {11, "CLI determinism", cli_determinism},
  };
  bool all = true;
  for (const auto& c : criteria) {
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    all = all && v.passed;
    std::cout << (v.passed ? "[PASS] " : "[FAIL] ") << c.id << ". " << c.title << "\n";
    for (const auto& n : v.notes) std::cout << "       " << n << "\n";
    std::cout.flush();
  }
  return all ? 0 : 1;
}
