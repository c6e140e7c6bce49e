#include "cli/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "sgop/errors.hpp"
#include "sgop/instance_io.hpp"
#include "sgop/scalarization.hpp"
#include "sgop/separation.hpp"
#include "verify/properties.hpp"

namespace sgop::cli {

namespace {

using nlohmann::json;

struct Options {
  std::string instance;
  std::string y;
  std::string resolution;
  std::optional<double> tol_mem;
  std::optional<double> tol_feas;
  std::optional<double> tol_cert;
  std::string family = "linear";
  std::optional<int> n_angle;
  bool gap_fix_lambda = false;
  std::string lambda;
  std::string theta;
  std::string phi;
  std::string gamma;
  std::string p;
  std::uint64_t seed = 1;
  std::optional<int> threads;
  std::string format = "json";
  std::string out;
  std::string suite = "all";
  std::string what = "patch";
};

/// Everything a command needs once flags have been applied to the instance.
struct Context {
  LoadedInstance loaded;
  GopInstance inst;
  unsigned threads = 1;
  json config;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

unsigned resolve_threads(const Options& opt) {
  if (opt.threads) {
    if (*opt.threads < 1) throw UsageError("--threads must be >= 1");
    return static_cast<unsigned>(*opt.threads);
  }
  if (const char* env = std::getenv("SGOP_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || n < 1) throw UsageError("SGOP_THREADS must be a positive integer");
    return static_cast<unsigned>(n);
  }
  return 1;
}

Resolution parse_resolution(const std::string& text) {
  const Eigen::VectorXd v = parse_vector(text, "--resolution");
  if (v.size() != 2 || v[0] != std::floor(v[0]) || v[1] != std::floor(v[1])) {
    throw ParseError("--resolution", "expected R,A with integer R and A");
  }
  return {static_cast<int>(v[0]), static_cast<int>(v[1])};
}

TangentVectord tangent_flag(const SpherePointd& base, const std::string& text, const std::string& field) {
  const Eigen::VectorXd v = parse_vector(text, field);
  if (v.size() != 3) throw ParseError(field, "expected three comma-separated numbers");
  const Eigen::Vector3d w(v[0], v[1], v[2]);
  if (std::abs(base.coords().dot(w)) > 1e-6 * std::max(1.0, w.norm())) {
    throw ParseError(field, "vector is not tangent at the reference point");
  }
  return TangentVectord::Project(base, w);
}

Context make_context(const Options& opt) {
  LoadedInstance loaded = load_instance_file(opt.instance);
  GopInstance copy = loaded.instance;
  Context ctx{std::move(loaded), std::move(copy), resolve_threads(opt), {}};
  auto& inst = ctx.inst;
  if (!opt.resolution.empty()) inst.resolution = parse_resolution(opt.resolution);
  if (opt.tol_mem) inst.tolerances.membership = *opt.tol_mem;
  if (opt.tol_feas) inst.tolerances.feasibility = *opt.tol_feas;
  if (opt.tol_cert) inst.tolerances.certificate = *opt.tol_cert;
  if (opt.n_angle) inst.grid.n_angle = *opt.n_angle;
  validate_instance(inst);
  ctx.config = {{"resolution", to_json(inst.resolution)},
                {"tolerances", to_json(inst.tolerances)},
                {"search_grid", to_json(inst.grid)},
                {"threads", ctx.threads},
                {"seed", opt.seed}};
  return ctx;
}

SpherePointd resolve_y(const Context& ctx, const std::string& flag) {
  if (flag == "ref") return ctx.inst.ref_point();
  if (!flag.empty()) return parse_point(flag, "--y");
  return ctx.inst.candidate ? *ctx.inst.candidate : ctx.inst.ref_point();
}

json params_json(const LinearSepParams& p) {
  return {{"theta", to_json(p.theta)}, {"base", to_json(p.theta.base())}, {"lambda", to_json(p.lambda)}};
}

json params_json(const NonlinearSepParams& p) {
  return {{"phi", to_json(p.phi)}, {"base", to_json(p.phi.base())}, {"gamma", to_json(p.gamma)}};
}

json image_point_json(const ImagePoint& pt) {
  return {{"u", to_json(pt.u)}, {"v", to_json(pt.v)}, {"source", to_json(pt.source)}};
}

SeparationFamily parse_family(const std::string& name) {
  if (name == "linear") return SeparationFamily::kLinear;
  if (name == "nonlinear") return SeparationFamily::kNonlinear;
  throw UsageError("--family must be linear or nonlinear");
}

struct Outcome {
  json result;
  int code = kOk;
};

Outcome cmd_check_efficiency(Context& ctx, const Options& opt) {
  const SpherePointd y = resolve_y(ctx, opt.y);
  ctx.config["y"] = to_json(y);
  const auto& inst = ctx.inst;
  const auto brute = brute_force_efficient(inst, y, inst.resolution);
  const auto cloud = image_cloud(inst, y, inst.resolution, ctx.threads);
  const auto hk = check_disjoint_H_K(inst, y, cloud);
  const auto ext = check_disjoint_H_extended(inst, y, cloud);
  json result{{"efficient", brute.efficient},
              {"witness", brute.witness ? to_json(*brute.witness) : json(nullptr)},
              {"feasible_count", brute.feasible_count},
              {"disjoint_H_K", hk.disjoint},
              {"H_K_witness", hk.witness ? image_point_json(*hk.witness) : json(nullptr)},
              {"disjoint_H_extended", ext.disjoint}};
  return {result, brute.efficient ? kOk : kNotEfficient};
}

Outcome cmd_separate(Context& ctx, const Options& opt) {
  const SpherePointd y = resolve_y(ctx, opt.y);
  const SeparationFamily family = parse_family(opt.family);
  ctx.config["y"] = to_json(y);
  ctx.config["family"] = opt.family;
  const auto& inst = ctx.inst;
  const auto cloud = image_cloud(inst, y, inst.resolution, ctx.threads);
  const auto cert = certificate_search(inst, y, family, cloud, inst.grid, inst.resolution, ctx.threads);
  json result{{"certificate_found", cert.has_value()}, {"family", opt.family}};
  if (cert) {
    result["max_omega"] = cert->max_omega;
    result["params"] = std::visit([](const auto& p) { return params_json(p); }, cert->params);
  }
  return {result, cert ? kOk : kNoCertificate};
}

Outcome cmd_saddle(Context& ctx, const Options& opt) {
  const SpherePointd y = resolve_y(ctx, opt.y);
  const SeparationFamily family = parse_family(opt.family);
  ctx.config["y"] = to_json(y);
  ctx.config["family"] = opt.family;
  const auto& inst = ctx.inst;
  const Eigen::Index l = inst.num_constraints();
  const ImageFrame frame = image_frame(inst, y);
  const auto cloud = image_cloud(inst, y, inst.resolution, ctx.threads);
  const Eigen::VectorXd gy = evaluate_constraints(inst, y);
  const auto at_fy = [&](const std::string& text, const std::string& field) {
    return parallel_transport(tangent_flag(inst.ref_point(), text, field), frame.fy, inst.tolerances.antipodal);
  };
  const auto coefficients = [&](const std::string& text, const std::string& field) {
    const Eigen::VectorXd v = parse_vector(text, field);
    if (v.size() != l) throw ParseError(field, "expected " + std::to_string(l) + " comma-separated numbers");
    return v;
  };
  std::optional<SeparationCertificate> cert;
  const bool explicit_direction = family == SeparationFamily::kLinear ? !opt.theta.empty() : !opt.phi.empty();
  if (!explicit_direction) cert = certificate_search(inst, y, family, cloud, inst.grid, inst.resolution, ctx.threads);
  ctx.config["params_source"] = explicit_direction ? "flags" : cert ? "certificate_search" : "default";

  json result;
  bool saddle = false;
  if (family == SeparationFamily::kLinear) {
    LinearSepParams bar{pick_interior_polar(frame.cone), Eigen::VectorXd::Zero(l)};
    if (cert) bar = std::get<LinearSepParams>(cert->params);
    if (explicit_direction) bar.theta = at_fy(opt.theta, "--theta");
    if (!opt.lambda.empty()) bar.lambda = coefficients(opt.lambda, "--lambda");
    saddle = is_saddle_point1(inst, y, bar.theta, bar.lambda, cloud, lambda_grid(inst.grid, l),
                              inst.tolerances.certificate);
    double max_omega = -std::numeric_limits<double>::infinity();
    for (const auto& pt : cloud) max_omega = std::max(max_omega, omega1(pt, bar));
    result = {{"params", params_json(bar)},
              {"complementary_slackness", bar.lambda.dot(gy)},
              {"max_omega", max_omega}};
  } else {
    NonlinearSepParams bar{pick_interior_polar(frame.cone), Eigen::VectorXd::Zero(l)};
    if (cert) bar = std::get<NonlinearSepParams>(cert->params);
    if (explicit_direction) bar.phi = at_fy(opt.phi, "--phi");
    if (!opt.gamma.empty()) bar.gamma = coefficients(opt.gamma, "--gamma");
    saddle = is_saddle_point2(inst, y, bar.phi, bar.gamma, cloud, gamma_grid(inst.grid, l),
                              inst.tolerances.certificate);
    double max_omega = -std::numeric_limits<double>::infinity();
    for (const auto& pt : cloud) max_omega = std::max(max_omega, omega2(pt, bar));
    result = {{"params", params_json(bar)},
              {"omega_under_at_y", omega_under(gy, bar.gamma)},
              {"max_omega", max_omega}};
  }
  result["saddle_point"] = saddle;
  result["family"] = opt.family;
  return {result, saddle ? kOk : kNotSaddle};
}

Outcome cmd_gap(Context& ctx, const Options& opt) {
  const SpherePointd y = resolve_y(ctx, opt.y);
  const auto& inst = ctx.inst;
  const Eigen::Index l = inst.num_constraints();
  ctx.config["y"] = to_json(y);
  ctx.config["gap_fix_lambda"] = opt.gap_fix_lambda;
  std::vector<Eigen::VectorXd> lambdas;
  if (opt.gap_fix_lambda) {
    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(l);
    if (!opt.lambda.empty()) {
      lambda = parse_vector(opt.lambda, "--lambda");
      if (lambda.size() != l) throw ParseError("--lambda", "expected " + std::to_string(l) + " numbers");
    }
    lambdas.push_back(lambda);
  } else {
    if (!opt.lambda.empty()) throw UsageError("--lambda requires --gap-fix-lambda for the gap command");
    lambdas = lambda_grid(inst.grid, l);
  }
  const ImageFrame frame = image_frame(inst, y);
  const auto cloud = image_cloud(inst, y, inst.resolution, ctx.threads);
  const auto report =
      duality_gap(inst, y, polar_directions(frame.cone, inst.grid.n_angle), lambdas, cloud, ctx.threads);
  json result{{"omega", report.omega},
              {"argmin", params_json(report.argmin)},
              {"zero_gap", report.omega <= inst.tolerances.certificate},
              {"lambda_count", lambdas.size()}};
  return {result, kOk};
}

Outcome cmd_scalarize(Context& ctx, const Options& opt) {
  auto& inst = ctx.inst;
  if (!opt.p.empty()) {
    if (opt.p == "auto") {
      inst.scalarization.p.reset();
    } else {
      inst.scalarization.p = tangent_flag(inst.ref_point(), opt.p, "--p").vec();
    }
  }
  SpherePointd y0 = inst.scalarization.y0 ? *inst.scalarization.y0 : resolve_y(ctx, "");
  if (!opt.y.empty()) y0 = resolve_y(ctx, opt.y);
  ctx.config["y0"] = to_json(y0);
  ctx.config["p"] = inst.scalarization.p ? json::array({(*inst.scalarization.p)[0], (*inst.scalarization.p)[1],
                                                         (*inst.scalarization.p)[2]})
                                         : json("auto");
  ctx.config["scalarization_tol"] = inst.scalarization.tol;
  ctx.config["max_rounds"] = inst.scalarization.max_rounds;
  ctx.config["combination"] = "chord renormalized to the sphere";

  const auto res = solve_gop_via_scalarization(inst, y0,
                                               {inst.resolution, inst.scalarization.tol, inst.scalarization.max_rounds});
  json trace = json::array();
  for (const auto& round : res.trace) {
    trace.push_back({{"y", to_json(round.y)},
                     {"x_best", to_json(round.solve.x_best)},
                     {"value", round.solve.value},
                     {"feasible_count", round.solve.feasible_count},
                     {"improved", round.improved}});
  }
  json result{{"x_star", to_json(res.x_star)},
              {"certified", res.certified},
              {"stable", res.stable},
              {"trace", trace},
              {"warnings", res.warnings}};
  return {result, res.certified ? kOk : kUncertified};
}

std::string csv_number(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

Outcome cmd_sample(Context& ctx, const Options& opt, std::string& csv) {
  const auto& inst = ctx.inst;
  ctx.config["what"] = opt.what;
  std::ostringstream os;
  json rows = json::array();
  if (opt.what == "patch") {
    const auto points = sample_patch(inst.patch, inst.resolution.radial, inst.resolution.angular);
    os << "index,x,y,z\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto& c = points[i].coords();
      os << i << ',' << csv_number(c[0]) << ',' << csv_number(c[1]) << ',' << csv_number(c[2]) << '\n';
      rows.push_back(to_json(points[i]));
    }
  } else if (opt.what == "image") {
    const SpherePointd y = resolve_y(ctx, opt.y);
    ctx.config["y"] = to_json(y);
    const auto cloud = image_cloud(inst, y, inst.resolution, ctx.threads);
    os << "index,x,y,z,u1,u2,u3";
    for (Eigen::Index i = 0; i < inst.num_constraints(); ++i) os << ",v" << i + 1;
    os << '\n';
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const auto& pt = cloud[i];
      os << i;
      for (int k = 0; k < 3; ++k) os << ',' << csv_number(pt.source[k]);
      for (int k = 0; k < 3; ++k) os << ',' << csv_number(pt.u.vec()[k]);
      for (Eigen::Index k = 0; k < pt.v.size(); ++k) os << ',' << csv_number(pt.v[k]);
      os << '\n';
      rows.push_back(image_point_json(pt));
    }
  } else {
    throw UsageError("--what must be patch or image");
  }
  csv = os.str();
  return {{{"what", opt.what}, {"points", rows}}, kOk};
}

Outcome cmd_verify(const Options& opt, json& config) {
  const auto suite = verify::parse_suite(opt.suite);
  if (!suite) throw UsageError("--suite must be one of geometry, delta, gerstewitz, isa, scalarization, all");
  config = {{"suite", opt.suite}, {"seed", opt.seed}};
  const auto results = verify::run_suite(*suite, opt.seed);
  json props = json::array();
  bool all_passed = true;
  for (const auto& r : results) {
    json entry{{"name", r.name}, {"checks", r.checks}, {"failures", r.failures}, {"passed", r.passed()}};
    if (!r.passed()) entry["reproduction"] = r.first_failure;
    props.push_back(entry);
    all_passed = all_passed && r.passed();
  }
  return {{{"properties", props}, {"all_passed", all_passed}}, all_passed ? kOk : kPropertyFailed};
}

void emit(const std::string& text, const Options& opt, std::ostream& out) {
  if (opt.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(opt.out, std::ios::binary);
  if (!file) throw UsageError("cannot write '" + opt.out + "'");
  file << text;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cone-ordered optimization on a spherical patch via image space analysis", "sgop"};
  app.require_subcommand(1);
  Options opt;

  const auto add_common = [&](CLI::App* sub, bool needs_instance) {
    if (needs_instance) sub->add_option("instance", opt.instance, "Instance file (JSON)")->required();
    sub->add_option("--seed", opt.seed, "Seed for randomized steps");
    sub->add_option("--threads", opt.threads, "Worker threads (default: SGOP_THREADS or 1)");
    sub->add_option("--format", opt.format, "Output format: json, or csv for sample");
    sub->add_option("--out", opt.out, "Write the report to PATH");
  };
  const auto add_problem = [&](CLI::App* sub) {
    add_common(sub, true);
    sub->add_option("--y", opt.y, "Candidate point x,y,z or 'ref'");
    sub->add_option("--resolution", opt.resolution, "Sampling resolution R,A");
    sub->add_option("--tol-mem", opt.tol_mem, "Cone membership tolerance");
    sub->add_option("--tol-feas", opt.tol_feas, "Feasibility tolerance");
    sub->add_option("--tol-cert", opt.tol_cert, "Certificate tolerance");
    sub->add_option("--n-angle", opt.n_angle, "Number of polar directions in the search grid");
  };

  auto* check = app.add_subcommand("check-efficiency", "Brute-force efficiency and image disjointness");
  add_problem(check);
  auto* separate = app.add_subcommand("separate", "Search for a separation certificate");
  add_problem(separate);
  separate->add_option("--family", opt.family, "linear or nonlinear");
  auto* saddle = app.add_subcommand("saddle", "Check a generalized saddle point");
  add_problem(saddle);
  saddle->add_option("--family", opt.family, "linear or nonlinear");
  saddle->add_option("--theta", opt.theta, "theta at the reference point (x,y,z)");
  saddle->add_option("--lambda", opt.lambda, "lambda (comma separated)");
  saddle->add_option("--phi", opt.phi, "phi at the reference point (x,y,z)");
  saddle->add_option("--gamma", opt.gamma, "gamma (comma separated)");
  auto* gap = app.add_subcommand("gap", "Image duality gap");
  add_problem(gap);
  gap->add_flag("--gap-fix-lambda", opt.gap_fix_lambda, "Hold lambda fixed instead of minimizing over the grid");
  gap->add_option("--lambda", opt.lambda, "Fixed lambda for --gap-fix-lambda (default 0)");
  auto* scalarize = app.add_subcommand("scalarize", "Solve via the quasi-minimum problem");
  add_problem(scalarize);
  scalarize->add_option("--p", opt.p, "Scalarizing vector at the reference point, or 'auto'");
  auto* verify_cmd = app.add_subcommand("verify", "Run the property batteries");
  add_common(verify_cmd, false);
  verify_cmd->add_option("--suite", opt.suite, "geometry, delta, gerstewitz, isa, scalarization or all");
  auto* sample = app.add_subcommand("sample", "Dump the patch grid or the image cloud");
  add_problem(sample);
  sample->add_option("--what", opt.what, "patch or image");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "sgop: " << e.what() << "\n";
    return kUsageError;
  }

  CLI::App* command = app.get_subcommands().front();
  const std::string name = command->get_name();
  try {
    const auto start = std::chrono::steady_clock::now();
    if (opt.format != "json" && !(opt.format == "csv" && name == "sample")) {
      throw UsageError("--format must be json" + std::string(name == "sample" ? " or csv" : ""));
    }
    if (name == "sample" && !command->count("--format")) opt.format = "csv";

    json report{{"schema", kSchemaVersion}, {"command", name}};
    Outcome outcome;
    std::string csv;
    if (name == "verify") {
      json config;
      outcome = cmd_verify(opt, config);
      report["instance_digest"] = nullptr;
      report["instance"] = nullptr;
      report["config"] = config;
    } else {
      Context ctx = make_context(opt);
      if (name == "check-efficiency") outcome = cmd_check_efficiency(ctx, opt);
      if (name == "separate") outcome = cmd_separate(ctx, opt);
      if (name == "saddle") outcome = cmd_saddle(ctx, opt);
      if (name == "gap") outcome = cmd_gap(ctx, opt);
      if (name == "scalarize") outcome = cmd_scalarize(ctx, opt);
      if (name == "sample") outcome = cmd_sample(ctx, opt, csv);
      report["instance_digest"] = ctx.loaded.digest;
      report["instance"] = ctx.loaded.canonical;
      report["config"] = ctx.config;
    }
    if (name == "sample" && opt.format == "csv") {
      emit(csv, opt, out);
      return outcome.code;
    }
    report["result"] = outcome.result;
    report["exit_code"] = outcome.code;
    report["timing_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    emit(report.dump(2) + "\n", opt, out);
    return outcome.code;
  } catch (const UsageError& e) {
    err << "sgop " << name << ": " << e.what() << "\n";
    return kUsageError;
  } catch (const ParseError& e) {
    err << "sgop " << name << ": " << e.what() << "\n";
    return kUsageError;
  } catch (const Error& e) {
    err << "sgop " << name << ": " << e.what() << "\n";
    return kDomainError;
  }
}

}  // namespace sgop::cli
