#include "sobolev/cli.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "sobolev/error.hpp"
#include "sobolev/io.hpp"
#include "sobolev/reference.hpp"

namespace sobolev::cli {

namespace {

struct RunConfig {
  std::string subcommand;
  std::string domain;
  double p = 2.0;
  double h = 0.02;
  double r_min = 0.1;
  double r_max = 0.9;
  int r_count = 9;
  std::string r_spacing = "linear";
  std::string out;
  std::string format;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  bool dump_field = false;
  bool allow_large_r = false;
  int samples = kDefaultLevelSamples;
  std::vector<double> base_point;
  SolverConfig solver;
};

/// Invalid user input, reported with exit status 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void add_common_options(CLI::App& cmd, RunConfig& config) {
  cmd.add_option("--domain", config.domain, "Domain JSON: a file path or inline JSON")->required();
  cmd.add_option("--p", config.p, "Exponent p >= 1");
  cmd.add_option("--h", config.h, "Target mesh resolution");
  cmd.add_option("--out", config.out, "Output path (stdout when omitted)");
  cmd.add_option("--format", config.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  cmd.add_option("--threads", config.threads, "Worker threads for sweeps");
  cmd.add_flag("--dump-field", config.dump_field, "Also write the extremal field as CSV");
  cmd.add_flag("--allow-large-r", config.allow_large_r, "Permit sweep radii above 0.95");
  cmd.add_option("--quotient-tol", config.solver.quotient_tol, "Relative quotient-change tolerance");
  cmd.add_option("--residual-tol", config.solver.residual_tol, "Euler-Lagrange residual tolerance");
  cmd.add_option("--max-iter", config.solver.max_iterations, "Maximum outer iterations");
  cmd.add_option("--linear-tol", config.solver.linear_tol, "Conjugate-gradient tolerance");
}

void add_sweep_options(CLI::App& cmd, RunConfig& config) {
  cmd.add_option("--r-min", config.r_min, "Smallest sweep radius");
  cmd.add_option("--r-max", config.r_max, "Largest sweep radius");
  cmd.add_option("--r-count", config.r_count, "Number of sweep radii (>= 4)");
  cmd.add_option("--r-spacing", config.r_spacing, "Radius spacing")->check(CLI::IsMember({"linear", "log"}));
}

Json load_domain_json(const std::string& text) {
  std::string source = text;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || text[first] != '{') {
    std::ifstream file(text);
    if (!file) throw UsageError("cannot open domain file '" + text + "'");
    std::stringstream buffer;
    buffer << file.rdbuf();
    source = buffer.str();
  }
  try {
    return Json::parse(source);
  } catch (const Json::exception& e) {
    throw UsageError(std::string("malformed domain JSON: ") + e.what());
  }
}

void validate(const RunConfig& config) {
  if (!(config.p >= 1.0)) throw UsageError("invalid --p: the exponent must satisfy p >= 1");
  if (!(config.h > 0.0)) throw UsageError("invalid --h: resolution must be positive");
  if (config.threads < 1) throw UsageError("invalid --threads: need at least 1");
}

std::vector<double> radius_grid(const RunConfig& config) {
  if (config.r_count < 4) throw UsageError("invalid --r-count: sweeps need at least 4 radii");
  if (!(config.r_min > 0.0 && config.r_min < config.r_max && config.r_max < 1.0)) {
    throw UsageError("invalid radius grid: need 0 < r-min < r-max < 1");
  }
  std::vector<double> grid;
  for (int i = 0; i < config.r_count; ++i) {
    const double s = static_cast<double>(i) / (config.r_count - 1);
    grid.push_back(config.r_spacing == "log"
                       ? std::exp(std::log(config.r_min) + s * (std::log(config.r_max) - std::log(config.r_min)))
                       : config.r_min + s * (config.r_max - config.r_min));
  }
  grid.back() = config.r_max;
  return grid;
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty()) {
    out << content;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot write '" + path + "'");
  file << content;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

SolveResult solve_domain(const RunConfig& config, const DomainSpec& domain, double h) {
  auto mesh = std::make_shared<const TriMesh>(mesh_domain(domain, h));
  SolverConfig solver = config.solver;
  solver.p = config.p;
  return minimize_quotient(mesh, solver);
}

int cmd_solve(const RunConfig& config, std::ostream& out) {
  const DomainSpec domain = parse_domain(load_domain_json(config.domain));
  if (config.dump_field && config.out.empty()) throw UsageError("--dump-field needs --out");
  const SolveResult result = solve_domain(config, domain, config.h);
  const Json j = to_json(result);
  if (config.format == "csv") {
    std::string header, row;
    for (const auto& [key, value] : j.items()) {
      header += (header.empty() ? "" : ",") + key;
      const std::string cell = value.is_number_float() ? format_double(value.get<double>()) : value.dump();
      row += (row.empty() ? "" : ",") + cell;
    }
    emit(config.out, header + "\n" + row + "\n", out);
  } else {
    emit(config.out, dump(j), out);
  }
  if (config.dump_field) {
    std::ostringstream field;
    write_field_csv(field, result.phi);
    emit(config.out + ".field.csv", field.str(), out);
  }
  return result.converged ? kSuccess : kNotConverged;
}

ConformalMap sweep_map(const Json& j) {
  if (j.contains("kind")) return parse_map(j);
  if (j.value("type", "") != "map_image" || !j.contains("map")) {
    throw UsageError("schwarz needs a map_image domain (or a bare map object)");
  }
  return parse_map(j.at("map"));
}

int cmd_schwarz(const RunConfig& config, std::ostream& out) {
  const ConformalMap map = sweep_map(load_domain_json(config.domain));
  const auto grid = radius_grid(config);
  SweepOptions options;
  options.allow_large_r = config.allow_large_r;
  options.threads = config.threads;
  options.solver = config.solver;
  const SchwarzSweep sweep = schwarz_sweep(map, config.p, grid, config.h, options);
  const Json verdict = sweep_verdict_json(sweep);

  if (config.format == "json") {
    Json rows = Json::array();
    for (const auto& row : sweep.rows) {
      if (!row.valid) continue;
      rows.push_back({{"r", row.r}, {"log_r", row.log_r}, {"cp_image", row.cp_image},
                      {"phi_ratio", row.phi_ratio}, {"reciprocal", row.reciprocal}});
    }
    emit(config.out, dump({{"rows", rows}, {"verdict", verdict}}), out);
  } else {
    std::ostringstream csv;
    write_sweep_csv(csv, sweep);
    emit(config.out, csv.str(), out);
    emit(config.out.empty() ? "" : config.out + ".verdict.json", dump(verdict), out);
  }
  return sweep.verdicts_pass() ? kSuccess : kVerdictFailed;
}

int cmd_payne_rayner(const RunConfig& config, std::ostream& out) {
  const DomainSpec domain = parse_domain(load_domain_json(config.domain));
  auto mesh = std::make_shared<const TriMesh>(mesh_domain(domain, config.h));
  SolverConfig solver = config.solver;
  solver.p = config.p;
  const SolveResult result = minimize_quotient(mesh, solver);
  const PayneRaynerReport report = payne_rayner_report(result);

  Json j = to_json(report);
  j["solve"] = to_json(result);
  if (config.p == 1.0) j["saint_venant"] = to_json(saint_venant_check(result, mesh_area(*mesh)));
  emit(config.out, dump(j), out);
  if (!result.converged) return kNotConverged;
  return report.inequality_holds ? kSuccess : kVerdictFailed;
}

int cmd_levelsets(const RunConfig& config, std::ostream& out) {
  if (config.samples < 16) throw UsageError("invalid --samples: need at least 16 level samples");
  std::optional<Point> base;
  if (!config.base_point.empty()) {
    if (config.base_point.size() != 2) throw UsageError("--base-point takes two numbers");
    base = Point(config.base_point[0], config.base_point[1]);
  }
  const DomainSpec domain = parse_domain(load_domain_json(config.domain));
  const SolveResult result = solve_domain(config, domain, config.h);
  if (!result.converged) {
    emit(config.out, dump({{"solve", to_json(result)}}), out);
    return kNotConverged;
  }
  const LevelSetTable table = level_set_table(result, base, config.samples);
  const LevelSetVerdicts verdicts = verify_levelset_inequalities(table, config.p);
  Json verdict = to_json(verdicts);
  verdict["p"] = config.p;
  verdict["lambda"] = table.lambda;
  verdict["phi_max"] = table.phi_max;
  verdict["base_point"] = {table.base_point.x(), table.base_point.y()};

  if (config.format == "json") {
    Json rows = Json::array();
    for (const auto& row : table.rows) {
      rows.push_back({{"t", row.t}, {"A", row.area}, {"l", row.length}, {"H0", row.h0},
                      {"H1", row.h1}, {"flags", row.regular ? 0 : 1}});
    }
    emit(config.out, dump({{"rows", rows}, {"verdict", verdict}}), out);
  } else {
    std::ostringstream csv;
    write_levelset_csv(csv, table);
    emit(config.out, csv.str(), out);
    emit(config.out.empty() ? "" : config.out + ".verdict.json", dump(verdict), out);
  }
  return verdicts.all_pass() ? kSuccess : kVerdictFailed;
}

int cmd_convergence(const RunConfig& config, std::ostream& out) {
  const DomainSpec domain = parse_domain(load_domain_json(config.domain));
  const auto reference = reference_value(classify(domain), config.p);

  std::vector<double> hs, cps;
  bool converged = true;
  for (double h : {config.h, config.h / 2.0, config.h / 4.0}) {
    const SolveResult result = solve_domain(config, domain, h);
    converged = converged && result.converged;
    hs.push_back(result.h);
    cps.push_back(result.cp);
  }

  double limit;
  if (reference) {
    limit = *reference;
  } else {
    // Three-level Richardson with the observed order (nominal refinement ratio 2).
    const double q = std::log(std::abs((cps[0] - cps[1]) / (cps[1] - cps[2]))) / std::log(2.0);
    limit = cps[2] + (cps[2] - cps[1]) / (std::pow(2.0, q) - 1.0);
  }

  std::vector<double> errors, orders;
  for (double cp : cps) errors.push_back(std::abs(cp - limit) / limit);
  double min_order = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < cps.size(); ++i) {
    orders.push_back(std::log(errors[i - 1] / errors[i]) / std::log(hs[i - 1] / hs[i]));
    min_order = std::min(min_order, orders.back());
  }
  const double threshold = is_nonconvex_polygon(domain) ? 1.0 : 1.5;
  const bool pass = min_order >= threshold;

  Json verdict = {{"p", config.p},
                  {"reference", reference ? Json(*reference) : Json(nullptr)},
                  {"limit", limit},
                  {"limit_source", reference ? "closed_form" : "richardson"},
                  {"min_order", min_order},
                  {"threshold", threshold},
                  {"converged", converged},
                  {"pass", pass}};
  if (config.format == "json") {
    Json rows = Json::array();
    for (std::size_t i = 0; i < cps.size(); ++i) {
      rows.push_back({{"h", hs[i]}, {"cp", cps[i]}, {"error", errors[i]},
                      {"observed_order", i == 0 ? Json(nullptr) : Json(orders[i - 1])}});
    }
    emit(config.out, dump({{"rows", rows}, {"verdict", verdict}}), out);
  } else {
    std::ostringstream csv;
    csv << "h,cp,error,observed_order\n";
    for (std::size_t i = 0; i < cps.size(); ++i) {
      csv << format_double(hs[i]) << ',' << format_double(cps[i]) << ',' << format_double(errors[i]) << ','
          << (i == 0 ? std::string() : format_double(orders[i - 1])) << '\n';
    }
    emit(config.out, csv.str(), out);
    emit(config.out.empty() ? "" : config.out + ".verdict.json", dump(verdict), out);
  }
  if (!converged) return kNotConverged;
  return pass ? kSuccess : kVerdictFailed;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::CgStalled:
    case ErrorCode::SweepTooSparse:
      return kNotConverged;
    case ErrorCode::InsufficientRegularRows:
      return kVerdictFailed;
    default:
      return kInvalidInput;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"Sharp Sobolev constants C_p(D) on planar domains"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "Print this help message and exit");  // -h would clash with --h

  auto* solve = app.add_subcommand("solve", "Minimise the C_p quotient on a domain");
  auto* schwarz = app.add_subcommand("schwarz", "Sweep C_p(f(rD)) / C_p(rD) over r");
  auto* payne = app.add_subcommand("payne-rayner", "Reverse Hoelder report for the extremal");
  auto* levels = app.add_subcommand("levelsets", "Superlevel-set table and coarea verdicts");
  auto* convergence = app.add_subcommand("convergence", "Solve at h, h/2, h/4 and report the order");
  for (auto* cmd : {solve, schwarz, payne, levels, convergence}) add_common_options(*cmd, config);
  add_sweep_options(*schwarz, config);
  levels->add_option("--samples", config.samples, "Number of t samples (>= 16)");
  levels->add_option("--base-point", config.base_point, "Base point x0 for H1 (default: centroid)")
      ->expected(2);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kSuccess : kInvalidInput;
  }

  try {
    validate(config);
    if (solve->parsed()) return cmd_solve(config, out);
    if (schwarz->parsed()) return cmd_schwarz(config, out);
    if (payne->parsed()) return cmd_payne_rayner(config, out);
    if (levels->parsed()) return cmd_levelsets(config, out);
    return cmd_convergence(config, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
}

}  // namespace sobolev::cli
