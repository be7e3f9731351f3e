// Batch entry point for the numerical experiments: named profiles in, JSON
// reports and plot-ready CSV out. Subcommands: hessian, surface, scan,
// verify-lo, synthesize, reduce, search, obstruction, list-profiles.
//
// Exit codes: 0 success, 1 a verification-style check failed, 2 bad
// configuration. Flat key=value config files are accepted per subcommand via
// --config; command-line flags win. RIGIDITY_THREADS caps scan parallelism.

#include <CLI11.hpp>
#include <json.hpp>

#include "rigidity/coefficient_field.hpp"
#include "rigidity/errors.hpp"
#include "rigidity/gradient_surface.hpp"
#include "rigidity/homogeneous.hpp"
#include "rigidity/lawson_osserman.hpp"
#include "rigidity/report.hpp"
#include "rigidity/residual_search.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using json = nlohmann::json;
using namespace rigidity;

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

// Flat key=value config files; '#' starts a comment. Values for keys already
// present on the command line are ignored, so flags win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  auto it = std::find(args.begin(), args.end(), "--config");
  if (it == args.end() || std::next(it) == args.end()) return args;
  std::ifstream file(*std::next(it));
  if (!file) throw ConfigError("cannot read config file '" + *std::next(it) + "'");

  std::vector<std::string> expanded = args;
  std::string line;
  while (std::getline(file, line)) {
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line is not key=value: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line has an empty key: " + line);
    const std::string flag = "--" + key;
    if (std::find(expanded.begin(), expanded.end(), flag) == expanded.end()) {
      expanded.push_back(flag);
      expanded.push_back(value);
    }
  }
  return expanded;
}

struct Outcome {
  json config;
  json results;
  int exit_code = 0;
};

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  Eigen::VectorXd x(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) x(i) = v[i];
  return x;
}

void emit(const std::string& command, const Outcome& outcome, double wall_time_s,
          const std::string& out_path) {
  json report = make_report(command, outcome.config, outcome.results, wall_time_s);
  std::cout << report.dump(2) << std::endl;
  if (!out_path.empty()) write_text_file(out_path, report.dump(2) + "\n");
}

json synthesis_json(const FieldSynthesis& fs) {
  json j;
  j["lambda"] = fs.lambda;
  j["max_abs_trace"] = fs.max_abs_trace;
  j["feasible_count"] = fs.feasible_count;
  j["infeasible_count"] = fs.infeasible_count;
  j["condition_exceeded_count"] = fs.condition_exceeded_count;
  json witnesses = json::array();
  for (std::size_t k = 0; k < fs.infeasible_points.size() && k < 16; ++k) {
    witnesses.push_back(vector_to_json(fs.infeasible_points[k]));
  }
  j["infeasible_witnesses"] = witnesses;
  return j;
}

std::vector<double> decimate(const std::vector<double>& h, std::size_t max_len = 512) {
  if (h.size() <= max_len) return h;
  std::vector<double> out;
  const std::size_t stride = (h.size() + max_len - 1) / max_len;
  for (std::size_t i = 0; i < h.size(); i += stride) out.push_back(h[i]);
  if (out.empty() || out.back() != h.back()) out.push_back(h.back());
  return out;
}

CoefficientField resolve_field(const std::string& spec, int grid, double kappa_max) {
  if (spec == "identity") return CoefficientField::identity(3);
  if (spec == "lo-metric") return inverse_metric_field(ConeMap::lawson_osserman(), grid);
  if (spec.rfind("synth:", 0) == 0) {
    HomogeneousFunction u = bundled_function(spec.substr(6));
    SynthesisOptions opts;
    opts.kappa_max = kappa_max;
    return synthesize_field(u, grid, opts).field;
  }
  throw ConfigError("unknown field '" + spec + "' (identity, lo-metric, synth:<profile>)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for homogeneous order-one solutions of "
               "non-divergence elliptic equations"};
  app.require_subcommand(1);

  std::string out_path;
  std::string config_path;
  app.add_option("--out", out_path, "write the JSON report to this path")->capture_default_str();

  // ---- list-profiles ----
  CLI::App* list_cmd = app.add_subcommand("list-profiles", "bundled profile registry");

  // ---- hessian ----
  CLI::App* hess_cmd = app.add_subcommand("hessian", "Hessian of a profile at a point");
  std::string hess_profile;
  std::vector<double> hess_point;
  std::string hess_route = "auto";
  hess_cmd->add_option("--profile", hess_profile, "profile name")->required();
  hess_cmd->add_option("--point", hess_point, "evaluation point, comma separated")
      ->required()
      ->delimiter(',');
  hess_cmd->add_option("--route", hess_route, "auto | chart | spherical");
  hess_cmd->add_option("--config", config_path, "flat key=value config file");

  // ---- surface ----
  CLI::App* surf_cmd = app.add_subcommand("surface", "gradient-surface samples");
  std::string surf_profile;
  int surf_grid = 128;
  std::string surf_csv;
  std::vector<double> surf_point;
  surf_cmd->add_option("--profile", surf_profile, "profile name")->required();
  surf_cmd->add_option("--grid", surf_grid, "grid resolution");
  surf_cmd->add_option("--csv", surf_csv, "write the surface dump CSV here");
  surf_cmd->add_option("--point", surf_point, "sample a single direction")->delimiter(',');
  surf_cmd->add_option("--config", config_path, "flat key=value config file");

  // ---- scan ----
  CLI::App* scan_cmd = app.add_subcommand("scan", "saddle or singular-set scan");
  std::string scan_profile;
  int scan_grid = 128;
  std::string scan_type = "saddle";
  int scan_refinements = 3;
  scan_cmd->add_option("--profile", scan_profile, "profile name")->required();
  scan_cmd->add_option("--grid", scan_grid, "grid resolution");
  scan_cmd->add_option("--type", scan_type, "saddle | singular");
  scan_cmd->add_option("--refinements", scan_refinements, "refinement levels (singular scan)");
  scan_cmd->add_option("--config", config_path, "flat key=value config file");

  // ---- verify-lo ----
  CLI::App* lo_cmd = app.add_subcommand("verify-lo",
                                        "residual of the Lawson-Osserman cone system");
  int lo_grid = 32;
  std::size_t lo_max_points = 10000;
  double lo_tol = 1e-6;
  lo_cmd->add_option("--grid", lo_grid, "S^3 grid resolution per angle");
  lo_cmd->add_option("--max-points", lo_max_points, "subsample cap");
  lo_cmd->add_option("--tol", lo_tol, "acceptance tolerance on the max residual");
  lo_cmd->add_option("--config", config_path, "flat key=value config file");

  // ---- synthesize ----
  CLI::App* syn_cmd = app.add_subcommand("synthesize",
                                         "coefficient field annihilating a profile Hessian");
  std::string syn_profile;
  int syn_grid = 32;
  double syn_kappa = 1e6;
  std::string syn_csv;
  syn_cmd->add_option("--profile", syn_profile, "profile name")->required();
  syn_cmd->add_option("--grid", syn_grid, "grid resolution");
  syn_cmd->add_option("--kappa-max", syn_kappa, "condition cap");
  syn_cmd->add_option("--csv", syn_csv, "write the feasibility map CSV here");
  syn_cmd->add_option("--config", config_path, "flat key=value config file");

  // ---- reduce ----
  CLI::App* red_cmd = app.add_subcommand("reduce", "chart and spherical reductions of a field");
  std::string red_field = "identity";
  int red_grid = 16;
  double red_kappa = 1e6;
  std::vector<double> red_chart_point;
  std::vector<double> red_theta;
  red_cmd->add_option("--field", red_field, "identity | lo-metric | synth:<profile>");
  red_cmd->add_option("--grid", red_grid, "grid for certified field construction");
  red_cmd->add_option("--kappa-max", red_kappa, "condition cap for synthesized fields");
  red_cmd->add_option("--chart-point", red_chart_point, "x1,x2 on the plane x3 = 1")
      ->delimiter(',');
  red_cmd->add_option("--theta", red_theta, "theta1,theta2 on the sphere")->delimiter(',');
  red_cmd->add_option("--config", config_path, "flat key=value config file");

  // ---- search ----
  CLI::App* search_cmd = app.add_subcommand("search", "residual minimization over profiles");
  int search_grid = 64;
  unsigned search_seed = 1;
  std::string search_field = "identity";
  double search_lambda = 0.5;
  std::string search_method = "normal-equations";
  std::string search_scheme = "spectral";
  int search_budget = 10000;
  double search_tol = 1e-10;
  search_cmd->add_option("--grid", search_grid, "grid resolution");
  search_cmd->add_option("--seed", search_seed, "random seed (init and random fields)");
  search_cmd->add_option("--field", search_field, "identity | random");
  search_cmd->add_option("--lambda", search_lambda, "ellipticity of random fields");
  search_cmd->add_option("--method", search_method, "normal-equations | gradient-descent");
  search_cmd->add_option("--scheme", search_scheme, "spectral | central4");
  search_cmd->add_option("--budget", search_budget, "iteration budget");
  search_cmd->add_option("--tol", search_tol, "residual tolerance");
  search_cmd->add_option("--config", config_path, "flat key=value config file");

  // ---- obstruction ----
  CLI::App* obs_cmd = app.add_subcommand("obstruction", "ellipticity obstruction study");
  std::string obs_profile;
  std::vector<int> obs_resolutions = {16, 32, 64};
  double obs_kappa = 1e6;
  std::string obs_csv;
  obs_cmd->add_option("--profile", obs_profile, "profile name")->required();
  obs_cmd->add_option("--resolutions", obs_resolutions, "grid resolutions")->delimiter(',');
  obs_cmd->add_option("--kappa-max", obs_kappa, "condition cap");
  obs_cmd->add_option("--csv", obs_csv, "write the obstruction curve CSV here");
  obs_cmd->add_option("--config", config_path, "flat key=value config file");

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(args);
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&t0]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  try {
    if (list_cmd->parsed()) {
      const std::string listing = format_profile_listing();
      std::cout << listing;
      if (!out_path.empty()) write_text_file(out_path, listing);
      return 0;
    }

    if (hess_cmd->parsed()) {
      Outcome o;
      o.config = {{"profile", hess_profile}, {"point", hess_point}, {"route", hess_route}};
      HomogeneousFunction u = bundled_function(hess_profile);
      Eigen::VectorXd x = to_vector(hess_point);
      if (x.size() != u.dimension()) throw ConfigError("point dimension mismatch");
      Eigen::MatrixXd H;
      if (hess_route == "auto") {
        H = u.hessian(x);
      } else if (hess_route == "chart") {
        if (u.dimension() != 3 || !(x(2) > 0.0)) throw ConfigError("chart route requires x3 > 0");
        Eigen::Vector2d p(x(0) / x(2), x(1) / x(2));
        H = hessian_chart(u.profile(), p) / x(2);
      } else if (hess_route == "spherical") {
        if (u.dimension() != 3) throw ConfigError("spherical route requires n = 3");
        const double r = x.norm();
        Eigen::Vector2d theta(std::atan2(x(1), x(0)), std::asin(x(2) / r));
        H = hessian_spherical(u.profile(), theta) / r;
      } else {
        throw ConfigError("unknown route '" + hess_route + "'");
      }
      HessianSample cls = classify_hessian(H, x, default_tau_zero(H.norm()));
      o.results["hessian"] = matrix_to_json(H);
      o.results["tangential_eigenvalues"] = vector_to_json(cls.tangential);
      o.results["classification"] = to_string(cls.classification);
      o.results["gradient"] = vector_to_json(u.gradient(x));
      o.results["value"] = u.value(x);
      emit("hessian", o, elapsed(), out_path);
      return o.exit_code;
    }

    if (surf_cmd->parsed()) {
      Outcome o;
      o.config = {{"profile", surf_profile}, {"grid", surf_grid}, {"csv", surf_csv}};
      HomogeneousFunction u = bundled_function(surf_profile);
      if (!surf_point.empty()) {
        SurfaceSample s = surface_sample(u, to_vector(surf_point));
        o.results["source"] = vector_to_json(s.source);
        o.results["image"] = vector_to_json(s.image);
        o.results["normal"] = vector_to_json(s.normal);
        o.results["first_form"] = matrix_to_json(s.first_form);
        o.results["second_form"] = matrix_to_json(s.second_form);
        o.results["kappa1"] = s.kappa1;
        o.results["kappa2"] = s.kappa2;
      } else {
        const std::string csv = surface_csv(u, surf_grid);
        o.results["rows"] = surf_grid * (surf_grid / 2);
        if (!surf_csv.empty()) write_text_file(surf_csv, csv);
        else std::cout << csv;
      }
      emit("surface", o, elapsed(), out_path);
      return o.exit_code;
    }

    if (scan_cmd->parsed()) {
      Outcome o;
      o.config = {{"profile", scan_profile},
                  {"grid", scan_grid},
                  {"type", scan_type},
                  {"refinements", scan_refinements}};
      HomogeneousFunction u = bundled_function(scan_profile);
      if (scan_type == "saddle") {
        SaddleScan scan = saddle_scan(u, scan_grid);
        o.results["counts"] = scan.counts;
        o.results["tau_zero"] = scan.tau_zero;
        o.results["hessian_scale"] = scan.hessian_scale;
        json witnesses = json::array();
        for (std::size_t k = 0; k < scan.definite_witnesses.size() && k < 8; ++k) {
          const HessianSample& w = scan.definite_witnesses[k];
          witnesses.push_back({{"direction", vector_to_json(w.direction)},
                               {"tangential", vector_to_json(w.tangential)},
                               {"classification", to_string(w.classification)}});
        }
        o.results["witnesses"] = witnesses;
      } else if (scan_type == "singular") {
        SingularSetReport rep = singular_set_scan(u, scan_grid, std::nullopt, scan_refinements);
        o.results["classification"] = to_string(rep.classification);
        o.results["tau_zero"] = rep.tau_zero;
        json levels = json::array();
        for (const SingularLevel& lvl : rep.levels) {
          levels.push_back({{"resolution", lvl.resolution},
                            {"capture_threshold", lvl.capture_threshold},
                            {"below_count", lvl.below_count},
                            {"clusters", lvl.clusters.size()},
                            {"max_diameter", lvl.max_diameter}});
        }
        o.results["levels"] = levels;
      } else {
        throw ConfigError("unknown scan type '" + scan_type + "'");
      }
      emit("scan", o, elapsed(), out_path);
      return o.exit_code;
    }

    if (lo_cmd->parsed()) {
      Outcome o;
      o.config = {{"grid", lo_grid}, {"max_points", lo_max_points}, {"tol", lo_tol}};
      MinimalResidualReport rep =
          minimal_residual(ConeMap::lawson_osserman(), lo_grid, lo_max_points);
      o.results["residual_max"] = rep.residual_max;
      o.results["lambda_certificate"] = rep.lambda_certificate;
      o.results["grid"] = rep.resolution;
      o.results["points"] = rep.points;
      o.results["pass"] = rep.residual_max < lo_tol;
      o.exit_code = rep.residual_max < lo_tol ? 0 : 1;
      emit("verify-lo", o, elapsed(), out_path);
      return o.exit_code;
    }

    if (syn_cmd->parsed()) {
      Outcome o;
      o.config = {{"profile", syn_profile},
                  {"grid", syn_grid},
                  {"kappa_max", syn_kappa},
                  {"csv", syn_csv}};
      HomogeneousFunction u = bundled_function(syn_profile);
      SynthesisOptions opts;
      opts.kappa_max = syn_kappa;
      FieldSynthesis fs = synthesize_field(u, syn_grid, opts);
      o.results = synthesis_json(fs);
      if (!syn_csv.empty()) write_text_file(syn_csv, fs.feasibility_csv());
      emit("synthesize", o, elapsed(), out_path);
      return o.exit_code;
    }

    if (red_cmd->parsed()) {
      Outcome o;
      o.config = {{"field", red_field},
                  {"grid", red_grid},
                  {"chart_point", red_chart_point},
                  {"theta", red_theta}};
      CoefficientField field = resolve_field(red_field, red_grid, red_kappa);
      if (field.dimension != 3) throw ConfigError("reductions require a three-dimensional field");
      if (!red_chart_point.empty()) {
        if (red_chart_point.size() != 2) throw ConfigError("--chart-point needs x1,x2");
        ReducedChartCoefficients rc = reduce_to_chart(field);
        Eigen::Vector2d p(red_chart_point[0], red_chart_point[1]);
        o.results["chart"] = {{"A", matrix_to_json(rc.matrix(p))}, {"lambda", rc.lambda(p)}};
      }
      if (!red_theta.empty()) {
        if (red_theta.size() != 2) throw ConfigError("--theta needs theta1,theta2");
        SphericalOperator op = reduce_to_sphere(field);
        SphericalOperatorCoeffs c = op.coefficients(Eigen::Vector2d(red_theta[0], red_theta[1]));
        o.results["sphere"] = {{"A", matrix_to_json(c.A)},
                               {"B", vector_to_json(c.B)},
                               {"C", c.C}};
      }
      if (o.results.empty()) throw ConfigError("pass --chart-point and/or --theta");
      emit("reduce", o, elapsed(), out_path);
      return o.exit_code;
    }

    if (search_cmd->parsed()) {
      Outcome o;
      o.config = {{"grid", search_grid},   {"seed", search_seed},
                  {"field", search_field}, {"lambda", search_lambda},
                  {"method", search_method}, {"scheme", search_scheme},
                  {"budget", search_budget}, {"tol", search_tol}};
      SphereGrid grid = SphereGrid::with_resolution(search_grid);
      CoefficientField field = search_field == "identity"
                                   ? CoefficientField::identity(3)
                                   : random_elliptic_field(search_seed, search_lambda);
      if (search_field != "identity" && search_field != "random") {
        throw ConfigError("search field must be identity or random");
      }
      DiffScheme scheme = diff_scheme_from_string(search_scheme);
      ResidualFunctional functional(
          SphericalOperatorField::sample(reduce_to_sphere(field), grid), scheme);
      DiscretizedProfile init = random_profile(grid, scheme, search_seed);
      MinimizeOptions opts;
      opts.method = search_method_from_string(search_method);
      opts.max_iterations = search_budget;
      opts.tolerance = search_tol;
      MinimizeResult result = minimize_residual(functional, init, opts);
      o.results["method"] = result.method;
      o.results["iterations"] = result.iterations;
      o.results["converged"] = result.converged;
      o.results["residual_final"] = result.final_residual;
      o.results["residual_history"] = decimate(result.residual_history);
      o.results["nonlinearity_history"] = decimate(result.nonlinearity_history);
      o.results["nonlinearity"] = result.nonlinearity.value;
      o.results["nonlinearity_relative"] =
          result.nonlinearity.value / result.nonlinearity.norm_g;
      o.results["constant_component"] = result.nonlinearity.constant_component;
      o.results["norm_g"] = result.nonlinearity.norm_g;
      emit("search", o, elapsed(), out_path);
      return o.exit_code;
    }

    if (obs_cmd->parsed()) {
      Outcome o;
      o.config = {{"profile", obs_profile},
                  {"resolutions", obs_resolutions},
                  {"kappa_max", obs_kappa},
                  {"csv", obs_csv}};
      HomogeneousFunction u = bundled_function(obs_profile);
      SynthesisOptions opts;
      opts.kappa_max = obs_kappa;
      ObstructionCurve curve = obstruction_study(u, obs_resolutions, opts);
      json entries = json::array();
      for (const ObstructionEntry& e : curve.entries) {
        entries.push_back({{"resolution", e.resolution},
                           {"lambda", e.lambda},
                           {"infeasible_count", e.infeasible_count},
                           {"condition_exceeded_count", e.condition_exceeded_count},
                           {"feasible_count", e.feasible_count}});
      }
      o.results["entries"] = entries;
      if (!obs_csv.empty()) write_text_file(obs_csv, curve.csv());
      emit("obstruction", o, elapsed(), out_path);
      return o.exit_code;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }
  return 2;
}
