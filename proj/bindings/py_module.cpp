// Python bindings for the main operations: profile calculus, coefficient
// synthesis, gradient-surface geometry, Lawson-Osserman verification, and the
// rigidity searches.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rigidity/coefficient_field.hpp"
#include "rigidity/errors.hpp"
#include "rigidity/gradient_surface.hpp"
#include "rigidity/lawson_osserman.hpp"
#include "rigidity/residual_search.hpp"

namespace py = pybind11;
using namespace rigidity;

namespace {

py::dict classify_dict(const HessianSample& s) {
  py::dict d;
  d["direction"] = s.direction;
  d["tangential_eigenvalues"] = s.tangential;
  d["classification"] = to_string(s.classification);
  d["frobenius_norm"] = s.frobenius_norm;
  return d;
}

py::dict synthesis_dict(const FieldSynthesis& fs) {
  py::dict d;
  d["lambda"] = fs.lambda;
  d["max_abs_trace"] = fs.max_abs_trace;
  d["feasible_count"] = fs.feasible_count;
  d["infeasible_count"] = fs.infeasible_count;
  d["condition_exceeded_count"] = fs.condition_exceeded_count;
  std::vector<Eigen::VectorXd> witnesses(
      fs.infeasible_points.begin(),
      fs.infeasible_points.begin() + std::min<std::size_t>(fs.infeasible_points.size(), 16));
  d["infeasible_witnesses"] = witnesses;
  return d;
}

}  // namespace

PYBIND11_MODULE(rigidity, m) {
  m.doc() = "numerical laboratory for homogeneous order-one solutions of "
            "non-divergence elliptic equations";
  m.attr("__version__") = "0.1.0";

  m.def("list_profiles", &format_profile_listing, "deterministic registry listing");
  m.def("profile_names", []() {
    std::vector<std::string> names;
    for (const Profile& p : profile_registry()) names.push_back(p.name);
    return names;
  });

  m.def(
      "value",
      [](const std::string& name, const Eigen::VectorXd& x) {
        return bundled_function(name).value(x);
      },
      py::arg("profile"), py::arg("x"));
  m.def(
      "gradient",
      [](const std::string& name, const Eigen::VectorXd& x) {
        return bundled_function(name).gradient(x);
      },
      py::arg("profile"), py::arg("x"));
  m.def(
      "hessian",
      [](const std::string& name, const Eigen::VectorXd& x) {
        return bundled_function(name).hessian(x);
      },
      py::arg("profile"), py::arg("x"));

  m.def(
      "gradient_chart",
      [](const std::string& name, const Eigen::Vector2d& p) {
        return gradient_chart(find_profile(name), p);
      },
      py::arg("profile"), py::arg("p"));
  m.def(
      "hessian_chart",
      [](const std::string& name, const Eigen::Vector2d& p) {
        return hessian_chart(find_profile(name), p);
      },
      py::arg("profile"), py::arg("p"));
  m.def(
      "hessian_spherical",
      [](const std::string& name, const Eigen::Vector2d& theta) {
        return hessian_spherical(find_profile(name), theta);
      },
      py::arg("profile"), py::arg("theta"));
  m.def(
      "fd_gradient",
      [](const std::string& name, const Eigen::VectorXd& x, double step) {
        return fd_gradient(bundled_function(name), x, step);
      },
      py::arg("profile"), py::arg("x"), py::arg("step") = 1e-4);
  m.def(
      "fd_hessian",
      [](const std::string& name, const Eigen::VectorXd& x, double step) {
        return fd_hessian(bundled_function(name), x, step);
      },
      py::arg("profile"), py::arg("x"), py::arg("step") = 1e-3);

  m.def(
      "classify_hessian",
      [](const Eigen::MatrixXd& M, const Eigen::VectorXd& x, double tau_zero) {
        return classify_dict(classify_hessian(M, x, tau_zero));
      },
      py::arg("M"), py::arg("x"), py::arg("tau_zero") = 1e-8);

  m.def(
      "synthesize_pointwise",
      [](const Eigen::MatrixXd& M, double kappa_max) {
        SynthesisOptions opts;
        opts.kappa_max = kappa_max;
        PointwiseSynthesis s = synthesize_pointwise(M, opts);
        py::dict d;
        d["status"] = to_string(s.status);
        d["lambda"] = s.lambda;
        d["condition"] = s.condition;
        d["trace_product"] = s.trace_product;
        if (s.status == SynthesisStatus::Feasible) d["matrix"] = s.matrix;
        return d;
      },
      py::arg("M"), py::arg("kappa_max") = 1e6);
  m.def(
      "synthesize_field",
      [](const std::string& name, int grid, double kappa_max) {
        SynthesisOptions opts;
        opts.kappa_max = kappa_max;
        return synthesis_dict(synthesize_field(bundled_function(name), grid, opts));
      },
      py::arg("profile"), py::arg("grid") = 32, py::arg("kappa_max") = 1e6);

  m.def(
      "surface_sample",
      [](const std::string& name, const Eigen::Vector3d& x) {
        SurfaceSample s = surface_sample(bundled_function(name), x);
        py::dict d;
        d["source"] = s.source;
        d["image"] = s.image;
        d["normal"] = s.normal;
        d["first_form"] = s.first_form;
        d["second_form"] = s.second_form;
        d["kappa1"] = s.kappa1;
        d["kappa2"] = s.kappa2;
        return d;
      },
      py::arg("profile"), py::arg("x"));
  m.def(
      "saddle_scan",
      [](const std::string& name, int grid) {
        SaddleScan scan = saddle_scan(bundled_function(name), grid);
        py::dict d;
        d["counts"] = scan.counts;
        d["tau_zero"] = scan.tau_zero;
        d["hessian_scale"] = scan.hessian_scale;
        return d;
      },
      py::arg("profile"), py::arg("grid") = 64);
  m.def(
      "singular_set_scan",
      [](const std::string& name, int grid, int refinements) {
        SingularSetReport rep =
            singular_set_scan(bundled_function(name), grid, std::nullopt, refinements);
        py::dict d;
        d["classification"] = to_string(rep.classification);
        d["tau_zero"] = rep.tau_zero;
        std::vector<py::dict> levels;
        for (const SingularLevel& lvl : rep.levels) {
          py::dict l;
          l["resolution"] = lvl.resolution;
          l["below_count"] = lvl.below_count;
          l["clusters"] = lvl.clusters.size();
          l["max_diameter"] = lvl.max_diameter;
          levels.push_back(l);
        }
        d["levels"] = levels;
        return d;
      },
      py::arg("profile"), py::arg("grid") = 32, py::arg("refinements") = 3);
  m.def(
      "supporting_plane_probe",
      [](const std::string& name, const Eigen::Vector3d& nu, int grid) {
        ContactReport rep = supporting_plane_probe(bundled_function(name), nu, grid);
        py::dict d;
        d["probe"] = rep.probe;
        d["contact_value"] = rep.contact_value;
        d["contact_sources"] = rep.contact_sources;
        d["contact_images"] = rep.contact_images;
        d["cluster_count"] = rep.cluster_count;
        d["gap_to_second_cluster"] = rep.gap_to_second_cluster;
        d["aligned_with_probe_axis"] = rep.aligned_with_probe_axis;
        return d;
      },
      py::arg("profile"), py::arg("nu"), py::arg("grid") = 64);
  m.def(
      "leading_polynomial_at",
      [](const std::string& name, const Eigen::Vector3d& x0) {
        HomogeneousFunction u = bundled_function(name);
        Profile g = recentered_spherical_profile(u, x0);
        LeadingPolynomial lp = leading_polynomial(g, Eigen::Vector2d(0, 0));
        py::dict d;
        d["order"] = lp.order;
        d["coefficients"] = lp.coefficients;
        d["laplacian_defect"] = lp.laplacian_defect;
        d["relative_residuals"] = lp.relative_residuals;
        return d;
      },
      py::arg("profile"), py::arg("x0"));

  m.def(
      "lo_map",
      [](const Eigen::Vector4d& x) { return ConeMap::lawson_osserman().value(x); },
      py::arg("x"));
  m.def(
      "induced_metric",
      [](const Eigen::Vector4d& x) {
        InducedMetric metric = induced_metric(ConeMap::lawson_osserman(), x);
        py::dict d;
        d["metric"] = metric.metric;
        d["inverse"] = metric.inverse;
        return d;
      },
      py::arg("x"));
  m.def(
      "verify_lo",
      [](int grid, std::size_t max_points) {
        MinimalResidualReport rep =
            minimal_residual(ConeMap::lawson_osserman(), grid, max_points);
        py::dict d;
        d["residual_max"] = rep.residual_max;
        d["lambda_certificate"] = rep.lambda_certificate;
        d["grid"] = rep.resolution;
        d["points"] = rep.points;
        return d;
      },
      py::arg("grid") = 32, py::arg("max_points") = 10000);

  m.def(
      "search",
      [](int grid, unsigned seed, const std::string& field, double lambda,
         const std::string& method, const std::string& scheme, int budget, double tol) {
        SphereGrid g = SphereGrid::with_resolution(grid);
        CoefficientField a = field == "identity" ? CoefficientField::identity(3)
                                                 : random_elliptic_field(seed, lambda);
        DiffScheme ds = diff_scheme_from_string(scheme);
        ResidualFunctional functional(SphericalOperatorField::sample(reduce_to_sphere(a), g),
                                      ds);
        MinimizeOptions opts;
        opts.method = search_method_from_string(method);
        opts.max_iterations = budget;
        opts.tolerance = tol;
        MinimizeResult result = minimize_residual(functional, random_profile(g, ds, seed), opts);
        py::dict d;
        d["method"] = result.method;
        d["iterations"] = result.iterations;
        d["converged"] = result.converged;
        d["residual_final"] = result.final_residual;
        d["nonlinearity"] = result.nonlinearity.value;
        d["nonlinearity_relative"] = result.nonlinearity.value / result.nonlinearity.norm_g;
        d["constant_component"] = result.nonlinearity.constant_component;
        return d;
      },
      py::arg("grid") = 32, py::arg("seed") = 1, py::arg("field") = "identity",
      py::arg("lambda") = 0.5, py::arg("method") = "normal-equations",
      py::arg("scheme") = "spectral", py::arg("budget") = 10000, py::arg("tol") = 1e-10);

  m.def(
      "obstruction_study",
      [](const std::string& name, const std::vector<int>& resolutions) {
        ObstructionCurve curve = obstruction_study(bundled_function(name), resolutions);
        std::vector<py::dict> entries;
        for (const ObstructionEntry& e : curve.entries) {
          py::dict d;
          d["resolution"] = e.resolution;
          d["lambda"] = e.lambda;
          d["infeasible_count"] = e.infeasible_count;
          d["feasible_count"] = e.feasible_count;
          entries.push_back(d);
        }
        return entries;
      },
      py::arg("profile"), py::arg("resolutions") = std::vector<int>{16, 32});

  py::register_exception<ChartPoleError>(m, "ChartPoleError");
  py::register_exception<PoleProximityError>(m, "PoleProximityError");
  py::register_exception<SingularPointError>(m, "SingularPointError");
  py::register_exception<NoVanishingError>(m, "NoVanishingError");
  py::register_exception<FitAmbiguousError>(m, "FitAmbiguousError");
  py::register_exception<ConfigError>(m, "ConfigError");
}
