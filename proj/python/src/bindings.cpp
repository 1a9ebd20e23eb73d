// Python bindings: samplers, hulls, closed forms and the experiment runner.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "levyhull/closed_form.hpp"
#include "levyhull/errors.hpp"
#include "levyhull/experiments.hpp"
#include "levyhull/hull.hpp"
#include "levyhull/limits.hpp"
#include "levyhull/lp_volumes.hpp"
#include "levyhull/report.hpp"
#include "levyhull/stable.hpp"
#include "levyhull/stats.hpp"

namespace py = pybind11;
using namespace levyhull;

namespace {

py::dict row_dict(const ResultRow& r) {
  py::dict d;
  d["experiment"] = r.experiment;
  d["params"] = r.params.dump();
  d["j"] = r.j;
  d["mean"] = r.estimate.mean;
  d["stderr"] = r.estimate.std_error;
  d["trials"] = r.estimate.trials;
  d["target"] = r.estimate.target ? py::cast(r.estimate.target->value) : py::none();
  d["z"] = r.estimate.z_score ? py::cast(*r.estimate.z_score) : py::none();
  d["verdict"] = std::string(to_string(r.verdict));
  return d;
}

}  // namespace

PYBIND11_MODULE(_levyhull, m) {
  m.doc() = "Convex hulls of Levy processes: sampling, hull functionals and closed-form checks";

  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<StableSpec>(m, "StableSpec")
      .def_static("brownian", &StableSpec::brownian, py::arg("d"), py::arg("c") = 0.5)
      .def_static("isotropic", &StableSpec::isotropic, py::arg("alpha"), py::arg("c"), py::arg("d"))
      .def_static(
          "compound_poisson",
          [](int d, double tail_alpha, double rate, std::vector<double> drift, bool gaussian) {
            return StableSpec::compound_poisson(d, tail_alpha, rate, std::move(drift),
                                                gaussian ? JumpLaw::Gaussian : JumpLaw::Pareto);
          },
          py::arg("d"), py::arg("tail_alpha"), py::arg("jump_rate"), py::arg("drift") = std::vector<double>{},
          py::arg("gaussian_jumps") = false)
      .def_readonly("alpha", &StableSpec::alpha)
      .def_readonly("c", &StableSpec::c)
      .def_readonly("d", &StableSpec::d)
      .def("__repr__", [](const StableSpec& s) {
        return "StableSpec(alpha=" + std::to_string(s.alpha) + ", c=" + std::to_string(s.c) +
               ", d=" + std::to_string(s.d) + ")";
      });

  m.def(
      "sample_stable_1d",
      [](double alpha, double scale, std::size_t n, std::uint64_t seed) {
        Rng rng(seed);
        std::vector<double> out(n);
        for (double& x : out) x = sample_stable_1d(alpha, scale, rng);
        return out;
      },
      py::arg("alpha"), py::arg("scale"), py::arg("n"), py::arg("seed") = 0);

  m.def(
      "sample_walk_path",
      [](const StableSpec& spec, std::size_t n, double horizon, std::uint64_t seed) {
        Rng rng(seed);
        PathSample p = sample_walk_path(spec, n, horizon, rng);
        return py::make_tuple(p.times, p.points);
      },
      py::arg("spec"), py::arg("n"), py::arg("horizon") = 1.0, py::arg("seed") = 0,
      "Returns (times, points) with points of shape (d, n + 1).");

  m.def(
      "sample_cpp_path",
      [](const StableSpec& spec, double horizon, std::uint64_t seed) {
        Rng rng(seed);
        PathSample p = sample_cpp_path(spec, horizon, rng);
        return py::make_tuple(p.times, p.points);
      },
      py::arg("spec"), py::arg("horizon"), py::arg("seed") = 0);

  py::class_<Polytope>(m, "Polytope")
      .def_readonly("dim", &Polytope::dim)
      .def_readonly("affine_dim", &Polytope::affine_dim)
      .def_readonly("vertices", &Polytope::vertices)
      .def_readonly("facets", &Polytope::facets)
      .def_readonly("normals", &Polytope::normals)
      .def("intrinsic_volumes", [](const Polytope& p) { return intrinsic_volumes(p).values; })
      .def("support", [](const Polytope& p, const Eigen::VectorXd& u) { return support_value(p, u); })
      .def("to_json", [](const Polytope& p) { return to_json(p).dump(); });

  m.def("convex_hull", [](const Eigen::MatrixXd& pts) { return convex_hull(pts); }, py::arg("points"),
        "Hull of a (d, N) point array, d in {2, 3}.");
  m.def(
      "intrinsic_volumes", [](const Eigen::MatrixXd& pts) { return intrinsic_volumes(convex_hull(pts)).values; },
      py::arg("points"));
  m.def("hausdorff", &hausdorff);
  m.def("gram_det", &gram_det, py::arg("vectors"));
  m.def("zonotope_intrinsic_volume", &zonotope_intrinsic_volume, py::arg("generators"), py::arg("j"));
  m.def(
      "vp_ball_mixed",
      [](const Eigen::MatrixXd& pts, double p, std::size_t quad_points, std::uint64_t seed) {
        const SupportFn h = SupportFn::polytope(convex_hull(pts));
        const VpValue v = vp_ball_mixed(h, p, h.dim(), quad_points, seed);
        return py::make_tuple(v.value, v.std_error);
      },
      py::arg("points"), py::arg("p"), py::arg("quad_points") = 4096, py::arg("seed") = 0,
      "V_p(B^d, conv(points)) as (value, stderr).");

  auto cf = m.def_submodule("closed_form", "Closed-form expectations and constants");
  cf.def("gamma_fn", &closed_form::gamma_fn);
  cf.def("kappa", &closed_form::kappa);
  cf.def("ball_Vj", &closed_form::ball_Vj, py::arg("d"), py::arg("j"), py::arg("r"));
  cf.def("ev_intrinsic_stable", &closed_form::ev_intrinsic_stable, py::arg("alpha"), py::arg("j"), py::arg("vj_k"));
  cf.def("ev_intrinsic_brownian", &closed_form::ev_intrinsic_brownian, py::arg("d"), py::arg("j"));
  cf.def("ev_intrinsic_isotropic", &closed_form::ev_intrinsic_isotropic, py::arg("alpha"), py::arg("c"),
         py::arg("d"), py::arg("j"));
  cf.def("dirichlet_constant", &closed_form::dirichlet_constant, py::arg("alpha"), py::arg("j"));
  cf.def("lattice_sum_partial", &closed_form::lattice_sum_partial, py::arg("alpha"), py::arg("j"), py::arg("n"));
  cf.def("expected_faces_Yn", &closed_form::expected_faces_Yn, py::arg("n"), py::arg("d"));
  cf.def("vysotsky_ev", &closed_form::vysotsky_ev, py::arg("n"), py::arg("j"), py::arg("alpha"), py::arg("vj_k"));
  cf.def("ev_sup_brownian_p", &closed_form::ev_sup_brownian_p, py::arg("p"));
  cf.def("lp_brownian_factor", &closed_form::lp_brownian_factor, py::arg("p"));

  m.def(
      "hill_tail_index", [](const std::vector<double>& x, std::size_t k) { return hill_tail_index(x, k); },
      py::arg("samples"), py::arg("k"));
  m.def(
      "ks_two_sample",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        const KsResult r = ks_two_sample(a, b);
        return py::make_tuple(r.statistic, r.p_value);
      },
      py::arg("a"), py::arg("b"));

  m.def(
      "exit_times",
      [](const std::vector<double>& times, const Eigen::MatrixXd& points, bool continuous) {
        PathSample p{times, points};
        const ExitRecord r = exit_times(p, continuous ? ExitScan::Continuous : ExitScan::Grid);
        return py::make_tuple(r.exit_times, r.exit_points);
      },
      py::arg("times"), py::arg("points"), py::arg("continuous") = false);

  m.def(
      "run_config",
      [](const std::string& text, unsigned threads) {
        py::list rows;
        ExecOptions opts;
        opts.threads = threads;
        for (const auto& cfg : parse_config(text)) {
          ExperimentOutcome o;
          {
            py::gil_scoped_release release;
            o = run_experiment(cfg, opts);
          }
          for (const auto& r : o.rows) rows.append(row_dict(r));
        }
        return rows;
      },
      py::arg("config_json"), py::arg("threads") = 0,
      "Runs every experiment of a JSON config and returns its result rows as dicts.");
  m.def(
      "run_all",
      [](const std::string& text, const std::string& out_dir, unsigned threads) {
        ExecOptions opts;
        opts.threads = threads;
        const auto configs = parse_config(text);
        RunManifest man;
        {
          py::gil_scoped_release release;
          man = run_all(configs, out_dir, opts);
          emit_plot_data(man, out_dir);
        }
        return man.exit_status();
      },
      py::arg("config_json"), py::arg("out_dir"), py::arg("threads") = 0,
      "Runs a config and writes results.csv, summary.json and manifest.json; returns the exit status.");
}
