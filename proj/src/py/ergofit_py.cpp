// Copyright (c) 2026 The ergofit authors
// SPDX-License-Identifier: Apache-2.0
//
// Python bindings for the core operations: models, simulation, estimators,
// statistics, limit samplers and calibration.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ergofit/calibration.hpp"
#include "ergofit/errors.hpp"
#include "ergofit/estimators.hpp"
#include "ergofit/harness.hpp"
#include "ergofit/limits.hpp"
#include "ergofit/model.hpp"
#include "ergofit/registry.hpp"
#include "ergofit/simulate.hpp"
#include "ergofit/statistics.hpp"

namespace py = pybind11;
using namespace ergofit;

namespace {

StatisticKind kind_from_string(const std::string& s) { return parse_stat_kind(s); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Goodness-of-fit tests for ergodic diffusions";

  py::register_exception<validation_error>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<numerical_error>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<Theta>(m, "Theta")
      .def(py::init<double, double>(), py::arg("alpha"), py::arg("beta"))
      .def_readwrite("alpha", &Theta::alpha)
      .def_readwrite("beta", &Theta::beta)
      .def("__repr__", [](const Theta& t) {
        return "Theta(alpha=" + std::to_string(t.alpha) + ", beta=" + std::to_string(t.beta) + ")";
      });

  py::class_<ThetaBox>(m, "ThetaBox")
      .def(py::init<double, double, double, double>(), py::arg("a1"), py::arg("a2"),
           py::arg("b1"), py::arg("b2"))
      .def_readwrite("a1", &ThetaBox::a1)
      .def_readwrite("a2", &ThetaBox::a2)
      .def_readwrite("b1", &ThetaBox::b1)
      .def_readwrite("b2", &ThetaBox::b2)
      .def("contains", &ThetaBox::contains);

  py::enum_<GammaRegime>(m, "GammaRegime")
      .value("LowGamma", GammaRegime::low_gamma)
      .value("HighGamma", GammaRegime::high_gamma)
      .value("Unsupported", GammaRegime::unsupported);

  py::class_<ParametricModel>(m, "ParametricModel")
      .def(py::init<double, double, ThetaBox>(), py::arg("gamma"), py::arg("sigma"),
           py::arg("theta_box"))
      .def_property_readonly("gamma", &ParametricModel::gamma)
      .def_property_readonly("sigma", &ParametricModel::sigma)
      .def_property_readonly("regime", &ParametricModel::regime)
      .def_property_readonly("theta_box", &ParametricModel::theta_box)
      .def("trend", &ParametricModel::trend, py::arg("theta"), py::arg("x"))
      .def("invariant_density", &ParametricModel::invariant_density, py::arg("theta"), py::arg("x"))
      .def("invariant_cdf", &ParametricModel::invariant_cdf, py::arg("theta"), py::arg("x"))
      .def("invariant_quantile", &ParametricModel::invariant_quantile, py::arg("theta"), py::arg("p"))
      .def("standardize", &ParametricModel::standardize, py::arg("theta"), py::arg("x"))
      .def("time_rescale_factor", &ParametricModel::time_rescale_factor, py::arg("theta"));

  m.def("make_family", &make_family, py::arg("gamma"), py::arg("sigma"), py::arg("theta_box"));

  py::class_<StationaryMoments>(m, "StationaryMoments")
      .def_readonly("a", &StationaryMoments::a)
      .def_readonly("b", &StationaryMoments::b);
  m.def("stationary_moments", &stationary_moments, py::arg("gamma"));
  m.def("stationary_abs_moment", &stationary_abs_moment, py::arg("gamma"), py::arg("m"));
  m.def("standard_density", &standard_density, py::arg("gamma"), py::arg("y"));
  m.def("standard_cdf", &standard_cdf, py::arg("gamma"), py::arg("y"));
  m.def("standard_quantile", &standard_quantile, py::arg("gamma"), py::arg("p"));

  py::class_<Interval>(m, "Interval")
      .def(py::init<double, double>(), py::arg("lo"), py::arg("hi"))
      .def_readwrite("lo", &Interval::lo)
      .def_readwrite("hi", &Interval::hi);

  py::class_<SimpleModel>(m, "SimpleModel")
      .def(py::init([](const std::function<double(double)>& drift,
                       const std::function<double(double)>& sigma, const Interval& trunc,
                       const std::string& spec_id) {
             return SimpleModel(drift, sigma, trunc, spec_id);
           }),
           py::arg("drift"), py::arg("sigma"), py::arg("truncation"),
           py::arg("spec_id") = "custom")
      .def("drift", &SimpleModel::drift, py::arg("x"))
      .def("diffusion", &SimpleModel::diffusion, py::arg("x"))
      .def("density", &SimpleModel::density, py::arg("x"))
      .def("cdf", &SimpleModel::cdf, py::arg("x"))
      .def("quantile", &SimpleModel::quantile, py::arg("p"))
      .def_property_readonly("normalizer", &SimpleModel::normalizer)
      .def_property_readonly("tail_check_ok", &SimpleModel::tail_check_ok)
      .def_property_readonly("truncation", &SimpleModel::truncation)
      .def_property_readonly("spec_id", &SimpleModel::spec_id);

  m.def("parse_model_spec_canonical",
        [](const std::string& text) { return parse_model_spec(text).canonical(); },
        py::arg("spec"));
  m.def("build_simple_model",
        [](const std::string& text) { return build_simple(parse_model_spec(text)); },
        py::arg("spec"), "Build a SimpleModel from a 'simple:...' spec string");
  m.def("build_family_model",
        [](const std::string& text) { return build_family(parse_model_spec(text)); },
        py::arg("spec"), "Build a ParametricModel from a 'family:...' spec string");

  py::class_<RngStream>(m, "RngStream")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"), py::arg("stream_id"))
      .def("uniform01", &RngStream::uniform01)
      .def("normal", &RngStream::normal)
      .def("substream", &RngStream::substream, py::arg("tag"));

  py::class_<Trajectory>(m, "Trajectory")
      .def(py::init<>())
      .def_readwrite("dt", &Trajectory::dt)
      .def_readwrite("values", &Trajectory::values)
      .def_property_readonly("horizon", &Trajectory::horizon)
      .def_property_readonly("n_steps", &Trajectory::n_steps);

  m.def("simulate_path",
        [](const std::function<double(double)>& drift,
           const std::function<double(double)>& diffusion, double x0, double T, double dt,
           std::uint64_t seed, std::uint64_t stream_id) {
          RngStream rng(seed, stream_id);
          return simulate_path(drift, diffusion, x0, T, dt, rng);
        },
        py::arg("drift"), py::arg("diffusion"), py::arg("x0"), py::arg("T"), py::arg("dt"),
        py::arg("seed"), py::arg("stream_id") = 0);
  m.def("simulate_family_path",
        [](const ParametricModel& model, const Theta& theta, double x0, double T, double dt,
           std::uint64_t seed, std::uint64_t stream_id) {
          RngStream rng(seed, stream_id);
          return simulate_family_path(model, theta, x0, T, dt, rng);
        },
        py::arg("model"), py::arg("theta"), py::arg("x0"), py::arg("T"), py::arg("dt"),
        py::arg("seed"), py::arg("stream_id") = 0);
  m.def("simulate_simple_path",
        [](const SimpleModel& model, double x0, double T, double dt, std::uint64_t seed,
           std::uint64_t stream_id) {
          RngStream rng(seed, stream_id);
          return simulate_simple_path(model, x0, T, dt, rng);
        },
        py::arg("model"), py::arg("x0"), py::arg("T"), py::arg("dt"), py::arg("seed"),
        py::arg("stream_id") = 0);
  m.def("sample_stationary_init",
        [](const ParametricModel& model, const Theta& theta, std::uint64_t seed,
           std::uint64_t stream_id) {
          RngStream rng(seed, stream_id);
          return sample_stationary_init(model, theta, rng);
        },
        py::arg("model"), py::arg("theta"), py::arg("seed"), py::arg("stream_id") = 0);
  m.def("write_trajectory_csv", &write_trajectory_csv, py::arg("trajectory"), py::arg("path"));
  m.def("read_trajectory_csv", &read_trajectory_csv, py::arg("path"));

  m.def("edf",
        [](const Trajectory& traj, const std::vector<double>& grid) { return edf(traj, grid); },
        py::arg("trajectory"), py::arg("x_grid"));
  m.def("local_time_density",
        [](const Trajectory& traj, const std::vector<double>& grid,
           const std::function<double(double)>& sigma) {
          return local_time_density(traj, grid, sigma);
        },
        py::arg("trajectory"), py::arg("x_grid"), py::arg("sigma"));
  m.def("log_likelihood", &log_likelihood, py::arg("trajectory"), py::arg("model"),
        py::arg("theta"));

  py::class_<ThetaEstimate>(m, "ThetaEstimate")
      .def_readonly("theta", &ThetaEstimate::theta)
      .def_readonly("boundary_hit_alpha", &ThetaEstimate::boundary_hit_alpha)
      .def_readonly("boundary_hit_beta", &ThetaEstimate::boundary_hit_beta)
      .def_readonly("profile", &ThetaEstimate::profile);
  m.def("mle",
        [](const Trajectory& traj, const ParametricModel& model, bool keep_profile) {
          MleOptions opts;
          opts.keep_profile = keep_profile;
          return mle(traj, model, opts);
        },
        py::arg("trajectory"), py::arg("model"), py::arg("keep_profile") = false);

  py::class_<StatValue>(m, "StatValue")
      .def_readonly("value", &StatValue::value)
      .def_property_readonly("kind", [](const StatValue& s) { return stat_kind_name(s.kind); })
      .def_property_readonly("law_id", [](const StatValue& s) { return s.meta.law_id; })
      .def_property_readonly("theta_hat", [](const StatValue& s) { return s.meta.theta_hat; });

  m.def("param_stat",
        [](const Trajectory& traj, const ParametricModel& model, const ThetaEstimate& est,
           const std::string& kind) { return param_stat(traj, model, est, kind_from_string(kind)); },
        py::arg("trajectory"), py::arg("model"), py::arg("theta_hat"), py::arg("kind"));
  m.def("simple_density_stat",
        [](const Trajectory& traj, const SimpleModel& model, const std::string& norm) {
          return simple_density_stat(traj, model, parse_stat_norm(norm));
        },
        py::arg("trajectory"), py::arg("model"), py::arg("norm"));
  m.def("adf_stat",
        [](const Trajectory& traj, const SimpleModel& model) { return adf_stat(traj, model); },
        py::arg("trajectory"), py::arg("model"));
  m.def("ks_increment_stat",
        [](const Trajectory& traj, const SimpleModel& model, bool sigma_weight) {
          StatOptions opts;
          opts.increment_sigma_weight = sigma_weight;
          return ks_increment_stat(traj, model, opts);
        },
        py::arg("trajectory"), py::arg("model"), py::arg("sigma_weight") = false);

  m.def("draw_limit_samples",
        [](const std::string& law_id, int n, std::uint64_t seed) {
          return draw_limit_samples(*make_limit_law(law_id), n, seed);
        },
        py::arg("law_id"), py::arg("n"), py::arg("seed"));
  m.def("draw_simple_limit_samples",
        [](const SimpleModel& model, const std::string& norm, int n, std::uint64_t seed) {
          return draw_limit_samples(*make_simple_limit_law(model, parse_stat_norm(norm)), n, seed);
        },
        py::arg("model"), py::arg("norm"), py::arg("n"), py::arg("seed"));
  m.def("simple_law_id",
        [](const SimpleModel& model, const std::string& norm) {
          return simple_law_id(model, parse_stat_norm(norm));
        },
        py::arg("model"), py::arg("norm"));

  py::class_<CalibrationTable>(m, "CalibrationTable")
      .def_readonly("law_id", &CalibrationTable::law_id)
      .def_readonly("epsilons", &CalibrationTable::epsilons)
      .def_readonly("thresholds", &CalibrationTable::thresholds)
      .def_readonly("n_replicates", &CalibrationTable::n_replicates)
      .def_readonly("seed", &CalibrationTable::seed)
      .def("threshold_for", &CalibrationTable::threshold_for, py::arg("epsilon"));

  m.def("calibrate",
        [](const std::string& law_id, const std::vector<double>& epsilons, int n,
           std::uint64_t seed) { return calibrate(*make_limit_law(law_id), epsilons, n, seed); },
        py::arg("law_id"), py::arg("epsilons"), py::arg("n_replicates"), py::arg("seed"));
  m.def("decide",
        [](const StatValue& stat, const CalibrationTable& table, double eps) {
          return decision_name(decide(stat, table, eps));
        },
        py::arg("stat"), py::arg("table"), py::arg("epsilon"));
  m.def("save_table", &save_table, py::arg("table"), py::arg("path"));
  m.def("load_table", &load_table, py::arg("path"));

  m.def("run_study",
        [](const std::string& config_json, const std::string& out_dir) {
          auto cfg = StudyConfig::from_json(nlohmann::json::parse(config_json));
          if (!out_dir.empty()) cfg.out_dir = out_dir;
          StudyReport report = run_study(cfg);
          report.write(cfg.out_dir);
          return report.summary.dump();
        },
        py::arg("config_json"), py::arg("out_dir") = "",
        "Run a study from a JSON config string; returns the summary as JSON text");

  m.def("defaults_json", &defaults_json);
}
