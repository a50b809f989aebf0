// SPDX-License-Identifier: Apache-2.0
//
// Python bindings for the 4-pixel odometry core: texture synthesis, mask
// rasterization, sensor simulation, speed decoding, dead reckoning and the
// Gabor-parameter optimizer.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gaborodo/decoder.hpp"
#include "gaborodo/experiment.hpp"
#include "gaborodo/odometry.hpp"
#include "gaborodo/optimizer.hpp"
#include "gaborodo/svg.hpp"

namespace py = pybind11;
using namespace gaborodo;

namespace {

py::array_t<double> grid_to_numpy(const Grid2D& g) {
  py::array_t<double> out({g.rows, g.cols});
  std::copy(g.data.begin(), g.data.end(), out.mutable_data());
  return out;
}

py::array_t<double> vec_to_numpy(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

std::vector<double> numpy_to_vec(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  return std::vector<double>(a.data(), a.data() + a.size());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "4-pixel Gabor-mask planar odometry simulator and estimation suite";

  // --- texture ---
  py::enum_<WrapMode>(m, "WrapMode")
      .value("tile", WrapMode::Tile)
      .value("clamp", WrapMode::Clamp);

  py::class_<TextureField>(m, "TextureField")
      .def_property_readonly("grid", [](const TextureField& f) { return grid_to_numpy(f.grid); })
      .def_readonly("extent_x_m", &TextureField::extent_x_m)
      .def_readonly("extent_y_m", &TextureField::extent_y_m)
      .def("sample", &TextureField::sample, py::arg("x_m"), py::arg("y_m"));

  py::class_<TextureSpec>(m, "TextureSpec")
      .def(py::init([](const std::string& kind, int resolution_px, double extent_m, uint64_t seed,
                       double freq_cpm, double cell_m, double low_cpm, double high_cpm, int octaves,
                       int base_cells, const std::string& path, WrapMode wrap) {
             TextureSpec s;
             s.kind = texture_kind_from_string(kind);
             s.resolution_px = resolution_px;
             s.extent_m = extent_m;
             s.seed = seed;
             s.freq_cpm = freq_cpm;
             s.cell_m = cell_m;
             s.low_cpm = low_cpm;
             s.high_cpm = high_cpm;
             s.octaves = octaves;
             s.base_cells = base_cells;
             s.path = path;
             s.wrap = wrap;
             return s;
           }),
           py::arg("kind") = "bandlimited_noise", py::arg("resolution_px") = 256,
           py::arg("extent_m") = 1.0, py::arg("seed") = 0, py::arg("freq_cpm") = 10.0,
           py::arg("cell_m") = 0.05, py::arg("low_cpm") = 40.0, py::arg("high_cpm") = 240.0,
           py::arg("octaves") = 4, py::arg("base_cells") = 8, py::arg("path") = "",
           py::arg("wrap") = WrapMode::Tile);

  m.def("generate_texture", &generate, py::arg("spec"));
  m.def("load_image", &load_image, py::arg("path"), py::arg("extent_m"),
        py::arg("wrap") = WrapMode::Tile);

  // --- masks ---
  py::class_<GaborParams>(m, "GaborParams")
      .def(py::init<double, double, double>(), py::arg("xi0") = 6.0, py::arg("sigma") = 1.0,
           py::arg("alpha") = 1.0)
      .def_readwrite("xi0", &GaborParams::xi0)
      .def_readwrite("sigma", &GaborParams::sigma)
      .def_readwrite("alpha", &GaborParams::alpha)
      .def("__repr__", [](const GaborParams& p) {
        return "GaborParams(xi0=" + std::to_string(p.xi0) + ", sigma=" + std::to_string(p.sigma) +
               ", alpha=" + std::to_string(p.alpha) + ")";
      });

  m.def("eval_gabor_cos", &eval_gabor_cos, py::arg("params"), py::arg("u"));
  m.def("eval_gabor_sin", &eval_gabor_sin, py::arg("params"), py::arg("u"));
  m.def("decompose", &decompose, py::arg("g"));

  py::class_<MaskRaster>(m, "MaskRaster")
      .def_readonly("resolution_px", &MaskRaster::resolution_px)
      .def_readonly("params", &MaskRaster::params)
      .def_property_readonly("cos_plus", [](const MaskRaster& r) { return grid_to_numpy(r.cos_plus); })
      .def_property_readonly("cos_minus", [](const MaskRaster& r) { return grid_to_numpy(r.cos_minus); })
      .def_property_readonly("sin_plus", [](const MaskRaster& r) { return grid_to_numpy(r.sin_plus); })
      .def_property_readonly("sin_minus", [](const MaskRaster& r) { return grid_to_numpy(r.sin_minus); })
      .def("to_json", &mask_to_json);

  m.def("rasterize", &rasterize, py::arg("params"), py::arg("resolution_px") = 128);
  m.def("mask_from_json", &mask_from_json, py::arg("text"));

  // --- sensor ---
  py::class_<SensorConfig>(m, "SensorConfig")
      .def(py::init<>())
      .def_readwrite("d_m", &SensorConfig::d_m)
      .def_readwrite("fov_rad", &SensorConfig::fov_rad)
      .def_readwrite("h_nom_m", &SensorConfig::h_nom_m)
      .def_readwrite("view_px", &SensorConfig::view_px)
      .def_readwrite("gain", &SensorConfig::gain)
      .def_readwrite("read_noise_v", &SensorConfig::read_noise_v)
      .def_readwrite("adc_bits", &SensorConfig::adc_bits)
      .def_readwrite("v_clip", &SensorConfig::v_clip)
      .def_readwrite("blur_sigma_px", &SensorConfig::blur_sigma_px)
      .def_readwrite("falloff_exp_d", &SensorConfig::falloff_exp_d)
      .def_readwrite("falloff_exp_omega", &SensorConfig::falloff_exp_omega);

  m.def("footprint", &footprint, py::arg("config"), py::arg("h_m"));
  m.def("ground_frequency", &ground_frequency, py::arg("params"), py::arg("config"), py::arg("h_m"));

  py::class_<HeightProfile>(m, "HeightProfile")
      .def_static("nominal", &HeightProfile::nominal)
      .def_static("constant", &HeightProfile::constant, py::arg("h_m"))
      .def_static("per_window", &HeightProfile::per_window, py::arg("range_pct"),
                  py::arg("window_s") = 1.0)
      .def_static("smooth", [](double range_pct, double tau_s) {
        HeightProfile hp;
        hp.mode = HeightProfile::Mode::Smooth;
        hp.range_pct = range_pct;
        hp.smooth_tau_s = tau_s;
        return hp;
      }, py::arg("range_pct"), py::arg("tau_s") = 0.2);

  py::class_<FourChannelTrace>(m, "FourChannelTrace")
      .def_property_readonly("t", [](const FourChannelTrace& t) { return vec_to_numpy(t.t); })
      .def_property_readonly("cos_p", [](const FourChannelTrace& t) { return vec_to_numpy(t.cos_p); })
      .def_property_readonly("cos_m", [](const FourChannelTrace& t) { return vec_to_numpy(t.cos_m); })
      .def_property_readonly("sin_p", [](const FourChannelTrace& t) { return vec_to_numpy(t.sin_p); })
      .def_property_readonly("sin_m", [](const FourChannelTrace& t) { return vec_to_numpy(t.sin_m); });

  py::class_<SignalTrace>(m, "SignalTrace")
      .def(py::init([](py::array_t<double> t, py::array_t<double> s_cos, py::array_t<double> s_sin) {
             SignalTrace tr;
             tr.t = numpy_to_vec(t);
             tr.s_cos = numpy_to_vec(s_cos);
             tr.s_sin = numpy_to_vec(s_sin);
             return tr;
           }),
           py::arg("t"), py::arg("s_cos"), py::arg("s_sin"))
      .def_property_readonly("t", [](const SignalTrace& t) { return vec_to_numpy(t.t); })
      .def_property_readonly("s_cos", [](const SignalTrace& t) { return vec_to_numpy(t.s_cos); })
      .def_property_readonly("s_sin", [](const SignalTrace& t) { return vec_to_numpy(t.s_sin); });

  py::class_<SimResult>(m, "SimResult")
      .def_readonly("raw", &SimResult::raw)
      .def_readonly("diff", &SimResult::diff)
      .def_property_readonly("height_m", [](const SimResult& r) { return vec_to_numpy(r.height_m); });

  m.def("simulate", &simulate, py::arg("field"), py::arg("masks"), py::arg("config"),
        py::arg("path"), py::arg("heights") = HeightProfile::nominal(), py::arg("seed") = 0,
        py::call_guard<py::gil_scoped_release>());

  // --- trajectory ---
  py::class_<PlanarPath>(m, "PlanarPath")
      .def_property_readonly("t", [](const PlanarPath& p) { return vec_to_numpy(p.t); })
      .def_property_readonly("x", [](const PlanarPath& p) { return vec_to_numpy(p.x); })
      .def_property_readonly("y", [](const PlanarPath& p) { return vec_to_numpy(p.y); })
      .def_property_readonly("yaw", [](const PlanarPath& p) { return vec_to_numpy(p.yaw); })
      .def_property_readonly("v_x", [](const PlanarPath& p) { return vec_to_numpy(p.v_x); })
      .def_property_readonly("omega_z", [](const PlanarPath& p) { return vec_to_numpy(p.omega_z); })
      .def("path_length", &PlanarPath::path_length)
      .def("duration", &PlanarPath::duration)
      .def("__len__", &PlanarPath::size);

  py::class_<PathSpec>(m, "PathSpec")
      .def(py::init([](const std::string& profile, double duration_s, double rate_hz, uint64_t seed,
                       double v, double omega, double amp, double freq_hz, double v_min,
                       double v_max, double omega_max, double knot_interval_s, double v_bound,
                       double omega_bound) {
             PathSpec s;
             s.profile = path_profile_from_string(profile);
             s.duration_s = duration_s;
             s.rate_hz = rate_hz;
             s.seed = seed;
             s.v = v;
             s.omega = omega;
             s.amp = amp;
             s.freq_hz = freq_hz;
             s.v_min = v_min;
             s.v_max = v_max;
             s.omega_max = omega_max;
             s.knot_interval_s = knot_interval_s;
             s.v_bound = v_bound;
             s.omega_bound = omega_bound;
             return s;
           }),
           py::arg("profile") = "straight", py::arg("duration_s") = 10.0, py::arg("rate_hz") = 1000.0,
           py::arg("seed") = 0, py::arg("v") = 0.2, py::arg("omega") = 0.0, py::arg("amp") = 0.0,
           py::arg("freq_hz") = 0.5, py::arg("v_min") = 0.1, py::arg("v_max") = 0.4,
           py::arg("omega_max") = 1.0, py::arg("knot_interval_s") = 2.0, py::arg("v_bound") = 5.0,
           py::arg("omega_bound") = 1.0);

  m.def("generate_path", &generate_path, py::arg("spec"));
  m.def("resample_path", &resample, py::arg("path"), py::arg("rate_hz"));
  m.def("load_path_csv", &load_path_csv, py::arg("file"));
  m.def("save_path_csv", &save_path_csv, py::arg("path"), py::arg("file"));

  py::class_<GyroModel>(m, "GyroModel")
      .def(py::init<>())
      .def_readwrite("noise_std", &GyroModel::noise_std)
      .def_readwrite("bias", &GyroModel::bias)
      .def_readwrite("bias_walk_std", &GyroModel::bias_walk_std)
      .def_readwrite("seed", &GyroModel::seed);

  m.def("gyro_measure", [](const PlanarPath& p, const GyroModel& g) {
    return vec_to_numpy(gyro_measure(p, g));
  }, py::arg("path"), py::arg("model"));

  // --- decoder ---
  py::class_<DecoderConfig>(m, "DecoderConfig")
      .def(py::init<>())
      .def_readwrite("window_len", &DecoderConfig::window_len)
      .def_readwrite("rate_hz", &DecoderConfig::rate_hz)
      .def_readwrite("zero_pad_factor", &DecoderConfig::zero_pad_factor)
      .def_readwrite("f_min_hz", &DecoderConfig::f_min_hz)
      .def_readwrite("confidence_threshold", &DecoderConfig::confidence_threshold)
      .def_readwrite("median_len", &DecoderConfig::median_len);

  py::class_<ConditioningConfig>(m, "ConditioningConfig")
      .def(py::init<>())
      .def_readwrite("input_rate_hz", &ConditioningConfig::input_rate_hz)
      .def_readwrite("notch_hz", &ConditioningConfig::notch_hz)
      .def_readwrite("notch_q", &ConditioningConfig::notch_q)
      .def_readwrite("lowpass_hz", &ConditioningConfig::lowpass_hz)
      .def_readwrite("lowpass_order", &ConditioningConfig::lowpass_order)
      .def_readwrite("output_rate_hz", &ConditioningConfig::output_rate_hz);

  py::class_<SpeedEstimate>(m, "SpeedEstimate")
      .def(py::init<>())
      .def_readwrite("t_s", &SpeedEstimate::t_s)
      .def_readwrite("v_hat", &SpeedEstimate::v_hat)
      .def_readwrite("f_peak_hz", &SpeedEstimate::f_peak_hz)
      .def_readwrite("confidence", &SpeedEstimate::confidence)
      .def_readwrite("accepted", &SpeedEstimate::accepted)
      .def("__repr__", [](const SpeedEstimate& e) {
        return "SpeedEstimate(t=" + std::to_string(e.t_s) + ", v_hat=" + std::to_string(e.v_hat) +
               ", confidence=" + std::to_string(e.confidence) + ")";
      });

  m.def("condition", &condition, py::arg("raw"), py::arg("config") = ConditioningConfig{},
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "decode_window",
      [](py::array_t<double> s_cos, py::array_t<double> s_sin, double xi_ground,
         const DecoderConfig& cfg) { return decode_window(numpy_to_vec(s_cos), numpy_to_vec(s_sin), xi_ground, cfg); },
      py::arg("s_cos"), py::arg("s_sin"), py::arg("xi_ground"),
      py::arg("config") = DecoderConfig{});
  m.def("decode_stream", &decode_stream, py::arg("trace"), py::arg("stride_ms"),
        py::arg("xi_ground"), py::arg("config") = DecoderConfig{},
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "instantaneous_frequency",
      [](py::array_t<double> s_cos, py::array_t<double> s_sin, double rate_hz) {
        InstantFrequency f = instantaneous_frequency(numpy_to_vec(s_cos), numpy_to_vec(s_sin), rate_hz);
        return py::make_tuple(vec_to_numpy(f.f_hz), f.f_median_hz);
      },
      py::arg("s_cos"), py::arg("s_sin"), py::arg("rate_hz") = 1000.0);

  // --- odometry ---
  py::class_<OdometryConfig>(m, "OdometryConfig").def(py::init<>());

  m.def(
      "integrate",
      [](const std::vector<SpeedEstimate>& speed, py::array_t<double> gyro_t,
         py::array_t<double> gyro_omega) {
        return integrate(speed, numpy_to_vec(gyro_t), numpy_to_vec(gyro_omega), OdometryConfig{});
      },
      py::arg("speed"), py::arg("gyro_t"), py::arg("gyro_omega"));
  m.def(
      "integrate_series",
      [](py::array_t<double> t, py::array_t<double> v, py::array_t<double> omega) {
        return integrate_series(numpy_to_vec(t), numpy_to_vec(v), numpy_to_vec(omega));
      },
      py::arg("t"), py::arg("v"), py::arg("omega"));
  m.def("rebase", &rebase, py::arg("path"), py::arg("t0"));
  m.def("ate", &ate, py::arg("est"), py::arg("ref"));
  m.def("drift_percent", &drift_percent, py::arg("est"), py::arg("ref"));

  py::class_<TrajectoryScore>(m, "TrajectoryScore")
      .def_readonly("ate_m", &TrajectoryScore::ate_m)
      .def_readonly("drift_pct", &TrajectoryScore::drift_pct)
      .def_readonly("path_length_m", &TrajectoryScore::path_length_m)
      .def_readonly("duration_s", &TrajectoryScore::duration_s);
  m.def("score_trajectory", &score_trajectory, py::arg("est"), py::arg("ref"));

  // --- optimizer ---
  py::class_<ObjectiveConfig>(m, "ObjectiveConfig")
      .def(py::init<>())
      .def_readwrite("textures", &ObjectiveConfig::textures)
      .def_readwrite("paths", &ObjectiveConfig::paths)
      .def_readwrite("height_range_pct", &ObjectiveConfig::height_range_pct)
      .def_readwrite("windows_per_scenario", &ObjectiveConfig::windows_per_scenario)
      .def_readwrite("stride_ms", &ObjectiveConfig::stride_ms)
      .def_readwrite("master_seed", &ObjectiveConfig::master_seed)
      .def_readwrite("sensor", &ObjectiveConfig::sensor)
      .def_readwrite("decoder", &ObjectiveConfig::decoder)
      .def_readwrite("jobs", &ObjectiveConfig::jobs);

  py::class_<ParamBounds>(m, "ParamBounds")
      .def(py::init<>())
      .def_readwrite("xi0_lo", &ParamBounds::xi0_lo)
      .def_readwrite("xi0_hi", &ParamBounds::xi0_hi)
      .def_readwrite("sigma_lo", &ParamBounds::sigma_lo)
      .def_readwrite("sigma_hi", &ParamBounds::sigma_hi)
      .def_readwrite("alpha_lo", &ParamBounds::alpha_lo)
      .def_readwrite("alpha_hi", &ParamBounds::alpha_hi);

  py::class_<OptimResult>(m, "OptimResult")
      .def_readonly("best_params", &OptimResult::best_params)
      .def_readonly("best_objective", &OptimResult::best_objective)
      .def_readonly("baseline_objective", &OptimResult::baseline_objective)
      .def_property_readonly("evaluations",
                             [](const OptimResult& r) { return r.history.size(); });

  py::class_<ObjectiveContext>(m, "ObjectiveContext")
      .def(py::init<ObjectiveConfig>(), py::arg("config"))
      .def("evaluate", &ObjectiveContext::evaluate, py::arg("params"),
           py::call_guard<py::gil_scoped_release>());

  m.def("objective", &objective, py::arg("params"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "optimize",
      [](const ObjectiveContext& ctx, const ParamBounds& bounds, std::vector<GaborParams> starts,
         int max_evals) {
        NelderMeadOptions nm;
        nm.max_evals = max_evals;
        return optimize(ctx, bounds, std::move(starts), nm);
      },
      py::arg("context"), py::arg("bounds") = ParamBounds{},
      py::arg("starts") = std::vector<GaborParams>{}, py::arg("max_evals") = 200,
      py::call_guard<py::gil_scoped_release>());

  // --- experiment ---
  py::class_<ScenarioRow>(m, "ScenarioRow")
      .def_readonly("name", &ScenarioRow::name)
      .def_readonly("texture", &ScenarioRow::texture)
      .def_readonly("path", &ScenarioRow::path)
      .def_readonly("height_range_pct", &ScenarioRow::height_range_pct)
      .def_readonly("windows", &ScenarioRow::windows)
      .def_readonly("accept_rate", &ScenarioRow::accept_rate)
      .def_readonly("rmse", &ScenarioRow::rmse)
      .def_readonly("mae", &ScenarioRow::mae)
      .def_readonly("ate_m", &ScenarioRow::ate_m)
      .def_readonly("drift_pct", &ScenarioRow::drift_pct);

  m.def(
      "run_experiment_file",
      [](const std::string& config_path, const std::string& out_dir) {
        ExperimentConfig cfg = ExperimentConfig::from_file(config_path);
        if (!out_dir.empty()) cfg.run.output_dir = out_dir;
        return run_experiment(cfg).rows;
      },
      py::arg("config_path"), py::arg("out_dir") = "",
      py::call_guard<py::gil_scoped_release>());
}
