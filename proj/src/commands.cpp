#include "tps/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <nlohmann/json.hpp>
#include <set>

#include "tps/emitter.hpp"
#include "tps/errors.hpp"
#include "tps/maps.hpp"
#include "tps/oracle.hpp"
#include "tps/outputs.hpp"
#include "tps/parallel.hpp"
#include "tps/postprocess.hpp"
#include "tps/sensors.hpp"

namespace tps {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool wants_format(const RunConfig& cfg, const std::string& fmt) {
  for (const auto& f : cfg.output.formats) {
    if (f == fmt) return true;
  }
  return false;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.output.directory) / name).string();
}

void ensure_out_dir(const RunConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.output.directory, ec);
  if (ec) throw IoError("cannot create output directory '" + cfg.output.directory + "'");
}

std::function<void(size_t, size_t)> progress_printer(const std::string& label) {
  auto last = std::make_shared<size_t>(0);
  return [label, last](size_t done, size_t total) {
    if (done == total || done - *last >= total / 20 + 1) {
      *last = done;
      std::cerr << label << ": " << done << "/" << total << "\r" << std::flush;
      if (done == total) std::cerr << "\n";
    }
  };
}

std::vector<double> tau_grid(const RunConfig& cfg) {
  return linspace(cfg.tau.min_ns, cfg.tau.max_ns, cfg.tau.n_points);
}

void command_spectrum(const RunConfig& cfg) {
  const double range = cfg.grid_range_ghz();
  const std::vector<double> nus = linspace(-range, range, cfg.grid.n_points);
  const double gamma = cfg.filter1.bandwidth_ghz;
  const SensorConfig sensor = cfg.sensor_config(gamma);
  const auto diffusion = cfg.diffusion();
  const auto start = Clock::now();

  const std::function<double(size_t)> job = [&](size_t i) {
    const auto point = [&](double detuning_ghz) {
      EmitterParams p = cfg.emitter;
      p.detuning_ghz = detuning_ghz;
      return filtered_spectrum_point(p, FilterSpec{nus[i], gamma}, sensor);
    };
    if (diffusion) {
      return diffusion_average_intensity(point, *diffusion, cfg.emitter.detuning_ghz, gamma);
    }
    return point(cfg.emitter.detuning_ghz);
  };
  std::vector<double> intensity =
      run_parallel<double>(nus.size(), job, {cfg.workers, progress_printer("spectrum")});
  const double peak = *std::max_element(intensity.begin(), intensity.end());
  for (auto& v : intensity) v /= peak;

  const json run_info{{"wall_seconds", seconds_since(start)}, {"workers", cfg.workers}};
  if (wants_format(cfg, "csv")) {
    const std::string path = out_path(cfg, "spectrum.csv");
    write_text_file(path, spectrum_csv(nus, intensity));
    write_meta_sidecar(path, "spectrum", cfg, run_info);
    if (cfg.output.emit_plots) {
      write_text_file(out_path(cfg, "spectrum.gp"),
                      plot_script_spectrum("spectrum.csv", cfg.emitter));
    }
  }
  if (wants_format(cfg, "json")) {
    const std::string path = out_path(cfg, "spectrum.json");
    write_text_file(path, spectrum_json(nus, intensity).dump(2) + "\n");
    write_meta_sidecar(path, "spectrum", cfg, run_info);
  }
}

CorrelationTrace one_g2_trace(const RunConfig& cfg, double detuning_ghz) {
  EmitterParams params = cfg.emitter;
  params.detuning_ghz = detuning_ghz;
  const std::vector<double> taus = tau_grid(cfg);
  const double min_bw = std::min(cfg.filter1.bandwidth_ghz, cfg.filter2.bandwidth_ghz);
  const SensorConfig sensor = cfg.sensor_config(min_bw);
  const auto diffusion = cfg.diffusion();

  CorrelationTrace trace;
  if (cfg.g2tau.mode == "recombined") {
    if (diffusion) {
      throw ConfigError("g2tau: diffusion averaging supports cross traces only");
    }
    trace = recombined_sideband_g2(params, cfg.filter1, cfg.filter2, taus, sensor,
                                   cfg.g2tau.phase_rad);
  } else if (diffusion) {
    const auto job = [&](double d) {
      EmitterParams p = params;
      p.detuning_ghz = d;
      return filtered_g2_moments(p, cfg.filter1, cfg.filter2, taus, sensor);
    };
    const FilteredMoments m =
        diffusion_average_moments(job, *diffusion, detuning_ghz, min_bw);
    trace.tau_ns = taus;
    trace.values.resize(m.joint.size());
    for (size_t i = 0; i < m.joint.size(); ++i) {
      trace.values[i] = std::max(0.0, m.joint[i] / (m.rate1 * m.rate2));
    }
    trace.meta.emitter = params;
    trace.meta.filter1 = cfg.filter1;
    trace.meta.filter2 = cfg.filter2;
    trace.meta.epsilon_used = m.epsilon_used;
    trace.meta.convergence_residual = m.residual;
    trace.meta.diffusion_width_ghz = diffusion->width_ghz;
    trace.meta.kind = "cross";
  } else {
    trace = filtered_g2(params, cfg.filter1, cfg.filter2, taus, sensor);
  }
  if (const auto irf = cfg.irf()) trace = convolve_irf(trace, *irf);
  return trace;
}

void command_g2tau(const RunConfig& cfg) {
  const auto start = Clock::now();
  std::vector<double> detunings{cfg.emitter.detuning_ghz};
  bool sweep = false;
  if (cfg.g2tau.detuning_sweep_ghz && !cfg.g2tau.detuning_sweep_ghz->empty()) {
    detunings = *cfg.g2tau.detuning_sweep_ghz;
    sweep = true;
  }

  std::vector<std::string> csv_names, labels;
  for (double d : detunings) {
    const CorrelationTrace trace = one_g2_trace(cfg, d);
    std::string base = "g2tau";
    if (sweep) {
      char suffix[32];
      std::snprintf(suffix, sizeof(suffix), "_delta%+.3f", d);
      base += suffix;
    }
    const json run_info{{"wall_seconds", seconds_since(start)},
                        {"detuning_ghz", d},
                        {"epsilon_used", trace.meta.epsilon_used.value_or(0.0)},
                        {"residual", trace.meta.convergence_residual.value_or(0.0)},
                        {"mode", cfg.g2tau.mode}};
    if (wants_format(cfg, "csv")) {
      const std::string path = out_path(cfg, base + ".csv");
      write_text_file(path, trace_csv(trace));
      write_meta_sidecar(path, "g2tau", cfg, run_info);
      csv_names.push_back(base + ".csv");
      char label[48];
      std::snprintf(label, sizeof(label), "delta/2pi = %+.3f GHz", d);
      labels.push_back(label);
    }
    if (wants_format(cfg, "json")) {
      const std::string path = out_path(cfg, base + ".json");
      write_text_file(path, trace_json(trace).dump(2) + "\n");
      write_meta_sidecar(path, "g2tau", cfg, run_info);
    }
  }
  if (cfg.output.emit_plots && !csv_names.empty()) {
    write_text_file(out_path(cfg, "g2tau.gp"), plot_script_traces(csv_names, labels, 1.5));
  }
}

void command_map(const RunConfig& cfg, MapKind kind) {
  const double gamma = cfg.filter1.bandwidth_ghz;
  MapOptions options;
  options.irf = cfg.irf();
  options.diffusion = cfg.diffusion();
  options.sensor = cfg.sensor_config(gamma);
  options.workers = cfg.workers;
  const std::string name = kind == MapKind::tps ? "tps" : "csmap";
  options.progress = progress_printer(name);

  const GridSpec2D grid{cfg.grid.n_points, cfg.grid_range_ghz()};
  const SpectralMap2D map = kind == MapKind::tps
                                ? tps_map(cfg.emitter, gamma, grid, options)
                                : cs_map(cfg.emitter, gamma, grid, options);

  const json run_info{{"wall_seconds", map.meta.wall_seconds},
                      {"workers", map.meta.workers},
                      {"masked_points", map.meta.masked_points},
                      {"max_residual", map.meta.max_residual},
                      {"point_seconds_mean", map.meta.point_seconds_mean},
                      {"point_seconds_max", map.meta.point_seconds_max},
                      {"tau_handling", map.meta.tau_handling}};
  if (wants_format(cfg, "csv")) {
    const std::string path = out_path(cfg, name + ".csv");
    write_text_file(path, map_csv(map));
    write_meta_sidecar(path, name, cfg, run_info);
    if (cfg.output.emit_plots) {
      write_text_file(out_path(cfg, name + ".gp"), plot_script_map(name + ".csv", map));
    }
  }
  if (wants_format(cfg, "json")) {
    const std::string path = out_path(cfg, name + ".json");
    write_text_file(path, map_json(map).dump(2) + "\n");
    write_meta_sidecar(path, name, cfg, run_info);
  }
}

void command_dressed(const RunConfig& cfg) {
  const DressedStates d = dressed_states(cfg.emitter);
  const auto peaks = mollow_peaks(cfg.emitter);
  std::printf("c = %.6f\n", d.c);
  std::printf("s = %.6f\n", d.s);
  std::printf("omega_prime_ghz = %.6f\n", d.omega_prime_ghz);
  std::printf("mollow_peaks_ghz = %.6f, %.6f, %.6f\n", peaks[0], peaks[1], peaks[2]);

  json j{{"c", d.c},
         {"s", d.s},
         {"omega_prime_ghz", d.omega_prime_ghz},
         {"mollow_peaks_ghz", peaks}};
  if (cfg.emitter.detuning_ghz == 0.0 && cfg.emitter.rabi_ghz > 0.0) {
    json features = json::array();
    for (const auto& f : feature_catalog(cfg.emitter)) {
      features.push_back({{"label", f.label},
                          {"nu1_ghz", f.nu1_ghz},
                          {"nu2_ghz", f.nu2_ghz},
                          {"expected", to_string(f.expected_sign)}});
    }
    j["features"] = features;
  }
  const std::string path = out_path(cfg, "dressed.json");
  write_text_file(path, j.dump(2) + "\n");
  write_meta_sidecar(path, "dressed", cfg, json{{"wall_seconds", 0.0}});
}

void command_validate(const RunConfig& cfg) {
  const auto start = Clock::now();
  const double rabi = cfg.emitter.rabi_ghz;
  const double gamma = cfg.filter1.bandwidth_ghz;
  const SensorConfig sensor = cfg.sensor_config(gamma);
  const std::vector<std::pair<double, double>> centers{
      {0.0, 0.0}, {rabi, rabi}, {rabi, -rabi}, {0.5 * rabi, 0.5 * rabi}, {rabi, 0.0}};

  json points = json::array();
  double worst = 0.0;
  std::printf("sensor method vs direct integration, relative gate 5%%\n");
  for (const auto& [nu1, nu2] : centers) {
    const FilterSpec f1{nu1, gamma};
    const FilterSpec f2{nu2, gamma};
    const double sensor_value =
        map_point_g2_zero(cfg.emitter, f1, f2, sensor, std::nullopt, std::nullopt);
    const double oracle_value =
        direct_g2_zero(cfg.emitter, f1, f2, OracleConfig::defaults_for(cfg.emitter, f1, f2));
    const double rel = std::abs(sensor_value - oracle_value) /
                       std::max(std::abs(oracle_value), 1e-12);
    worst = std::max(worst, rel);
    std::printf("  (%+.3f, %+.3f) GHz: sensor %.6f  direct %.6f  rel %.4f %s\n", nu1, nu2,
                sensor_value, oracle_value, rel, rel <= 0.05 ? "ok" : "MISMATCH");
    points.push_back({{"nu1_ghz", nu1},
                      {"nu2_ghz", nu2},
                      {"sensor", sensor_value},
                      {"oracle", oracle_value},
                      {"rel_diff", rel}});
  }
  const bool pass = worst <= 0.05;
  const json report{{"points", points},
                    {"max_rel_diff", worst},
                    {"pass", pass},
                    {"wall_seconds", seconds_since(start)}};
  const std::string path = out_path(cfg, "validate.json");
  write_text_file(path, report.dump(2) + "\n");
  write_meta_sidecar(path, "validate", cfg, report);
  std::printf("max relative disagreement: %.4f -> %s\n", worst, pass ? "PASS" : "FAIL");
  if (!pass) {
    throw ConvergenceError("validate: sensor-oracle disagreement exceeds 5%", {worst});
  }
}

}  // namespace

void run_command(const std::string& name, const RunConfig& cfg) {
  static const std::set<std::string> known{"spectrum", "g2tau", "tps",
                                           "csmap",    "dressed", "validate"};
  if (!known.count(name)) throw ConfigError("unknown command '" + name + "'");
  cfg.validate();
  ensure_out_dir(cfg);
  if (name == "spectrum") {
    command_spectrum(cfg);
  } else if (name == "g2tau") {
    command_g2tau(cfg);
  } else if (name == "tps") {
    command_map(cfg, MapKind::tps);
  } else if (name == "csmap") {
    command_map(cfg, MapKind::cs_ratio);
  } else if (name == "dressed") {
    command_dressed(cfg);
  } else if (name == "validate") {
    command_validate(cfg);
  }
}

int run_command_status(const std::string& name, const RunConfig& cfg) {
  try {
    run_command(name, cfg);
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidInput& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace tps
