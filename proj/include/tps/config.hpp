#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tps/params.hpp"

namespace tps {

struct GridConfig {
  int n_points = 101;
  std::optional<double> range_ghz;  // default: 2 Omega

  bool operator==(const GridConfig&) const = default;
};

struct TauConfig {
  double min_ns = 0.0;
  double max_ns = 10.0;
  int n_points = 1001;

  bool operator==(const TauConfig&) const = default;
};

struct PostConfig {
  // 0 disables the detector response; the default matches the coincidence
  // measurements this models.
  double irf_fwhm_ps = 350.0;
  std::optional<double> diffusion_width_ghz;
  int diffusion_samples = 21;

  bool operator==(const PostConfig&) const = default;
};

struct SensorConfigFile {
  std::optional<std::vector<double>> epsilon_sequence;  // rad/ns
  double tolerance = 1e-3;

  bool operator==(const SensorConfigFile&) const = default;
};

struct OutputConfig {
  std::string directory = "out";
  std::vector<std::string> formats = {"csv"};  // subset of {csv, json}
  bool emit_plots = true;

  bool operator==(const OutputConfig&) const = default;
};

struct G2TauConfig {
  std::string mode = "cross";  // "cross" or "recombined"
  double phase_rad = 0.0;      // beam-splitter phase for recombined traces
  std::optional<std::vector<double>> detuning_sweep_ghz;

  bool operator==(const G2TauConfig&) const = default;
};

struct RunConfig {
  EmitterParams emitter;
  FilterSpec filter1;
  FilterSpec filter2;
  GridConfig grid;
  TauConfig tau;
  PostConfig post;
  SensorConfigFile sensor;
  G2TauConfig g2tau;
  int workers = 1;
  OutputConfig output;

  double grid_range_ghz() const;  // explicit range or 2 Omega
  SensorConfig sensor_config(double min_bandwidth_ghz) const;
  std::optional<IrfSpec> irf() const;
  std::optional<DiffusionSpec> diffusion() const;

  void validate() const;

  bool operator==(const RunConfig&) const = default;
};

// Strict INI-style loader: [section] headers, key = value pairs, # or ;
// comments. Unknown keys are rejected with their full path and line number.
RunConfig parse_config(const std::string& text, const std::string& origin);
RunConfig load_config(const std::string& path);

// Canonical round-trippable form: parse(serialize(c)) == c.
std::string serialize_config(const RunConfig& cfg);

// Environment overrides with the TPSIM_ prefix (TPSIM_WORKERS,
// TPSIM_OUTPUT_DIRECTORY, TPSIM_EMITTER_RABI_GHZ, ...).
void apply_env_overrides(RunConfig& cfg);

}  // namespace tps
