#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tps/params.hpp"
#include "tps/sensors.hpp"

namespace tps {

enum class MapKind { tps, cs_ratio };

struct MapMetadata {
  EmitterParams emitter;
  double gamma_ghz = 0.0;
  std::optional<double> irf_fwhm_ps;
  std::optional<double> diffusion_width_ghz;
  SensorConfig sensor;
  std::string tau_handling;  // "coincidence" or "irf-convolved"
  int workers = 1;
  size_t masked_points = 0;
  double max_residual = 0.0;
  double wall_seconds = 0.0;
  double point_seconds_mean = 0.0;
  double point_seconds_max = 0.0;
};

// Values of g2(0) or the Cauchy-Schwartz ratio R on a (nu1, nu2) grid.
// Masked points carry NaN and are flagged; row index runs over nu1.
struct SpectralMap2D {
  std::vector<double> nu1_ghz;
  std::vector<double> nu2_ghz;
  Eigen::MatrixXd values;
  std::vector<uint8_t> mask;  // row-major nu1-outer, 1 = masked
  MapKind kind = MapKind::tps;
  MapMetadata meta;

  bool masked_at(int i, int j) const { return mask[size_t(i) * nu2_ghz.size() + j] != 0; }
  void validate() const;
};

struct GridSpec2D {
  int n_points = 101;
  double range_ghz = 0.0;  // axes span [-range, +range]
};

struct MapOptions {
  std::optional<IrfSpec> irf;
  std::optional<DiffusionSpec> diffusion;
  std::optional<SensorConfig> sensor;  // defaults to SensorConfig::defaults_for(gamma)
  int workers = 1;
  double masked_fail_fraction = 0.01;
  std::function<void(size_t, size_t)> progress;
};

// Two-photon spectrum at coincidence: g2(nu1, nu2, 0) per grid point. With an
// IRF the point value is a short delay trace convolved with the detector
// response and sampled at zero. The swap symmetry g2(w1,w2,0) = g2(w2,w1,0)
// halves the work; points whose coupling limit fails are masked, and the map
// aborts only when more than masked_fail_fraction of points masked.
SpectralMap2D tps_map(const EmitterParams& params, double gamma_ghz, const GridSpec2D& grid,
                      const MapOptions& options = {});

// Cauchy-Schwartz ratio R = g2(w1,w2,0)^2 / (g2(w1,w1,0) g2(w2,w2,0)).
// Autocorrelations are computed once per axis value and reused; the diagonal
// is exactly one by construction.
SpectralMap2D cs_map(const EmitterParams& params, double gamma_ghz, const GridSpec2D& grid,
                     const MapOptions& options = {});

// Coincidence g2 for one filter pair under the map pipeline (shared by the
// map engines and the acceptance checks).
double map_point_g2_zero(const EmitterParams& params, const FilterSpec& f1, const FilterSpec& f2,
                         const SensorConfig& sensor, const std::optional<IrfSpec>& irf,
                         const std::optional<DiffusionSpec>& diffusion);

}  // namespace tps
