#include "tps/maps.hpp"

#include <chrono>
#include <cmath>
#include <numeric>

#include "tps/errors.hpp"
#include "tps/parallel.hpp"
#include "tps/postprocess.hpp"
#include "tps/trace.hpp"

namespace tps {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Delay grid for the convolve-then-sample handling of coincidence data:
// symmetric window of +-3 FWHM around zero, step fine enough for both the
// kernel and the fastest coherent oscillation. max_extra_detuning_ghz covers
// jitter-ensemble members whose generalized Rabi frequency is faster than the
// nominal one.
std::vector<double> irf_window_grid(const EmitterParams& params, double gamma_ghz,
                                    const IrfSpec& irf, double max_extra_detuning_ghz) {
  const double fwhm = irf.fwhm_ns();
  EmitterParams fastest_member = params;
  fastest_member.detuning_ghz =
      std::abs(params.detuning_ghz) + std::abs(max_extra_detuning_ghz);
  const double omega_prime =
      ghz_to_angular(dressed_states(fastest_member).omega_prime_ghz);
  const double fastest = std::max(omega_prime, ghz_to_angular(gamma_ghz));
  const double dt = std::min(fwhm / 12.0, 1.0 / (10.0 * fastest));
  const int half = int(std::ceil(3.0 * fwhm / dt));
  std::vector<double> taus(2 * half + 1);
  for (int k = -half; k <= half; ++k) taus[k + half] = k * (3.0 * fwhm / half);
  return taus;
}

struct PointResult {
  double value = std::nan("");
  bool masked = false;
  double residual = 0.0;
  double seconds = 0.0;
};

PointResult compute_point(const EmitterParams& params, const FilterSpec& f1,
                          const FilterSpec& f2, const SensorConfig& sensor,
                          const std::optional<IrfSpec>& irf,
                          const std::optional<DiffusionSpec>& diffusion) {
  const auto start = Clock::now();
  PointResult out;
  try {
    std::vector<double> taus{0.0};
    size_t center = 0;
    if (irf) {
      double jitter_reach = 0.0;
      if (diffusion && diffusion->width_ghz > 0.0) {
        for (double offset : diffusion_nodes(*diffusion).offsets_ghz) {
          jitter_reach = std::max(jitter_reach, std::abs(offset));
        }
      }
      taus = irf_window_grid(params, std::max(f1.bandwidth_ghz, f2.bandwidth_ghz), *irf,
                             jitter_reach);
      center = taus.size() / 2;
    }
    const auto moments_for = [&](double detuning_ghz) {
      EmitterParams p = params;
      p.detuning_ghz = detuning_ghz;
      return filtered_g2_moments(p, f1, f2, taus, sensor);
    };
    FilteredMoments m;
    if (diffusion && diffusion->width_ghz > 0.0) {
      m = diffusion_average_moments(moments_for, *diffusion, params.detuning_ghz,
                                    std::min(f1.bandwidth_ghz, f2.bandwidth_ghz));
    } else {
      m = moments_for(params.detuning_ghz);
    }
    std::vector<double> g2(m.joint.size());
    const double denom = m.rate1 * m.rate2;
    for (size_t i = 0; i < g2.size(); ++i) g2[i] = m.joint[i] / denom;
    if (irf) {
      const double step = taus[1] - taus[0];
      g2 = gaussian_convolve(g2, step, irf->fwhm_ns());
    }
    out.value = std::max(0.0, g2[center]);
    out.residual = m.residual;
  } catch (const ConvergenceError&) {
    out.masked = true;
  }
  out.seconds = seconds_since(start);
  return out;
}

void finalize_metadata(SpectralMap2D& map, const std::vector<double>& point_seconds,
                       double wall_seconds, int workers, double masked_fail_fraction) {
  map.meta.workers = workers;
  map.meta.wall_seconds = wall_seconds;
  if (!point_seconds.empty()) {
    map.meta.point_seconds_mean =
        std::accumulate(point_seconds.begin(), point_seconds.end(), 0.0) /
        double(point_seconds.size());
    map.meta.point_seconds_max = *std::max_element(point_seconds.begin(), point_seconds.end());
  }
  map.meta.masked_points = 0;
  for (uint8_t m : map.mask) map.meta.masked_points += m;
  const double fraction = double(map.meta.masked_points) / double(map.mask.size());
  if (fraction > masked_fail_fraction) {
    throw ConvergenceError("map: " + std::to_string(map.meta.masked_points) +
                           " masked points exceed the allowed fraction");
  }
}

}  // namespace

void SpectralMap2D::validate() const {
  const size_t n1 = nu1_ghz.size();
  const size_t n2 = nu2_ghz.size();
  if (size_t(values.rows()) != n1 || size_t(values.cols()) != n2 || mask.size() != n1 * n2) {
    throw InvalidInput("spectral map: inconsistent dimensions");
  }
  for (size_t i = 0; i < n1; ++i) {
    for (size_t j = 0; j < n2; ++j) {
      if (mask[i * n2 + j]) continue;
      const double v = values(i, j);
      if (!std::isfinite(v) || v < 0.0) {
        throw InvalidInput("spectral map: negative or non-finite unmasked value");
      }
      if (kind == MapKind::cs_ratio && nu1_ghz[i] == nu2_ghz[j] &&
          std::abs(v - 1.0) > 1e-9) {
        throw InvalidInput("spectral map: cs ratio diagonal deviates from one");
      }
    }
  }
}

SpectralMap2D tps_map(const EmitterParams& params, double gamma_ghz, const GridSpec2D& grid,
                      const MapOptions& options) {
  params.validate();
  if (!(gamma_ghz > 0.0)) throw InvalidInput("tps_map: bandwidth must be positive");
  if (grid.n_points < 2 || grid.n_points > 301) {
    throw InvalidInput("tps_map: grid size outside [2, 301]");
  }
  if (!(grid.range_ghz > 0.0)) throw InvalidInput("tps_map: range must be positive");
  const auto start = Clock::now();

  SpectralMap2D map;
  map.kind = MapKind::tps;
  map.nu1_ghz = linspace(-grid.range_ghz, grid.range_ghz, grid.n_points);
  map.nu2_ghz = map.nu1_ghz;
  const int n = grid.n_points;
  map.values = Eigen::MatrixXd::Constant(n, n, std::nan(""));
  map.mask.assign(size_t(n) * n, 0);

  const SensorConfig sensor = options.sensor.value_or(SensorConfig::defaults_for(gamma_ghz));
  map.meta.emitter = params;
  map.meta.gamma_ghz = gamma_ghz;
  map.meta.sensor = sensor;
  map.meta.tau_handling = options.irf ? "irf-convolved" : "coincidence";
  if (options.irf) map.meta.irf_fwhm_ps = options.irf->fwhm_ps;
  if (options.diffusion) map.meta.diffusion_width_ghz = options.diffusion->width_ghz;

  // Upper triangle only; the mirror below the diagonal is exact.
  std::vector<std::pair<int, int>> jobs;
  jobs.reserve(size_t(n) * (n + 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) jobs.emplace_back(i, j);
  }

  const std::function<PointResult(size_t)> job = [&](size_t k) {
    const auto [i, j] = jobs[k];
    const FilterSpec f1{map.nu1_ghz[i], gamma_ghz};
    const FilterSpec f2{map.nu2_ghz[j], gamma_ghz};
    try {
      return compute_point(params, f1, f2, sensor, options.irf, options.diffusion);
    } catch (const std::exception& e) {
      throw Error("tps_map point (" + std::to_string(f1.center_ghz) + ", " +
                  std::to_string(f2.center_ghz) + ") GHz: " + e.what());
    }
  };
  const auto results =
      run_parallel<PointResult>(jobs.size(), job, {options.workers, options.progress});

  std::vector<double> point_seconds(results.size());
  for (size_t k = 0; k < results.size(); ++k) {
    const auto [i, j] = jobs[k];
    const PointResult& r = results[k];
    point_seconds[k] = r.seconds;
    map.values(i, j) = r.value;
    map.values(j, i) = r.value;
    if (r.masked) {
      map.mask[size_t(i) * n + j] = 1;
      map.mask[size_t(j) * n + i] = 1;
    }
    map.meta.max_residual = std::max(map.meta.max_residual, r.residual);
  }
  finalize_metadata(map, point_seconds, seconds_since(start), options.workers,
                    options.masked_fail_fraction);
  map.validate();
  return map;
}

SpectralMap2D cs_map(const EmitterParams& params, double gamma_ghz, const GridSpec2D& grid,
                     const MapOptions& options) {
  params.validate();
  if (!(gamma_ghz > 0.0)) throw InvalidInput("cs_map: bandwidth must be positive");
  if (grid.n_points < 2 || grid.n_points > 301) {
    throw InvalidInput("cs_map: grid size outside [2, 301]");
  }
  if (!(grid.range_ghz > 0.0)) throw InvalidInput("cs_map: range must be positive");
  const auto start = Clock::now();

  SpectralMap2D map;
  map.kind = MapKind::cs_ratio;
  map.nu1_ghz = linspace(-grid.range_ghz, grid.range_ghz, grid.n_points);
  map.nu2_ghz = map.nu1_ghz;
  const int n = grid.n_points;
  map.values = Eigen::MatrixXd::Constant(n, n, std::nan(""));
  map.mask.assign(size_t(n) * n, 0);

  const SensorConfig sensor = options.sensor.value_or(SensorConfig::defaults_for(gamma_ghz));
  map.meta.emitter = params;
  map.meta.gamma_ghz = gamma_ghz;
  map.meta.sensor = sensor;
  map.meta.tau_handling = options.irf ? "irf-convolved" : "coincidence";
  if (options.irf) map.meta.irf_fwhm_ps = options.irf->fwhm_ps;
  if (options.diffusion) map.meta.diffusion_width_ghz = options.diffusion->width_ghz;

  // Autocorrelation denominators, one per axis value.
  const std::function<PointResult(size_t)> auto_job = [&](size_t i) {
    const FilterSpec f{map.nu1_ghz[i], gamma_ghz};
    try {
      return compute_point(params, f, f, sensor, options.irf, options.diffusion);
    } catch (const std::exception& e) {
      throw Error("cs_map autocorrelation at " + std::to_string(f.center_ghz) +
                  " GHz: " + e.what());
    }
  };
  const auto autos =
      run_parallel<PointResult>(size_t(n), auto_job, {options.workers, nullptr});

  std::vector<std::pair<int, int>> jobs;
  jobs.reserve(size_t(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) jobs.emplace_back(i, j);
  }
  const std::function<PointResult(size_t)> cross_job = [&](size_t k) {
    const auto [i, j] = jobs[k];
    const FilterSpec f1{map.nu1_ghz[i], gamma_ghz};
    const FilterSpec f2{map.nu2_ghz[j], gamma_ghz};
    try {
      return compute_point(params, f1, f2, sensor, options.irf, options.diffusion);
    } catch (const std::exception& e) {
      throw Error("cs_map point (" + std::to_string(f1.center_ghz) + ", " +
                  std::to_string(f2.center_ghz) + ") GHz: " + e.what());
    }
  };
  const auto crosses =
      run_parallel<PointResult>(jobs.size(), cross_job, {options.workers, options.progress});

  std::vector<double> point_seconds;
  point_seconds.reserve(autos.size() + crosses.size());
  for (const auto& r : autos) point_seconds.push_back(r.seconds);
  for (const auto& r : crosses) point_seconds.push_back(r.seconds);

  const auto set_masked = [&](int i, int j) {
    map.mask[size_t(i) * n + j] = 1;
    map.mask[size_t(j) * n + i] = 1;
  };

  for (int i = 0; i < n; ++i) {
    if (autos[i].masked) {
      map.values(i, i) = std::nan("");
      map.mask[size_t(i) * n + i] = 1;
    } else {
      map.values(i, i) = 1.0;  // identical arguments cancel exactly
    }
    map.meta.max_residual = std::max(map.meta.max_residual, autos[i].residual);
  }
  for (size_t k = 0; k < jobs.size(); ++k) {
    const auto [i, j] = jobs[k];
    const PointResult& r = crosses[k];
    map.meta.max_residual = std::max(map.meta.max_residual, r.residual);
    if (r.masked || autos[i].masked || autos[j].masked) {
      set_masked(i, j);
      continue;
    }
    const double denom = autos[i].value * autos[j].value;
    if (!(denom > 1e-9)) {
      set_masked(i, j);  // autocorrelation vanishes
      continue;
    }
    const double ratio = r.value * r.value / denom;
    map.values(i, j) = ratio;
    map.values(j, i) = ratio;
  }
  finalize_metadata(map, point_seconds, seconds_since(start), options.workers,
                    options.masked_fail_fraction);
  map.validate();
  return map;
}

double map_point_g2_zero(const EmitterParams& params, const FilterSpec& f1, const FilterSpec& f2,
                         const SensorConfig& sensor, const std::optional<IrfSpec>& irf,
                         const std::optional<DiffusionSpec>& diffusion) {
  const PointResult r = compute_point(params, f1, f2, sensor, irf, diffusion);
  if (r.masked) throw ConvergenceError("map point: coupling limit did not settle");
  return r.value;
}

}  // namespace tps
