#pragma once

#include <vector>

#include "tps/units.hpp"

namespace tps {

// Driven two-level emitter. detuning is delta = omega_laser - omega_emitter.
struct EmitterParams {
  double rabi_ghz = 0.0;      // Omega / 2pi
  double detuning_ghz = 0.0;  // delta / 2pi
  double kappa_ghz = 0.2;     // radiative decay / 2pi

  double rabi_angular() const { return ghz_to_angular(rabi_ghz); }
  double detuning_angular() const { return ghz_to_angular(detuning_ghz); }
  double kappa_angular() const { return ghz_to_angular(kappa_ghz); }

  void validate() const;  // rabi >= 0, kappa > 0

  bool operator==(const EmitterParams&) const = default;
};

// One Lorentzian spectral filter; center is laser-relative.
struct FilterSpec {
  double center_ghz = 0.0;     // (omega_i - omega_laser) / 2pi
  double bandwidth_ghz = 0.5;  // Gamma_i / 2pi, FWHM

  double center_angular() const { return ghz_to_angular(center_ghz); }
  double bandwidth_angular() const { return ghz_to_angular(bandwidth_ghz); }

  void validate() const;  // bandwidth > 0

  bool operator==(const FilterSpec&) const = default;
};

// Protocol for the vanishing sensor-coupling limit.
struct SensorConfig {
  std::vector<double> epsilon_sequence;  // rad/ns, strictly decreasing
  double tolerance = 1e-3;               // relative acceptance between steps

  void validate() const;

  // Geometric sequence Gamma_min/1e3 * {1, 1/2, 1/4}, deep in the
  // linear-response regime while staying above numerical noise.
  static SensorConfig defaults_for(double min_bandwidth_ghz);
};

// Detector-pair timing response, Gaussian on the delay axis.
struct IrfSpec {
  double fwhm_ps = 350.0;

  double fwhm_ns() const { return ps_to_ns(fwhm_ps); }
  void validate() const;  // fwhm > 0
};

// Slow emitter-frequency jitter, Gaussian distribution of detunings.
struct DiffusionSpec {
  double width_ghz = 1.0;  // FWHM of the jitter distribution
  int n_samples = 21;      // Gauss-Hermite quadrature points, odd

  void validate() const;
};

}  // namespace tps
