#include "tps/params.hpp"

#include <string>

#include "tps/errors.hpp"

namespace tps {

void EmitterParams::validate() const {
  if (!(rabi_ghz >= 0.0)) throw InvalidInput("emitter: rabi_ghz must be >= 0");
  if (!(kappa_ghz > 0.0)) throw InvalidInput("emitter: kappa_ghz must be > 0");
}

void FilterSpec::validate() const {
  if (!(bandwidth_ghz > 0.0)) throw InvalidInput("filter: bandwidth_ghz must be > 0");
}

void SensorConfig::validate() const {
  if (epsilon_sequence.empty()) throw InvalidInput("sensor: epsilon_sequence is empty");
  for (size_t i = 0; i < epsilon_sequence.size(); ++i) {
    if (!(epsilon_sequence[i] > 0.0)) {
      throw InvalidInput("sensor: epsilon values must be > 0");
    }
    if (i > 0 && !(epsilon_sequence[i] < epsilon_sequence[i - 1])) {
      throw InvalidInput("sensor: epsilon_sequence must be strictly decreasing");
    }
  }
  if (!(tolerance > 0.0 && tolerance <= 0.1)) {
    throw InvalidInput("sensor: tolerance must lie in (0, 0.1]");
  }
}

SensorConfig SensorConfig::defaults_for(double min_bandwidth_ghz) {
  const double eps0 = ghz_to_angular(min_bandwidth_ghz) * 1e-3;
  SensorConfig cfg;
  cfg.epsilon_sequence = {eps0, eps0 / 2.0, eps0 / 4.0};
  return cfg;
}

void IrfSpec::validate() const {
  if (!(fwhm_ps > 0.0)) throw InvalidInput("irf: fwhm_ps must be > 0");
}

void DiffusionSpec::validate() const {
  if (!(width_ghz >= 0.0)) throw InvalidInput("diffusion: width_ghz must be >= 0");
  if (n_samples < 5 || n_samples % 2 == 0) {
    throw InvalidInput("diffusion: n_samples must be odd and >= 5");
  }
}

}  // namespace tps
