#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "tps/emitter.hpp"
#include "tps/liouvillian.hpp"
#include "tps/params.hpp"
#include "tps/steady_state.hpp"
#include "tps/trace.hpp"

namespace tps {

// Emitter plus weakly coupled two-level sensor modes, one per filter. Sensor
// i sits at laser-relative energy Delta_i = 2 pi center_ghz and decays at
// Gamma_i, so its steady population samples the Lorentzian-filtered signal.
struct CompositeSystem {
  Superoperator liouvillian;
  Matrix sigma;                 // emitter lowering operator, embedded
  std::vector<Matrix> sensors;  // sensor lowering operators, embedded
  double epsilon = 0.0;         // coupling used, rad/ns
};

// One sensor per filter; rejects couplings in the back-action regime
// (epsilon >= Gamma_min / 10). epsilon = 0 builds the decoupled system.
CompositeSystem build_composite(const EmitterParams& params,
                                const std::vector<FilterSpec>& filters, double epsilon);

inline CompositeSystem build_composite(const EmitterParams& params, const FilterSpec& f1,
                                       const FilterSpec& f2, double epsilon) {
  return build_composite(params, std::vector<FilterSpec>{f1, f2}, epsilon);
}

// Steady sensor moments rescaled to their vanishing-coupling limits:
// rate_i = <n_i>/eps^2 and joint(tau) = <:n_1(0) n_2(tau):>/eps^4.
// Rescaling keeps count-rate weighting meaningful across detuning ensembles
// even when different ensemble members accept different couplings.
struct FilteredMoments {
  std::vector<double> tau_ns;
  std::vector<double> joint;  // one entry per tau
  double rate1 = 0.0;
  double rate2 = 0.0;
  double epsilon_used = 0.0;
  double residual = 0.0;  // relative change between the last two couplings
};

// Vanishing-coupling limit of the two-sensor moments on a delay grid (any
// sign; negative delays exchange the sensor roles). Throws ConvergenceError
// with the residual history when the coupling sequence does not settle.
FilteredMoments filtered_g2_moments(const EmitterParams& params, const FilterSpec& f1,
                                    const FilterSpec& f2, const std::vector<double>& tau_grid_ns,
                                    const SensorConfig& cfg);

// g2_{G1,G2}(w1, w2, tau) as a normalized trace.
CorrelationTrace filtered_g2(const EmitterParams& params, const FilterSpec& f1,
                             const FilterSpec& f2, const std::vector<double>& tau_grid_ns,
                             const SensorConfig& cfg);

// Filtered one-photon spectrum: steady sensor population per grid frequency
// in the vanishing-coupling limit, peak-normalized over the grid.
std::vector<double> filtered_spectrum(const EmitterParams& params, double bandwidth_ghz,
                                      const std::vector<double>& nu_grid_ghz,
                                      const SensorConfig& cfg);

// Unnormalized spectrum point (population / eps^2), for averaging pipelines.
double filtered_spectrum_point(const EmitterParams& params, const FilterSpec& filter,
                               const SensorConfig& cfg);

// Sideband recombination at a beam splitter: autocorrelation of the combined
// mode b = (s1 + e^{i phase} s2)/sqrt(2). A single-beam histogram of a
// stationary source is an even function of the delay.
CorrelationTrace recombined_sideband_g2(const EmitterParams& params, const FilterSpec& f_red,
                                        const FilterSpec& f_blue,
                                        const std::vector<double>& tau_grid_ns,
                                        const SensorConfig& cfg, double phase_rad = 0.0);

}  // namespace tps
