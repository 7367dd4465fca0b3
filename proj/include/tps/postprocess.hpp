#pragma once

#include <functional>

#include "tps/params.hpp"
#include "tps/sensors.hpp"
#include "tps/trace.hpp"

namespace tps {

// Unit-area Gaussian smoothing on a uniform grid; edges are extended with
// their boundary values, so settled tails pass through unchanged.
std::vector<double> gaussian_convolve(const std::vector<double>& values, double step,
                                      double fwhm);

// Detector response applied along the delay axis. Grid must be uniform and
// wider than five times the FWHM.
CorrelationTrace convolve_irf(const CorrelationTrace& trace, const IrfSpec& irf);

// Gauss-Hermite rule for integral f(x) exp(-x^2) dx; weights sum to sqrt(pi).
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussHermiteRule gauss_hermite(int n);

// Quadrature over the Gaussian detuning-jitter distribution. Offsets are
// emitter-frequency shifts in GHz; weights are normalized to one.
struct DiffusionNodes {
  std::vector<double> offsets_ghz;
  std::vector<double> weights;
};
DiffusionNodes diffusion_nodes(const DiffusionSpec& spec);

// Rejects quadratures too coarse to resolve the narrowest filter.
void check_diffusion_resolution(const DiffusionSpec& spec, double min_bandwidth_ghz);

// Count-rate-weighted ensemble average: joint moments and rates are averaged
// separately and the ratio is formed afterwards, matching how coincidence
// histograms accumulate under slow drift. The job receives the effective
// detuning nominal - offset for each jitter sample.
FilteredMoments diffusion_average_moments(
    const std::function<FilteredMoments(double detuning_ghz)>& job, const DiffusionSpec& spec,
    double nominal_detuning_ghz, double min_bandwidth_ghz);

// Plain convex average for intensity-like jobs.
double diffusion_average_intensity(const std::function<double(double detuning_ghz)>& job,
                                   const DiffusionSpec& spec, double nominal_detuning_ghz,
                                   double min_bandwidth_ghz);

}  // namespace tps
