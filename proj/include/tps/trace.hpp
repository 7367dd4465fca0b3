#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tps/params.hpp"

namespace tps {

struct TraceMetadata {
  EmitterParams emitter;
  std::optional<FilterSpec> filter1;
  std::optional<FilterSpec> filter2;
  std::optional<double> irf_fwhm_ps;
  std::optional<double> diffusion_width_ghz;
  std::optional<double> epsilon_used;          // accepted sensor coupling, rad/ns
  std::optional<double> convergence_residual;  // relative change at acceptance
  std::string kind;                            // "unfiltered", "cross", "recombined", ...
};

// g2(tau) on a delay grid; grid may span negative and positive delays.
struct CorrelationTrace {
  std::vector<double> tau_ns;
  std::vector<double> values;
  TraceMetadata meta;

  // values >= 0 everywhere; when the grid extends past 20/kappa the mean of
  // the last decade of points must sit within 5% of one.
  void validate() const;
};

std::vector<double> linspace(double lo, double hi, int n);

}  // namespace tps
