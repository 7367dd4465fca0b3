#pragma once

#include "tps/emitter.hpp"
#include "tps/params.hpp"

namespace tps {

// Discretization of the direct filtered-coincidence integral. The window
// [t_max - steady_start, t_max] replaces the infinite filter memory; the
// exponential kernels justify the cutoff.
struct OracleConfig {
  double t_max_ns = 0.0;
  double dt_ns = 0.0;
  double steady_start_ns = 0.0;

  double window_ns() const { return t_max_ns - steady_start_ns; }

  // dt must resolve the fastest scale, 1/(10 max(Omega', G1, G2, kappa));
  // the window must exceed 10/min(G1, G2, kappa). Angular rates throughout.
  void validate(const EmitterParams& params, const FilterSpec& f1, const FilterSpec& f2) const;

  static OracleConfig defaults_for(const EmitterParams& params, const FilterSpec& f1,
                                   const FilterSpec& f2);
};

// Time-and-normally-ordered emitter correlator
//   < T-[sigma^dag(t1) sigma^dag(t2)] T+[sigma(t3) sigma(t4)] >
// evaluated from the steady state by chaining propagators and operator
// insertions in chronological order (creation operators act from the right,
// annihilation operators from the left).
Complex four_time_correlator(const EmitterParams& params, double t1, double t2, double t3,
                             double t4);

// Coincidence-time filtered correlation from the quadruple integral, divided
// by the discretized one-photon spectra of the two filters. All prefactors
// cancel in the ratio.
double direct_g2_zero(const EmitterParams& params, const FilterSpec& f1, const FilterSpec& f2,
                      const OracleConfig& cfg);

}  // namespace tps
