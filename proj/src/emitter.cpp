#include "tps/emitter.hpp"

#include <algorithm>
#include <cmath>

#include "tps/errors.hpp"
#include "tps/propagator.hpp"

namespace tps {

Matrix emitter_hamiltonian(const EmitterParams& params) {
  params.validate();
  const Matrix sigma = lowering_op();
  return -params.detuning_angular() * number_op() +
         0.5 * params.rabi_angular() * (sigma + sigma.adjoint());
}

Superoperator emitter_liouvillian(const EmitterParams& params) {
  return build_lindblad(emitter_hamiltonian(params), {{lowering_op(), params.kappa_angular()}});
}

DressedStates dressed_states(const EmitterParams& params) {
  params.validate();
  const double omega_prime =
      std::hypot(params.rabi_ghz, params.detuning_ghz);
  if (omega_prime == 0.0) {
    throw InvalidInput("dressed_states: degenerate Omega' = 0 (no drive, no detuning)");
  }
  DressedStates d;
  d.omega_prime_ghz = omega_prime;
  d.c = std::sqrt((omega_prime + params.detuning_ghz) / (2.0 * omega_prime));
  d.s = std::sqrt((omega_prime - params.detuning_ghz) / (2.0 * omega_prime));
  return d;
}

std::array<double, 3> mollow_peaks(const EmitterParams& params) {
  const DressedStates d = dressed_states(params);
  return {-d.omega_prime_ghz, 0.0, d.omega_prime_ghz};
}

std::string to_string(CorrelationSign sign) {
  switch (sign) {
    case CorrelationSign::antibunching: return "antibunching";
    case CorrelationSign::uncorrelated: return "uncorrelated";
    case CorrelationSign::partial_antibunching: return "partial-antibunching";
    case CorrelationSign::bunching: return "bunching";
  }
  return "?";
}

std::vector<TpsFeature> feature_catalog(const EmitterParams& params) {
  params.validate();
  if (params.detuning_ghz != 0.0) {
    throw InvalidInput("feature_catalog: defined on resonance only (delta = 0)");
  }
  const double w = params.rabi_ghz;
  using S = CorrelationSign;
  std::vector<TpsFeature> out;
  out.push_back({"A_i", +w, +w, S::antibunching});
  out.push_back({"A_ii", -w, -w, S::antibunching});
  out.push_back({"A_iii", +w, -w, S::bunching});
  out.push_back({"A_iv", -w, +w, S::bunching});
  out.push_back({"B", 0.0, 0.0, S::uncorrelated});
  out.push_back({"C_i", +w, 0.0, S::partial_antibunching});
  out.push_back({"C_ii", -w, 0.0, S::partial_antibunching});
  out.push_back({"C_iii", 0.0, +w, S::partial_antibunching});
  out.push_back({"C_iv", 0.0, -w, S::partial_antibunching});
  // Virtual two-photon cascades: the half-integer lattice points on the
  // antidiagonals nu1+nu2 = +Omega, -Omega, 0.
  out.push_back({"D_i", 0.5 * w, 0.5 * w, S::bunching});
  out.push_back({"D_ii", 1.5 * w, -0.5 * w, S::bunching});
  out.push_back({"D_iii", -0.5 * w, 1.5 * w, S::bunching});
  out.push_back({"D_iv", -0.5 * w, -0.5 * w, S::bunching});
  out.push_back({"D_v", -1.5 * w, 0.5 * w, S::bunching});
  out.push_back({"D_vi", 0.5 * w, -1.5 * w, S::bunching});
  out.push_back({"D_vii", 0.5 * w, -0.5 * w, S::bunching});
  out.push_back({"D_viii", -0.5 * w, 0.5 * w, S::bunching});
  return out;
}

double unfiltered_g2_closed_form(const EmitterParams& params, double tau_ns) {
  params.validate();
  if (params.detuning_ghz != 0.0) {
    throw InvalidInput("unfiltered_g2_closed_form: resonant form only (delta = 0)");
  }
  const double omega = params.rabi_angular();
  const double kappa = params.kappa_angular();
  if (!(omega > kappa / 4.0)) {
    throw InvalidInput("unfiltered_g2_closed_form: overdamped drive (Omega <= kappa/4)");
  }
  const double omega_r = std::sqrt(omega * omega - kappa * kappa / 16.0);
  const double t = std::abs(tau_ns);
  return 1.0 - std::exp(-0.75 * kappa * t) *
                   (std::cos(omega_r * t) + (0.75 * kappa / omega_r) * std::sin(omega_r * t));
}

CorrelationTrace unfiltered_g2(const EmitterParams& params,
                               const std::vector<double>& tau_grid_ns) {
  params.validate();
  CorrelationTrace trace;
  trace.tau_ns = tau_grid_ns;
  trace.values.resize(tau_grid_ns.size());
  trace.meta.emitter = params;
  trace.meta.kind = "unfiltered";

  const bool closed_form_ok =
      params.detuning_ghz == 0.0 && params.rabi_angular() > params.kappa_angular() / 4.0;
  if (closed_form_ok) {
    for (size_t i = 0; i < tau_grid_ns.size(); ++i) {
      trace.values[i] = unfiltered_g2_closed_form(params, tau_grid_ns[i]);
    }
  } else {
    const Superoperator l = emitter_liouvillian(params);
    const DensityOperator rho = steady_state(l, {.verify_spectrum = false});
    const double pop = rho.m(1, 1).real();
    if (!(pop > 1e-14)) {
      throw InvalidInput("unfiltered_g2: vanishing excited population (no drive)");
    }
    std::vector<double> abs_tau(tau_grid_ns.size());
    for (size_t i = 0; i < abs_tau.size(); ++i) abs_tau[i] = std::abs(tau_grid_ns[i]);
    std::vector<size_t> order(abs_tau.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return abs_tau[a] < abs_tau[b]; });
    std::vector<double> sorted(abs_tau.size());
    for (size_t i = 0; i < order.size(); ++i) sorted[i] = abs_tau[order[i]];
    const Matrix sigma = lowering_op();
    const auto values =
        regression_correlator(l, rho, sigma, sigma.adjoint(), number_op(), sorted);
    for (size_t i = 0; i < order.size(); ++i) {
      trace.values[order[i]] = std::max(0.0, values[i].real() / (pop * pop));
    }
  }
  trace.validate();
  return trace;
}

}  // namespace tps
