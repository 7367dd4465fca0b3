#pragma once

#include <array>
#include <string>
#include <vector>

#include "tps/liouvillian.hpp"
#include "tps/params.hpp"
#include "tps/trace.hpp"

namespace tps {

// Rotating-frame Hamiltonian H = -delta n + (Omega/2)(sigma + sigma^dag),
// delta = omega_laser - omega_emitter, all rad/ns.
Matrix emitter_hamiltonian(const EmitterParams& params);

// Emitter Lindblad generator: H above plus radiative decay at kappa.
Superoperator emitter_liouvillian(const EmitterParams& params);

// |1> = c|g> - s|e>, |2> = s|g> + c|e>, with Omega'^2 = Omega^2 + delta^2.
struct DressedStates {
  double c = 0.0;
  double s = 0.0;
  double omega_prime_ghz = 0.0;
};

DressedStates dressed_states(const EmitterParams& params);

// Triplet peak positions {-Omega', 0, +Omega'} in GHz, laser-relative.
std::array<double, 3> mollow_peaks(const EmitterParams& params);

enum class CorrelationSign { antibunching, uncorrelated, partial_antibunching, bunching };

std::string to_string(CorrelationSign sign);

// One predicted two-photon-spectrum feature at filter centers (nu1, nu2).
struct TpsFeature {
  std::string label;
  double nu1_ghz = 0.0;
  double nu2_ghz = 0.0;
  CorrelationSign expected_sign = CorrelationSign::uncorrelated;
};

// The resonant (delta = 0) catalog of 17 features: like/opposite sideband
// pairs (A), the central point (B), center-sideband pairs (C), and the eight
// virtual-cascade maxima on the antidiagonals nu1+nu2 in {0, +-Omega} (D).
std::vector<TpsFeature> feature_catalog(const EmitterParams& params);

// Closed-form resonant intensity correlation
//   g2(tau) = 1 - exp(-3 kappa tau / 4) [cos(Or tau) + (3 kappa / 4 Or) sin(Or tau)],
// Or = sqrt(Omega^2 - (kappa/4)^2). Throws for delta != 0 or overdamped drive.
double unfiltered_g2_closed_form(const EmitterParams& params, double tau_ns);

// Unfiltered g2 trace; closed form on resonance, quantum regression otherwise.
CorrelationTrace unfiltered_g2(const EmitterParams& params, const std::vector<double>& tau_grid_ns);

}  // namespace tps
