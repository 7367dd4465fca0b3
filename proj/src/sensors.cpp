#include "tps/sensors.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include "tps/errors.hpp"
#include "tps/propagator.hpp"

namespace tps {

namespace {

double scaled_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(b[i])));
  }
  return worst;
}

void require_ascending(const std::vector<double>& taus, const char* who) {
  for (size_t i = 1; i < taus.size(); ++i) {
    if (!(taus[i] > taus[i - 1])) {
      throw InvalidInput(std::string(who) + ": delay grid must be strictly ascending");
    }
  }
}

void warn_if_undersampled(const EmitterParams& params, const FilterSpec& f1,
                          const FilterSpec& f2, const std::vector<double>& taus) {
  double max_step = 0.0;
  for (size_t i = 1; i < taus.size(); ++i) max_step = std::max(max_step, taus[i] - taus[i - 1]);
  if (max_step == 0.0) return;
  const double omega_prime = ghz_to_angular(dressed_states(params).omega_prime_ghz);
  const double fastest =
      std::max({omega_prime, f1.bandwidth_angular(), f2.bandwidth_angular()});
  if (max_step > 1.0 / (10.0 * fastest)) {
    std::cerr << "warning: delay grid step " << max_step
              << " ns undersamples oscillations at " << fastest << " rad/ns\n";
  }
}

}  // namespace

CompositeSystem build_composite(const EmitterParams& params,
                                const std::vector<FilterSpec>& filters, double epsilon) {
  params.validate();
  if (filters.empty() || filters.size() > 2) {
    throw InvalidInput("build_composite: one or two sensors supported");
  }
  double min_bw = filters.front().bandwidth_angular();
  for (const auto& f : filters) {
    f.validate();
    min_bw = std::min(min_bw, f.bandwidth_angular());
  }
  if (!(epsilon >= 0.0)) throw InvalidInput("build_composite: epsilon must be >= 0");
  if (epsilon >= min_bw / 10.0) {
    throw InvalidInput("build_composite: sensor back-action regime (epsilon >= Gamma_min/10)");
  }

  const int n_slots = 1 + int(filters.size());
  CompositeSystem sys;
  sys.epsilon = epsilon;
  sys.sigma = embed_qubit_op(lowering_op(), 0, n_slots);

  Matrix h = embed_qubit_op(emitter_hamiltonian(params), 0, n_slots);
  std::vector<std::pair<Matrix, double>> jumps;
  jumps.emplace_back(sys.sigma, params.kappa_angular());
  for (size_t i = 0; i < filters.size(); ++i) {
    const Matrix s_i = embed_qubit_op(lowering_op(), int(i) + 1, n_slots);
    h += filters[i].center_angular() * (s_i.adjoint() * s_i).eval();
    h += epsilon * (sys.sigma.adjoint() * s_i + s_i.adjoint() * sys.sigma).eval();
    jumps.emplace_back(s_i, filters[i].bandwidth_angular());
    sys.sensors.push_back(s_i);
  }
  sys.liouvillian = build_lindblad(h, jumps);
  return sys;
}

namespace {

// Moments of one coupling value; joint entries follow the requested grid.
FilteredMoments moments_at_epsilon(const EmitterParams& params, const FilterSpec& f1,
                                   const FilterSpec& f2, const std::vector<double>& taus,
                                   double eps) {
  const CompositeSystem sys = build_composite(params, {f1, f2}, eps);
  const DensityOperator rho = steady_state(sys.liouvillian, {.verify_spectrum = false});
  const Matrix n1 = (sys.sensors[0].adjoint() * sys.sensors[0]).eval();
  const Matrix n2 = (sys.sensors[1].adjoint() * sys.sensors[1]).eval();

  const double eps2 = eps * eps;
  FilteredMoments out;
  out.tau_ns = taus;
  out.joint.assign(taus.size(), 0.0);
  out.epsilon_used = eps;
  out.rate1 = (n1 * rho.m).trace().real() / eps2;
  out.rate2 = (n2 * rho.m).trace().real() / eps2;

  bool needs_propagation = false;
  for (double t : taus) {
    if (t != 0.0) {
      needs_propagation = true;
      break;
    }
  }

  const double eps4 = eps2 * eps2;
  const double joint_zero = (n1 * n2 * rho.m).trace().real() / eps4;

  if (!needs_propagation) {
    for (auto& v : out.joint) v = joint_zero;
    return out;
  }

  // Positive delays: detector 1 first. Negative delays exchange the roles.
  const Propagator prop(sys.liouvillian);
  std::vector<double> pos, neg;
  for (double t : taus) {
    if (t > 0.0) pos.push_back(t);
    else if (t < 0.0) neg.push_back(-t);
  }
  std::sort(neg.begin(), neg.end());

  std::vector<Complex> pos_vals, neg_vals;
  if (!pos.empty()) {
    const Vector x0 = vec((sys.sensors[0] * rho.m * sys.sensors[0].adjoint()).eval());
    pos_vals = prop.sweep(n2, x0, pos);
  }
  if (!neg.empty()) {
    const Vector x0 = vec((sys.sensors[1] * rho.m * sys.sensors[1].adjoint()).eval());
    neg_vals = prop.sweep(n1, x0, neg);
  }

  size_t pos_i = 0;
  for (size_t i = 0; i < taus.size(); ++i) {
    if (taus[i] == 0.0) {
      out.joint[i] = joint_zero;
    } else if (taus[i] > 0.0) {
      out.joint[i] = pos_vals[pos_i++].real() / eps4;
    }
  }
  // Negative delays were swept in ascending |tau|; map them back.
  std::vector<size_t> neg_slots;
  for (size_t i = 0; i < taus.size(); ++i) {
    if (taus[i] < 0.0) neg_slots.push_back(i);
  }
  std::sort(neg_slots.begin(), neg_slots.end(),
            [&](size_t a, size_t b) { return -taus[a] < -taus[b]; });
  for (size_t k = 0; k < neg_slots.size(); ++k) {
    out.joint[neg_slots[k]] = neg_vals[k].real() / (eps4);
  }
  return out;
}

std::vector<double> normalized_key(const FilteredMoments& m) {
  std::vector<double> key(m.joint.size());
  const double denom = m.rate1 * m.rate2;
  for (size_t i = 0; i < key.size(); ++i) key[i] = m.joint[i] / denom;
  return key;
}

}  // namespace

FilteredMoments filtered_g2_moments(const EmitterParams& params, const FilterSpec& f1,
                                    const FilterSpec& f2, const std::vector<double>& tau_grid_ns,
                                    const SensorConfig& cfg) {
  cfg.validate();
  if (tau_grid_ns.empty()) throw InvalidInput("filtered_g2: empty delay grid");
  require_ascending(tau_grid_ns, "filtered_g2");
  warn_if_undersampled(params, f1, f2, tau_grid_ns);

  std::vector<double> prev_key;
  std::vector<double> history;
  for (size_t k = 0; k < cfg.epsilon_sequence.size(); ++k) {
    FilteredMoments cur = moments_at_epsilon(params, f1, f2, tau_grid_ns,
                                             cfg.epsilon_sequence[k]);
    std::vector<double> cur_key = normalized_key(cur);
    if (k > 0) {
      const double diff = scaled_diff(prev_key, cur_key);
      history.push_back(diff);
      if (diff < cfg.tolerance) {
        cur.residual = diff;
        return cur;
      }
    }
    prev_key = std::move(cur_key);
  }
  std::ostringstream msg;
  msg << "filtered_g2: coupling limit did not settle below " << cfg.tolerance
      << " (residuals:";
  for (double h : history) msg << ' ' << h;
  msg << ")";
  throw ConvergenceError(msg.str(), history);
}

CorrelationTrace filtered_g2(const EmitterParams& params, const FilterSpec& f1,
                             const FilterSpec& f2, const std::vector<double>& tau_grid_ns,
                             const SensorConfig& cfg) {
  const FilteredMoments m = filtered_g2_moments(params, f1, f2, tau_grid_ns, cfg);
  CorrelationTrace trace;
  trace.tau_ns = m.tau_ns;
  trace.values.resize(m.joint.size());
  const double denom = m.rate1 * m.rate2;
  for (size_t i = 0; i < m.joint.size(); ++i) {
    trace.values[i] = std::max(0.0, m.joint[i] / denom);
  }
  trace.meta.emitter = params;
  trace.meta.filter1 = f1;
  trace.meta.filter2 = f2;
  trace.meta.epsilon_used = m.epsilon_used;
  trace.meta.convergence_residual = m.residual;
  trace.meta.kind = "cross";
  trace.validate();
  return trace;
}

double filtered_spectrum_point(const EmitterParams& params, const FilterSpec& filter,
                               const SensorConfig& cfg) {
  cfg.validate();
  double prev = 0.0;
  std::vector<double> history;
  for (size_t k = 0; k < cfg.epsilon_sequence.size(); ++k) {
    const double eps = cfg.epsilon_sequence[k];
    const CompositeSystem sys = build_composite(params, {filter}, eps);
    const DensityOperator rho = steady_state(sys.liouvillian, {.verify_spectrum = false});
    const Matrix n_s = (sys.sensors[0].adjoint() * sys.sensors[0]).eval();
    const double pop = (n_s * rho.m).trace().real() / (eps * eps);
    if (k > 0) {
      const double diff = std::abs(pop - prev) / std::max(std::abs(pop), 1e-300);
      history.push_back(diff);
      if (diff < cfg.tolerance) return pop;
    }
    prev = pop;
  }
  throw ConvergenceError("filtered_spectrum: coupling limit did not settle", history);
}

std::vector<double> filtered_spectrum(const EmitterParams& params, double bandwidth_ghz,
                                      const std::vector<double>& nu_grid_ghz,
                                      const SensorConfig& cfg) {
  if (nu_grid_ghz.empty()) throw InvalidInput("filtered_spectrum: empty frequency grid");
  std::vector<double> intensities(nu_grid_ghz.size());
  for (size_t i = 0; i < nu_grid_ghz.size(); ++i) {
    intensities[i] =
        filtered_spectrum_point(params, FilterSpec{nu_grid_ghz[i], bandwidth_ghz}, cfg);
  }
  const double peak = *std::max_element(intensities.begin(), intensities.end());
  if (!(peak > 0.0)) throw ConvergenceError("filtered_spectrum: vanishing intensities");
  for (auto& v : intensities) v /= peak;
  return intensities;
}

namespace {

struct RecombinedMoments {
  std::vector<double> joint;
  double rate = 0.0;
};

// Normally ordered autocorrelation of the recombined mode
// b = (s1 + e^{i phase} s2)/sqrt(2). Stationarity makes the histogram an even
// function of the delay, so only |tau| is propagated.
RecombinedMoments recombined_at_epsilon(const EmitterParams& params, const FilterSpec& f_red,
                                        const FilterSpec& f_blue,
                                        const std::vector<double>& taus, double eps,
                                        double phase) {
  const CompositeSystem sys = build_composite(params, {f_red, f_blue}, eps);
  const DensityOperator rho = steady_state(sys.liouvillian, {.verify_spectrum = false});
  const Complex ph = std::exp(kI * phase);
  const Matrix b = ((sys.sensors[0] + ph * sys.sensors[1]) / std::sqrt(2.0)).eval();
  const Matrix n_b = (b.adjoint() * b).eval();

  RecombinedMoments out;
  const double eps2 = eps * eps;
  const double eps4 = eps2 * eps2;
  out.rate = (n_b * rho.m).trace().real() / eps2;
  out.joint.assign(taus.size(), 0.0);

  std::vector<double> abs_tau(taus.size());
  std::vector<size_t> order(taus.size());
  for (size_t i = 0; i < taus.size(); ++i) {
    abs_tau[i] = std::abs(taus[i]);
    order[i] = i;
  }
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b2) { return abs_tau[a] < abs_tau[b2]; });
  std::vector<double> sorted(taus.size());
  for (size_t k = 0; k < order.size(); ++k) sorted[k] = abs_tau[order[k]];

  const Propagator prop(sys.liouvillian);
  const Vector x0 = vec((b * rho.m * b.adjoint()).eval());
  const auto vals = prop.sweep(n_b, x0, sorted);
  for (size_t k = 0; k < order.size(); ++k) out.joint[order[k]] = vals[k].real() / eps4;
  return out;
}

}  // namespace

CorrelationTrace recombined_sideband_g2(const EmitterParams& params, const FilterSpec& f_red,
                                        const FilterSpec& f_blue,
                                        const std::vector<double>& tau_grid_ns,
                                        const SensorConfig& cfg, double phase_rad) {
  cfg.validate();
  if (tau_grid_ns.empty()) throw InvalidInput("recombined_sideband_g2: empty delay grid");
  require_ascending(tau_grid_ns, "recombined_sideband_g2");
  warn_if_undersampled(params, f_red, f_blue, tau_grid_ns);

  std::vector<double> prev_key;
  std::vector<double> history;
  for (size_t k = 0; k < cfg.epsilon_sequence.size(); ++k) {
    RecombinedMoments cur = recombined_at_epsilon(params, f_red, f_blue, tau_grid_ns,
                                                  cfg.epsilon_sequence[k], phase_rad);
    const double denom = cur.rate * cur.rate;
    std::vector<double> key(cur.joint.size());
    for (size_t i = 0; i < key.size(); ++i) key[i] = cur.joint[i] / denom;
    if (k > 0) {
      const double diff = scaled_diff(prev_key, key);
      history.push_back(diff);
      if (diff < cfg.tolerance) {
        CorrelationTrace trace;
        trace.tau_ns = tau_grid_ns;
        trace.values.resize(key.size());
        for (size_t i = 0; i < key.size(); ++i) trace.values[i] = std::max(0.0, key[i]);
        trace.meta.emitter = params;
        trace.meta.filter1 = f_red;
        trace.meta.filter2 = f_blue;
        trace.meta.epsilon_used = cfg.epsilon_sequence[k];
        trace.meta.convergence_residual = diff;
        trace.meta.kind = "recombined";
        trace.validate();
        return trace;
      }
    }
    prev_key = std::move(key);
  }
  throw ConvergenceError("recombined_sideband_g2: coupling limit did not settle", history);
}

}  // namespace tps
