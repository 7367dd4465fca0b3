#include "tps/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

#include "tps/errors.hpp"
#include "tps/propagator.hpp"
#include "tps/steady_state.hpp"

namespace tps {

void OracleConfig::validate(const EmitterParams& params, const FilterSpec& f1,
                            const FilterSpec& f2) const {
  params.validate();
  f1.validate();
  f2.validate();
  if (!(dt_ns > 0.0)) throw InvalidInput("oracle: dt must be positive");
  const double omega_prime = ghz_to_angular(dressed_states(params).omega_prime_ghz);
  const double fastest = std::max({omega_prime, f1.bandwidth_angular(), f2.bandwidth_angular(),
                                   params.kappa_angular()});
  if (!(dt_ns < 1.0 / (10.0 * fastest))) {
    throw InvalidInput("oracle: dt too coarse for the fastest dynamics");
  }
  const double slowest = std::min({f1.bandwidth_angular(), f2.bandwidth_angular(),
                                   params.kappa_angular()});
  if (!(window_ns() > 10.0 / slowest)) {
    throw InvalidInput("oracle: integration window shorter than the filter memory");
  }
}

OracleConfig OracleConfig::defaults_for(const EmitterParams& params, const FilterSpec& f1,
                                        const FilterSpec& f2) {
  const double omega_prime = ghz_to_angular(dressed_states(params).omega_prime_ghz);
  const double fastest = std::max({omega_prime, f1.bandwidth_angular(), f2.bandwidth_angular(),
                                   params.kappa_angular()});
  const double slowest = std::min({f1.bandwidth_angular(), f2.bandwidth_angular(),
                                   params.kappa_angular()});
  OracleConfig cfg;
  cfg.steady_start_ns = 0.0;
  cfg.t_max_ns = 20.0 / slowest;
  cfg.dt_ns = 1.0 / (20.0 * fastest);
  return cfg;
}

namespace {

// One insertion of the chronological chain: a fixed superoperator weighted by
// a per-grid-point filter kernel.
struct Insertion {
  Matrix superop;                            // acts on vectorized rho
  std::function<Complex(double u)> weight;   // u = T - t, kernel times dt
};

// Sum over all placements of the insertions on the time grid, factorized as a
// forward walk that keeps one accumulator per already-fired subset. Fixed
// ascending insertion order at a shared grid point keeps coincident-time
// tuples counted exactly once. The walk starts from the stationary state, so
// propagating the empty channel is a no-op by construction.
Complex chain_sum(const Matrix& step, const Vector& rho_ss_vec,
                  const std::vector<Insertion>& insertions, int n_steps, double dt) {
  const int n_ins = int(insertions.size());
  const int n_subsets = 1 << n_ins;
  const int full = n_subsets - 1;
  std::vector<Vector> channels(n_subsets, Vector::Zero(rho_ss_vec.size()));
  channels[0] = rho_ss_vec;

  for (int j = 0; j < n_steps; ++j) {
    const double u = double(n_steps - 1 - j) * dt;
    if (j > 0) {
      for (int s = 1; s < n_subsets; ++s) {
        if (!channels[s].isZero(0.0)) channels[s] = (step * channels[s]).eval();
      }
    }
    for (int k = 0; k < n_ins; ++k) {
      const Complex w = insertions[k].weight(u);
      for (int s = n_subsets - 1; s >= 0; --s) {
        if (s & (1 << k)) continue;
        if (channels[s].isZero(0.0)) continue;
        channels[s | (1 << k)] += w * (insertions[k].superop * channels[s]);
      }
    }
  }

  Complex trace = 0.0;
  const Matrix rho_full = unvec(channels[full]);
  for (Eigen::Index i = 0; i < rho_full.rows(); ++i) trace += rho_full(i, i);
  return trace;
}

}  // namespace

Complex four_time_correlator(const EmitterParams& params, double t1, double t2, double t3,
                             double t4) {
  for (double t : {t1, t2, t3, t4}) {
    if (t < 0.0) throw InvalidInput("four_time_correlator: times must be nonnegative");
  }
  const Superoperator l = emitter_liouvillian(params);
  const DensityOperator rho = steady_state(l, {.verify_spectrum = false});
  const Propagator prop(l);

  const Matrix sigma = lowering_op();
  const Matrix right_dag = spost(sigma.adjoint());
  const Matrix left = spre(sigma);

  // Chronological chain; creation insertions (t1, t2) multiply from the
  // right, annihilation insertions (t3, t4) from the left.
  std::array<std::pair<double, const Matrix*>, 4> events{{
      {t1, &right_dag}, {t2, &right_dag}, {t3, &left}, {t4, &left}}};
  std::stable_sort(events.begin(), events.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  Vector state = vec(rho.m);
  double t_prev = events[0].first;
  for (const auto& [t, op] : events) {
    if (t > t_prev) state = prop.apply(t - t_prev, state);
    state = (*op) * state;
    t_prev = t;
  }
  Complex trace = 0.0;
  const Matrix final_rho = unvec(state);
  for (Eigen::Index i = 0; i < final_rho.rows(); ++i) trace += final_rho(i, i);
  return trace;
}

double direct_g2_zero(const EmitterParams& params, const FilterSpec& f1, const FilterSpec& f2,
                      const OracleConfig& cfg) {
  cfg.validate(params, f1, f2);
  const Superoperator l = emitter_liouvillian(params);
  const DensityOperator rho = steady_state(l, {.verify_spectrum = false});
  const Vector rho_vec = vec(rho.m);
  const double dt = cfg.dt_ns;
  const int n_steps = std::max(2, int(std::llround(cfg.window_ns() / dt)));
  const Matrix step = (l.m * dt).exp();

  const Matrix sigma = lowering_op();
  const Matrix right_dag = spost(sigma.adjoint());
  const Matrix left = spre(sigma);

  const auto lorentz_dag = [dt](const FilterSpec& f) {
    return [g = f.bandwidth_angular(), d = f.center_angular(), dt](double u) {
      return dt * std::exp(Complex(-0.5 * g * u, d * u));
    };
  };
  const auto lorentz = [dt](const FilterSpec& f) {
    return [g = f.bandwidth_angular(), d = f.center_angular(), dt](double u) {
      return dt * std::exp(Complex(-0.5 * g * u, -d * u));
    };
  };

  // Numerator: creation pair (t'_1 filter 1, t'_2 filter 2) and annihilation
  // pair (t'_3 filter 2, t'_4 filter 1), all windows ending at the shared
  // coincidence time.
  std::vector<Insertion> quad;
  quad.push_back({right_dag, lorentz_dag(f1)});
  quad.push_back({right_dag, lorentz_dag(f2)});
  quad.push_back({left, lorentz(f2)});
  quad.push_back({left, lorentz(f1)});
  const double numerator = chain_sum(step, rho_vec, quad, n_steps, dt).real();

  const auto spectrum = [&](const FilterSpec& f) {
    std::vector<Insertion> pair;
    pair.push_back({right_dag, lorentz_dag(f)});
    pair.push_back({left, lorentz(f)});
    return chain_sum(step, rho_vec, pair, n_steps, dt).real();
  };
  const double s1 = spectrum(f1);
  const double s2 = spectrum(f2);
  if (!(s1 > 0.0) || !(s2 > 0.0)) {
    throw ConvergenceError("direct_g2_zero: vanishing one-photon normalization");
  }
  return numerator / (s1 * s2);
}

}  // namespace tps
