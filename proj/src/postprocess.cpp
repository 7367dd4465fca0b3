#include "tps/postprocess.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "tps/errors.hpp"

namespace tps {

std::vector<double> gaussian_convolve(const std::vector<double>& values, double step,
                                      double fwhm) {
  if (!(step > 0.0) || !(fwhm > 0.0)) {
    throw InvalidInput("gaussian_convolve: step and fwhm must be positive");
  }
  const double sigma = fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  const int half = std::max(1, int(std::ceil(4.0 * sigma / step)));
  std::vector<double> kernel(2 * half + 1);
  double norm = 0.0;
  for (int k = -half; k <= half; ++k) {
    const double x = k * step;
    kernel[k + half] = std::exp(-0.5 * x * x / (sigma * sigma));
    norm += kernel[k + half];
  }
  for (auto& w : kernel) w /= norm;

  const int n = int(values.size());
  std::vector<double> out(values.size(), 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int k = -half; k <= half; ++k) {
      const int j = std::clamp(i + k, 0, n - 1);
      acc += kernel[k + half] * values[j];
    }
    out[i] = acc;
  }
  return out;
}

CorrelationTrace convolve_irf(const CorrelationTrace& trace, const IrfSpec& irf) {
  irf.validate();
  if (trace.tau_ns.size() < 3) throw InvalidInput("convolve_irf: trace too short");
  const double step = trace.tau_ns[1] - trace.tau_ns[0];
  for (size_t i = 1; i < trace.tau_ns.size(); ++i) {
    const double d = trace.tau_ns[i] - trace.tau_ns[i - 1];
    if (std::abs(d - step) > 1e-9 * std::max(1.0, std::abs(step))) {
      throw InvalidInput("convolve_irf: delay grid must be uniform");
    }
  }
  const double span = trace.tau_ns.back() - trace.tau_ns.front();
  if (!(span > 5.0 * irf.fwhm_ns())) {
    throw InvalidInput("convolve_irf: grid narrower than five IRF widths");
  }
  CorrelationTrace out = trace;
  out.values = gaussian_convolve(trace.values, step, irf.fwhm_ns());
  out.meta.irf_fwhm_ps = irf.fwhm_ps;
  return out;
}

GaussHermiteRule gauss_hermite(int n) {
  if (n < 1) throw InvalidInput("gauss_hermite: need at least one node");
  // Golub-Welsch on the Hermite Jacobi matrix, off-diagonal sqrt(k/2).
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = std::sqrt(0.5 * k);
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  GaussHermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double sqrt_pi = std::sqrt(M_PI);
  for (int k = 0; k < n; ++k) {
    rule.nodes[k] = es.eigenvalues()(k);
    const double v0 = es.eigenvectors()(0, k);
    rule.weights[k] = sqrt_pi * v0 * v0;
  }
  return rule;
}

DiffusionNodes diffusion_nodes(const DiffusionSpec& spec) {
  spec.validate();
  DiffusionNodes nodes;
  if (spec.width_ghz == 0.0) {
    nodes.offsets_ghz = {0.0};
    nodes.weights = {1.0};
    return nodes;
  }
  const double sigma = spec.width_ghz / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  const GaussHermiteRule rule = gauss_hermite(spec.n_samples);
  nodes.offsets_ghz.resize(rule.nodes.size());
  nodes.weights.resize(rule.nodes.size());
  double norm = 0.0;
  for (size_t k = 0; k < rule.nodes.size(); ++k) {
    nodes.offsets_ghz[k] = std::sqrt(2.0) * sigma * rule.nodes[k];
    nodes.weights[k] = rule.weights[k];
    norm += rule.weights[k];
  }
  for (auto& w : nodes.weights) w /= norm;
  return nodes;
}

void check_diffusion_resolution(const DiffusionSpec& spec, double min_bandwidth_ghz) {
  if (spec.width_ghz == 0.0) return;
  if (spec.width_ghz / double(spec.n_samples) >= min_bandwidth_ghz) {
    throw InvalidInput(
        "diffusion: n_samples too small to resolve the narrowest filter "
        "(width/n_samples >= Gamma_min)");
  }
}

FilteredMoments diffusion_average_moments(
    const std::function<FilteredMoments(double detuning_ghz)>& job, const DiffusionSpec& spec,
    double nominal_detuning_ghz, double min_bandwidth_ghz) {
  check_diffusion_resolution(spec, min_bandwidth_ghz);
  const DiffusionNodes nodes = diffusion_nodes(spec);

  FilteredMoments acc;
  bool first = true;
  // Fixed summation order keeps the reduction deterministic.
  for (size_t k = 0; k < nodes.offsets_ghz.size(); ++k) {
    // The emitter frequency jitters; shifting it by x moves the laser
    // detuning to delta - x.
    const FilteredMoments m = job(nominal_detuning_ghz - nodes.offsets_ghz[k]);
    const double w = nodes.weights[k];
    if (first) {
      acc = m;
      acc.rate1 = 0.0;
      acc.rate2 = 0.0;
      acc.joint.assign(m.joint.size(), 0.0);
      acc.residual = 0.0;
      first = false;
    }
    if (m.joint.size() != acc.joint.size()) {
      throw InvalidInput("diffusion_average: inconsistent grid across ensemble");
    }
    for (size_t i = 0; i < acc.joint.size(); ++i) acc.joint[i] += w * m.joint[i];
    acc.rate1 += w * m.rate1;
    acc.rate2 += w * m.rate2;
    acc.residual = std::max(acc.residual, m.residual);
    acc.epsilon_used = std::max(acc.epsilon_used, m.epsilon_used);
  }
  return acc;
}

double diffusion_average_intensity(const std::function<double(double detuning_ghz)>& job,
                                   const DiffusionSpec& spec, double nominal_detuning_ghz,
                                   double min_bandwidth_ghz) {
  check_diffusion_resolution(spec, min_bandwidth_ghz);
  const DiffusionNodes nodes = diffusion_nodes(spec);
  double acc = 0.0;
  for (size_t k = 0; k < nodes.offsets_ghz.size(); ++k) {
    acc += nodes.weights[k] * job(nominal_detuning_ghz - nodes.offsets_ghz[k]);
  }
  return acc;
}

}  // namespace tps
