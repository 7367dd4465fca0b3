#include "tps/trace.hpp"

#include <cmath>
#include <string>

#include "tps/errors.hpp"

namespace tps {

void CorrelationTrace::validate() const {
  if (tau_ns.size() != values.size()) {
    throw InvalidInput("correlation trace: grid and values length mismatch");
  }
  for (size_t i = 0; i < tau_ns.size(); ++i) {
    if (i > 0 && !(tau_ns[i] > tau_ns[i - 1])) {
      throw InvalidInput("correlation trace: delay grid must be strictly ascending");
    }
    if (!(values[i] >= 0.0) || !std::isfinite(values[i])) {
      throw InvalidInput("correlation trace: negative or non-finite value at tau=" +
                         std::to_string(tau_ns[i]));
    }
  }
  if (tau_ns.empty()) return;
  const double settle = 20.0 / meta.emitter.kappa_angular();
  if (tau_ns.back() > settle) {
    const size_t tail_start = tau_ns.size() - std::max<size_t>(1, tau_ns.size() / 10);
    double mean = 0.0;
    for (size_t i = tail_start; i < values.size(); ++i) mean += values[i];
    mean /= double(values.size() - tail_start);
    if (std::abs(mean - 1.0) > 0.05) {
      throw ConvergenceError(
          "correlation trace: long-delay tail mean " + std::to_string(mean) +
          " deviates from one by more than 5%");
    }
  }
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw InvalidInput("linspace: need at least one point");
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double step = (hi - lo) / double(n - 1);
  for (int i = 0; i < n; ++i) out[i] = lo + step * i;
  return out;
}

}  // namespace tps
