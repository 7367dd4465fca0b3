#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "tps/emitter.hpp"
#include "tps/errors.hpp"
#include "tps/sensors.hpp"
#include "tps/steady_state.hpp"

using namespace tps;

namespace {

const EmitterParams kRef{2.2, 0.0, 0.2};  // strong resonant drive reference
constexpr double kGamma = 0.5;

double g2_zero(const EmitterParams& params, double nu1, double nu2,
               const SensorConfig& cfg = SensorConfig::defaults_for(kGamma)) {
  const auto trace =
      filtered_g2(params, {nu1, kGamma}, {nu2, kGamma}, {0.0}, cfg);
  return trace.values[0];
}

}  // namespace

TEST_CASE("decoupled sensors stay empty") {
  const CompositeSystem sys = build_composite(kRef, {{1.0, kGamma}, {-1.0, kGamma}}, 0.0);
  const DensityOperator rho = steady_state(sys.liouvillian, {.verify_spectrum = false});
  for (const auto& s : sys.sensors) {
    const double pop = ((s.adjoint() * s).eval() * rho.m).trace().real();
    CHECK(std::abs(pop) < 1e-14);
  }
}

TEST_CASE("composite generator preserves the trace on random states") {
  std::mt19937 rng(23);
  std::normal_distribution<double> dist;
  const CompositeSystem sys =
      build_composite(kRef, {{2.2, kGamma}, {-2.2, kGamma}}, 1e-3);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix a(8, 8);
    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j < 8; ++j) a(i, j) = Complex(dist(rng), dist(rng));
    }
    Matrix rho = a * a.adjoint();
    rho /= rho.trace().real();
    CHECK(std::abs(sys.liouvillian.apply(rho).trace()) < 1e-10);
  }
}

TEST_CASE("composite generator keeps a unique steady state") {
  const CompositeSystem sys =
      build_composite(kRef, {{2.2, kGamma}, {-2.2, kGamma}}, 1e-3);
  const DensityOperator rho = steady_state(sys.liouvillian, {.verify_spectrum = true});
  rho.validate();
}

TEST_CASE("sensor population scales as the coupling squared") {
  const FilterSpec f{2.2, kGamma};
  const double eps = f.bandwidth_angular() / 1000.0;
  const auto population = [&](double coupling) {
    const CompositeSystem sys = build_composite(kRef, {f}, coupling);
    const DensityOperator rho = steady_state(sys.liouvillian, {.verify_spectrum = false});
    return ((sys.sensors[0].adjoint() * sys.sensors[0]).eval() * rho.m).trace().real();
  };
  const double ratio = population(2.0 * eps) / population(eps);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.01));
}

TEST_CASE("coupling protocol validation") {
  SensorConfig cfg;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);  // empty sequence
  cfg.epsilon_sequence = {1e-3, 2e-3};
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);  // not strictly decreasing
  cfg.epsilon_sequence = {2e-3, -1e-3};
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);  // nonpositive coupling
  cfg.epsilon_sequence = {2e-3, 1e-3};
  cfg.tolerance = 0.5;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);  // tolerance above 0.1
  cfg.tolerance = 1e-3;
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("back-action couplings are rejected") {
  const FilterSpec f{0.0, kGamma};
  CHECK_THROWS_WITH_AS(static_cast<void>(build_composite(kRef, {f}, f.bandwidth_angular() / 5.0)),
                       doctest::Contains("back-action"), InvalidInput);
  CHECK_THROWS_AS(static_cast<void>(build_composite(kRef, {}, 1e-3)), InvalidInput);
}

TEST_CASE("narrow-filter spectrum resolves the triplet") {
  const EmitterParams params{1.3, 0.0, 0.2};
  const SensorConfig cfg = SensorConfig::defaults_for(0.02);
  const std::vector<double> grid = linspace(-2.6, 2.6, 53);
  const auto intensity = filtered_spectrum(params, 0.02, grid, cfg);

  // Local maxima of the sampled spectrum against the triplet positions.
  std::vector<double> maxima;
  for (size_t i = 1; i + 1 < grid.size(); ++i) {
    if (intensity[i] > intensity[i - 1] && intensity[i] > intensity[i + 1]) {
      maxima.push_back(grid[i]);
    }
  }
  REQUIRE(maxima.size() == 3);
  CHECK(std::abs(maxima[0] + 1.3) < 0.15);
  CHECK(std::abs(maxima[1]) < 0.15);
  CHECK(std::abs(maxima[2] - 1.3) < 0.15);

  // Resonant spectra are symmetric.
  for (size_t i = 0; i < grid.size(); ++i) {
    CHECK(std::abs(intensity[i] - intensity[grid.size() - 1 - i]) < 1e-6);
  }
}

TEST_CASE("a non-settling spectrum point raises a convergence error") {
  SensorConfig cfg = SensorConfig::defaults_for(kGamma);
  cfg.tolerance = 1e-9;
  CHECK_THROWS_AS(static_cast<void>(filtered_spectrum_point(kRef, {0.0, kGamma}, cfg)),
                  ConvergenceError);
}

TEST_CASE("a very wide filter passes a flat spectrum") {
  const EmitterParams params{1.3, 0.0, 0.2};
  const SensorConfig cfg = SensorConfig::defaults_for(50.0);
  const std::vector<double> grid = linspace(-3 * 1.3, 3 * 1.3, 9);
  const auto intensity = filtered_spectrum(params, 50.0, grid, cfg);
  const double lo = *std::min_element(intensity.begin(), intensity.end());
  CHECK(1.0 / lo < 1.1);
}

TEST_CASE("coincidence values at the catalog anchors") {
  const double like = g2_zero(kRef, 2.2, 2.2);
  const double opposite = g2_zero(kRef, 2.2, -2.2);
  const double central = g2_zero(kRef, 0.0, 0.0);
  const double leapfrog = g2_zero(kRef, 1.1, 1.1);
  CHECK(like < 1.0);      // like sidebands antibunch
  CHECK(opposite > 1.0);  // opposite sidebands bunch
  CHECK(leapfrog > 2.0);  // virtual cascade bunching
  // The central point carries residual indistinguishability bunching at this
  // bandwidth (cross-checked against direct integration in the oracle tests)
  // but remains the closest anchor to Poissonian statistics.
  CHECK(std::abs(central - 1.0) < 0.25);
  CHECK(std::abs(central - 1.0) < std::abs(like - 1.0));
  CHECK(std::abs(central - 1.0) < std::abs(leapfrog - 1.0));
}

TEST_CASE("coincidence map symmetries") {
  // Swap symmetry is structural; resonant reflection flips both centers.
  const double pairs[][2] = {{2.2, -1.1}, {0.7, 1.8}, {-0.4, 2.9}};
  for (const auto& p : pairs) {
    const double direct = g2_zero(kRef, p[0], p[1]);
    CHECK(std::abs(direct - g2_zero(kRef, p[1], p[0])) < 1e-6);
    CHECK(std::abs(direct - g2_zero(kRef, -p[0], -p[1])) < 1e-4 * std::max(1.0, direct));
  }
}

TEST_CASE("nine-point resonant reflection sample") {
  const double centers[] = {-2.2, 0.0, 1.1};
  for (double nu1 : centers) {
    for (double nu2 : centers) {
      const double a = g2_zero(kRef, nu1, nu2);
      const double b = g2_zero(kRef, -nu1, -nu2);
      CHECK(std::abs(a - b) < 1e-4 * std::max(1.0, std::abs(a)));
    }
  }
}

TEST_CASE("wide filters recover the unfiltered correlation") {
  const double gamma = 50.0 * std::max(kRef.rabi_ghz, kRef.kappa_ghz);
  const SensorConfig cfg = SensorConfig::defaults_for(gamma);
  const std::vector<double> taus = linspace(0.0, 4.0, 41);
  const auto trace = filtered_g2(kRef, {0.0, gamma}, {0.0, gamma}, taus, cfg);
  double worst = 0.0;
  for (size_t i = 0; i < taus.size(); ++i) {
    const double expected = unfiltered_g2_closed_form(kRef, taus[i]);
    worst = std::max(worst, std::abs(trace.values[i] - expected) / std::max(1.0, expected));
  }
  CHECK(worst < 0.05);
}

TEST_CASE("halving the accepted coupling moves g2(0) less than the tolerance") {
  const double anchors[][2] = {{2.2, 2.2}, {1.1, 1.1}, {0.0, 0.0}, {2.2, -2.2}};
  const SensorConfig base = SensorConfig::defaults_for(kGamma);
  SensorConfig halved = base;
  for (auto& e : halved.epsilon_sequence) e /= 2.0;
  for (const auto& p : anchors) {
    const double a = g2_zero(kRef, p[0], p[1], base);
    const double b = g2_zero(kRef, p[0], p[1], halved);
    CHECK(std::abs(a - b) <= base.tolerance * std::max(1.0, std::abs(b)));
  }
}

TEST_CASE("long-delay traces settle to one") {
  const double horizon = 25.0 / kRef.kappa_angular();
  const std::vector<double> taus = linspace(0.0, horizon, 220);
  const auto trace =
      filtered_g2(kRef, {2.2, kGamma}, {-2.2, kGamma}, taus, SensorConfig::defaults_for(kGamma));
  double tail = 0.0;
  const size_t start = taus.size() - taus.size() / 10;
  for (size_t i = start; i < taus.size(); ++i) tail += trace.values[i];
  tail /= double(taus.size() - start);
  CHECK(std::abs(tail - 1.0) < 0.05);
}

TEST_CASE("an unreachable tolerance raises a convergence error with history") {
  SensorConfig cfg = SensorConfig::defaults_for(kGamma);
  cfg.tolerance = 1e-9;
  try {
    static_cast<void>(filtered_g2(kRef, {1.1, kGamma}, {1.1, kGamma}, {0.0}, cfg));
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.residual_history.size() >= 1);
  }
}

TEST_CASE("negative delays mirror the exchanged filter order") {
  const std::vector<double> taus = linspace(-2.0, 2.0, 81);
  const auto cfg = SensorConfig::defaults_for(kGamma);
  const auto ab = filtered_g2(kRef, {2.2, kGamma}, {-2.2, kGamma}, taus, cfg);
  const auto ba = filtered_g2(kRef, {-2.2, kGamma}, {2.2, kGamma}, taus, cfg);
  for (size_t i = 0; i < taus.size(); ++i) {
    CHECK(std::abs(ab.values[i] - ba.values[taus.size() - 1 - i]) < 1e-6);
  }
}

TEST_CASE("recombined sidebands: symmetric histogram with sideband-splitting beats") {
  const std::vector<double> taus = linspace(-4.0, 4.0, 1001);

  const EmitterParams resonant{1.6, 0.0, 0.2};
  const auto trace = recombined_sideband_g2(resonant, {-1.6, kGamma}, {1.6, kGamma}, taus,
                                            SensorConfig::defaults_for(kGamma));
  double worst = 0.0;
  for (size_t i = 0; i < taus.size(); ++i) {
    worst = std::max(worst, std::abs(trace.values[i] - trace.values[taus.size() - 1 - i]) /
                                std::max(1.0, trace.values[i]));
  }
  CHECK(worst < 0.02);

  // Two recombined colors beat at twice the Rabi splitting: coincidence
  // bunching at zero delay with interference fringes dipping below one.
  const size_t mid = taus.size() / 2;
  CHECK(trace.values[mid] > 1.0);
  double fringe_lo = 1e300, fringe_hi = -1e300;
  for (size_t i = 0; i < taus.size(); ++i) {
    if (std::abs(taus[i]) > 0.0 && std::abs(taus[i]) < 1.0) {
      fringe_lo = std::min(fringe_lo, trace.values[i]);
      fringe_hi = std::max(fringe_hi, trace.values[i]);
    }
  }
  CHECK(fringe_lo < 0.7);
  CHECK(fringe_hi > 1.0);
}

TEST_CASE("degenerate wide recombination recovers the unfiltered correlation") {
  const double gamma = 50.0 * kRef.rabi_ghz;
  const std::vector<double> taus = linspace(0.0, 3.0, 31);
  const auto trace = recombined_sideband_g2(kRef, {0.0, gamma}, {0.0, gamma}, taus,
                                            SensorConfig::defaults_for(gamma));
  for (size_t i = 0; i < taus.size(); ++i) {
    const double expected = unfiltered_g2_closed_form(kRef, taus[i]);
    CHECK(std::abs(trace.values[i] - expected) <= 0.05 * std::max(1.0, expected));
  }
}
