#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tps/emitter.hpp"
#include "tps/errors.hpp"
#include "tps/propagator.hpp"
#include "tps/steady_state.hpp"

using namespace tps;

namespace {

// Independent oracle: optical Bloch steady-state excited population.
double bloch_population(const EmitterParams& p) {
  const double omega = p.rabi_angular();
  const double delta = p.detuning_angular();
  const double kappa = p.kappa_angular();
  return (omega * omega / 4.0) /
         (delta * delta + kappa * kappa / 4.0 + omega * omega / 2.0);
}

Matrix random_density(int dim, std::mt19937& rng) {
  std::normal_distribution<double> dist;
  Matrix a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(dist(rng), dist(rng));
  }
  Matrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  return rho;
}

}  // namespace

TEST_CASE("no drive decays to the ground state") {
  const EmitterParams params{0.0, 0.0, 0.3};
  const DensityOperator rho = steady_state(emitter_liouvillian(params));
  rho.validate();
  CHECK(std::abs(rho.m(0, 0).real() - 1.0) < 1e-12);
  CHECK(std::abs(rho.m(1, 1)) < 1e-12);
}

TEST_CASE("steady state matches the Bloch closed form at the reference points") {
  const DensityOperator a = steady_state(emitter_liouvillian({1.3, 0.0, 0.2}));
  CHECK(a.m(1, 1).real() == doctest::Approx(0.494).epsilon(1e-3));
  CHECK(a.m(1, 1).real() == doctest::Approx(bloch_population({1.3, 0.0, 0.2})).epsilon(1e-12));

  const DensityOperator b = steady_state(emitter_liouvillian({1.6, 1.0, 0.2}));
  CHECK(b.m(1, 1).real() == doctest::Approx(0.279).epsilon(1e-3));
  CHECK(b.m(1, 1).real() == doctest::Approx(bloch_population({1.6, 1.0, 0.2})).epsilon(1e-12));
}

TEST_CASE("steady state matches the Bloch closed form on a 5x5x3 grid to 1e-10") {
  const double rabis[] = {0.5, 1.0, 1.6, 2.2, 2.8};
  const double detunings[] = {-1.0, -0.3, 0.0, 0.5, 1.2};
  const double kappas[] = {0.1, 0.2, 0.4};
  for (double rabi : rabis) {
    for (double detuning : detunings) {
      for (double kappa : kappas) {
        const EmitterParams p{rabi, detuning, kappa};
        const DensityOperator rho = steady_state(emitter_liouvillian(p),
                                                 {.verify_spectrum = false});
        CHECK(std::abs(rho.m(1, 1).real() - bloch_population(p)) < 1e-10);
      }
    }
  }
}

TEST_CASE("a generator without a unique null state is rejected") {
  // Pure Hamiltonian evolution: every population mixture is stationary.
  Superoperator l = build_lindblad(Matrix::Zero(2, 2), {});
  CHECK_THROWS_WITH_AS(static_cast<void>(steady_state(l)),
                       doctest::Contains("no unique steady state"), InvalidInput);
}

TEST_CASE("propagate is the identity at t = 0 and rejects negative times") {
  std::mt19937 rng(3);
  const Superoperator l = emitter_liouvillian({1.3, 0.0, 0.2});
  const DensityOperator rho{random_density(2, rng)};
  const DensityOperator out = propagate(l, rho, 0.0);
  CHECK(max_abs(out.m - rho.m) < 1e-12);
  CHECK_THROWS_AS(static_cast<void>(propagate(l, rho, -0.1)), InvalidInput);
}

TEST_CASE("propagation converges to the steady state and preserves the trace") {
  std::mt19937 rng(5);
  const EmitterParams params{1.3, 0.4, 0.2};
  const Superoperator l = emitter_liouvillian(params);
  const DensityOperator rho0{random_density(2, rng)};
  const DensityOperator rho_ss = steady_state(l);

  const double horizon = 50.0 / params.kappa_angular();
  const DensityOperator late = propagate(l, rho0, horizon);
  CHECK(max_abs(late.m - rho_ss.m) < 1e-6);

  for (double t : {0.1, 1.0, 10.0}) {
    const DensityOperator rho_t = propagate(l, rho0, t);
    CHECK(std::abs(rho_t.m.trace() - Complex(1.0)) < 1e-12);
  }
}

TEST_CASE("propagation is a semigroup on random states") {
  std::mt19937 rng(9);
  const Superoperator l = emitter_liouvillian({2.2, -0.7, 0.3});
  for (int trial = 0; trial < 10; ++trial) {
    const DensityOperator rho{random_density(2, rng)};
    const double t1 = 0.3 + 0.2 * trial;
    const double t2 = 0.9;
    const DensityOperator direct = propagate(l, rho, t1 + t2);
    const DensityOperator chained = propagate(l, propagate(l, rho, t1), t2);
    CHECK(max_abs(direct.m - chained.m) < 1e-8);
  }
}

TEST_CASE("regression correlator reference values") {
  const EmitterParams params{1.3, 0.0, 0.2};
  const Superoperator l = emitter_liouvillian(params);
  const DensityOperator rho = steady_state(l);
  const Matrix id = identity_op(2);
  const Matrix sigma = lowering_op();
  const std::vector<double> taus{0.0, 0.5, 1.0, 2.0};

  // Identity sandwich stays one.
  for (const Complex v : regression_correlator(l, rho, id, id, id, taus)) {
    CHECK(std::abs(v - Complex(1.0)) < 1e-10);
  }

  // Two-level antibunching: no excited population right after an emission.
  const auto antibunched =
      regression_correlator(l, rho, sigma, sigma.adjoint(), number_op(), {0.0});
  CHECK(std::abs(antibunched[0]) < 1e-12);

  // Stationarity: the population correlator is flat without a sandwich.
  const double pop = rho.m(1, 1).real();
  for (const Complex v : regression_correlator(l, rho, id, id, number_op(), taus)) {
    CHECK(std::abs(v - pop) < 1e-10);
  }

  // tau = 0 equals the direct trace.
  const auto at_zero =
      regression_correlator(l, rho, sigma, id, sigma.adjoint() * sigma, {0.0});
  const Complex direct = (sigma.adjoint() * sigma * sigma * rho.m).trace();
  CHECK(std::abs(at_zero[0] - direct) < 1e-12);
}

TEST_CASE("scaling-and-squaring fallback matches the eigenbasis route") {
  const Superoperator l = emitter_liouvillian({1.3, 0.4, 0.2});
  const DensityOperator rho = steady_state(l);
  const Matrix sigma = lowering_op();
  const Vector x0 = vec((sigma * rho.m * sigma.adjoint()).eval());
  const std::vector<double> taus = linspace(0.0, 5.0, 21);

  const Propagator eigen_route(l);
  const Propagator stepping(l, /*condition_limit=*/0.0);
  CHECK(eigen_route.using_eigenbasis());
  CHECK(!stepping.using_eigenbasis());

  const auto a = eigen_route.sweep(number_op(), x0, taus);
  const auto b = stepping.sweep(number_op(), x0, taus);
  for (size_t i = 0; i < taus.size(); ++i) {
    CHECK(std::abs(a[i] - b[i]) < 1e-9);
  }
  const Vector ya = eigen_route.apply(0.7, x0);
  const Vector yb = stepping.apply(0.7, x0);
  CHECK((ya - yb).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("regression correlator rejects dimension mismatches") {
  const Superoperator l = emitter_liouvillian({1.3, 0.0, 0.2});
  const DensityOperator rho = steady_state(l);
  CHECK_THROWS_AS(static_cast<void>(regression_correlator(l, rho, identity_op(3), identity_op(2),
                                                          identity_op(2), {0.0})),
                  InvalidInput);
}
