// Acceptance suite: one criterion per stated requirement, each printing a
// single PASS/FAIL line plus indented evidence. Run all or --criterion N.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "tps/emitter.hpp"
#include "tps/maps.hpp"
#include "tps/oracle.hpp"
#include "tps/outputs.hpp"
#include "tps/postprocess.hpp"
#include "tps/propagator.hpp"
#include "tps/sensors.hpp"
#include "tps/steady_state.hpp"

using namespace tps;

namespace {

using Clock = std::chrono::steady_clock;

struct Check {
  bool ok = true;
  std::vector<std::string> notes;

  void require(bool condition, const std::string& what) {
    char line[512];
    std::snprintf(line, sizeof(line), "    %s %s", condition ? "ok  " : "FAIL", what.c_str());
    notes.push_back(line);
    if (!condition) ok = false;
  }
  void info(const std::string& what) { notes.push_back("    note " + what); }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof(buf), pattern, args);
  va_end(args);
  return buf;
}

// ---------------------------------------------------------------- criterion 1

// Independent oracle: closed-form Bloch steady-state excited population.
double bloch_population(const EmitterParams& p) {
  const double omega = p.rabi_angular();
  const double delta = p.detuning_angular();
  const double kappa = p.kappa_angular();
  return (omega * omega / 4.0) / (delta * delta + kappa * kappa / 4.0 + omega * omega / 2.0);
}

void criterion_bloch(Check& check) {
  const auto start = Clock::now();
  const double rabis[] = {0.5, 1.0, 1.6, 2.2, 2.8};
  const double detunings[] = {-1.0, -0.3, 0.0, 0.5, 1.2};
  const double kappas[] = {0.1, 0.2, 0.4};
  double worst = 0.0;
  int points = 0;
  for (double rabi : rabis) {
    for (double detuning : detunings) {
      for (double kappa : kappas) {
        const EmitterParams p{rabi, detuning, kappa};
        const DensityOperator rho =
            steady_state(emitter_liouvillian(p), {.verify_spectrum = false});
        worst = std::max(worst, std::abs(rho.m(1, 1).real() - bloch_population(p)));
        ++points;
      }
    }
  }
  const double elapsed = seconds_since(start);
  check.require(points == 75, fmt("75 parameter points evaluated (%d)", points));
  check.require(worst < 1e-10, fmt("max |rho_ee - closed form| = %.3e < 1e-10", worst));
  check.require(elapsed < 1.0, fmt("runtime %.3f s < 1 s", elapsed));
}

// ---------------------------------------------------------------- criterion 2

void criterion_oracle(Check& check) {
  const EmitterParams params{2.2, 0.0, 0.2};
  const double gamma = 0.5;
  const SensorConfig sensor = SensorConfig::defaults_for(gamma);
  const double rabi = params.rabi_ghz;
  const std::pair<double, double> centers[] = {
      {0.0, 0.0}, {rabi, rabi}, {rabi, -rabi}, {0.5 * rabi, 0.5 * rabi}, {rabi, 0.0}};
  for (const auto& [nu1, nu2] : centers) {
    const FilterSpec f1{nu1, gamma};
    const FilterSpec f2{nu2, gamma};
    const double via_sensors =
        map_point_g2_zero(params, f1, f2, sensor, std::nullopt, std::nullopt);
    const double direct =
        direct_g2_zero(params, f1, f2, OracleConfig::defaults_for(params, f1, f2));
    const double rel = std::abs(via_sensors - direct) / std::max(std::abs(direct), 1e-12);
    check.require(rel < 0.05, fmt("(%+.2f, %+.2f) GHz: sensor %.4f vs direct %.4f, rel %.4f",
                                  nu1, nu2, via_sensors, direct, rel));
  }
}

// ---------------------------------------------------------------- criterion 3

int nearest_index(const std::vector<double>& axis, double value) {
  int best = 0;
  for (size_t i = 1; i < axis.size(); ++i) {
    if (std::abs(axis[i] - value) < std::abs(axis[best] - value)) best = int(i);
  }
  return best;
}

bool is_local_max(const SpectralMap2D& map, int i, int j) {
  const int n1 = int(map.nu1_ghz.size());
  const int n2 = int(map.nu2_ghz.size());
  const double v = map.values(i, j);
  for (int di = -1; di <= 1; ++di) {
    for (int dj = -1; dj <= 1; ++dj) {
      if (di == 0 && dj == 0) continue;
      const int ni = i + di, nj = j + dj;
      if (ni < 0 || nj < 0 || ni >= n1 || nj >= n2) continue;
      if (map.values(ni, nj) > v) return false;
    }
  }
  return true;
}

void criterion_fig1d(Check& check) {
  const auto start = Clock::now();
  const EmitterParams params{2.2, 0.0, 0.2};
  const double rabi = params.rabi_ghz;
  const double gamma = 0.5;

  MapOptions options;
  options.workers = 8;
  options.irf = IrfSpec{350.0};
  const GridSpec2D grid{101, 2.0 * rabi};
  const SpectralMap2D map = tps_map(params, gamma, grid, options);
  check.info(fmt("101x101 map with detector response, %.1f s wall", map.meta.wall_seconds));

  const double step = map.nu1_ghz[1] - map.nu1_ghz[0];
  const int plus = nearest_index(map.nu1_ghz, rabi);
  const int minus = nearest_index(map.nu1_ghz, -rabi);
  const int zero = nearest_index(map.nu1_ghz, 0.0);

  check.require(map.values(plus, plus) < 1.0 && map.values(minus, minus) < 1.0,
                fmt("(a) like sidebands antibunch: %.3f, %.3f < 1", map.values(plus, plus),
                    map.values(minus, minus)));
  check.require(map.values(plus, minus) > 1.0 && map.values(minus, plus) > 1.0,
                fmt("(b) opposite sidebands bunch: %.3f, %.3f > 1", map.values(plus, minus),
                    map.values(minus, plus)));
  check.require(std::abs(map.values(zero, zero) - 1.0) < 0.15,
                fmt("(c) central point %.3f within 15%% of 1", map.values(zero, zero)));

  // (d) ridge maxima: along every transversal slice nu1 - nu2 = const, the
  // maximum over |nu1 + nu2| <= 2 Omega must sit on one of the three
  // antidiagonals to within one grid step.
  const int n = int(map.nu1_ghz.size());
  const int max_offset = int(std::round(2.0 * rabi / step));
  int slices = 0;
  double worst_ridge = 0.0;
  for (int d = -max_offset; d <= max_offset; ++d) {
    double best_value = -1.0, best_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const int j = i - d;
      if (j < 0 || j >= n) continue;
      const double sum = map.nu1_ghz[i] + map.nu2_ghz[j];
      if (std::abs(sum) > 2.0 * rabi + 1e-9) continue;
      if (map.values(i, j) > best_value) {
        best_value = map.values(i, j);
        best_sum = sum;
      }
    }
    if (best_value < 0.0) continue;
    ++slices;
    const double miss = std::min({std::abs(best_sum), std::abs(best_sum - rabi),
                                  std::abs(best_sum + rabi)});
    worst_ridge = std::max(worst_ridge, miss);
  }
  check.require(worst_ridge <= step + 1e-9,
                fmt("(d) ridge maxima on the antidiagonals across %d slices, worst miss "
                    "%.4f GHz <= step %.4f",
                    slices, worst_ridge, step));

  // (d) leapfrog points: a bunching local maximum within +-Gamma/2.
  const double half_window = gamma / 2.0;
  const double leapfrogs[][2] = {{0.5, 0.5},  {1.5, -0.5}, {-0.5, 1.5}, {-0.5, -0.5},
                                 {-1.5, 0.5}, {0.5, -1.5}, {0.5, -0.5}, {-0.5, 0.5}};
  for (const auto& point : leapfrogs) {
    const double pnu1 = point[0] * rabi, pnu2 = point[1] * rabi;
    double best = -1.0;
    int bi = -1, bj = -1;
    for (int i = 0; i < n; ++i) {
      if (std::abs(map.nu1_ghz[i] - pnu1) > half_window) continue;
      for (int j = 0; j < n; ++j) {
        if (std::abs(map.nu2_ghz[j] - pnu2) > half_window) continue;
        if (map.values(i, j) > best) {
          best = map.values(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    const bool found = bi >= 0 && best > 1.0 && is_local_max(map, bi, bj);
    check.require(found, fmt("(d) local bunching maximum near (%+.2f, %+.2f) GHz: %.3f at "
                             "(%+.3f, %+.3f)",
                             pnu1, pnu2, best, bi >= 0 ? map.nu1_ghz[bi] : 0.0,
                             bj >= 0 ? map.nu2_ghz[bj] : 0.0));
  }
  check.info(fmt("criterion runtime %.1f s", seconds_since(start)));
}

// ---------------------------------------------------------------- criterion 4

double antidiagonal_asymmetry(const SpectralMap2D& map) {
  const int n = int(map.nu1_ghz.size());
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double a = map.values(i, j);
      const double b = map.values(n - 1 - j, n - 1 - i);
      worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
    }
  }
  return worst;
}

void criterion_fig2a(Check& check) {
  const double rabi = 1.6;
  const GridSpec2D grid{61, 2.0 * rabi};
  MapOptions options;
  options.workers = 8;

  const SpectralMap2D detuned = tps_map({rabi, 1.0, 0.2}, 0.5, grid, options);
  const double broken = antidiagonal_asymmetry(detuned);
  check.require(broken > 0.10,
                fmt("detuned map mirror asymmetry %.3f > 0.10 (max relative)", broken));

  const SpectralMap2D resonant = tps_map({rabi, 0.0, 0.2}, 0.5, grid, options);
  const double kept = antidiagonal_asymmetry(resonant);
  check.require(kept <= 1e-3, fmt("resonant map mirror symmetric: %.2e <= 1e-3", kept));
}

// ---------------------------------------------------------------- criterion 5

void criterion_fig2b(Check& check) {
  const double rabi = 1.6;
  const double gamma = 0.5;
  const double omega_prime = dressed_states({rabi, 1.0, 0.2}).omega_prime_ghz;
  const std::vector<double> taus = linspace(-8.0, 8.0, 2001);
  const SensorConfig sensor = SensorConfig::defaults_for(gamma);

  const auto blue_to_red = [&](double detuning) {
    return filtered_g2({rabi, detuning, 0.2}, {omega_prime, gamma}, {-omega_prime, gamma},
                       taus, sensor);
  };
  const CorrelationTrace plus = blue_to_red(1.0);
  size_t arg = 0;
  for (size_t i = 0; i < taus.size(); ++i) {
    if (plus.values[i] > plus.values[arg]) arg = i;
  }
  check.require(taus[arg] > 0.0,
                fmt("blue->red global maximum %.3f at tau = %+.3f ns > 0", plus.values[arg],
                    taus[arg]));

  const CorrelationTrace minus = blue_to_red(-1.0);
  double worst = 0.0;
  for (size_t i = 0; i < taus.size(); ++i) {
    const double mirrored = minus.values[taus.size() - 1 - i];
    worst = std::max(worst, std::abs(plus.values[i] - mirrored) /
                                std::max(1.0, plus.values[i]));
  }
  check.require(worst <= 1e-3,
                fmt("detuning sign flip mirrors the delay axis: max dev %.2e <= 1e-3", worst));
}

// ---------------------------------------------------------------- criterion 6

void criterion_fig2c(Check& check) {
  const EmitterParams params{2.8, 0.0, 0.2};

  const auto central_g2 = [&](double gamma) {
    return map_point_g2_zero(params, {0.0, gamma}, {0.0, gamma},
                             SensorConfig::defaults_for(gamma), std::nullopt, std::nullopt);
  };
  const double narrow = central_g2(0.25);
  const double wide = central_g2(2.0);
  check.require(narrow > wide,
                fmt("central-peak g2(0): %.3f at 0.25 GHz > %.3f at 2.0 GHz", narrow, wide));

  // No-filter trace: Rabi oscillations within tau in (0, 2/Omega], damped by
  // an 80 ps detector response.
  CorrelationTrace trace;
  trace.tau_ns = linspace(-2.0, 2.0, 4001);
  trace.values.resize(trace.tau_ns.size());
  for (size_t i = 0; i < trace.tau_ns.size(); ++i) {
    trace.values[i] = unfiltered_g2_closed_form(params, std::abs(trace.tau_ns[i]));
  }
  trace.meta.emitter = params;
  const CorrelationTrace damped = convolve_irf(trace, IrfSpec{80.0});

  const double window = 2.0 / params.rabi_ghz;
  const auto count_extrema = [&](const CorrelationTrace& t) {
    int extrema = 0;
    for (size_t i = 1; i + 1 < t.tau_ns.size(); ++i) {
      if (t.tau_ns[i] <= 0.0 || t.tau_ns[i] > window) continue;
      const bool peak = t.values[i] > t.values[i - 1] && t.values[i] > t.values[i + 1];
      const bool dip = t.values[i] < t.values[i - 1] && t.values[i] < t.values[i + 1];
      if (peak || dip) ++extrema;
    }
    return extrema;
  };
  const auto contrast = [&](const CorrelationTrace& t) {
    double lo = 1e300, hi = -1e300;
    for (size_t i = 0; i < t.tau_ns.size(); ++i) {
      if (t.tau_ns[i] <= 0.0 || t.tau_ns[i] > window) continue;
      lo = std::min(lo, t.values[i]);
      hi = std::max(hi, t.values[i]);
    }
    return hi - lo;
  };

  const int raw_extrema = count_extrema(trace);
  check.require(raw_extrema >= 2,
                fmt("no-filter trace has %d local extrema in (0, %.3f ns]", raw_extrema, window));
  const double raw_contrast = contrast(trace);
  const double damped_contrast = contrast(damped);
  check.require(damped_contrast < 0.95 * raw_contrast,
                fmt("80 ps response damps the oscillation contrast: %.3f -> %.3f",
                    raw_contrast, damped_contrast));
}

// ---------------------------------------------------------------- criterion 7

void criterion_fig3(Check& check) {
  const EmitterParams params{2.2, 0.0, 0.2};
  const double rabi = params.rabi_ghz;
  const double gamma = 0.5;
  MapOptions options;
  options.workers = 8;
  const GridSpec2D grid{101, 2.0 * rabi};

  const SpectralMap2D map = cs_map(params, gamma, grid, options);
  double diag_worst = 0.0;
  for (size_t i = 0; i < map.nu1_ghz.size(); ++i) {
    diag_worst = std::max(diag_worst, std::abs(map.values(i, i) - 1.0));
  }
  check.require(diag_worst <= 1e-9, fmt("diagonal R = 1 within %.1e", diag_worst));

  double beyond = 0.0, grid_max = 0.0;
  for (size_t i = 0; i < map.nu1_ghz.size(); ++i) {
    for (size_t j = 0; j < map.nu2_ghz.size(); ++j) {
      grid_max = std::max(grid_max, map.values(i, j));
      if (std::abs(map.nu1_ghz[i]) > rabi && std::abs(map.nu2_ghz[j]) > rabi) {
        beyond = std::max(beyond, map.values(i, j));
      }
    }
  }
  check.require(beyond > 1.0, fmt("violation beyond the sidebands: max R %.2f > 1", beyond));
  check.require(grid_max > 10.0, fmt("grid maximum R %.2f > 10", grid_max));

  // Detuned case: violation exactly at opposite sidebands.
  const EmitterParams detuned{2.2, 1.0, 0.2};
  const double omega_prime = dressed_states(detuned).omega_prime_ghz;
  const SensorConfig sensor = SensorConfig::defaults_for(gamma);
  const auto r_at = [&](double nu1, double nu2) {
    const double cross = map_point_g2_zero(detuned, {nu1, gamma}, {nu2, gamma}, sensor,
                                           std::nullopt, std::nullopt);
    const double auto1 = map_point_g2_zero(detuned, {nu1, gamma}, {nu1, gamma}, sensor,
                                           std::nullopt, std::nullopt);
    const double auto2 = map_point_g2_zero(detuned, {nu2, gamma}, {nu2, gamma}, sensor,
                                           std::nullopt, std::nullopt);
    return cross * cross / (auto1 * auto2);
  };
  const double r_bl = r_at(omega_prime, -omega_prime);
  const double r_rb = r_at(-omega_prime, omega_prime);
  check.require(r_bl > 1.0 && r_rb > 1.0,
                fmt("detuned opposite-sideband violation: R = %.2f, %.2f > 1", r_bl, r_rb));
}

// ---------------------------------------------------------------- criterion 8

void criterion_wide_filter(Check& check) {
  const EmitterParams params{2.2, 0.0, 0.2};
  const double gamma = 50.0 * std::max(params.rabi_ghz, params.kappa_ghz);
  const double horizon = 5.0 / params.kappa_angular();
  const std::vector<double> taus = linspace(0.0, horizon, 200);
  const CorrelationTrace trace = filtered_g2(params, {0.0, gamma}, {0.0, gamma}, taus,
                                             SensorConfig::defaults_for(gamma));
  double worst = 0.0;
  for (size_t i = 0; i < taus.size(); ++i) {
    const double expected = unfiltered_g2_closed_form(params, taus[i]);
    worst = std::max(worst,
                     std::abs(trace.values[i] - expected) / std::max(1.0, std::abs(expected)));
  }
  check.require(worst < 0.05,
                fmt("wide filters track the closed form: max rel dev %.4f < 0.05", worst));
}

// ---------------------------------------------------------------- criterion 9

void criterion_determinism(Check& check) {
  const EmitterParams params{2.2, 0.0, 0.2};
  const GridSpec2D grid{101, 2.0 * params.rabi_ghz};

  MapOptions serial;
  serial.workers = 1;
  const auto t1_start = Clock::now();
  const SpectralMap2D a = tps_map(params, 0.5, grid, serial);
  const double t_serial = seconds_since(t1_start);

  MapOptions threaded;
  threaded.workers = 8;
  const auto t8_start = Clock::now();
  const SpectralMap2D b = tps_map(params, 0.5, grid, threaded);
  const double t_threaded = seconds_since(t8_start);

  bool bitwise = true;
  for (int i = 0; i < a.values.rows() && bitwise; ++i) {
    for (int j = 0; j < a.values.cols(); ++j) {
      if (a.values(i, j) != b.values(i, j)) {
        bitwise = false;
        break;
      }
    }
  }
  check.require(bitwise, "1-worker and 8-worker maps are bitwise identical");

  const SpectralMap2D c = tps_map(params, 0.5, grid, threaded);
  check.require(map_csv(b) == map_csv(c), "re-running the same config is byte-identical");

  const double speedup = t_serial / t_threaded;
  const unsigned cores = std::thread::hardware_concurrency();
  check.require(speedup >= 4.0,
                fmt("8-worker speedup %.2fx >= 4x (serial %.1f s, threaded %.1f s, %u cores)",
                    speedup, t_serial, t_threaded, cores));
}

struct Criterion {
  int id;
  const char* name;
  std::function<void(Check&)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list = {
      {1, "Bloch fidelity: steady state matches the closed form to 1e-10", criterion_bloch},
      {2, "Oracle equivalence: sensor method vs direct integration within 5%",
       criterion_oracle},
      {3, "Coincidence map structure at strong resonant drive", criterion_fig1d},
      {4, "Detuning breaks the antidiagonal mirror symmetry", criterion_fig2a},
      {5, "Blue->red cross-correlation time asymmetry under detuning", criterion_fig2b},
      {6, "Bandwidth trend and Rabi oscillations of the central peak", criterion_fig2c},
      {7, "Cauchy-Schwartz map: diagonal unity and tail violations", criterion_fig3},
      {8, "Wide-filter limit recovers the unfiltered correlation", criterion_wide_filter},
      {9, "Determinism across worker counts and parallel speedup", criterion_determinism},
  };
  return list;
}

}  // namespace

int main(int argc, char** argv) {
  int selected = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      selected = std::atoi(argv[i + 1]);
      ++i;
    }
  }

  int failures = 0;
  for (const auto& criterion : criteria()) {
    if (selected != 0 && criterion.id != selected) continue;
    Check check;
    const auto start = Clock::now();
    try {
      criterion.run(check);
    } catch (const std::exception& e) {
      check.require(false, std::string("unexpected exception: ") + e.what());
    }
    std::printf("criterion %d [%s] %s (%.1f s)\n", criterion.id, check.ok ? "PASS" : "FAIL",
                criterion.name, seconds_since(start));
    for (const auto& note : check.notes) std::printf("%s\n", note.c_str());
    std::fflush(stdout);
    if (!check.ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
