#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>

#include "tps/commands.hpp"
#include "tps/config.hpp"
#include "tps/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"tpsim: two-photon spectra and filtered photon correlations of a "
               "coherently driven two-level emitter"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<int> workers;
  std::optional<double> irf_ps;
  std::optional<double> diffusion_ghz;
  std::optional<int> grid_n;
  std::optional<double> range_ghz;
  bool no_plots = false;

  app.add_option("--config", config_path, "configuration file")->required();
  app.add_option("--out", out_dir, "output directory (overrides config)");
  app.add_option("--workers", workers, "parallel workers (overrides config)");
  app.add_option("--irf", irf_ps, "detector response FWHM in ps, 0 disables");
  app.add_option("--diffusion", diffusion_ghz, "spectral diffusion width in GHz, 0 disables");
  app.add_option("--grid", grid_n, "map/spectrum grid points per axis");
  app.add_option("--range", range_ghz, "map/spectrum half range in GHz");
  app.add_flag("--no-plots", no_plots, "skip gnuplot script emission");

  const char* names[] = {"spectrum", "g2tau", "tps", "csmap", "dressed", "validate"};
  const char* descriptions[] = {
      "filtered one-photon spectrum over a frequency grid",
      "two-color correlation trace g2(tau) for the configured filter pair",
      "two-photon spectrum map g2(nu1, nu2, 0)",
      "Cauchy-Schwartz ratio map R(nu1, nu2)",
      "dressed-state amplitudes, triplet peaks, and the feature catalog",
      "cross-check the sensor method against direct integration"};
  std::string chosen;
  for (size_t i = 0; i < 6; ++i) {
    app.add_subcommand(names[i], descriptions[i])
        ->callback([&chosen, name = names[i]]() { chosen = name; });
  }

  CLI11_PARSE(app, argc, argv);

  tps::RunConfig cfg;
  try {
    cfg = tps::load_config(config_path);
    tps::apply_env_overrides(cfg);
    if (out_dir) cfg.output.directory = *out_dir;
    if (workers) cfg.workers = *workers;
    if (irf_ps) cfg.post.irf_fwhm_ps = *irf_ps;
    if (diffusion_ghz) cfg.post.diffusion_width_ghz = *diffusion_ghz;
    if (grid_n) cfg.grid.n_points = *grid_n;
    if (range_ghz) cfg.grid.range_ghz = *range_ghz;
    if (no_plots) cfg.output.emit_plots = false;
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  return tps::run_command_status(chosen, cfg);
}
