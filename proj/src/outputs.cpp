#include "tps/outputs.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "tps/emitter.hpp"
#include "tps/errors.hpp"

namespace tps {

using nlohmann::json;

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::string spectrum_csv(const std::vector<double>& nu_ghz,
                         const std::vector<double>& intensity) {
  std::ostringstream out;
  out << "nu_ghz,intensity\n";
  for (size_t i = 0; i < nu_ghz.size(); ++i) {
    out << format_value(nu_ghz[i]) << ',' << format_value(intensity[i]) << '\n';
  }
  return out.str();
}

std::string trace_csv(const CorrelationTrace& trace) {
  std::ostringstream out;
  out << "tau_ns,g2\n";
  for (size_t i = 0; i < trace.tau_ns.size(); ++i) {
    out << format_value(trace.tau_ns[i]) << ',' << format_value(trace.values[i]) << '\n';
  }
  return out.str();
}

std::string map_csv(const SpectralMap2D& map) {
  std::ostringstream out;
  out << "nu1_ghz,nu2_ghz,value\n";
  for (size_t i = 0; i < map.nu1_ghz.size(); ++i) {
    for (size_t j = 0; j < map.nu2_ghz.size(); ++j) {
      out << format_value(map.nu1_ghz[i]) << ',' << format_value(map.nu2_ghz[j]) << ','
          << format_value(map.values(i, j)) << '\n';
    }
  }
  return out.str();
}

json spectrum_json(const std::vector<double>& nu_ghz, const std::vector<double>& intensity) {
  return json{{"nu_ghz", nu_ghz}, {"intensity", intensity}};
}

json trace_json(const CorrelationTrace& trace) {
  json meta{{"kind", trace.meta.kind}};
  if (trace.meta.epsilon_used) meta["epsilon_used"] = *trace.meta.epsilon_used;
  if (trace.meta.convergence_residual) meta["residual"] = *trace.meta.convergence_residual;
  if (trace.meta.irf_fwhm_ps) meta["irf_fwhm_ps"] = *trace.meta.irf_fwhm_ps;
  if (trace.meta.diffusion_width_ghz) {
    meta["diffusion_width_ghz"] = *trace.meta.diffusion_width_ghz;
  }
  return json{{"tau_ns", trace.tau_ns}, {"g2", trace.values}, {"meta", meta}};
}

json map_json(const SpectralMap2D& map) {
  std::vector<std::vector<double>> rows(map.nu1_ghz.size());
  for (size_t i = 0; i < map.nu1_ghz.size(); ++i) {
    rows[i].resize(map.nu2_ghz.size());
    for (size_t j = 0; j < map.nu2_ghz.size(); ++j) rows[i][j] = map.values(i, j);
  }
  return json{{"nu1_ghz", map.nu1_ghz},
              {"nu2_ghz", map.nu2_ghz},
              {"values", rows},
              {"kind", map.kind == MapKind::tps ? "tps" : "cs_ratio"},
              {"masked_points", map.meta.masked_points}};
}

json config_json(const RunConfig& cfg) {
  json j;
  j["emitter"] = {{"rabi_ghz", cfg.emitter.rabi_ghz},
                  {"detuning_ghz", cfg.emitter.detuning_ghz},
                  {"kappa_ghz", cfg.emitter.kappa_ghz}};
  j["filter1"] = {{"center_ghz", cfg.filter1.center_ghz},
                  {"bandwidth_ghz", cfg.filter1.bandwidth_ghz}};
  j["filter2"] = {{"center_ghz", cfg.filter2.center_ghz},
                  {"bandwidth_ghz", cfg.filter2.bandwidth_ghz}};
  j["grid"] = {{"n_points", cfg.grid.n_points}, {"range_ghz", cfg.grid_range_ghz()}};
  j["tau"] = {{"min_ns", cfg.tau.min_ns},
              {"max_ns", cfg.tau.max_ns},
              {"n_points", cfg.tau.n_points}};
  j["post"] = {{"irf_fwhm_ps", cfg.post.irf_fwhm_ps},
               {"diffusion_samples", cfg.post.diffusion_samples}};
  if (cfg.post.diffusion_width_ghz) {
    j["post"]["diffusion_width_ghz"] = *cfg.post.diffusion_width_ghz;
  }
  j["sensor"] = {{"tolerance", cfg.sensor.tolerance}};
  if (cfg.sensor.epsilon_sequence) {
    j["sensor"]["epsilon_sequence"] = *cfg.sensor.epsilon_sequence;
  }
  j["g2tau"] = {{"mode", cfg.g2tau.mode}, {"phase_rad", cfg.g2tau.phase_rad}};
  if (cfg.g2tau.detuning_sweep_ghz) {
    j["g2tau"]["detuning_sweep_ghz"] = *cfg.g2tau.detuning_sweep_ghz;
  }
  j["workers"] = cfg.workers;
  j["output"] = {{"directory", cfg.output.directory},
                 {"formats", cfg.output.formats},
                 {"emit_plots", cfg.output.emit_plots}};
  return j;
}

void write_meta_sidecar(const std::string& data_path, const std::string& command,
                        const RunConfig& cfg, const json& run_info) {
  json meta;
  meta["tool"] = "tpsim";
  meta["version"] = kToolVersion;
  meta["command"] = command;
  meta["config"] = config_json(cfg);
  meta["run"] = run_info;
  write_text_file(data_path + ".meta.json", meta.dump(2) + "\n");
}

namespace {

std::string arrow(double x1, double y1, double x2, double y2, const char* style) {
  std::ostringstream out;
  out << "set arrow from " << format_value(x1) << ',' << format_value(y1) << " to "
      << format_value(x2) << ',' << format_value(y2) << ' ' << style << '\n';
  return out.str();
}

}  // namespace

std::string plot_script_spectrum(const std::string& csv_name, const EmitterParams& params) {
  const auto peaks = mollow_peaks(params);
  std::ostringstream out;
  out << "# tpsim spectrum plot\n"
      << "set datafile separator ','\n"
      << "set terminal pngcairo size 800,500\n"
      << "set output '" << csv_name << ".png'\n"
      << "set xlabel '(omega - omega_L)/2pi (GHz)'\n"
      << "set ylabel 'intensity (arb. units)'\n"
      << "set key off\n";
  for (double p : peaks) {
    out << "set arrow from " << format_value(p) << ",graph 0 to " << format_value(p)
        << ",graph 1 nohead dt 2 lc rgb 'gray50'\n";
  }
  out << "plot '" << csv_name << "' skip 1 using 1:2 with lines lw 2 lc rgb 'dark-red'\n";
  return out.str();
}

std::string plot_script_traces(const std::vector<std::string>& csv_names,
                               const std::vector<std::string>& labels, double offset_step) {
  std::ostringstream out;
  out << "# tpsim correlation traces, offset for clarity\n"
      << "set datafile separator ','\n"
      << "set terminal pngcairo size 800,600\n"
      << "set output 'g2tau.png'\n"
      << "set xlabel 'tau (ns)'\n"
      << "set ylabel 'g^{(2)}(tau) + offset'\n"
      << "set key outside right\n"
      << "plot \\\n";
  for (size_t i = 0; i < csv_names.size(); ++i) {
    const double offset = offset_step * double(csv_names.size() - 1 - i);
    out << "  '" << csv_names[i] << "' skip 1 using 1:($2+" << format_value(offset)
        << ") with lines title '" << labels[i] << "'";
    out << (i + 1 < csv_names.size() ? ", \\\n" : "\n");
  }
  return out.str();
}

std::string plot_script_map(const std::string& csv_name, const SpectralMap2D& map) {
  const double lo = map.nu1_ghz.front();
  const double hi = map.nu1_ghz.back();
  const double rabi = map.meta.emitter.rabi_ghz;
  const bool cs = map.kind == MapKind::cs_ratio;

  std::ostringstream out;
  out << "# tpsim " << (cs ? "Cauchy-Schwartz ratio" : "two-photon spectrum") << " map\n"
      << "set datafile separator ','\n"
      << "set terminal pngcairo size 860,760\n"
      << "set output '" << csv_name << ".png'\n"
      << "set xlabel '(omega_1 - omega_L)/2pi (GHz)'\n"
      << "set ylabel '(omega_2 - omega_L)/2pi (GHz)'\n"
      << "set size ratio -1\n"
      << "set xrange [" << format_value(lo) << ':' << format_value(hi) << "]\n"
      << "set yrange [" << format_value(lo) << ':' << format_value(hi) << "]\n";
  if (cs) {
    // Diverging scale centered on R = 1; violation side rendered green.
    out << "set palette defined (0 '#313695', 1 '#f7f7f7', 2 '#1a9850')\n"
        << "set cbrange [0:2]\n"
        << "set cblabel 'R (clipped at 2, R>1 violates)'\n";
  } else {
    out << "set palette defined (0 '#0c0e4d', 1 '#2166ac', 2 '#f7f7f7', 3 '#b2182b', 4 '#67001f')\n"
        << "set cblabel 'g^{(2)}(0)'\n";
  }
  // Gridlines through the triplet lines and the leapfrog antidiagonals.
  for (double g : {0.0, rabi, -rabi}) {
    if (g >= lo && g <= hi) {
      out << arrow(g, lo, g, hi, "nohead dt 2 lc rgb 'gray40' front");
      out << arrow(lo, g, hi, g, "nohead dt 2 lc rgb 'gray40' front");
    }
  }
  for (double c : {0.0, rabi, -rabi}) {
    const double x1 = std::max(lo, c - hi);
    const double x2 = std::min(hi, c - lo);
    if (x1 < x2) out << arrow(x1, c - x1, x2, c - x2, "nohead dt 3 lc rgb 'white' front");
  }
  out << "plot '" << csv_name << "' skip 1 using 1:2:3 with image notitle";
  if (!cs && map.meta.emitter.detuning_ghz == 0.0 && rabi > 0.0) {
    out << ", \\\n  $features using 2:3:1 with labels offset 0,0.7 tc rgb 'white' notitle, "
           "\\\n  $features using 2:3 with points pt 6 ps 1.2 lc rgb 'white' notitle\n";
    std::ostringstream features;
    features << "$features << EOD\n";
    for (const auto& f : feature_catalog(map.meta.emitter)) {
      features << f.label << ',' << format_value(f.nu1_ghz) << ',' << format_value(f.nu2_ghz)
               << '\n';
    }
    features << "EOD\n";
    return features.str() + out.str();
  }
  out << "\n";
  return out.str();
}

}  // namespace tps
