#include "tps/config.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "tps/errors.hpp"

namespace tps {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& v, const std::string& where) {
  try {
    size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw ConfigError(where + ": expected a number, got '" + v + "'");
  }
}

int parse_int(const std::string& v, const std::string& where) {
  try {
    size_t used = 0;
    const int x = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw ConfigError(where + ": expected an integer, got '" + v + "'");
  }
}

bool parse_bool(const std::string& v, const std::string& where) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(where + ": expected a boolean, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& v, const std::string& where) {
  std::vector<double> out;
  for (const auto& item : split_list(v)) out.push_back(parse_double(item, where));
  if (out.empty()) throw ConfigError(where + ": expected a comma-separated list");
  return out;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

using Setter = std::function<void(RunConfig&, const std::string& value, const std::string& where)>;

const std::map<std::string, Setter>& schema() {
  static const std::map<std::string, Setter> s = {
      {"emitter.rabi_ghz",
       [](RunConfig& c, const std::string& v, const std::string& w) {
         c.emitter.rabi_ghz = parse_double(v, w);
       }},
      {"emitter.detuning_ghz",
       [](RunConfig& c, const std::string& v, const std::string& w) {
         c.emitter.detuning_ghz = parse_double(v, w);
       }},
      {"emitter.kappa_ghz",
       [](RunConfig& c, const std::string& v, const std::string& w) {
         c.emitter.kappa_ghz = parse_double(v, w);
       }},
      {"filter1.center_ghz",
       [](RunConfig& c, const std::string& v, const std::string& w) {
         c.filter1.center_ghz = parse_double(v, w);
       }},
      {"filter1.bandwidth_ghz",
       [](RunConfig& c, const std::string& v, const std::string& w) {
         c.filter1.bandwidth_ghz = parse_double(v, w);
       }},
      {"filter2.center_ghz",
       [](RunConfig& c, const std::string& v, const std::string& w) {
         c.filter2.center_ghz = parse_double(v, w);
       }},
      {"filter2.bandwidth_ghz",
       [](RunConfig& c, const std::string& v, const std::string& w) {
         c.filter2.bandwidth_ghz = parse_double(v, w);
       }},
      {"grid.n_points",
       [](RunConfig& c, const std::string& v, const std::string& w) {
         c.grid.n_points = parse_int(v, w);
       }},
      {"grid.range_ghz",
       [](RunConfig& c, const std::string& v, const std::string& w) {
         c.grid.range_ghz = parse_double(v, w);
       }},
      {"tau.min_ns",
       [](RunConfig& c, const std::string& v, const std::string& w) {
         c.tau.min_ns = parse_double(v, w);
       }},
      {"tau.max_ns",
       [](RunConfig& c, const std::string& v, const std::string& w) {
         c.tau.max_ns = parse_double(v, w);
       }},
      {"tau.n_points",
       [](RunConfig& c, const std::string& v, const std::string& w) {
         c.tau.n_points = parse_int(v, w);
       }},
      {"post.irf_fwhm_ps",
       [](RunConfig& c, const std::string& v, const std::string& w) {
         c.post.irf_fwhm_ps = parse_double(v, w);
       }},
      {"post.diffusion_width_ghz",
       [](RunConfig& c, const std::string& v, const std::string& w) {
         c.post.diffusion_width_ghz = parse_double(v, w);
       }},
      {"post.diffusion_samples",
       [](RunConfig& c, const std::string& v, const std::string& w) {
         c.post.diffusion_samples = parse_int(v, w);
       }},
      {"sensor.epsilon_sequence",
       [](RunConfig& c, const std::string& v, const std::string& w) {
         c.sensor.epsilon_sequence = parse_double_list(v, w);
       }},
      {"sensor.tolerance",
       [](RunConfig& c, const std::string& v, const std::string& w) {
         c.sensor.tolerance = parse_double(v, w);
       }},
      {"g2tau.mode",
       [](RunConfig& c, const std::string& v, const std::string& w) {
         if (v != "cross" && v != "recombined") {
           throw ConfigError(w + ": mode must be 'cross' or 'recombined'");
         }
         c.g2tau.mode = v;
       }},
      {"g2tau.phase_rad",
       [](RunConfig& c, const std::string& v, const std::string& w) {
         c.g2tau.phase_rad = parse_double(v, w);
       }},
      {"g2tau.detuning_sweep_ghz",
       [](RunConfig& c, const std::string& v, const std::string& w) {
         c.g2tau.detuning_sweep_ghz = parse_double_list(v, w);
       }},
      {"run.workers",
       [](RunConfig& c, const std::string& v, const std::string& w) {
         c.workers = parse_int(v, w);
       }},
      {"output.directory",
       [](RunConfig& c, const std::string& v, const std::string&) {
         c.output.directory = v;
       }},
      {"output.formats",
       [](RunConfig& c, const std::string& v, const std::string& w) {
         c.output.formats = split_list(v);
         if (c.output.formats.empty()) throw ConfigError(w + ": formats must be nonempty");
       }},
      {"output.emit_plots",
       [](RunConfig& c, const std::string& v, const std::string& w) {
         c.output.emit_plots = parse_bool(v, w);
       }},
  };
  return s;
}

}  // namespace

double RunConfig::grid_range_ghz() const {
  if (grid.range_ghz) return *grid.range_ghz;
  return 2.0 * emitter.rabi_ghz;
}

SensorConfig RunConfig::sensor_config(double min_bandwidth_ghz) const {
  SensorConfig cfg = SensorConfig::defaults_for(min_bandwidth_ghz);
  if (sensor.epsilon_sequence) cfg.epsilon_sequence = *sensor.epsilon_sequence;
  cfg.tolerance = sensor.tolerance;
  cfg.validate();
  return cfg;
}

std::optional<IrfSpec> RunConfig::irf() const {
  if (post.irf_fwhm_ps > 0.0) return IrfSpec{post.irf_fwhm_ps};
  return std::nullopt;
}

std::optional<DiffusionSpec> RunConfig::diffusion() const {
  if (post.diffusion_width_ghz && *post.diffusion_width_ghz > 0.0) {
    return DiffusionSpec{*post.diffusion_width_ghz, post.diffusion_samples};
  }
  return std::nullopt;
}

void RunConfig::validate() const {
  emitter.validate();
  filter1.validate();
  filter2.validate();
  if (grid.n_points < 2 || grid.n_points > 301) {
    throw ConfigError("grid.n_points must lie in [2, 301]");
  }
  if (grid.range_ghz && !(*grid.range_ghz > 0.0)) {
    throw ConfigError("grid.range_ghz must be positive");
  }
  if (!grid.range_ghz && !(emitter.rabi_ghz > 0.0)) {
    throw ConfigError("grid.range_ghz required when rabi_ghz is zero");
  }
  if (!(tau.max_ns > tau.min_ns)) throw ConfigError("tau.max_ns must exceed tau.min_ns");
  if (tau.n_points < 2) throw ConfigError("tau.n_points must be >= 2");
  if (post.irf_fwhm_ps < 0.0) throw ConfigError("post.irf_fwhm_ps must be >= 0");
  if (post.diffusion_width_ghz && *post.diffusion_width_ghz < 0.0) {
    throw ConfigError("post.diffusion_width_ghz must be >= 0");
  }
  if (post.diffusion_width_ghz && *post.diffusion_width_ghz > 0.0) {
    DiffusionSpec{*post.diffusion_width_ghz, post.diffusion_samples}.validate();
  }
  if (sensor.epsilon_sequence) {
    SensorConfig probe;
    probe.epsilon_sequence = *sensor.epsilon_sequence;
    probe.tolerance = sensor.tolerance;
    probe.validate();
  } else if (!(sensor.tolerance > 0.0 && sensor.tolerance <= 0.1)) {
    throw ConfigError("sensor.tolerance must lie in (0, 0.1]");
  }
  if (workers < 1) throw ConfigError("run.workers must be >= 1");
  if (output.formats.empty()) throw ConfigError("output.formats must be nonempty");
  for (const auto& f : output.formats) {
    if (f != "csv" && f != "json") {
      throw ConfigError("output.formats: unknown format '" + f + "'");
    }
  }
  if (g2tau.mode != "cross" && g2tau.mode != "recombined") {
    throw ConfigError("g2tau.mode must be 'cross' or 'recombined'");
  }
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  bool saw_rabi = false;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = origin + ":" + std::to_string(line_no);
    std::string body = line;
    const auto comment = body.find_first_of("#;");
    if (comment != std::string::npos) body = body.substr(0, comment);
    body = trim(body);
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') throw ConfigError(where + ": unterminated section header");
      section = trim(body.substr(1, body.size() - 2));
      if (section.empty()) throw ConfigError(where + ": empty section name");
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(where + ": expected 'key = value'");
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (section.empty()) throw ConfigError(where + ": key '" + key + "' outside any section");
    const std::string path = section + "." + key;
    const auto it = schema().find(path);
    if (it == schema().end()) {
      throw ConfigError(where + ": unknown key '" + path + "'");
    }
    it->second(cfg, value, where + " (" + path + ")");
    if (path == "emitter.rabi_ghz") saw_rabi = true;
  }
  if (!saw_rabi) {
    throw ConfigError(origin + ": missing required key 'emitter.rabi_ghz'");
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "[emitter]\n";
  out << "rabi_ghz = " << format_double(cfg.emitter.rabi_ghz) << "\n";
  out << "detuning_ghz = " << format_double(cfg.emitter.detuning_ghz) << "\n";
  out << "kappa_ghz = " << format_double(cfg.emitter.kappa_ghz) << "\n";
  out << "\n[filter1]\n";
  out << "center_ghz = " << format_double(cfg.filter1.center_ghz) << "\n";
  out << "bandwidth_ghz = " << format_double(cfg.filter1.bandwidth_ghz) << "\n";
  out << "\n[filter2]\n";
  out << "center_ghz = " << format_double(cfg.filter2.center_ghz) << "\n";
  out << "bandwidth_ghz = " << format_double(cfg.filter2.bandwidth_ghz) << "\n";
  out << "\n[grid]\n";
  out << "n_points = " << cfg.grid.n_points << "\n";
  if (cfg.grid.range_ghz) out << "range_ghz = " << format_double(*cfg.grid.range_ghz) << "\n";
  out << "\n[tau]\n";
  out << "min_ns = " << format_double(cfg.tau.min_ns) << "\n";
  out << "max_ns = " << format_double(cfg.tau.max_ns) << "\n";
  out << "n_points = " << cfg.tau.n_points << "\n";
  out << "\n[post]\n";
  out << "irf_fwhm_ps = " << format_double(cfg.post.irf_fwhm_ps) << "\n";
  if (cfg.post.diffusion_width_ghz) {
    out << "diffusion_width_ghz = " << format_double(*cfg.post.diffusion_width_ghz) << "\n";
  }
  out << "diffusion_samples = " << cfg.post.diffusion_samples << "\n";
  out << "\n[sensor]\n";
  if (cfg.sensor.epsilon_sequence) {
    out << "epsilon_sequence = ";
    for (size_t i = 0; i < cfg.sensor.epsilon_sequence->size(); ++i) {
      if (i) out << ", ";
      out << format_double((*cfg.sensor.epsilon_sequence)[i]);
    }
    out << "\n";
  }
  out << "tolerance = " << format_double(cfg.sensor.tolerance) << "\n";
  out << "\n[g2tau]\n";
  out << "mode = " << cfg.g2tau.mode << "\n";
  out << "phase_rad = " << format_double(cfg.g2tau.phase_rad) << "\n";
  if (cfg.g2tau.detuning_sweep_ghz) {
    out << "detuning_sweep_ghz = ";
    for (size_t i = 0; i < cfg.g2tau.detuning_sweep_ghz->size(); ++i) {
      if (i) out << ", ";
      out << format_double((*cfg.g2tau.detuning_sweep_ghz)[i]);
    }
    out << "\n";
  }
  out << "\n[run]\n";
  out << "workers = " << cfg.workers << "\n";
  out << "\n[output]\n";
  out << "directory = " << cfg.output.directory << "\n";
  out << "formats = ";
  for (size_t i = 0; i < cfg.output.formats.size(); ++i) {
    if (i) out << ", ";
    out << cfg.output.formats[i];
  }
  out << "\n";
  out << "emit_plots = " << (cfg.output.emit_plots ? "true" : "false") << "\n";
  return out.str();
}

void apply_env_overrides(RunConfig& cfg) {
  const auto get = [](const char* name) -> std::optional<std::string> {
    const char* v = std::getenv(name);
    if (v == nullptr) return std::nullopt;
    return std::string(v);
  };
  if (const auto v = get("TPSIM_WORKERS")) {
    cfg.workers = parse_int(*v, "env TPSIM_WORKERS");
  }
  if (const auto v = get("TPSIM_OUTPUT_DIRECTORY")) {
    cfg.output.directory = *v;
  }
  if (const auto v = get("TPSIM_IRF_FWHM_PS")) {
    cfg.post.irf_fwhm_ps = parse_double(*v, "env TPSIM_IRF_FWHM_PS");
  }
  if (const auto v = get("TPSIM_DIFFUSION_WIDTH_GHZ")) {
    cfg.post.diffusion_width_ghz = parse_double(*v, "env TPSIM_DIFFUSION_WIDTH_GHZ");
  }
  cfg.validate();
}

}  // namespace tps
