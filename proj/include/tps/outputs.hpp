#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

#include "tps/config.hpp"
#include "tps/maps.hpp"
#include "tps/trace.hpp"

namespace tps {

inline constexpr const char* kToolVersion = "0.1.0";

// All numeric output uses nine significant digits and '\n' newlines so that
// identical runs produce byte-identical files.
std::string format_value(double v);

void write_text_file(const std::string& path, const std::string& content);

// CSV layouts (exact): spectrum 'nu_ghz,intensity'; trace 'tau_ns,g2';
// maps 'nu1_ghz,nu2_ghz,value' in row-major nu1-outer order.
std::string spectrum_csv(const std::vector<double>& nu_ghz,
                         const std::vector<double>& intensity);
std::string trace_csv(const CorrelationTrace& trace);
std::string map_csv(const SpectralMap2D& map);

nlohmann::json spectrum_json(const std::vector<double>& nu_ghz,
                             const std::vector<double>& intensity);
nlohmann::json trace_json(const CorrelationTrace& trace);
nlohmann::json map_json(const SpectralMap2D& map);

nlohmann::json config_json(const RunConfig& cfg);

// Provenance sidecar written next to every data file as <file>.meta.json.
void write_meta_sidecar(const std::string& data_path, const std::string& command,
                        const RunConfig& cfg, const nlohmann::json& run_info);

// gnuplot scripts reading the CSVs by relative path.
std::string plot_script_spectrum(const std::string& csv_name, const EmitterParams& params);
std::string plot_script_traces(const std::vector<std::string>& csv_names,
                               const std::vector<std::string>& labels, double offset_step);
std::string plot_script_map(const std::string& csv_name, const SpectralMap2D& map);

}  // namespace tps
