#pragma once

// Serialization of profiles, spectra and reports. Every artifact embeds the
// resolved job configuration and the program version; numbers are written
// with 17 significant digits so that reruns are byte-identical.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "hsmap/profile.hpp"
#include "hsmap/spectra.hpp"
#include "hsmap/sturm.hpp"

namespace hsmap {

inline constexpr const char* kVersion = "0.1.0";

using Json = nlohmann::ordered_json;

// "%.17g"
std::string format_number(double v);

Json to_json(const ProblemSpec& spec);
ProblemSpec problem_from_json(const Json& j);
Json to_json(const SolutionProfile& profile, bool with_samples = true);
SolutionProfile profile_from_json(const Json& j);
Json to_json(const SpectrumReport& report, bool with_eigenfunctions = true);
Json to_json(const ComparisonReport& report);
Json to_json(const StabilityVerdict& verdict);
Json to_json(const ReproductionRow& row);

// Wraps a payload as {"version", "config", <key>: payload}.
Json envelope(const Json& config, const std::string& key, Json payload);

// CSV with '#' comment lines (version, config) followed by a header row.
std::string profile_csv(const SolutionProfile& profile, const Json& config);
// With a closed form, a lambda_analytic column is appended.
std::string spectrum_csv(const SpectrumReport& report, const Json& config,
                         const AnalyticSpectrum* analytic = nullptr);
std::string family_csv(const std::vector<SolutionProfile>& profiles, const Json& config);
std::string reproduction_csv(const std::vector<ReproductionRow>& rows, const Json& config);

// Fixed-width human-readable table.
std::string reproduction_text(const std::vector<ReproductionRow>& rows);

struct PlotSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

struct PlotLabels {
  std::string title;
  std::string x_label;
  std::string y_label;
};

// Polyline SVG; the config is embedded in a <metadata> element.
std::string svg_plot(const std::vector<PlotSeries>& series, const PlotLabels& labels,
                     const Json& config);

// gnuplot-compatible whitespace-separated columns, one block per series
// separated by two blank lines.
std::string dat_file(const std::vector<PlotSeries>& series, const std::vector<std::string>& columns,
                     const Json& config);

// Writes to a temporary file in the same directory and renames it over path.
void write_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

}  // namespace hsmap
