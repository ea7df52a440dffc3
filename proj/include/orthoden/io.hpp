#ifndef ORTHODEN_IO_HPP
#define ORTHODEN_IO_HPP

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "json.hpp"

#include "orthoden/detector.hpp"
#include "orthoden/harness.hpp"
#include "orthoden/uncertainty.hpp"

namespace orthoden::io {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";
/// Largest |x_i - x(i, n)| accepted in a two-column signal file.
inline constexpr double kGridTolerance = 1e-9;

/// Reads (x, xi) or (xi) rows. A first line that does not parse as numbers
/// is taken as a header. With an x column the values must be strictly
/// increasing and match the canonical grid of the domain.
SampledSignal parse_signal_csv(const std::filesystem::path& path, Interval domain = {-1.0, 1.0});
SampledSignal parse_signal_csv(std::istream& in, const std::string& source, Interval domain = {-1.0, 1.0});

/// Last column of every data row, no grid check (concatenated windows).
std::vector<double> read_value_column(const std::filesystem::path& path);
std::vector<double> read_value_column(std::istream& in, const std::string& source);

/// Non-overlapping windows of `window_length` values on the canonical grid.
/// The value count must be a multiple of the window length.
std::vector<SampledSignal> split_windows(const std::vector<double>& values, std::size_t window_length,
                                         Interval domain = {-1.0, 1.0});

/// Writes x, xi, fit rows with a header.
void write_reconstruction_csv(const std::filesystem::path& path, const SampledSignal& s,
                              const std::vector<double>& fit);

/// Writes x, fit rows; the file parses back as a two-column signal.
void write_fit_csv(const std::filesystem::path& path, const SampledSignal& s, const std::vector<double>& fit);

void write_verdicts_csv(const std::filesystem::path& path, const std::vector<DetectionVerdict>& verdicts);

/// Pretty-printed JSON with a trailing newline.
void write_json(const std::filesystem::path& path, const json& doc);
std::string dump(const json& doc);

json to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const json& doc);

json to_json(const DenoiseResult& r, const ConfidenceReport& c);
json to_json(const EnergyEstimate& e);
json to_json(const FisherInterval& f);
json to_json(const BaselineRegion& b);
json to_json(const ExperimentReport& rep);

/// Per-cell table and per-replication table of a report.
void write_cells_csv(const std::filesystem::path& path, const ExperimentReport& rep);
void write_records_csv(const std::filesystem::path& path, const ExperimentReport& rep);

}  // namespace orthoden::io

#endif  // ORTHODEN_IO_HPP
