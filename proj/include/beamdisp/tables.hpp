#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace beamdisp::cli {

inline constexpr std::string_view kToolVersion = "1.0.0";

/// One rectangular numeric data table.  `note` becomes a '#' comment line
/// above the CSV header documenting the column conventions.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::string note;
};

/// CSV with one header row, LF line endings, and 17 significant digits so
/// round-trips are exact.
std::string to_csv(const Table& table);

/// The same table as a JSON object {"note", "columns", "rows"}.
std::string to_json(const Table& table);

/// Parse to_csv() output back (used by the round-trip tests).
Table parse_csv(const std::string& text);

std::string format_double(double v);  // shortest round-trip-exact decimal, %.17g

uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

void write_file(const std::string& path, std::string_view content);
std::string read_file(const std::string& path);

/// Reproducibility record written next to every command's outputs.  The
/// timestamp is the only field allowed to differ between identical runs; the
/// data files themselves are byte-stable.
struct RunManifest {
    std::string command_line;
    nlohmann::json config;
    std::string tool_version{kToolVersion};
    std::uint64_t seed = 0;
    std::string timestamp;
    std::vector<std::pair<std::string, std::string>> outputs;  // (path, digest)

    nlohmann::json to_json() const;
};

std::string iso8601_utc_now();

}  // namespace beamdisp::cli
