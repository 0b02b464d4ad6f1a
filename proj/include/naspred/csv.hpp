#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace naspred {

extern const char* kToolVersion;

// CSV body prefixed by a provenance comment line carrying the tool version and
// the effective config hash. Reruns with the same config and seeds are
// byte-identical (no timestamps).
std::string with_provenance(const std::string& csv_body, std::uint64_t config_hash);

// Writes via temp file + rename so partial outputs never land.
void write_file_atomic(const std::string& path, const std::string& content);

std::string format_double(double value);

// Minimal SVG polyline chart; series are (label, y-values) over a shared
// 0-based x axis. Used by the optional --plot flag.
struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

std::string render_line_svg(const std::vector<PlotSeries>& series, const std::string& title,
                            const std::string& x_label, const std::string& y_label);

} // namespace naspred
