#pragma once

#include <string>
#include <vector>

#include "eitsim/fit.hpp"

namespace eitsim::io {

// Fixed-format scientific notation used for every CSV cell, so identical
// inputs always serialize to identical bytes.
std::string format_number(double v);

// Writes a CSV file with the given header columns and numeric rows.
// Throws IoError on any filesystem failure.
void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

void write_text_file(const std::string& path, const std::string& text);

std::string read_text_file(const std::string& path);

// Reads observations from a CSV with header `delta_s_hz,transmission[,weight]`.
// Whitespace around cells is ignored. Throws IoError on filesystem failures
// and ConfigError on malformed content.
std::vector<calibrate::Observation> read_observations_csv(const std::string& path);

struct SvgSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  std::string label;
};

// Minimal line plot: polylines on linear axes with a frame and labels.
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<SvgSeries>& series);

}  // namespace eitsim::io
