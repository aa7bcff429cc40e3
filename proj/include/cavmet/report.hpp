#pragma once

#include <map>
#include <string>
#include <vector>

namespace cavmet {

/// Column-oriented table written as UTF-8 CSV with a mandatory header row.
/// Column names carry units. Doubles are formatted with %.12g so that
/// identical inputs produce byte-identical bodies.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

std::string format_double(double v);

void write_csv(const std::string& path, const Table& table);

/// key=value sidecar next to a CSV (same basename, .meta suffix). The
/// generated_at entry is the only line excluded from reproducibility.
void write_meta(const std::string& csv_path,
                const std::vector<std::pair<std::string, std::string>>& entries);

/// Minimal line plot of table columns 1.. against column 0.
void write_svg_plot(const std::string& path, const Table& table, const std::string& title);

}  // namespace cavmet
