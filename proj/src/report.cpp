#include "cavmet/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "cavmet/errors.hpp"

namespace cavmet {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_csv(const std::string& path, const Table& table) {
  if (table.header.size() != table.columns.size()) {
    throw ConfigError("write_csv: header and column counts differ");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);

  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c) out << ',';
    out << table.header[c];
  }
  out << '\n';
  const std::size_t rows = table.rows();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (c) out << ',';
      out << format_double(table.columns[c][r]);
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write_csv: write failed for " + path);
}

void write_meta(const std::string& csv_path,
                const std::vector<std::pair<std::string, std::string>>& entries) {
  std::string path = csv_path;
  const auto dot = path.rfind(".csv");
  if (dot == path.size() - 4) path.resize(dot);
  path += ".meta";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_meta: cannot open " + path);
  for (const auto& [key, value] : entries) out << key << '=' << value << '\n';
  if (!out) throw std::runtime_error("write_meta: write failed for " + path);
}

void write_svg_plot(const std::string& path, const Table& table, const std::string& title) {
  if (table.columns.size() < 2 || table.rows() < 2) return;

  const int width = 720, height = 480, margin = 56;
  const auto& xs = table.columns[0];
  double x_lo = xs[0], x_hi = xs[0], y_lo = 0.0, y_hi = 0.0;
  bool y_init = false;
  for (double x : xs) {
    x_lo = std::min(x_lo, x);
    x_hi = std::max(x_hi, x);
  }
  for (std::size_t c = 1; c < table.columns.size(); ++c) {
    for (double y : table.columns[c]) {
      if (!std::isfinite(y)) continue;
      if (!y_init) {
        y_lo = y_hi = y;
        y_init = true;
      }
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
  }
  if (x_hi == x_lo) x_hi = x_lo + 1.0;
  if (!y_init || y_hi == y_lo) y_hi = y_lo + 1.0;

  auto px = [&](double x) { return margin + (x - x_lo) / (x_hi - x_lo) * (width - 2 * margin); };
  auto py = [&](double y) {
    return height - margin - (y - y_lo) / (y_hi - y_lo) * (height - 2 * margin);
  };
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf"};

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_svg_plot: cannot open " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << width - 2 * margin
      << "\" height=\"" << height - 2 * margin << "\" fill=\"none\" stroke=\"#444\"/>\n"
      << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << title << "</text>\n"
      << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-size=\"12\">" << table.header[0] << "</text>\n";
  for (std::size_t c = 1; c < table.columns.size(); ++c) {
    const char* color = palette[(c - 1) % 7];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t r = 0; r < table.rows(); ++r) {
      const double y = table.columns[c][r];
      if (!std::isfinite(y)) continue;
      out << px(xs[r]) << ',' << py(y) << ' ';
    }
    out << "\"/>\n<text x=\"" << width - margin + 4 << "\" y=\"" << margin + 14 * c
        << "\" font-size=\"11\" fill=\"" << color << "\" text-anchor=\"end\">" << table.header[c]
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace cavmet
