#include "qwalk/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "qwalk/error.hpp"

namespace qwalk::svg {

namespace {

constexpr std::array<std::array<double, 3>, 5> kRamp = {{
    {68, 1, 84},
    {59, 82, 139},
    {33, 145, 140},
    {94, 201, 98},
    {253, 231, 37},
}};

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string header(double width, double height, std::string_view title) {
  return fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" "
      "viewBox=\"0 0 {:.0f} {:.0f}\" font-family=\"sans-serif\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<text x=\"{:.1f}\" y=\"22\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
      width, height, width, height, width / 2, escape(title));
}

std::pair<double, double> finite_range(std::span<const double> values) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : values) {
    if (!std::isfinite(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!std::isfinite(lo)) return {0.0, 1.0};
  if (hi == lo) hi = lo + 1.0;
  return {lo, hi};
}

std::string colorbar(double x, double y, double height, double lo, double hi) {
  std::string out;
  constexpr int steps = 50;
  for (int k = 0; k < steps; ++k) {
    const double t = 1.0 - static_cast<double>(k) / (steps - 1);
    out += fmt::format("<rect x=\"{:.1f}\" y=\"{:.2f}\" width=\"14\" height=\"{:.2f}\" fill=\"{}\"/>\n",
                       x, y + k * height / steps, height / steps + 0.5, colormap(t));
  }
  out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"11\">{:.3g}</text>\n", x + 18, y + 10, hi);
  out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"11\">{:.3g}</text>\n", x + 18, y + height, lo);
  return out;
}

}  // namespace

std::string colormap(double t) {
  if (!std::isfinite(t)) return "#ffffff";
  t = std::clamp(t, 0.0, 1.0);
  const double scaled = t * static_cast<double>(kRamp.size() - 1);
  const auto k = std::min(static_cast<std::size_t>(scaled), kRamp.size() - 2);
  const double f = scaled - static_cast<double>(k);
  std::array<int, 3> rgb{};
  for (std::size_t c = 0; c < 3; ++c) {
    rgb[c] = static_cast<int>(std::lround(kRamp[k][c] + f * (kRamp[k + 1][c] - kRamp[k][c])));
  }
  return fmt::format("#{:02x}{:02x}{:02x}", rgb[0], rgb[1], rgb[2]);
}

std::string lattice_heatmap(std::span<const std::pair<double, double>> positions_um,
                            double spacing_um, std::span<const double> values,
                            std::string_view title) {
  if (positions_um.size() != values.size()) {
    throw Error(ErrorKind::LengthMismatch, "one value per site expected");
  }
  if (positions_um.empty()) return header(200, 60, title) + "</svg>\n";

  double min_x = std::numeric_limits<double>::infinity();
  double max_x = -min_x;
  double min_y = min_x;
  double max_y = -min_x;
  for (const auto& [x, y] : positions_um) {
    min_x = std::min(min_x, x);
    max_x = std::max(max_x, x);
    min_y = std::min(min_y, y);
    max_y = std::max(max_y, y);
  }
  constexpr double cell_px = 36.0;  // centre-to-centre distance on the page
  constexpr double margin = 50.0;
  const double scale = cell_px / spacing_um;
  const double radius = cell_px / std::sqrt(3.0);
  const double plot_w = (max_x - min_x) * scale + 2 * radius;
  const double plot_h = (max_y - min_y) * scale + 2 * radius;
  const double width = plot_w + 2 * margin + 60;
  const double height = plot_h + 2 * margin;
  const auto [lo, hi] = finite_range(values);

  std::string out = header(width, height, title);
  for (std::size_t i = 0; i < positions_um.size(); ++i) {
    const double cx = margin + radius + (positions_um[i].first - min_x) * scale;
    const double cy = margin + radius + (max_y - positions_um[i].second) * scale;
    std::string points;
    for (int k = 0; k < 6; ++k) {
      const double angle = std::numbers::pi / 6.0 + k * std::numbers::pi / 3.0;
      points += fmt::format("{:.2f},{:.2f} ", cx + radius * std::cos(angle), cy + radius * std::sin(angle));
    }
    out += fmt::format("<polygon points=\"{}\" fill=\"{}\" stroke=\"#444\" stroke-width=\"0.6\">"
                       "<title>site {}: {:.6g}</title></polygon>\n",
                       points, colormap((values[i] - lo) / (hi - lo)), i, values[i]);
  }
  out += colorbar(width - 60, margin, plot_h, lo, hi);
  out += "</svg>\n";
  return out;
}

std::string matrix_heatmap(const Eigen::MatrixXd& values, std::string_view title) {
  const auto n = static_cast<double>(values.rows());
  const double cell = std::clamp(600.0 / std::max(n, 1.0), 4.0, 40.0);
  constexpr double margin = 50.0;
  const double width = n * cell + 2 * margin + 60;
  const double height = n * cell + 2 * margin;
  const std::span<const double> flat(values.data(), static_cast<std::size_t>(values.size()));
  const auto [lo, hi] = finite_range(flat);

  std::string out = header(width, height, title);
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      out += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"{}\">"
                         "<title>({}, {}): {:.6g}</title></rect>\n",
                         margin + j * cell, margin + i * cell, cell, cell,
                         colormap((values(i, j) - lo) / (hi - lo)), i, j, values(i, j));
    }
  }
  const auto step = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::ceil(12.0 / cell)));
  for (Eigen::Index k = 0; k < values.rows(); k += step) {
    out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"9\" text-anchor=\"end\">{}</text>\n",
                       margin - 3, margin + (k + 0.7) * cell, k);
    out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"9\" text-anchor=\"middle\">{}</text>\n",
                       margin + (k + 0.5) * cell, margin - 4, k);
  }
  out += colorbar(width - 60, margin, n * cell, lo, hi);
  out += "</svg>\n";
  return out;
}

std::string violation_bars(const ViolationMap& map, std::string_view title) {
  const bool counts = map.source == ViolationSource::Counts;
  std::vector<double> heights;
  for (std::size_t i = 0; i < map.size(); ++i) {
    for (std::size_t j = i + 1; j < map.size(); ++j) {
      const auto a = static_cast<Eigen::Index>(i);
      const auto b = static_cast<Eigen::Index>(j);
      heights.push_back(counts ? map.significance(a, b) : map.violation(a, b));
    }
  }
  auto [lo, hi] = finite_range(heights);
  lo = std::min(lo, 0.0);
  hi = std::max(hi, 0.0);
  if (hi == lo) hi = lo + 1.0;

  const double bar = std::clamp(900.0 / std::max<double>(1.0, static_cast<double>(heights.size())), 1.0, 20.0);
  constexpr double margin = 60.0;
  constexpr double plot_h = 320.0;
  const double width = static_cast<double>(heights.size()) * bar + 2 * margin;
  const double height = plot_h + 2 * margin;
  const auto y_of = [&](double v) { return margin + (hi - v) / (hi - lo) * plot_h; };

  std::string out = header(width, height, title);
  const double zero = y_of(0.0);
  for (std::size_t k = 0; k < heights.size(); ++k) {
    if (!std::isfinite(heights[k])) continue;
    const double top = std::min(zero, y_of(heights[k]));
    const double h = std::abs(y_of(heights[k]) - zero);
    out += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"{}\"/>\n",
                       margin + k * bar, top, bar * 0.9, h, heights[k] > 0.0 ? "#d62728" : "#9e9e9e");
  }
  out += fmt::format("<line x1=\"{:.1f}\" y1=\"{:.2f}\" x2=\"{:.1f}\" y2=\"{:.2f}\" stroke=\"black\"/>\n",
                     margin, zero, width - margin, zero);
  out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"11\" text-anchor=\"end\">{:.3g}</text>\n",
                     margin - 4, margin + 4, hi);
  out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"11\" text-anchor=\"end\">{:.3g}</text>\n",
                     margin - 4, margin + plot_h, lo);
  out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
                     width / 2, height - 20, counts ? "output pair (i < j); bar = V / sigma" : "output pair (i < j); bar = V");
  out += "</svg>\n";
  return out;
}

std::string line_plot(std::span<const double> xs, std::span<const double> ys, std::string_view title,
                      std::string_view x_label, std::string_view y_label) {
  if (xs.size() != ys.size()) throw Error(ErrorKind::LengthMismatch, "x and y differ in length");
  constexpr double width = 640.0;
  constexpr double height = 420.0;
  constexpr double margin = 60.0;
  auto [x_lo, x_hi] = finite_range(xs);
  auto [y_lo, y_hi] = finite_range(ys);
  y_lo = std::min(y_lo, 0.0);
  const auto px = [&](double x) { return margin + (x - x_lo) / (x_hi - x_lo) * (width - 2 * margin); };
  const auto py = [&](double y) { return height - margin - (y - y_lo) / (y_hi - y_lo) * (height - 2 * margin); };

  std::string out = header(width, height, title);
  out += fmt::format("<rect x=\"{0}\" y=\"{0}\" width=\"{1}\" height=\"{2}\" fill=\"none\" stroke=\"black\"/>\n",
                     margin, width - 2 * margin, height - 2 * margin);
  std::string points;
  for (std::size_t k = 0; k < xs.size(); ++k) points += fmt::format("{:.2f},{:.2f} ", px(xs[k]), py(ys[k]));
  out += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n", points);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2.5\" fill=\"#1f77b4\"/>\n", px(xs[k]), py(ys[k]));
  }
  out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
                     width / 2, height - 20, escape(x_label));
  out += fmt::format("<text x=\"18\" y=\"{:.1f}\" font-size=\"12\" text-anchor=\"middle\" "
                     "transform=\"rotate(-90 18 {:.1f})\">{}</text>\n",
                     height / 2, height / 2, escape(y_label));
  out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"10\" text-anchor=\"middle\">{:.4g}</text>\n",
                     margin, height - margin + 14, x_lo);
  out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"10\" text-anchor=\"middle\">{:.4g}</text>\n",
                     width - margin, height - margin + 14, x_hi);
  out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"10\" text-anchor=\"end\">{:.4g}</text>\n",
                     margin - 4, height - margin, y_lo);
  out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"10\" text-anchor=\"end\">{:.4g}</text>\n",
                     margin - 4, margin + 4, y_hi);
  out += "</svg>\n";
  return out;
}

}  // namespace qwalk::svg
