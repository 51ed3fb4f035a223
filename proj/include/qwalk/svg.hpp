#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>

#include <Eigen/Dense>

#include "qwalk/certification.hpp"

namespace qwalk::svg {

/// "#rrggbb" on a viridis-like ramp, t clamped to [0, 1].
std::string colormap(double t);

/// Hexagonal heatmap in true lattice coordinates. Each site is drawn as a
/// pointy-top hexagonal cell (the Voronoi cell of the triangular lattice);
/// the central row runs horizontally and +y points up on the page.
std::string lattice_heatmap(std::span<const std::pair<double, double>> positions_um,
                            double spacing_um, std::span<const double> values,
                            std::string_view title);

/// N x N grid with site indices along both axes, row 0 at the top.
std::string matrix_heatmap(const Eigen::MatrixXd& values, std::string_view title);

/// One bar per pair i < j: significance for count maps, V for exact maps.
/// Positive (violating) bars are red, the rest grey; undefined pairs are
/// left blank.
std::string violation_bars(const ViolationMap& map, std::string_view title);

/// Polyline with point markers.
std::string line_plot(std::span<const double> xs, std::span<const double> ys, std::string_view title,
                      std::string_view x_label, std::string_view y_label);

}  // namespace qwalk::svg
