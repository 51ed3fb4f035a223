#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qwalk/sampling.hpp"
#include "qwalk/twophoton.hpp"

namespace qwalk {

enum class ViolationSource { ExactCorrelations, Counts };

const char* to_string(ViolationSource source) noexcept;

/// Cauchy-Schwarz witness V_ij = (2/3) sqrt(G_ii G_jj) - G_ij per output
/// pair. Positive V certifies non-classical correlations.
///
/// The diagonal carries no witness and is left at 0. `sigma` and
/// `significance` are NaN where undefined: everywhere for exact inputs, and
/// for count inputs on pairs where any of N_ii, N_jj, N_ij is zero.
struct ViolationMap {
  Eigen::MatrixXd violation;
  Eigen::MatrixXd sigma;
  Eigen::MatrixXd significance;
  ViolationSource source = ViolationSource::ExactCorrelations;

  std::size_t size() const noexcept { return static_cast<std::size_t>(violation.rows()); }

  /// True for off-diagonal pairs whose witness could be evaluated.
  bool defined(std::size_t i, std::size_t j) const;
};

ViolationMap violation_map(const CorrelationMatrix& gamma);

/// Witness on raw counts with first-order Poisson error propagation:
/// sigma_V^2 = N_jj / 9 + N_ii / 9 + N_ij.
ViolationMap violation_significance(const CountMatrix& counts);

/// Unordered pairs i < j with defined V > 0 and, for count maps,
/// significance above `min_significance`.
std::vector<SitePair> positive_pairs(const ViolationMap& map, double min_significance = 0.0);

/// Largest V over i != j.
double max_violation(const ViolationMap& map);
/// Largest defined significance; -inf for exact maps.
double max_significance(const ViolationMap& map);

}  // namespace qwalk
