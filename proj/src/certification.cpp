#include "qwalk/certification.hpp"

#include <cmath>
#include <limits>

#include "qwalk/error.hpp"

namespace qwalk {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }

double witness(double g_ii, double g_jj, double g_ij) {
  return (2.0 / 3.0) * std::sqrt(g_ii * g_jj) - g_ij;
}

}  // namespace

const char* to_string(ViolationSource source) noexcept {
  switch (source) {
    case ViolationSource::ExactCorrelations: return "exact-correlations";
    case ViolationSource::Counts: return "counts";
  }
  return "unknown";
}

bool ViolationMap::defined(std::size_t i, std::size_t j) const {
  if (i >= size() || j >= size()) throw Error(ErrorKind::IndexOutOfRange, "pair out of range");
  if (i == j) return false;
  if (source == ViolationSource::ExactCorrelations) return true;
  return !std::isnan(significance(ix(i), ix(j)));
}

ViolationMap violation_map(const CorrelationMatrix& gamma) {
  if ((gamma.values.array() < 0.0).any()) {
    throw Error(ErrorKind::InvalidArgument, "correlation matrix has negative entries");
  }
  const std::size_t n = gamma.size();
  ViolationMap map;
  map.source = ViolationSource::ExactCorrelations;
  map.violation = Eigen::MatrixXd::Zero(ix(n), ix(n));
  map.sigma = Eigen::MatrixXd::Constant(ix(n), ix(n), kNaN);
  map.significance = Eigen::MatrixXd::Constant(ix(n), ix(n), kNaN);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = witness(gamma(i, i), gamma(j, j), gamma(i, j));
      map.violation(ix(i), ix(j)) = v;
      map.violation(ix(j), ix(i)) = v;
    }
  }
  return map;
}

ViolationMap violation_significance(const CountMatrix& counts) {
  const std::size_t n = counts.size();
  if ((counts.counts.array() < 0).any()) {
    throw Error(ErrorKind::InvalidArgument, "negative coincidence count");
  }
  ViolationMap map;
  map.source = ViolationSource::Counts;
  map.violation = Eigen::MatrixXd::Zero(ix(n), ix(n));
  map.sigma = Eigen::MatrixXd::Constant(ix(n), ix(n), kNaN);
  map.significance = Eigen::MatrixXd::Constant(ix(n), ix(n), kNaN);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto n_ii = static_cast<double>(counts(i, i));
      const auto n_jj = static_cast<double>(counts(j, j));
      const auto n_ij = static_cast<double>(counts(i, j));
      const double v = witness(n_ii, n_jj, n_ij);
      map.violation(ix(i), ix(j)) = v;
      map.violation(ix(j), ix(i)) = v;
      if (n_ii == 0.0 || n_jj == 0.0 || n_ij == 0.0) continue;
      const double sigma = std::sqrt(n_jj / 9.0 + n_ii / 9.0 + n_ij);
      map.sigma(ix(i), ix(j)) = sigma;
      map.sigma(ix(j), ix(i)) = sigma;
      map.significance(ix(i), ix(j)) = v / sigma;
      map.significance(ix(j), ix(i)) = v / sigma;
    }
  }
  return map;
}

std::vector<SitePair> positive_pairs(const ViolationMap& map, double min_significance) {
  std::vector<SitePair> out;
  for (std::size_t i = 0; i < map.size(); ++i) {
    for (std::size_t j = i + 1; j < map.size(); ++j) {
      if (!map.defined(i, j) || !(map.violation(ix(i), ix(j)) > 0.0)) continue;
      if (map.source == ViolationSource::Counts &&
          !(map.significance(ix(i), ix(j)) > min_significance)) {
        continue;
      }
      out.push_back({i, j});
    }
  }
  return out;
}

double max_violation(const ViolationMap& map) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < map.size(); ++i) {
    for (std::size_t j = i + 1; j < map.size(); ++j) {
      best = std::max(best, map.violation(ix(i), ix(j)));
    }
  }
  return best;
}

double max_significance(const ViolationMap& map) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < map.size(); ++i) {
    for (std::size_t j = i + 1; j < map.size(); ++j) {
      if (map.defined(i, j) && map.source == ViolationSource::Counts) {
        best = std::max(best, map.significance(ix(i), ix(j)));
      }
    }
  }
  return best;
}

}  // namespace qwalk
