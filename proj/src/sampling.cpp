#include "qwalk/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/poisson_distribution.hpp>
#include <unsupported/Eigen/LevenbergMarquardt>

#include "qwalk/error.hpp"

namespace qwalk {

namespace {

Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::int64_t draw_poisson(double mean, std::uint64_t sub_seed) {
  if (mean <= 0.0) return 0;
  boost::random::mt19937_64 engine(sub_seed);
  boost::random::poisson_distribution<std::int64_t, double> poisson(mean);
  return poisson(engine);
}

void check_duration(double duration_s) {
  if (!(duration_s >= 0.0) || !std::isfinite(duration_s)) {
    throw Error(ErrorKind::InvalidArgument, "duration must be finite and >= 0");
  }
}

// Residuals of the Gaussian-plus-baseline model; parameters are
// (baseline, visibility, zero delay, width).
struct PeakFunctor : Eigen::DenseFunctor<double> {
  PeakFunctor(const Eigen::VectorXd& delays, const Eigen::VectorXd& counts)
      : Eigen::DenseFunctor<double>(4, static_cast<int>(delays.size())),
        delays_(delays),
        counts_(counts) {}

  int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& residual) const {
    for (Eigen::Index k = 0; k < delays_.size(); ++k) {
      const double d = delays_(k) - p(2);
      const double g = std::exp(-0.5 * d * d / (p(3) * p(3)));
      residual(k) = p(0) * (1.0 + p(1) * g) - counts_(k);
    }
    return 0;
  }

  int df(const Eigen::VectorXd& p, Eigen::MatrixXd& jac) const {
    for (Eigen::Index k = 0; k < delays_.size(); ++k) {
      const double d = delays_(k) - p(2);
      const double w2 = p(3) * p(3);
      const double g = std::exp(-0.5 * d * d / w2);
      jac(k, 0) = 1.0 + p(1) * g;
      jac(k, 1) = p(0) * g;
      jac(k, 2) = p(0) * p(1) * g * d / w2;
      jac(k, 3) = p(0) * p(1) * g * d * d / (w2 * p(3));
    }
    return 0;
  }

  Eigen::VectorXd delays_;
  Eigen::VectorXd counts_;
};

}  // namespace

DetectionModel DetectionModel::uniform(std::size_t channels, double efficiency, double pair_rate_hz,
                                       bool diagonal_splitter) {
  DetectionModel model{std::vector<double>(channels, efficiency), pair_rate_hz, diagonal_splitter};
  model.validate(channels);
  return model;
}

void DetectionModel::validate(std::size_t channels) const {
  if (efficiency.size() != channels) {
    throw Error(ErrorKind::LengthMismatch, "detection model has " +
                                               std::to_string(efficiency.size()) +
                                               " channels, expected " + std::to_string(channels));
  }
  for (double eta : efficiency) {
    if (eta == 0.0) throw Error(ErrorKind::ZeroEfficiency, "channel efficiency is zero");
    if (!(eta > 0.0 && eta <= 1.0)) {
      throw Error(ErrorKind::InvalidArgument, "channel efficiencies must lie in (0, 1]");
    }
  }
  if (!(pair_rate_hz > 0.0) || !std::isfinite(pair_rate_hz)) {
    throw Error(ErrorKind::InvalidArgument, "pair rate must be positive");
  }
}

double DetectionModel::channel_factor(std::size_t a, std::size_t b) const {
  const double split = (a == b && diagonal_splitter) ? 0.5 : 1.0;
  return efficiency.at(a) * efficiency.at(b) * split;
}

std::uint64_t entry_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return splitmix64_mix(seed + kGolden * (index + 1));
}

Eigen::MatrixXd expected_counts(const CorrelationMatrix& gamma, const DetectionModel& model,
                                double duration_s) {
  check_duration(duration_s);
  const std::size_t n = gamma.size();
  model.validate(n);
  Eigen::MatrixXd mu(ix(n), ix(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      const double value = model.pair_rate_hz * duration_s * gamma(a, b) * model.channel_factor(a, b);
      mu(ix(a), ix(b)) = value;
      mu(ix(b), ix(a)) = value;
    }
  }
  return mu;
}

CountMatrix sample_counts(const CorrelationMatrix& gamma, const DetectionModel& model,
                          double duration_s, std::uint64_t seed) {
  const double total = unordered_sum(gamma);
  if (!(std::abs(total - 1.0) <= 1e-6)) {
    throw Error(ErrorKind::Unnormalized,
                "correlation matrix sums to " + std::to_string(total) + " over unordered pairs");
  }
  if ((gamma.values.array() < 0.0).any()) {
    throw Error(ErrorKind::InvalidArgument, "correlation matrix has negative entries");
  }
  const Eigen::MatrixXd mu = expected_counts(gamma, model, duration_s);
  const std::size_t n = gamma.size();

  CountMatrix out{CountArray::Zero(ix(n), ix(n)), duration_s, seed};
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      const std::int64_t k = draw_poisson(mu(ix(a), ix(b)), entry_seed(seed, a * n + b));
      out.counts(ix(a), ix(b)) = k;
      out.counts(ix(b), ix(a)) = k;
    }
  }
  return out;
}

CorrelationMatrix estimate_correlation(const CountMatrix& counts, const DetectionModel& model) {
  const std::size_t n = counts.size();
  model.validate(n);
  Eigen::MatrixXd g(ix(n), ix(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      if (counts(a, b) < 0) throw Error(ErrorKind::InvalidArgument, "negative coincidence count");
      const double value = static_cast<double>(counts(a, b)) / model.channel_factor(a, b);
      g(ix(a), ix(b)) = value;
      g(ix(b), ix(a)) = value;
    }
  }
  return normalized(CorrelationMatrix{std::move(g), Convention::Estimated});
}

std::vector<ScanPoint> sample_hom_scan(const HomCurve& curve, SitePair entry,
                                       const DetectionModel& model, double duration_s,
                                       std::uint64_t seed) {
  check_duration(duration_s);
  const auto values = curve.entry(entry.first, entry.second);
  if (!curve.matrices.empty()) model.validate(curve.matrices.front().size());
  const double scale = model.pair_rate_hz * duration_s * model.channel_factor(entry.first, entry.second);
  std::vector<ScanPoint> scan;
  scan.reserve(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    const auto count = draw_poisson(scale * values[k], entry_seed(seed, k));
    scan.push_back({curve.delays_fs[k], static_cast<double>(count)});
  }
  return scan;
}

double zero_delay_model(const ZeroDelayFit& fit, double delay_fs) {
  const double d = (delay_fs - fit.zero_delay_fs) / fit.width_fs;
  return fit.baseline * (1.0 + fit.visibility * std::exp(-0.5 * d * d));
}

ZeroDelayFit fit_zero_delay(std::span<const ScanPoint> scan) {
  const auto n = static_cast<Eigen::Index>(scan.size());
  if (n < 7) throw Error(ErrorKind::InvalidArgument, "zero-delay fit needs at least 7 scan points");

  std::vector<ScanPoint> sorted(scan.begin(), scan.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const ScanPoint& a, const ScanPoint& b) { return a.delay_fs < b.delay_fs; });
  Eigen::VectorXd delays(n);
  Eigen::VectorXd counts(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    delays(k) = sorted[static_cast<std::size_t>(k)].delay_fs;
    counts(k) = sorted[static_cast<std::size_t>(k)].counts;
  }
  if (!delays.allFinite() || !counts.allFinite()) {
    throw Error(ErrorKind::InvalidArgument, "scan contains non-finite values");
  }
  const double span = delays(n - 1) - delays(0);
  if (!(span > 0.0)) throw Error(ErrorKind::FitFailure, "scan has no delay range");

  // Starting point: baseline from both ends, peak at the largest excursion,
  // width from the number of points above half excursion.
  const double base0 = std::max(0.25 * (counts(0) + counts(1) + counts(n - 2) + counts(n - 1)), 1e-12);
  Eigen::Index peak_index = 0;
  (counts.array() - base0).abs().maxCoeff(&peak_index);
  const double excursion = counts(peak_index) - base0;
  Eigen::Index above_half = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (std::abs(counts(k) - base0) >= 0.5 * std::abs(excursion)) ++above_half;
  }
  const double spacing = span / static_cast<double>(n - 1);
  const double width0 = std::max(static_cast<double>(above_half) * spacing / 2.3548, spacing);

  Eigen::VectorXd p(4);
  p << base0, excursion / base0, delays(peak_index), width0;

  PeakFunctor functor(delays, counts);
  Eigen::LevenbergMarquardt<PeakFunctor> lm(functor);
  lm.setXtol(1e-14);
  lm.setFtol(1e-14);
  lm.setMaxfev(4000);
  const auto status = lm.minimize(p);
  using Eigen::LevenbergMarquardtSpace::Status;
  if (status == Status::ImproperInputParameters || status == Status::TooManyFunctionEvaluation ||
      status == Status::UserAsked || !p.allFinite()) {
    throw Error(ErrorKind::FitFailure, "zero-delay fit did not converge");
  }
  p(3) = std::abs(p(3));

  Eigen::VectorXd residual(n);
  functor(p, residual);
  const double rss = residual.squaredNorm();
  const double flat_rss = (counts.array() - counts.mean()).square().sum();
  if (!(rss < (1.0 - 1e-3) * flat_rss)) {
    throw Error(ErrorKind::FitFailure, "peak does not reduce the residual; scan looks peakless");
  }
  if (!(p(0) > 0.0) || p(3) == 0.0 || p(2) < delays(0) || p(2) > delays(n - 1)) {
    throw Error(ErrorKind::FitFailure, "fitted peak lies outside the scan");
  }

  Eigen::MatrixXd jac(n, 4);
  functor.df(p, jac);
  const Eigen::MatrixXd normal = jac.transpose() * jac;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(normal);
  if (!lu.isInvertible()) throw Error(ErrorKind::FitFailure, "fit covariance is singular");
  const double dof = static_cast<double>(n - 4);
  const Eigen::MatrixXd cov = lu.inverse() * (rss / dof);
  if (!cov.allFinite()) throw Error(ErrorKind::FitFailure, "fit covariance is not finite");

  ZeroDelayFit fit;
  fit.baseline = p(0);
  fit.visibility = p(1);
  fit.zero_delay_fs = p(2);
  fit.width_fs = p(3);
  fit.baseline_error = std::sqrt(std::max(cov(0, 0), 0.0));
  fit.visibility_error = std::sqrt(std::max(cov(1, 1), 0.0));
  fit.zero_delay_error_fs = std::sqrt(std::max(cov(2, 2), 0.0));
  fit.width_error_fs = std::sqrt(std::max(cov(3, 3), 0.0));
  fit.iterations = static_cast<std::size_t>(lm.iterations());
  return fit;
}

}  // namespace qwalk
