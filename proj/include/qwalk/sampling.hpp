#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/twophoton.hpp"

namespace qwalk {

/// Per-channel detector efficiencies and the detected-pair flux at unit
/// efficiency. With `diagonal_splitter`, same-site events pass a balanced
/// splitter and register as a coincidence with probability 1/2.
struct DetectionModel {
  std::vector<double> efficiency;
  double pair_rate_hz = 50.0;
  bool diagonal_splitter = true;

  static DetectionModel uniform(std::size_t channels, double efficiency, double pair_rate_hz,
                                bool diagonal_splitter);

  /// Throws Error(InvalidArgument) unless there are `channels` efficiencies
  /// in (0, 1] and the rate is positive.
  void validate(std::size_t channels) const;

  /// Mean-count factor of entry (a, b): eta_a eta_b (1/2 on a splitter diagonal).
  double channel_factor(std::size_t a, std::size_t b) const;
};

using CountArray = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Symmetric coincidence counts; the diagonal holds splitter coincidences.
struct CountMatrix {
  CountArray counts;
  double duration_s = 0.0;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return static_cast<std::size_t>(counts.rows()); }
  std::int64_t operator()(std::size_t a, std::size_t b) const {
    return counts(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
  }
};

/// Sub-seed of stream `index`: the (index+1)-th output of a SplitMix64
/// generator whose state starts at `seed`. Entry (a, b), a <= b, of an
/// N-site matrix uses index a * N + b; each sub-seed drives its own
/// mt19937_64 feeding a Poisson sampler. This mapping is frozen.
std::uint64_t entry_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// mu_ab = rate * duration * Gamma_ab * eta_a eta_b (* 1/2 on a splitter diagonal).
Eigen::MatrixXd expected_counts(const CorrelationMatrix& gamma, const DetectionModel& model,
                                double duration_s);

/// Independent Poisson draws per unordered pair. Gamma must be normalized
/// over unordered pairs to 1e-6 (Error(Unnormalized) otherwise).
CountMatrix sample_counts(const CorrelationMatrix& gamma, const DetectionModel& model,
                          double duration_s, std::uint64_t seed);

/// Inverts the detection map and renormalizes over unordered pairs.
CorrelationMatrix estimate_correlation(const CountMatrix& counts, const DetectionModel& model);

struct ScanPoint {
  double delay_fs = 0.0;
  double counts = 0.0;
};

/// Poisson-noised coincidence counts of one entry along a HOM curve.
std::vector<ScanPoint> sample_hom_scan(const HomCurve& curve, SitePair entry,
                                       const DetectionModel& model, double duration_s,
                                       std::uint64_t seed);

/// counts(tau) = B (1 + V exp(-(tau - tau0)^2 / (2 width^2))).
struct ZeroDelayFit {
  double zero_delay_fs = 0.0;
  double visibility = 0.0;
  double baseline = 0.0;
  double width_fs = 0.0;
  double zero_delay_error_fs = 0.0;
  double visibility_error = 0.0;
  double baseline_error = 0.0;
  double width_error_fs = 0.0;
  std::size_t iterations = 0;
};

double zero_delay_model(const ZeroDelayFit& fit, double delay_fs);

/// Levenberg-Marquardt fit of the Gaussian-plus-baseline model; standard
/// errors from s^2 (J^T J)^-1. Needs at least 7 points. Throws
/// Error(FitFailure) when the fit does not converge to a resolved peak.
ZeroDelayFit fit_zero_delay(std::span<const ScanPoint> scan);

}  // namespace qwalk
