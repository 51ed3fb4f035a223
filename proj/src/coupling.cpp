#include "qwalk/coupling.hpp"

#include <cmath>

#include "qwalk/error.hpp"

namespace qwalk {

CouplingModel fit_exponential(std::span<const CouplingSample> samples) {
  if (samples.size() < 2) {
    throw Error(ErrorKind::DegenerateFit, "need at least two coupling samples");
  }
  double mean_d = 0.0;
  double mean_log = 0.0;
  for (const auto& s : samples) {
    if (!(s.coupling_per_mm > 0.0) || !std::isfinite(s.coupling_per_mm)) {
      throw Error(ErrorKind::NonPositiveSample, "coupling samples must be positive");
    }
    if (!(s.separation_um > 0.0) || !std::isfinite(s.separation_um)) {
      throw Error(ErrorKind::NonPositiveSample, "separations must be positive");
    }
    mean_d += s.separation_um;
    mean_log += std::log(s.coupling_per_mm);
  }
  const auto n = static_cast<double>(samples.size());
  mean_d /= n;
  mean_log /= n;

  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& s : samples) {
    const double dx = s.separation_um - mean_d;
    sxx += dx * dx;
    sxy += dx * (std::log(s.coupling_per_mm) - mean_log);
  }
  if (!(sxx > 0.0)) {
    throw Error(ErrorKind::DegenerateFit, "all separations are equal");
  }
  const double slope = sxy / sxx;
  if (!(slope < 0.0)) {
    throw Error(ErrorKind::DegenerateFit, "coupling does not decay with separation");
  }
  const double intercept = mean_log - slope * mean_d;
  return {std::exp(intercept), -1.0 / slope};
}

double coupling_at(const CouplingModel& model, double separation_um) {
  return model.amplitude_per_mm * std::exp(-separation_um / model.decay_length_um);
}

}  // namespace qwalk
