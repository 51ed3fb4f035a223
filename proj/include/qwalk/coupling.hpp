#pragma once

#include <span>

namespace qwalk {

struct CouplingSample {
  double separation_um = 0.0;
  double coupling_per_mm = 0.0;
};

/// C(d) = amplitude * exp(-d / decay_length).
struct CouplingModel {
  double amplitude_per_mm = 1.0;
  double decay_length_um = 1.0;
};

/// Linear least squares of ln C against d. Needs two or more distinct
/// separations and strictly positive couplings.
CouplingModel fit_exponential(std::span<const CouplingSample> samples);

double coupling_at(const CouplingModel& model, double separation_um);

}  // namespace qwalk
