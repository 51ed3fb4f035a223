#include "qwalk/twophoton.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "qwalk/error.hpp"

namespace qwalk {

namespace {

using cd = std::complex<double>;

void check_input(const UnitaryPropagator& u, SitePair input) {
  if (input.first >= u.size() || input.second >= u.size()) {
    throw Error(ErrorKind::IndexOutOfRange, "input site out of range");
  }
}

Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }

}  // namespace

const char* to_string(Convention convention) noexcept {
  switch (convention) {
    case Convention::Quantum: return "quantum";
    case Convention::ClassicalProduct: return "classical-product";
    case Convention::PhysicalPartial: return "physical-partial";
    case Convention::Estimated: return "estimated";
  }
  return "unknown";
}

SitePair resolve_ports(const TriangularLattice& lattice, const PhotonPairInput& input) {
  return {port_site(lattice, input.port_a), port_site(lattice, input.port_b)};
}

CorrelationMatrix quantum_correlation(const UnitaryPropagator& u, SitePair input) {
  check_input(u, input);
  const std::size_t n = u.size();
  const std::size_t i = input.first;
  const std::size_t j = input.second;
  const double input_factor = i == j ? 0.5 : 1.0;

  Eigen::MatrixXd g(ix(n), ix(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      const cd amplitude = u(a, i) * u(b, j) + u(a, j) * u(b, i);
      const double output_factor = a == b ? 0.5 : 1.0;
      const double value = input_factor * output_factor * std::norm(amplitude);
      g(ix(a), ix(b)) = value;
      g(ix(b), ix(a)) = value;
    }
  }
  return {std::move(g), Convention::Quantum};
}

CorrelationMatrix classical_correlation(const UnitaryPropagator& u, SitePair input) {
  check_input(u, input);
  const std::size_t n = u.size();
  const auto p_i = single_photon_probabilities(u, input.first);
  const auto p_j = single_photon_probabilities(u, input.second);

  Eigen::MatrixXd g(ix(n), ix(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      const double value = p_i[a] * p_j[b] + p_j[a] * p_i[b];
      g(ix(a), ix(b)) = value;
      g(ix(b), ix(a)) = value;
    }
  }
  return {std::move(g), Convention::ClassicalProduct};
}

CorrelationMatrix partial_correlation(const UnitaryPropagator& u, SitePair input,
                                      double indistinguishability) {
  if (!(indistinguishability >= 0.0 && indistinguishability <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "indistinguishability must lie in [0, 1]");
  }
  check_input(u, input);
  const std::size_t i = input.first;
  const std::size_t j = input.second;
  if (i == j) {
    // Both photons in one mode: the distinguishable and indistinguishable
    // statistics coincide, so the overlap has no effect.
    CorrelationMatrix g = quantum_correlation(u, input);
    g.convention = Convention::PhysicalPartial;
    return g;
  }

  const std::size_t n = u.size();
  Eigen::MatrixXd g(ix(n), ix(n));
  for (std::size_t a = 0; a < n; ++a) {
    const cd direct = u(a, i) * u(a, j);
    g(ix(a), ix(a)) = (1.0 + indistinguishability) * std::norm(direct);
    for (std::size_t b = a + 1; b < n; ++b) {
      const cd first = u(a, i) * u(b, j);
      const cd second = u(a, j) * u(b, i);
      const double value = std::norm(first) + std::norm(second) +
                           2.0 * indistinguishability * std::real(first * std::conj(second));
      g(ix(a), ix(b)) = value;
      g(ix(b), ix(a)) = value;
    }
  }
  return {std::move(g), Convention::PhysicalPartial};
}

CorrelationMatrix quantum_correlation(const UnitaryPropagator& u, const TriangularLattice& lattice,
                                      const PhotonPairInput& input) {
  return quantum_correlation(u, resolve_ports(lattice, input));
}

CorrelationMatrix classical_correlation(const UnitaryPropagator& u, const TriangularLattice& lattice,
                                        const PhotonPairInput& input) {
  return classical_correlation(u, resolve_ports(lattice, input));
}

CorrelationMatrix partial_correlation(const UnitaryPropagator& u, const TriangularLattice& lattice,
                                      const PhotonPairInput& input) {
  return partial_correlation(u, resolve_ports(lattice, input), input.indistinguishability);
}

double unordered_sum(const CorrelationMatrix& gamma) {
  double total = 0.0;
  const Eigen::Index n = gamma.values.rows();
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a; b < n; ++b) total += gamma.values(a, b);
  }
  return total;
}

CorrelationMatrix normalized(CorrelationMatrix gamma) {
  const double total = unordered_sum(gamma);
  if (!(total > 0.0)) throw Error(ErrorKind::ZeroMass, "correlation matrix has zero mass");
  gamma.values /= total;
  return gamma;
}

std::size_t unordered_pair_count(std::size_t n, bool include_diagonal) {
  const std::size_t off = n * (n - (n > 0 ? 1 : 0)) / 2;
  return include_diagonal ? off + n : off;
}

double matrix_similarity(const CorrelationMatrix& g_exp, const CorrelationMatrix& g_th) {
  if (g_exp.values.rows() != g_th.values.rows() || g_exp.values.cols() != g_th.values.cols()) {
    throw Error(ErrorKind::LengthMismatch, "correlation matrices differ in shape");
  }
  if ((g_exp.values.array() < 0.0).any() || (g_th.values.array() < 0.0).any()) {
    throw Error(ErrorKind::InvalidArgument, "correlation matrices must be non-negative");
  }
  const double mass_exp = g_exp.values.sum();
  const double mass_th = g_th.values.sum();
  if (!(mass_exp > 0.0) || !(mass_th > 0.0)) {
    throw Error(ErrorKind::ZeroMass, "correlation matrix has zero mass");
  }
  const double overlap = (g_exp.values.array() * g_th.values.array()).sqrt().sum();
  return overlap * overlap / (mass_exp * mass_th);
}

double indistinguishability_at(double delay_fs, double coherence_time_fs) {
  if (!(coherence_time_fs > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "coherence time must be positive");
  }
  const double x = delay_fs / coherence_time_fs;
  return std::exp(-0.5 * x * x);
}

double coherence_time_from_filter(double center_wavelength_nm, double fwhm_nm) {
  if (!(center_wavelength_nm > 0.0) || !(fwhm_nm > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "filter wavelength and width must be positive");
  }
  constexpr double kSpeedOfLight = 299792458.0;  // m/s
  const double lambda = center_wavelength_nm * 1e-9;
  const double fwhm_hz = kSpeedOfLight * (fwhm_nm * 1e-9) / (lambda * lambda);
  const double sigma_hz = fwhm_hz / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
  const double sigma_omega = 2.0 * std::numbers::pi * sigma_hz;
  return 1e15 / (std::sqrt(2.0) * sigma_omega);
}

std::vector<double> HomCurve::entry(std::size_t a, std::size_t b) const {
  std::vector<double> out;
  out.reserve(matrices.size());
  for (const auto& m : matrices) {
    if (a >= m.size() || b >= m.size()) throw Error(ErrorKind::IndexOutOfRange, "entry out of range");
    out.push_back(m(a, b));
  }
  return out;
}

HomCurve hom_scan(const UnitaryPropagator& u, SitePair input, std::span<const double> delays_fs,
                  double coherence_time_fs) {
  if (!(coherence_time_fs > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "coherence time must be positive");
  }
  HomCurve curve;
  curve.coherence_time_fs = coherence_time_fs;
  curve.delays_fs.assign(delays_fs.begin(), delays_fs.end());
  curve.matrices.reserve(delays_fs.size());
  for (double tau : delays_fs) {
    curve.matrices.push_back(
        partial_correlation(u, input, indistinguishability_at(tau, coherence_time_fs)));
  }
  return curve;
}

double visibility(const HomCurve& curve, SitePair entry) {
  const auto values = curve.entry(entry.first, entry.second);
  const double far = 5.0 * curve.coherence_time_fs;
  bool have_peak = false;
  double peak = 0.0;
  double baseline = 0.0;
  std::size_t baseline_points = 0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double tau = curve.delays_fs[k];
    if (tau == 0.0) {
      have_peak = true;
      peak = values[k];
    }
    if (std::abs(tau) >= far) {
      baseline += values[k];
      ++baseline_points;
    }
  }
  if (!have_peak) throw Error(ErrorKind::NoBaseline, "scan does not contain zero delay");
  if (baseline_points == 0) {
    throw Error(ErrorKind::NoBaseline, "scan range does not reach 5 coherence times");
  }
  baseline /= static_cast<double>(baseline_points);
  if (!(baseline > 0.0)) throw Error(ErrorKind::NoBaseline, "baseline is zero");
  return (peak - baseline) / baseline;
}

TwoPhotonGraph two_photon_graph(const TriangularLattice& lattice) {
  TwoPhotonGraph graph;
  graph.site_count = lattice.size();
  const auto lattice_edges = lattice.edges();
  const std::size_t n = lattice.size();
  graph.edges.reserve(2 * n * lattice_edges.size());
  for (const auto& [a, a2] : lattice_edges) {
    for (std::size_t b = 0; b < n; ++b) {
      graph.edges.emplace_back(graph.vertex_id(a, b), graph.vertex_id(a2, b));
    }
  }
  for (const auto& [b, b2] : lattice_edges) {
    for (std::size_t a = 0; a < n; ++a) {
      graph.edges.emplace_back(graph.vertex_id(a, b), graph.vertex_id(a, b2));
    }
  }
  return graph;
}

}  // namespace qwalk
