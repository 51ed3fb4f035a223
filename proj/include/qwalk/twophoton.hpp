#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/lattice.hpp"
#include "qwalk/propagator.hpp"

namespace qwalk {

/// Which formula produced a correlation matrix.
enum class Convention {
  Quantum,          // indistinguishable photons, unordered-normalized
  ClassicalProduct,   // p p + p p, diagonal 2 p p
  PhysicalPartial,  // partial distinguishability, diagonal (1 + I) |U U|^2
  Estimated,        // reconstructed from coincidence counts
};

const char* to_string(Convention convention) noexcept;

/// Symmetric N x N matrix of two-photon coincidence probabilities.
struct CorrelationMatrix {
  Eigen::MatrixXd values;
  Convention convention = Convention::Quantum;

  std::size_t size() const noexcept { return static_cast<std::size_t>(values.rows()); }
  double operator()(std::size_t a, std::size_t b) const {
    return values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
  }
};

/// Input sites of a photon pair (already resolved from port labels).
struct SitePair {
  std::size_t first = 0;
  std::size_t second = 0;
};

struct PhotonPairInput {
  int port_a = -1;
  int port_b = 1;
  double indistinguishability = 1.0;
};

SitePair resolve_ports(const TriangularLattice& lattice, const PhotonPairInput& input);

/// Gamma_{a,b} = |U_{a,i} U_{b,j} + U_{a,j} U_{b,i}|^2 / ((1 + d_ab)(1 + d_ij)).
/// The input factor only matters when both photons enter the same site.
CorrelationMatrix quantum_correlation(const UnitaryPropagator& u, SitePair input);

/// Gamma^c_{a,b} = p_{a,i} p_{b,j} + p_{a,j} p_{b,i}, evaluated literally
/// (so the diagonal is 2 p_{m,i} p_{m,j} and the matrix is not normalized).
CorrelationMatrix classical_correlation(const UnitaryPropagator& u, SitePair input);

/// Partially distinguishable pair with overlap I in [0, 1]. Off-diagonal
/// |A|^2 + |B|^2 + 2 I Re(A conj(B)), diagonal (1 + I) |U_{m,i} U_{m,j}|^2.
CorrelationMatrix partial_correlation(const UnitaryPropagator& u, SitePair input,
                                      double indistinguishability);

CorrelationMatrix quantum_correlation(const UnitaryPropagator& u, const TriangularLattice& lattice,
                                      const PhotonPairInput& input);
CorrelationMatrix classical_correlation(const UnitaryPropagator& u, const TriangularLattice& lattice,
                                        const PhotonPairInput& input);
CorrelationMatrix partial_correlation(const UnitaryPropagator& u, const TriangularLattice& lattice,
                                      const PhotonPairInput& input);

/// Sum over unordered output pairs a <= b.
double unordered_sum(const CorrelationMatrix& gamma);

/// Rescales so the unordered sum is 1. Throws Error(ZeroMass).
CorrelationMatrix normalized(CorrelationMatrix gamma);

/// n(n-1)/2, plus n when diagonals are counted.
std::size_t unordered_pair_count(std::size_t n, bool include_diagonal);

/// (sum sqrt(G_exp G_th))^2 / (sum G_exp * sum G_th) over all entries.
double matrix_similarity(const CorrelationMatrix& g_exp, const CorrelationMatrix& g_th);

// --- HOM scan ---------------------------------------------------------------

/// I(tau) = exp(-tau^2 / (2 sigma^2)).
double indistinguishability_at(double delay_fs, double coherence_time_fs);

/// Coherence time sigma_tau (fs) of photons passing a Gaussian band-pass
/// filter: sigma_tau = 1 / (sqrt(2) sigma_omega), sigma_omega being the
/// angular-frequency standard deviation of the filtered power spectrum.
double coherence_time_from_filter(double center_wavelength_nm, double fwhm_nm);

struct HomCurve {
  std::vector<double> delays_fs;
  std::vector<CorrelationMatrix> matrices;
  double coherence_time_fs = 0.0;

  /// The selected entry as a function of delay.
  std::vector<double> entry(std::size_t a, std::size_t b) const;
};

HomCurve hom_scan(const UnitaryPropagator& u, SitePair input, std::span<const double> delays_fs,
                  double coherence_time_fs);

/// (value at tau = 0 - baseline) / baseline; the baseline averages all delays
/// with |tau| >= 5 sigma. Throws Error(NoBaseline) if either is missing.
double visibility(const HomCurve& curve, SitePair entry);

// --- two-photon product graph -----------------------------------------------

/// Graph on ordered site pairs (a, b); edges are single-photon hops of either
/// coordinate. Vertex id of (a, b) is a * N + b.
struct TwoPhotonGraph {
  std::size_t site_count = 0;
  std::vector<Edge> edges;

  std::size_t vertex_count() const noexcept { return site_count * site_count; }
  std::size_t edge_count() const noexcept { return edges.size(); }
  std::size_t vertex_id(std::size_t a, std::size_t b) const noexcept { return a * site_count + b; }
  std::pair<std::size_t, std::size_t> vertex(std::size_t id) const noexcept {
    return {id / site_count, id % site_count};
  }
  bool is_bunching(std::size_t id) const noexcept { return id / site_count == id % site_count; }
};

TwoPhotonGraph two_photon_graph(const TriangularLattice& lattice);

}  // namespace qwalk
