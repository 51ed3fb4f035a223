#include "qwalk/hamiltonian.hpp"

#include <cmath>
#include <string>

#include "qwalk/error.hpp"

namespace qwalk {

Hamiltonian Hamiltonian::from_matrix(Eigen::MatrixXd matrix) {
  if (matrix.rows() != matrix.cols()) {
    throw Error(ErrorKind::InvalidArgument, "Hamiltonian must be square");
  }
  if (!matrix.allFinite()) {
    throw Error(ErrorKind::InvalidArgument, "Hamiltonian has non-finite entries");
  }
  if (matrix != matrix.transpose()) {
    throw Error(ErrorKind::InvalidArgument, "Hamiltonian must be symmetric");
  }
  return Hamiltonian(std::move(matrix));
}

Hamiltonian assemble_uniform(const TriangularLattice& lattice, double beta_per_mm,
                             double coupling_per_mm) {
  const auto edges = lattice.edges();
  return assemble_graph(lattice.size(), edges, beta_per_mm, coupling_per_mm);
}

Hamiltonian assemble_graph(std::size_t site_count, std::span<const Edge> edges,
                           double beta_per_mm, double coupling_per_mm) {
  if (!(coupling_per_mm >= 0.0) || !std::isfinite(coupling_per_mm) || !std::isfinite(beta_per_mm)) {
    throw Error(ErrorKind::InvalidArgument, "coupling must be finite and non-negative");
  }
  const auto n = static_cast<Eigen::Index>(site_count);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  h.diagonal().setConstant(beta_per_mm);
  for (const auto& [a, b] : edges) {
    if (a >= site_count || b >= site_count || a == b) {
      throw Error(ErrorKind::InvalidArgument, "graph edge out of range or self-loop");
    }
    h(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = coupling_per_mm;
    h(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = coupling_per_mm;
  }
  return Hamiltonian::from_matrix(std::move(h));
}

Hamiltonian assemble_disordered(const TriangularLattice& lattice,
                                std::span<const double> beta_per_site,
                                const std::map<Edge, double>& coupling_per_edge,
                                std::optional<double> fill) {
  const std::size_t n = lattice.size();
  if (beta_per_site.size() != n) {
    throw Error(ErrorKind::LengthMismatch, "expected " + std::to_string(n) +
                                               " propagation constants, got " +
                                               std::to_string(beta_per_site.size()));
  }

  std::map<Edge, double> couplings;
  for (const auto& [edge, value] : coupling_per_edge) {
    const auto [a, b] = edge;
    if (a >= n || b >= n || !lattice.adjacent(a, b)) {
      throw Error(ErrorKind::EdgeNotAdjacent, "edge (" + std::to_string(a) + ", " +
                                                  std::to_string(b) + ") is not a lattice edge");
    }
    couplings[{std::min(a, b), std::max(a, b)}] = value;
  }

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = beta_per_site[i];
  }
  for (const auto& edge : lattice.edges()) {
    double value = 0.0;
    if (const auto it = couplings.find(edge); it != couplings.end()) {
      value = it->second;
    } else if (fill) {
      value = *fill;
    } else {
      throw Error(ErrorKind::MissingEdge, "no coupling for edge (" + std::to_string(edge.first) +
                                              ", " + std::to_string(edge.second) + ")");
    }
    const auto a = static_cast<Eigen::Index>(edge.first);
    const auto b = static_cast<Eigen::Index>(edge.second);
    h(a, b) = value;
    h(b, a) = value;
  }
  return Hamiltonian::from_matrix(std::move(h));
}

}  // namespace qwalk
