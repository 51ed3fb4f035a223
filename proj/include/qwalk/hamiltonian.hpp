#pragma once

#include <map>
#include <optional>
#include <span>

#include <Eigen/Dense>

#include "qwalk/lattice.hpp"

namespace qwalk {

/// Real symmetric tight-binding matrix in 1/mm: propagation constants on the
/// diagonal, nearest-neighbour couplings off the diagonal.
class Hamiltonian {
 public:
  /// Accepts any exactly symmetric square matrix (raw graphs, tests).
  static Hamiltonian from_matrix(Eigen::MatrixXd matrix);

  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  std::size_t site_count() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }

 private:
  explicit Hamiltonian(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {}

  Eigen::MatrixXd matrix_;
};

Hamiltonian assemble_uniform(const TriangularLattice& lattice, double beta_per_mm,
                             double coupling_per_mm);

/// Per-site propagation constants and per-edge couplings. Edges may be keyed
/// in either orientation. An adjacent pair without a key takes `fill` when
/// given and is an Error(MissingEdge) otherwise.
Hamiltonian assemble_disordered(const TriangularLattice& lattice,
                                std::span<const double> beta_per_site,
                                const std::map<Edge, double>& coupling_per_edge,
                                std::optional<double> fill = std::nullopt);

/// Uniform Hamiltonian on an arbitrary graph given as an edge list.
Hamiltonian assemble_graph(std::size_t site_count, std::span<const Edge> edges,
                           double beta_per_mm, double coupling_per_mm);

}  // namespace qwalk
