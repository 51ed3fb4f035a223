#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/hamiltonian.hpp"

namespace qwalk {

/// H = V diag(eigenvalues) V^T with orthonormal V.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};

/// Throws Error(Numerical) if the symmetric eigensolver does not converge.
SpectralDecomposition decompose(const Hamiltonian& hamiltonian);

/// U(z) = exp(-i H z) together with the spectral factorization it came from.
class UnitaryPropagator {
 public:
  UnitaryPropagator(std::shared_ptr<const SpectralDecomposition> spectrum, double z_mm);

  const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
  double z_mm() const noexcept { return z_mm_; }
  const SpectralDecomposition& spectrum() const noexcept { return *spectrum_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }

  std::complex<double> operator()(std::size_t out, std::size_t in) const {
    return matrix_(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in));
  }

 private:
  std::shared_ptr<const SpectralDecomposition> spectrum_;
  double z_mm_;
  Eigen::MatrixXcd matrix_;
};

/// Decomposes once, then produces U(z) for any number of lengths.
class Evolver {
 public:
  explicit Evolver(const Hamiltonian& hamiltonian);

  UnitaryPropagator at(double z_mm) const { return UnitaryPropagator(spectrum_, z_mm); }
  const SpectralDecomposition& spectrum() const noexcept { return *spectrum_; }

 private:
  std::shared_ptr<const SpectralDecomposition> spectrum_;
};

UnitaryPropagator evolve(const Hamiltonian& hamiltonian, double z_mm);

/// max |U^dagger U - I| over all entries.
double unitarity_deviation(const Eigen::MatrixXcd& u);

/// p_j = |U(j, input)|^2.
std::vector<double> single_photon_probabilities(const UnitaryPropagator& u, std::size_t input_site);

/// (sum_j sqrt(p_j q_j))^2 / (sum_j p_j * sum_j q_j); 1 iff proportional.
double distribution_similarity(std::span<const double> p_exp, std::span<const double> p_th);

}  // namespace qwalk
