#include "qwalk/propagator.hpp"

#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Eigenvalues>

#include "qwalk/error.hpp"

namespace qwalk {

SpectralDecomposition decompose(const Hamiltonian& hamiltonian) {
  const Eigen::MatrixXd& h = hamiltonian.matrix();
  if (h != h.transpose()) {
    throw Error(ErrorKind::InvalidArgument, "Hamiltonian must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::Numerical, "symmetric eigendecomposition did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

UnitaryPropagator::UnitaryPropagator(std::shared_ptr<const SpectralDecomposition> spectrum, double z_mm)
    : spectrum_(std::move(spectrum)), z_mm_(z_mm) {
  if (!(z_mm >= 0.0) || !std::isfinite(z_mm)) {
    throw Error(ErrorKind::InvalidArgument, "evolution length must be finite and >= 0");
  }
  const Eigen::Index n = spectrum_->eigenvectors.rows();
  if (z_mm == 0.0) {
    // V V^T is only orthogonal to rounding; U(0) is the exact identity.
    matrix_ = Eigen::MatrixXcd::Identity(n, n);
    return;
  }
  const Eigen::MatrixXcd v = spectrum_->eigenvectors.cast<std::complex<double>>();
  Eigen::VectorXcd phases(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    phases(k) = std::polar(1.0, -spectrum_->eigenvalues(k) * z_mm);
  }
  matrix_ = v * phases.asDiagonal() * v.transpose();
}

Evolver::Evolver(const Hamiltonian& hamiltonian)
    : spectrum_(std::make_shared<const SpectralDecomposition>(decompose(hamiltonian))) {}

UnitaryPropagator evolve(const Hamiltonian& hamiltonian, double z_mm) {
  return Evolver(hamiltonian).at(z_mm);
}

double unitarity_deviation(const Eigen::MatrixXcd& u) {
  const Eigen::MatrixXcd d = u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols());
  return d.cwiseAbs().maxCoeff();
}

std::vector<double> single_photon_probabilities(const UnitaryPropagator& u, std::size_t input_site) {
  if (input_site >= u.size()) {
    throw Error(ErrorKind::IndexOutOfRange,
                "input site " + std::to_string(input_site) + " out of range");
  }
  std::vector<double> p(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) p[j] = std::norm(u(j, input_site));
  return p;
}

double distribution_similarity(std::span<const double> p_exp, std::span<const double> p_th) {
  if (p_exp.size() != p_th.size()) {
    throw Error(ErrorKind::LengthMismatch, "distributions differ in length");
  }
  double overlap = 0.0;
  double mass_exp = 0.0;
  double mass_th = 0.0;
  for (std::size_t j = 0; j < p_exp.size(); ++j) {
    if (p_exp[j] < 0.0 || p_th[j] < 0.0) {
      throw Error(ErrorKind::InvalidArgument, "distributions must be non-negative");
    }
    overlap += std::sqrt(p_exp[j] * p_th[j]);
    mass_exp += p_exp[j];
    mass_th += p_th[j];
  }
  if (!(mass_exp > 0.0) || !(mass_th > 0.0)) {
    throw Error(ErrorKind::ZeroMass, "distribution has zero total mass");
  }
  return overlap * overlap / (mass_exp * mass_th);
}

}  // namespace qwalk
