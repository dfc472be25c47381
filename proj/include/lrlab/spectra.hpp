#pragma once

#include "lrlab/model.hpp"

namespace lrlab {

/// Eigenvalue clustering tolerance (absolute); shipped spectra are either
/// integer-spaced or separated by >> 1e-9.
constexpr double kDegeneracyTol = 1e-9;

struct GroundData {
  Eigen::VectorXd eigenvalues;  // sorted ascending
  Matrix P0;                    // ground-sector projector
  Matrix rho0;                  // P0 / tr(P0)
  double ground_energy = 0.0;
  double gap = 0.0;
  int degeneracy = 0;
  bool gapped = false;
};

/// Dense ground-sector data of H_region + lambda * V.
inline GroundData ground_data(const Interaction& psi, const SiteSet& region,
                              const std::optional<LocalOp>& perturbation = std::nullopt,
                              double lambda = 0.0) {
  LocalOp H = dense_hamiltonian(psi, region);
  if (perturbation) {
    if (!perturbation->hermitian)
      throw std::invalid_argument("ground_data: perturbation must be Hermitian");
    H.mat += lambda * embed(*perturbation, region).mat;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(H.mat);
  GroundData gd;
  gd.eigenvalues = es.eigenvalues();
  gd.ground_energy = gd.eigenvalues(0);
  int64_t dim = gd.eigenvalues.size();
  int64_t k = 1;
  while (k < dim && gd.eigenvalues(k) - gd.ground_energy <= kDegeneracyTol) ++k;
  gd.degeneracy = static_cast<int>(k);
  gd.gapped = k < dim;
  gd.gap = gd.gapped ? gd.eigenvalues(k) - gd.ground_energy : 0.0;
  gd.P0 = es.eigenvectors().leftCols(k) * es.eigenvectors().leftCols(k).adjoint();
  gd.rho0 = gd.P0 / static_cast<double>(k);
  return gd;
}

}  // namespace lrlab
