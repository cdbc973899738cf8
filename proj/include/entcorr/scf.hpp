#pragma once

#include "entcorr/integrals.hpp"

#include <Eigen/Core>

#include <string_view>
#include <vector>

namespace entcorr {

enum class ScfKind { kRhf, kUhf };
std::string_view to_string(ScfKind kind);

enum class ScfAcceleration { kDiis, kDamping };

struct ScfOptions {
  double e_tol = 1e-10;
  double d_tol = 1e-8;
  // Max-abs element of the orthonormal-basis commutator X^T(FDS - SDF)X.
  double comm_tol = 1e-7;
  int max_iter = 200;
  ScfAcceleration acceleration = ScfAcceleration::kDiis;
  int diis_size = 6;
  int diis_start = 2;  // extrapolate from the iteration after this one
  double damping = 0.5;
  // 30 degree alpha HOMO/LUMO rotation applied to the UHF guess.
  double uhf_guess_mix_deg = 30.0;
};

struct ScfResult {
  ScfKind kind = ScfKind::kRhf;
  Eigen::MatrixXd coeffs_alpha;  // columns are MOs
  Eigen::MatrixXd coeffs_beta;
  Eigen::VectorXd orbital_energies_alpha;
  Eigen::VectorXd orbital_energies_beta;
  int n_alpha = 0;
  int n_beta = 0;
  double electronic_energy = 0.0;
  double total_energy = 0.0;
  int iterations = 0;
  bool converged = false;
  double max_commutator = 0.0;
  double spin_contamination = 0.0;  // <S^2>
  std::vector<double> energy_history;  // electronic energy per iteration
};

// S^{-1/2}. Throws LinearDependence when an eigenvalue of S is below 1e-10.
Eigen::MatrixXd symmetric_orthogonalizer(const Eigen::MatrixXd& S);

ScfResult run_rhf(const IntegralSet& ints, int n_electrons, const ScfOptions& opts = {});
ScfResult run_uhf(const IntegralSet& ints, int n_alpha, int n_beta, const ScfOptions& opts = {});

// Coulomb and exchange matrices J[D], K[D] for a density D (AO basis).
Eigen::MatrixXd coulomb_matrix(const Eri4& eri, const Eigen::MatrixXd& D);
Eigen::MatrixXd exchange_matrix(const Eri4& eri, const Eigen::MatrixXd& D);

}  // namespace entcorr
