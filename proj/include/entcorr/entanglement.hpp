#pragma once

#include "entcorr/detci.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

namespace entcorr {

// Two-electron amplitudes: |Psi> = sum_{a,b} omega(a,b) c_a^dag c_b^dag |0>
// over spin orbitals in interleaved order (index 0 is orbital 1 up,
// index 1 orbital 1 down, ...). Antisymmetric, 2 * sum_{a,b} omega^2 = 1.
struct AmplitudeMatrix {
  Eigen::MatrixXd omega;
};

AmplitudeMatrix omega_from_ci(const CIWavefunction& wf);

// Spin-orbital mode k is spatial orbital k/2, up for even k.
std::string mode_label(int mode);

// Density matrix over the occupation-number basis of an ordered list of
// modes. Basis state index bit (K-1-i) holds the occupation of modes[i], so
// the first mode is the most significant digit: for modes {1up, 1down} the
// basis reads |00>, |01>, |10>, |11>.
struct FockDensityMatrix {
  std::vector<int> modes;
  Eigen::MatrixXd matrix;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix.rows()); }
};

// Largest Fock space fock_density will materialize (2^12 states, m <= 6).
inline constexpr std::size_t kMaxFockModes = 12;

Eigen::VectorXd fock_state_vector(const CIWavefunction& wf);
FockDensityMatrix fock_density(const CIWavefunction& wf);

// Sums over the occupations of every mode not in keep. The kept modes retain
// their order in rho.modes.
FockDensityMatrix partial_trace(const FockDensityMatrix& rho, const std::vector<int>& keep);

struct Rho1 {
  Eigen::Matrix2d matrix;  // unit trace; basis |n_1up = 0>, |n_1up = 1>
  double raw_trace = 0.0;  // trace before renormalization
};

// Occupation of orbital 1 up from excitation classes relative to the
// reference |1up 1down>: diag(sum |c_1^r|^2 + sum |c_12^rs|^2,
// |c_0|^2 + sum |c_2^r|^2).
Rho1 rho1_cisd_closed_form(const CIWavefunction& wf);

// -tr(rho log2 rho) in bits; eigenvalues <= 1e-12 contribute nothing.
double von_neumann_entropy(const Eigen::MatrixXd& rho);

// -(1/2)(sum a_i log2 a_i + sum b_i log2 b_i) over one-RDM eigenvalues.
double nso_entropy(const OneRDM& rdm);
Eigen::VectorXd natural_occupations(const Eigen::MatrixXd& block);

double correlation_energy(double e_exact, double e_hf);

struct EntropyReport {
  std::string basis;
  std::string ci_method;
  std::string orbitals;  // reference the CI was expanded in
  std::optional<double> s_rho1_cisd;
  std::optional<double> s_rho1_raw_trace;
  double s_nso = 0.0;
  std::optional<double> e_hf_rhf;
  std::optional<double> e_hf_uhf;
  double e_fci = 0.0;
  std::optional<double> e_c_rhf;
  std::optional<double> e_c_uhf;
  bool rhf_converged = true;
  bool uhf_converged = true;
  std::optional<double> uhf_s2;

  bool converged() const noexcept { return rhf_converged && uhf_converged; }
};

// Fills the entropy and correlation-energy fields from a solved CI state
// and whichever Hartree-Fock energies are available.
EntropyReport make_entropy_report(const CIWavefunction& wf, std::optional<double> e_rhf,
                                  std::optional<double> e_uhf, std::string basis, std::string orbitals);

struct InteractionQuantities {
  double e_c_int = 0.0;
  double s_int = 0.0;
};

// E_c[dimer] - 2 E_c[monomer] and S_nso[dimer] - 2 S_nso[monomer]. The UHF
// correlation energy is used when both reports carry it, RHF otherwise.
InteractionQuantities interaction_quantities(const EntropyReport& dimer, const EntropyReport& monomer);

}  // namespace entcorr
