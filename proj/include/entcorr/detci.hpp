#pragma once

#include "entcorr/integrals.hpp"
#include "entcorr/scf.hpp"

#include <Eigen/Core>

#include <compare>
#include <cstdint>
#include <string_view>
#include <vector>

namespace entcorr {

// One- and two-electron integrals over molecular orbitals. eri_ab(p,q,r,s)
// is (p_alpha q_alpha | r_beta s_beta). Restricted sets hold identical
// alpha and beta blocks.
struct MOIntegrals {
  std::size_t m = 0;
  bool restricted = true;
  double core_energy = 0.0;
  Eigen::MatrixXd h_alpha;
  Eigen::MatrixXd h_beta;
  Eri4 eri_aa;
  Eri4 eri_bb;
  Eri4 eri_ab;

  static MOIntegrals restricted_set(Eigen::MatrixXd h, Eri4 eri, double core_energy);
};

// Throws InvalidArgument on an unconverged SCF result unless allow_unconverged.
MOIntegrals mo_transform(const IntegralSet& ints, const ScfResult& scf, bool allow_unconverged = false);
Eri4 transform_eri(const Eri4& ao, const Eigen::MatrixXd& C1, const Eigen::MatrixXd& C2);

using OrbitalString = std::uint32_t;  // bit i set <=> spatial orbital i occupied

inline constexpr std::size_t kMaxOrbitals = 32;

struct Determinant {
  OrbitalString alpha = 0;
  OrbitalString beta = 0;

  auto operator<=>(const Determinant&) const = default;

  // Interleaved spin-orbital occupation: bit 2i is orbital i alpha, bit 2i+1
  // orbital i beta. Creation operators in ascending bit order define the
  // phase of the determinant.
  std::uint64_t spin_orbital_bits() const noexcept;
  static Determinant from_spin_orbital_bits(std::uint64_t bits) noexcept;

  int n_alpha() const noexcept;
  int n_beta() const noexcept;
};

// Number of spin orbitals in which two determinants differ, halved.
int excitation_level(const Determinant& a, const Determinant& b) noexcept;

Determinant aufbau_determinant(int n_alpha, int n_beta);

enum class CiMode { kFci, kCisd };
std::string_view to_string(CiMode mode);

std::vector<Determinant> enumerate_determinants(std::size_t m, int n_alpha, int n_beta, CiMode mode,
                                                const Determinant& reference);

double hamiltonian_element(const Determinant& bra, const Determinant& ket, const MOIntegrals& mo);

struct CIWavefunction {
  std::vector<Determinant> dets;
  Eigen::VectorXd coeffs;
  std::size_t reference_index = 0;
  double energy = 0.0;  // includes the core energy
  std::size_t m = 0;
  int n_alpha = 0;
  int n_beta = 0;
  CiMode mode = CiMode::kFci;

  std::ptrdiff_t index_of(const Determinant& d) const;
};

Eigen::MatrixXd build_hamiltonian(const std::vector<Determinant>& dets, const MOIntegrals& mo);

// Lowest eigenpair of the dense CI Hamiltonian. The reference determinant is
// dets.front(); its coefficient is made non-negative.
CIWavefunction solve_ci(const std::vector<Determinant>& dets, const MOIntegrals& mo, double core_energy,
                        CiMode mode = CiMode::kFci);

struct OneRDM {
  Eigen::MatrixXd alpha_block;
  Eigen::MatrixXd beta_block;
};

OneRDM one_rdm(const CIWavefunction& wf);

}  // namespace entcorr
