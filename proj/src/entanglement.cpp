#include "entcorr/entanglement.hpp"

#include "entcorr/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>

namespace entcorr {

namespace {

constexpr double kZeroEigenvalue = 1e-12;
constexpr double kTraceTol = 1e-8;
constexpr std::size_t kMaxVectorModes = 16;

void require_two_electrons(const CIWavefunction& wf, const char* what) {
  if (wf.n_alpha + wf.n_beta != 2)
    throw InvalidArgument(std::string(what) + " needs a two-electron wavefunction, got " +
                          std::to_string(wf.n_alpha + wf.n_beta) + " electrons");
}

// Fock index of spin-orbital occupation bits for K modes in natural order.
std::size_t fock_index(std::uint64_t bits, std::size_t n_modes) {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < n_modes; ++k)
    if (bits >> k & 1u) idx |= std::size_t{1} << (n_modes - 1 - k);
  return idx;
}

double plogp_bits(double p) { return p > kZeroEigenvalue ? p * std::log2(p) : 0.0; }

}  // namespace

AmplitudeMatrix omega_from_ci(const CIWavefunction& wf) {
  require_two_electrons(wf, "omega_from_ci");
  const auto n = static_cast<Eigen::Index>(2 * wf.m);
  AmplitudeMatrix amp{Eigen::MatrixXd::Zero(n, n)};
  for (std::size_t i = 0; i < wf.dets.size(); ++i) {
    const std::uint64_t bits = wf.dets[i].spin_orbital_bits();
    const int a = std::countr_zero(bits);
    const int b = std::countr_zero(bits & (bits - 1));
    const double c = wf.coeffs(static_cast<Eigen::Index>(i));
    amp.omega(a, b) += 0.5 * c;
    amp.omega(b, a) -= 0.5 * c;
  }
  return amp;
}

std::string mode_label(int mode) {
  return "n" + std::to_string(mode / 2 + 1) + ((mode % 2 == 0) ? "up" : "down");
}

Eigen::VectorXd fock_state_vector(const CIWavefunction& wf) {
  const std::size_t k = 2 * wf.m;
  if (k > kMaxVectorModes)
    throw SizeError("Fock space of " + std::to_string(k) + " modes exceeds the 2^16 state limit");
  Eigen::VectorXd psi = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(std::size_t{1} << k));
  for (std::size_t i = 0; i < wf.dets.size(); ++i)
    psi(static_cast<Eigen::Index>(fock_index(wf.dets[i].spin_orbital_bits(), k))) +=
        wf.coeffs(static_cast<Eigen::Index>(i));
  return psi;
}

FockDensityMatrix fock_density(const CIWavefunction& wf) {
  const std::size_t k = 2 * wf.m;
  if (k > kMaxFockModes)
    throw SizeError("dense Fock density over " + std::to_string(k) + " modes exceeds the 2^" +
                    std::to_string(kMaxFockModes) + " state limit");
  const Eigen::VectorXd psi = fock_state_vector(wf);
  FockDensityMatrix rho;
  rho.modes.resize(k);
  for (std::size_t i = 0; i < k; ++i) rho.modes[i] = static_cast<int>(i);
  rho.matrix = psi * psi.transpose();
  return rho;
}

FockDensityMatrix partial_trace(const FockDensityMatrix& rho, const std::vector<int>& keep) {
  if (keep.empty()) throw InvalidArgument("partial_trace: keep set is empty");
  const std::size_t n_modes = rho.modes.size();
  if (rho.dim() != (std::size_t{1} << n_modes)) throw InvalidArgument("density/mode list size mismatch");

  std::vector<bool> kept(n_modes, false);
  for (int mode : keep) {
    auto it = std::find(rho.modes.begin(), rho.modes.end(), mode);
    if (it == rho.modes.end()) throw InvalidArgument("partial_trace: unknown mode " + mode_label(mode));
    const auto pos = static_cast<std::size_t>(it - rho.modes.begin());
    if (kept[pos]) throw InvalidArgument("partial_trace: mode listed twice: " + mode_label(mode));
    kept[pos] = true;
  }

  // Bit positions (in the full index) of kept and traced modes, most
  // significant first.
  std::vector<std::size_t> kept_bits, traced_bits;
  FockDensityMatrix out;
  for (std::size_t i = 0; i < n_modes; ++i) {
    const std::size_t bit = n_modes - 1 - i;
    if (kept[i]) {
      kept_bits.push_back(bit);
      out.modes.push_back(rho.modes[i]);
    } else {
      traced_bits.push_back(bit);
    }
  }
  auto scatter = [](std::size_t value, const std::vector<std::size_t>& bits) {
    std::size_t idx = 0;
    const std::size_t n = bits.size();
    for (std::size_t j = 0; j < n; ++j)
      if (value >> (n - 1 - j) & 1u) idx |= std::size_t{1} << bits[j];
    return idx;
  };

  const std::size_t dk = std::size_t{1} << kept_bits.size();
  const std::size_t dt = std::size_t{1} << traced_bits.size();
  std::vector<std::size_t> kidx(dk);
  for (std::size_t a = 0; a < dk; ++a) kidx[a] = scatter(a, kept_bits);
  out.matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
  for (std::size_t t = 0; t < dt; ++t) {
    const std::size_t tidx = scatter(t, traced_bits);
    for (std::size_t a = 0; a < dk; ++a)
      for (std::size_t b = 0; b < dk; ++b)
        out.matrix(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) +=
            rho.matrix(static_cast<Eigen::Index>(kidx[a] | tidx), static_cast<Eigen::Index>(kidx[b] | tidx));
  }
  return out;
}

Rho1 rho1_cisd_closed_form(const CIWavefunction& wf) {
  require_two_electrons(wf, "rho1_cisd_closed_form");
  const Determinant ref{1u, 1u};
  if (wf.n_alpha != 1 || wf.n_beta != 1 || wf.dets.empty() || wf.dets[wf.reference_index] != ref)
    throw InvalidArgument("rho1_cisd_closed_form needs one up and one down electron with reference |1up 1down>");

  double c0 = 0.0, singles_up = 0.0, singles_down = 0.0, doubles = 0.0;
  for (std::size_t i = 0; i < wf.dets.size(); ++i) {
    const double c2 = std::pow(wf.coeffs(static_cast<Eigen::Index>(i)), 2);
    const Determinant& d = wf.dets[i];
    const bool up_stays = d.alpha == 1u;
    const bool down_stays = d.beta == 1u;
    if (up_stays && down_stays)
      c0 += c2;
    else if (down_stays)
      singles_up += c2;  // c_1^{2i+1}: orbital 1 up excited
    else if (up_stays)
      singles_down += c2;  // c_2^{2i+2}
    else
      doubles += c2;  // c_{1,2}^{2i+1,2j+2}
  }
  Rho1 out;
  const double empty = singles_up + doubles;
  const double occupied = c0 + singles_down;
  out.raw_trace = empty + occupied;
  if (!(out.raw_trace > 0.0)) throw NumericalError("rho1 has zero trace");
  out.matrix << empty / out.raw_trace, 0.0, 0.0, occupied / out.raw_trace;
  return out;
}

double von_neumann_entropy(const Eigen::MatrixXd& rho) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) throw InvalidArgument("density matrix must be square");
  if (!rho.allFinite()) throw InvalidArgument("density matrix has non-finite entries");
  if (std::abs(rho.trace() - 1.0) > kTraceTol)
    throw InvalidArgument("density matrix trace " + std::to_string(rho.trace()) + " differs from 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("density matrix diagonalization failed");
  if (es.eigenvalues().minCoeff() < -kTraceTol)
    throw InvalidArgument("density matrix is not positive semidefinite");
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) s -= plogp_bits(es.eigenvalues()(i));
  return std::max(0.0, s);
}

Eigen::VectorXd natural_occupations(const Eigen::MatrixXd& block) {
  if (block.size() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("one-RDM diagonalization failed");
  return es.eigenvalues();
}

double nso_entropy(const OneRDM& rdm) {
  double sum = 0.0;
  for (const auto* block : {&rdm.alpha_block, &rdm.beta_block}) {
    const Eigen::VectorXd occ = natural_occupations(*block);
    for (Eigen::Index i = 0; i < occ.size(); ++i) sum += plogp_bits(occ(i));
  }
  return std::max(0.0, -0.5 * sum);
}

double correlation_energy(double e_exact, double e_hf) { return e_exact - e_hf; }

EntropyReport make_entropy_report(const CIWavefunction& wf, std::optional<double> e_rhf,
                                  std::optional<double> e_uhf, std::string basis, std::string orbitals) {
  EntropyReport r;
  r.basis = std::move(basis);
  r.ci_method = std::string(to_string(wf.mode));
  r.orbitals = std::move(orbitals);
  r.e_fci = wf.energy;
  r.s_nso = nso_entropy(one_rdm(wf));
  if (wf.n_alpha == 1 && wf.n_beta == 1) {
    const Rho1 rho1 = rho1_cisd_closed_form(wf);
    r.s_rho1_cisd = von_neumann_entropy(rho1.matrix);
    r.s_rho1_raw_trace = rho1.raw_trace;
  }
  r.e_hf_rhf = e_rhf;
  r.e_hf_uhf = e_uhf;
  if (e_rhf) r.e_c_rhf = correlation_energy(wf.energy, *e_rhf);
  if (e_uhf) r.e_c_uhf = correlation_energy(wf.energy, *e_uhf);
  return r;
}

InteractionQuantities interaction_quantities(const EntropyReport& dimer, const EntropyReport& monomer) {
  if (dimer.basis != monomer.basis || dimer.ci_method != monomer.ci_method)
    throw InvalidArgument("dimer (" + dimer.basis + "/" + dimer.ci_method + ") and monomer (" +
                          monomer.basis + "/" + monomer.ci_method + ") reports use different settings");
  InteractionQuantities q;
  if (dimer.e_c_uhf && monomer.e_c_uhf)
    q.e_c_int = *dimer.e_c_uhf - 2.0 * *monomer.e_c_uhf;
  else if (dimer.e_c_rhf && monomer.e_c_rhf)
    q.e_c_int = *dimer.e_c_rhf - 2.0 * *monomer.e_c_rhf;
  else
    throw InvalidArgument("dimer and monomer reports share no Hartree-Fock reference");
  q.s_int = dimer.s_nso - 2.0 * monomer.s_nso;
  return q;
}

}  // namespace entcorr
