#include "entcorr/detci.hpp"

#include "entcorr/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

namespace entcorr {

namespace {

// Spin-orbital views of MO integrals. Spin orbital k is spatial k/2 with
// spin k%2 (0 alpha, 1 beta).
class SpinOrbitalIntegrals {
 public:
  explicit SpinOrbitalIntegrals(const MOIntegrals& mo) : mo_(mo) {}

  double h(int p, int q) const {
    if ((p & 1) != (q & 1)) return 0.0;
    const auto& hb = (p & 1) ? mo_.h_beta : mo_.h_alpha;
    return hb(p >> 1, q >> 1);
  }

  // Chemists' (pq|rs) over spin orbitals.
  double chem(int p, int q, int r, int s) const {
    if ((p & 1) != (q & 1) || (r & 1) != (s & 1)) return 0.0;
    const std::size_t i = p >> 1, j = q >> 1, k = r >> 1, l = s >> 1;
    const bool b1 = p & 1, b2 = r & 1;
    if (!b1 && !b2) return mo_.eri_aa(i, j, k, l);
    if (b1 && b2) return mo_.eri_bb(i, j, k, l);
    if (!b1) return mo_.eri_ab(i, j, k, l);
    return mo_.eri_ab(k, l, i, j);
  }

  // <pq||rs> = <pq|rs> - <pq|sr>, with <pq|rs> = (pr|qs).
  double antisym(int p, int q, int r, int s) const { return chem(p, r, q, s) - chem(p, s, q, r); }

 private:
  const MOIntegrals& mo_;
};

inline int parity_below(std::uint64_t bits, int k) {
  const std::uint64_t mask = (std::uint64_t{1} << k) - 1;
  return std::popcount(bits & mask) & 1;
}

// Applies a_k (create=false) or a^dagger_k to |bits>; returns the sign and
// updates bits. Caller guarantees the operation is allowed.
inline int apply(std::uint64_t& bits, int k, bool create) {
  const int s = parity_below(bits, k) ? -1 : 1;
  if (create)
    bits |= std::uint64_t{1} << k;
  else
    bits &= ~(std::uint64_t{1} << k);
  return s;
}

std::vector<int> set_bits(std::uint64_t bits) {
  std::vector<int> out;
  while (bits) {
    out.push_back(std::countr_zero(bits));
    bits &= bits - 1;
  }
  return out;
}

std::vector<OrbitalString> strings(std::size_t m, int n) {
  std::vector<OrbitalString> out;
  const std::uint64_t limit = std::uint64_t{1} << m;
  for (std::uint64_t s = 0; s < limit; ++s)
    if (std::popcount(s) == n) out.push_back(static_cast<OrbitalString>(s));
  return out;
}

}  // namespace

MOIntegrals MOIntegrals::restricted_set(Eigen::MatrixXd h, Eri4 eri, double core_energy) {
  MOIntegrals mo;
  mo.m = static_cast<std::size_t>(h.rows());
  mo.restricted = true;
  mo.core_energy = core_energy;
  mo.h_alpha = h;
  mo.h_beta = std::move(h);
  mo.eri_aa = eri;
  mo.eri_bb = eri;
  mo.eri_ab = std::move(eri);
  return mo;
}

Eri4 transform_eri(const Eri4& ao, const Eigen::MatrixXd& C1, const Eigen::MatrixXd& C2) {
  const std::size_t n = ao.dim();
  const std::size_t m = static_cast<std::size_t>(C1.cols());
  if (static_cast<std::size_t>(C1.rows()) != n || static_cast<std::size_t>(C2.rows()) != n ||
      C2.cols() != C1.cols())
    throw InvalidArgument("coefficient matrices do not match the AO tensor");
  // Quarter transformations, one index at a time.
  auto idx = [](std::size_t d, std::size_t a, std::size_t b, std::size_t c, std::size_t e) {
    return ((a * d + b) * d + c) * d + e;
  };
  const std::size_t d = std::max(n, m);
  std::vector<double> a(d * d * d * d, 0.0), b(d * d * d * d, 0.0);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) a[idx(d, p, q, r, s)] = ao(p, q, r, s);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t p = 0; p < n; ++p) {
      const double c = C1(p, i);
      if (c == 0.0) continue;
      for (std::size_t q = 0; q < n; ++q)
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t s = 0; s < n; ++s) b[idx(d, i, q, r, s)] += c * a[idx(d, p, q, r, s)];
    }
  std::fill(a.begin(), a.end(), 0.0);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t q = 0; q < n; ++q) {
      const double c = C1(q, j);
      if (c == 0.0) continue;
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t s = 0; s < n; ++s) a[idx(d, i, j, r, s)] += c * b[idx(d, i, q, r, s)];
    }
  std::fill(b.begin(), b.end(), 0.0);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t r = 0; r < n; ++r) {
      const double c = C2(r, k);
      if (c == 0.0) continue;
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
          for (std::size_t s = 0; s < n; ++s) b[idx(d, i, j, k, s)] += c * a[idx(d, i, j, r, s)];
    }
  Eri4 out(m);
  for (std::size_t l = 0; l < m; ++l)
    for (std::size_t s = 0; s < n; ++s) {
      const double c = C2(s, l);
      if (c == 0.0) continue;
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
          for (std::size_t k = 0; k < m; ++k) out(i, j, k, l) += c * b[idx(d, i, j, k, s)];
    }
  return out;
}

MOIntegrals mo_transform(const IntegralSet& ints, const ScfResult& scf, bool allow_unconverged) {
  if (!scf.converged && !allow_unconverged)
    throw InvalidArgument("refusing to transform integrals with an unconverged SCF result");
  if (static_cast<std::size_t>(scf.coeffs_alpha.rows()) != ints.n)
    throw InvalidArgument("SCF coefficients do not match the integral set");
  const Eigen::MatrixXd H = ints.core_hamiltonian();
  const Eigen::MatrixXd& Ca = scf.coeffs_alpha;
  const Eigen::MatrixXd& Cb = scf.coeffs_beta;
  if (scf.kind == ScfKind::kRhf)
    return MOIntegrals::restricted_set(Ca.transpose() * H * Ca, transform_eri(ints.eri, Ca, Ca),
                                       ints.core_energy);
  MOIntegrals mo;
  mo.m = static_cast<std::size_t>(Ca.cols());
  mo.restricted = false;
  mo.core_energy = ints.core_energy;
  mo.h_alpha = Ca.transpose() * H * Ca;
  mo.h_beta = Cb.transpose() * H * Cb;
  mo.eri_aa = transform_eri(ints.eri, Ca, Ca);
  mo.eri_bb = transform_eri(ints.eri, Cb, Cb);
  mo.eri_ab = transform_eri(ints.eri, Ca, Cb);
  return mo;
}

std::uint64_t Determinant::spin_orbital_bits() const noexcept {
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < kMaxOrbitals; ++i) {
    if (alpha >> i & 1u) bits |= std::uint64_t{1} << (2 * i);
    if (beta >> i & 1u) bits |= std::uint64_t{1} << (2 * i + 1);
  }
  return bits;
}

Determinant Determinant::from_spin_orbital_bits(std::uint64_t bits) noexcept {
  Determinant d;
  for (std::size_t i = 0; i < kMaxOrbitals; ++i) {
    if (bits >> (2 * i) & 1u) d.alpha |= OrbitalString{1} << i;
    if (bits >> (2 * i + 1) & 1u) d.beta |= OrbitalString{1} << i;
  }
  return d;
}

int Determinant::n_alpha() const noexcept { return std::popcount(alpha); }
int Determinant::n_beta() const noexcept { return std::popcount(beta); }

int excitation_level(const Determinant& a, const Determinant& b) noexcept {
  return (std::popcount(a.alpha ^ b.alpha) + std::popcount(a.beta ^ b.beta)) / 2;
}

Determinant aufbau_determinant(int n_alpha, int n_beta) {
  if (n_alpha < 0 || n_beta < 0 || n_alpha > 32 || n_beta > 32)
    throw InvalidArgument("electron counts out of range");
  auto fill = [](int n) { return n == 32 ? ~OrbitalString{0} : (OrbitalString{1} << n) - 1; };
  return {fill(n_alpha), fill(n_beta)};
}

std::string_view to_string(CiMode mode) { return mode == CiMode::kFci ? "FCI" : "CISD"; }

std::vector<Determinant> enumerate_determinants(std::size_t m, int n_alpha, int n_beta, CiMode mode,
                                                const Determinant& reference) {
  if (m == 0 || m > kMaxOrbitals) throw InvalidArgument("orbital count must be in [1, 32]");
  if (n_alpha < 0 || n_beta < 0 || static_cast<std::size_t>(n_alpha) > m ||
      static_cast<std::size_t>(n_beta) > m)
    throw InvalidArgument("electron counts exceed the orbital count");
  if (reference.n_alpha() != n_alpha || reference.n_beta() != n_beta ||
      (reference.alpha >> m) != 0 || (reference.beta >> m) != 0)
    throw InvalidArgument("reference determinant does not belong to this CI space");
  const auto sa = strings(m, n_alpha);
  const auto sb = strings(m, n_beta);
  std::vector<Determinant> dets{reference};
  for (auto a : sa)
    for (auto b : sb) {
      const Determinant d{a, b};
      if (d == reference) continue;
      if (mode == CiMode::kCisd && excitation_level(d, reference) > 2) continue;
      dets.push_back(d);
    }
  return dets;
}

double hamiltonian_element(const Determinant& bra, const Determinant& ket, const MOIntegrals& mo) {
  if (bra.n_alpha() != ket.n_alpha() || bra.n_beta() != ket.n_beta())
    throw InvalidArgument("determinants have different electron counts");
  const int level = excitation_level(bra, ket);
  if (level > 2) return 0.0;
  const SpinOrbitalIntegrals so(mo);
  const std::uint64_t kb = ket.spin_orbital_bits();
  const std::uint64_t bb = bra.spin_orbital_bits();

  if (level == 0) {
    const auto occ = set_bits(kb);
    double e = 0.0;
    for (int p : occ) e += so.h(p, p);
    for (std::size_t i = 0; i < occ.size(); ++i)
      for (std::size_t j = i + 1; j < occ.size(); ++j) e += so.antisym(occ[i], occ[j], occ[i], occ[j]);
    return e;
  }

  const auto holes = set_bits(kb & ~bb);      // occupied in ket only
  const auto particles = set_bits(bb & ~kb);  // occupied in bra only
  if (level == 1) {
    const int p = holes[0], r = particles[0];
    std::uint64_t bits = kb;
    int sign = apply(bits, p, false);
    sign *= apply(bits, r, true);
    double v = so.h(r, p);
    for (int q : set_bits(kb & bb)) v += so.antisym(r, q, p, q);
    return sign * v;
  }

  const int p = holes[0], q = holes[1], r = particles[0], s = particles[1];
  std::uint64_t bits = kb;
  int sign = apply(bits, p, false);
  sign *= apply(bits, q, false);
  sign *= apply(bits, s, true);
  sign *= apply(bits, r, true);
  return sign * so.antisym(r, s, p, q);
}

std::ptrdiff_t CIWavefunction::index_of(const Determinant& d) const {
  auto it = std::find(dets.begin(), dets.end(), d);
  return it == dets.end() ? -1 : it - dets.begin();
}

Eigen::MatrixXd build_hamiltonian(const std::vector<Determinant>& dets, const MOIntegrals& mo) {
  const auto n = static_cast<Eigen::Index>(dets.size());
  Eigen::MatrixXd H(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = hamiltonian_element(dets[static_cast<std::size_t>(i)], dets[static_cast<std::size_t>(j)], mo);
      H(i, j) = v;
      H(j, i) = v;
    }
  return H;
}

CIWavefunction solve_ci(const std::vector<Determinant>& dets, const MOIntegrals& mo, double core_energy,
                        CiMode mode) {
  if (dets.empty()) throw InvalidArgument("empty determinant list");
  const Eigen::MatrixXd H = build_hamiltonian(dets, mo);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  if (es.info() != Eigen::Success) throw NumericalError("CI eigensolver failed");
  const Eigen::VectorXd& w = es.eigenvalues();
  if (!w.allFinite()) throw NumericalError("CI eigensolver returned non-finite eigenvalues");

  // Ground eigenspace; within it take the normalized projection of the
  // lowest-index determinant that has weight there (normally the reference).
  const double tol = 1e-9 * std::max(1.0, std::abs(w(0)));
  Eigen::Index k = 1;
  while (k < w.size() && w(k) - w(0) < tol) ++k;
  const Eigen::MatrixXd V = es.eigenvectors().leftCols(k);
  Eigen::VectorXd c;
  if (k == 1) {
    c = V.col(0);
  } else {
    for (Eigen::Index i = 0; i < V.rows(); ++i) {
      const Eigen::VectorXd proj = V * V.row(i).transpose();
      if (proj.norm() > 1e-8) {
        c = proj.normalized();
        break;
      }
    }
  }
  Eigen::Index lead = 0;
  if (std::abs(c(0)) < 1e-14) {
    while (lead < c.size() && std::abs(c(lead)) < 1e-14) ++lead;
  }
  if (c(lead) < 0.0) c = -c;

  CIWavefunction wf;
  wf.dets = dets;
  wf.coeffs = c;
  wf.reference_index = 0;
  wf.energy = w(0) + core_energy;
  wf.m = mo.m;
  wf.n_alpha = dets.front().n_alpha();
  wf.n_beta = dets.front().n_beta();
  wf.mode = mode;
  return wf;
}

OneRDM one_rdm(const CIWavefunction& wf) {
  const auto m = static_cast<Eigen::Index>(wf.m);
  OneRDM rdm{Eigen::MatrixXd::Zero(m, m), Eigen::MatrixXd::Zero(m, m)};
  std::unordered_map<std::uint64_t, std::size_t> index;
  index.reserve(wf.dets.size() * 2);
  std::vector<std::uint64_t> bits(wf.dets.size());
  for (std::size_t i = 0; i < wf.dets.size(); ++i) {
    bits[i] = wf.dets[i].spin_orbital_bits();
    index.emplace(bits[i], i);
  }
  for (std::size_t j = 0; j < wf.dets.size(); ++j) {
    const double cj = wf.coeffs(static_cast<Eigen::Index>(j));
    if (cj == 0.0) continue;
    for (int q : set_bits(bits[j])) {
      for (int p = q & 1; p < 2 * m; p += 2) {
        std::uint64_t b = bits[j];
        int sign = apply(b, q, false);
        if (b >> p & 1u) continue;
        sign *= apply(b, p, true);
        auto it = index.find(b);
        if (it == index.end()) continue;
        const double v = sign * wf.coeffs(static_cast<Eigen::Index>(it->second)) * cj;
        auto& block = (q & 1) ? rdm.beta_block : rdm.alpha_block;
        block(p >> 1, q >> 1) += v;
      }
    }
  }
  return rdm;
}

}  // namespace entcorr
