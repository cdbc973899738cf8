#include "entcorr/scf.hpp"

#include "entcorr/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <numbers>

namespace entcorr {

namespace {

constexpr double kLinearDependenceThreshold = 1e-10;
constexpr double kDegeneracyTol = 1e-10;

struct Channel {
  int n_occ = 0;
  Eigen::MatrixXd C;
  Eigen::VectorXd eps;
  Eigen::MatrixXd D;  // C_occ C_occ^T, one electron per occupied orbital
};

// Diagonalizes F in the orthonormal basis defined by X. Orbitals are ordered
// by energy with ties kept in solver column order, and each column's largest
// component is made positive so repeated runs agree exactly.
// probe is S^{1/2} 1, the sum of all basis functions in the orthonormal
// basis. A degenerate cluster straddling the occupied/virtual boundary has no
// preferred basis (stretched bonds make sigma_g/sigma_u degenerate to machine
// precision), so it is rotated to put the combination with the largest
// overlap on probe first. That keeps symmetric solutions self-consistent.
void resolve_boundary_degeneracy(Eigen::MatrixXd& Cp, const Eigen::VectorXd& eps, int n_occ,
                                 const Eigen::VectorXd& probe) {
  const Eigen::Index n = Cp.cols();
  if (n_occ <= 0 || n_occ >= n) return;
  auto close = [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(eps(a) - eps(b)) < kDegeneracyTol * std::max(1.0, std::abs(eps(a)));
  };
  if (!close(n_occ - 1, n_occ)) return;
  Eigen::Index lo = n_occ - 1, hi = n_occ;
  while (lo > 0 && close(lo - 1, lo)) --lo;
  while (hi + 1 < n && close(hi, hi + 1)) ++hi;
  const Eigen::Index k = hi - lo + 1;
  const Eigen::MatrixXd block = Cp.middleCols(lo, k);
  const Eigen::VectorXd v = block.transpose() * probe;
  if (v.norm() < 1e-8) return;
  // Orthonormal basis of the cluster whose first vector is along v.
  Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(k, k);
  basis.col(0) = v.normalized();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
  Eigen::MatrixXd Q = qr.householderQ();
  if (Q.col(0).dot(v) < 0.0) Q.col(0) = -Q.col(0);
  Cp.middleCols(lo, k) = block * Q;
}

void diagonalize(const Eigen::MatrixXd& F, const Eigen::MatrixXd& X, const Eigen::VectorXd& probe, Channel& ch) {
  const Eigen::MatrixXd Fp = X.transpose() * F * X;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Fp);
  if (es.info() != Eigen::Success) throw NumericalError("Fock matrix diagonalization failed");
  const Eigen::Index n = Fp.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return es.eigenvalues()(a) < es.eigenvalues()(b);
  });
  Eigen::MatrixXd Cp(n, n);
  ch.eps.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Cp.col(k) = es.eigenvectors().col(order[static_cast<std::size_t>(k)]);
    ch.eps(k) = es.eigenvalues()(order[static_cast<std::size_t>(k)]);
  }
  resolve_boundary_degeneracy(Cp, ch.eps, ch.n_occ, probe);
  for (Eigen::Index k = 0; k < n; ++k) {
    auto col = Cp.col(k);
    Eigen::Index imax = 0;
    for (Eigen::Index i = 1; i < n; ++i)
      if (std::abs(col(i)) > std::abs(col(imax)) + 1e-12) imax = i;
    if (col(imax) < 0.0) col = -col;
  }
  ch.C = X * Cp;
}

void build_density(Channel& ch) {
  const auto occ = ch.C.leftCols(ch.n_occ);
  ch.D = occ * occ.transpose();
}

double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

class Diis {
 public:
  explicit Diis(int size) : size_(size) {}

  void push(std::vector<Eigen::MatrixXd> focks, std::vector<Eigen::MatrixXd> errors) {
    focks_.push_back(std::move(focks));
    errors_.push_back(std::move(errors));
    if (static_cast<int>(focks_.size()) > size_) {
      focks_.pop_front();
      errors_.pop_front();
    }
  }

  std::vector<Eigen::MatrixXd> extrapolate() {
    while (focks_.size() > 1) {
      const auto m = static_cast<Eigen::Index>(focks_.size());
      Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m + 1, m + 1);
      for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) {
          double v = 0.0;
          for (std::size_t s = 0; s < errors_[0].size(); ++s)
            v += (errors_[i][s].array() * errors_[j][s].array()).sum();
          B(i, j) = B(j, i) = v;
        }
      B.row(m).head(m).setConstant(-1.0);
      B.col(m).head(m).setConstant(-1.0);
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
      rhs(m) = -1.0;
      Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
      if (lu.isInvertible()) {
        const Eigen::VectorXd c = lu.solve(rhs);
        if (c.allFinite()) {
          std::vector<Eigen::MatrixXd> out(focks_.back().size());
          for (std::size_t s = 0; s < out.size(); ++s) {
            out[s] = Eigen::MatrixXd::Zero(focks_.back()[s].rows(), focks_.back()[s].cols());
            for (Eigen::Index i = 0; i < m; ++i) out[s] += c(i) * focks_[i][s];
          }
          return out;
        }
      }
      focks_.pop_front();
      errors_.pop_front();
    }
    return focks_.back();
  }

 private:
  int size_;
  std::deque<std::vector<Eigen::MatrixXd>> focks_;
  std::deque<std::vector<Eigen::MatrixXd>> errors_;
};

// Shared Roothaan/Pople-Nesbet driver. For RHF a single channel is used
// and its density is doubled when building the Fock matrix.
ScfResult run_scf(const IntegralSet& ints, ScfKind kind, int n_alpha, int n_beta, const ScfOptions& opts) {
  const Eigen::MatrixXd& S = ints.overlap;
  const Eigen::MatrixXd H = ints.core_hamiltonian();
  const Eigen::MatrixXd X = symmetric_orthogonalizer(S);
  const Eigen::VectorXd probe = S * X * Eigen::VectorXd::Ones(S.rows());
  const bool restricted = kind == ScfKind::kRhf;
  const std::size_t n_channels = restricted ? 1 : 2;

  std::vector<Channel> ch(n_channels);
  ch[0].n_occ = n_alpha;
  if (!restricted) ch[1].n_occ = n_beta;
  for (auto& c : ch) {
    diagonalize(H, X, probe, c);
  }
  if (!restricted && opts.uhf_guess_mix_deg != 0.0) {
    const int homo = n_alpha - 1;
    const int lumo = n_alpha;
    if (homo >= 0 && lumo < static_cast<int>(ints.n)) {
      const double t = opts.uhf_guess_mix_deg * std::numbers::pi / 180.0;
      const Eigen::VectorXd h = ch[0].C.col(homo);
      const Eigen::VectorXd l = ch[0].C.col(lumo);
      ch[0].C.col(homo) = std::cos(t) * h + std::sin(t) * l;
      ch[0].C.col(lumo) = -std::sin(t) * h + std::cos(t) * l;
    }
  }
  for (auto& c : ch) build_density(c);

  auto fock = [&](std::vector<Eigen::MatrixXd>& F) {
    F.resize(n_channels);
    if (restricted) {
      const Eigen::MatrixXd Dt = 2.0 * ch[0].D;
      F[0] = H + coulomb_matrix(ints.eri, Dt) - 0.5 * exchange_matrix(ints.eri, Dt);
    } else {
      const Eigen::MatrixXd J = coulomb_matrix(ints.eri, ch[0].D + ch[1].D);
      F[0] = H + J - exchange_matrix(ints.eri, ch[0].D);
      F[1] = H + J - exchange_matrix(ints.eri, ch[1].D);
    }
  };
  auto energy = [&](const std::vector<Eigen::MatrixXd>& F) {
    if (restricted) return ((ch[0].D).array() * (H + F[0]).array()).sum();
    double e = 0.0;
    for (std::size_t s = 0; s < 2; ++s) e += 0.5 * (ch[s].D.array() * (H + F[s]).array()).sum();
    return e;
  };

  ScfResult res;
  res.kind = kind;
  res.n_alpha = n_alpha;
  res.n_beta = n_beta;

  Diis diis(opts.diis_size);
  std::vector<Eigen::MatrixXd> F, F_used_prev;
  double e_prev = 0.0;
  double delta_d = std::numeric_limits<double>::infinity();
  double e = 0.0;
  for (int it = 1; it <= opts.max_iter; ++it) {
    fock(F);
    e = energy(F);
    res.energy_history.push_back(e);
    std::vector<Eigen::MatrixXd> err(n_channels);
    double comm = 0.0;
    for (std::size_t s = 0; s < n_channels; ++s) {
      err[s] = X.transpose() * (F[s] * ch[s].D * S - S * ch[s].D * F[s]) * X;
      comm = std::max(comm, max_abs(err[s]));
    }
    res.iterations = it;
    res.max_commutator = comm;
    if (it > 1 && std::abs(e - e_prev) < opts.e_tol && delta_d < opts.d_tol && comm < opts.comm_tol) {
      res.converged = true;
      break;
    }
    if (it == opts.max_iter) break;

    std::vector<Eigen::MatrixXd> F_used;
    if (opts.acceleration == ScfAcceleration::kDiis) {
      diis.push(F, err);
      F_used = it > opts.diis_start ? diis.extrapolate() : F;
    } else if (F_used_prev.empty()) {
      F_used = F;
    } else {
      F_used.resize(n_channels);
      for (std::size_t s = 0; s < n_channels; ++s)
        F_used[s] = (1.0 - opts.damping) * F[s] + opts.damping * F_used_prev[s];
    }
    F_used_prev = F_used;

    delta_d = 0.0;
    for (std::size_t s = 0; s < n_channels; ++s) {
      const Eigen::MatrixXd D_old = ch[s].D;
      diagonalize(F_used[s], X, probe, ch[s]);
      build_density(ch[s]);
      delta_d = std::max(delta_d, max_abs(ch[s].D - D_old));
    }
    e_prev = e;
  }

  // Canonical orbitals of the final (unextrapolated) Fock matrices.
  for (std::size_t s = 0; s < n_channels; ++s) diagonalize(F[s], X, probe, ch[s]);

  res.coeffs_alpha = ch[0].C;
  res.orbital_energies_alpha = ch[0].eps;
  res.coeffs_beta = restricted ? ch[0].C : ch[1].C;
  res.orbital_energies_beta = restricted ? ch[0].eps : ch[1].eps;
  res.electronic_energy = e;
  res.total_energy = e + ints.core_energy;

  const double sz = 0.5 * (n_alpha - n_beta);
  const Eigen::MatrixXd ov =
      res.coeffs_alpha.leftCols(n_alpha).transpose() * S * res.coeffs_beta.leftCols(n_beta);
  res.spin_contamination = sz * (sz + 1.0) + n_beta - ov.squaredNorm();
  return res;
}

}  // namespace

std::string_view to_string(ScfKind kind) { return kind == ScfKind::kRhf ? "RHF" : "UHF"; }

Eigen::MatrixXd symmetric_orthogonalizer(const Eigen::MatrixXd& S) {
  if (S.rows() != S.cols() || S.rows() == 0) throw InvalidArgument("overlap matrix must be square");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  if (es.info() != Eigen::Success) throw NumericalError("overlap diagonalization failed");
  const double smallest = es.eigenvalues().minCoeff();
  if (smallest < kLinearDependenceThreshold)
    throw LinearDependence("basis is linearly dependent: overlap eigenvalue " + std::to_string(smallest) +
                               " is below 1e-10",
                           smallest);
  const Eigen::VectorXd inv_sqrt = es.eigenvalues().array().rsqrt();
  return es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose();
}

Eigen::MatrixXd coulomb_matrix(const Eri4& eri, const Eigen::MatrixXd& D) {
  const auto n = static_cast<std::size_t>(D.rows());
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(D.rows(), D.cols());
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      double v = 0.0;
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) v += eri(p, q, r, s) * D(r, s);
      J(p, q) = v;
    }
  return J;
}

Eigen::MatrixXd exchange_matrix(const Eri4& eri, const Eigen::MatrixXd& D) {
  const auto n = static_cast<std::size_t>(D.rows());
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(D.rows(), D.cols());
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      double v = 0.0;
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) v += eri(p, r, q, s) * D(r, s);
      K(p, q) = v;
    }
  return K;
}

ScfResult run_rhf(const IntegralSet& ints, int n_electrons, const ScfOptions& opts) {
  if (n_electrons <= 0 || n_electrons % 2 != 0)
    throw InvalidArgument("RHF needs a positive even electron count, got " + std::to_string(n_electrons));
  if (static_cast<std::size_t>(n_electrons / 2) > ints.n)
    throw InvalidArgument("RHF: more doubly occupied orbitals than basis functions");
  return run_scf(ints, ScfKind::kRhf, n_electrons / 2, n_electrons / 2, opts);
}

ScfResult run_uhf(const IntegralSet& ints, int n_alpha, int n_beta, const ScfOptions& opts) {
  if (n_alpha < 0 || n_beta < 0 || n_alpha + n_beta < 1)
    throw InvalidArgument("UHF needs at least one electron");
  if (static_cast<std::size_t>(n_alpha) > ints.n || static_cast<std::size_t>(n_beta) > ints.n)
    throw InvalidArgument("UHF: more electrons of one spin than basis functions");
  return run_scf(ints, ScfKind::kUhf, n_alpha, n_beta, opts);
}

}  // namespace entcorr
