#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "entcorr/detci.hpp"
#include "entcorr/error.hpp"
#include "entcorr/geom_basis.hpp"
#include "entcorr/integrals.hpp"
#include "entcorr/scf.hpp"
#include "oracles.hpp"

using namespace entcorr;
using Eigen::MatrixXd;

namespace {

Molecule h2(double r) { return Molecule({{1, {0, 0, 0}}, {1, {0, 0, r}}}); }

IntegralSet ints_for(const Molecule& mol, BasisName b) { return build_integrals(mol, build_basis(mol, b)); }

void check_orthonormal(const ScfResult& r, const MatrixXd& S) {
  const auto n = S.rows();
  CHECK((r.coeffs_alpha.transpose() * S * r.coeffs_alpha - MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((r.coeffs_beta.transpose() * S * r.coeffs_beta - MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-8);
}

double isolated_h(BasisName b) {
  const Molecule h({{1, {0, 0, 0}}}, 0, 2);
  return run_uhf(ints_for(h, b), 1, 0).total_energy;
}

}  // namespace

TEST_CASE("symmetric orthogonalizer") {
  CHECK((symmetric_orthogonalizer(MatrixXd::Identity(3, 3)) - MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
  MatrixXd S(2, 2);
  S << 1, 0.5, 0.5, 1;
  const MatrixXd X = symmetric_orthogonalizer(S);
  CHECK((X.transpose() * S * X - MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
  // Hand eigendecomposition: eigenvalues 1.5 and 0.5 on (1,1)/sqrt2, (1,-1)/sqrt2.
  const double a = 0.5 * (1 / std::sqrt(1.5) + 1 / std::sqrt(0.5)), b = 0.5 * (1 / std::sqrt(1.5) - 1 / std::sqrt(0.5));
  CHECK(X(0, 0) == doctest::Approx(a).epsilon(1e-13));
  CHECK(X(0, 1) == doctest::Approx(b).epsilon(1e-13));

  MatrixXd bad(2, 2);
  bad << 1, 1 - 1e-14, 1 - 1e-14, 1;
  try {
    symmetric_orthogonalizer(bad);
    FAIL("expected linear dependence");
  } catch (const LinearDependence& e) {
    CHECK(e.eigenvalue() < 1e-10);
    CHECK(std::string(e.what()).find("e-") != std::string::npos);
  }
}

TEST_CASE("H2/STO-3G RHF matches the symmetry-adapted solution") {
  const auto mol = h2(1.4);
  const auto ints = ints_for(mol, BasisName::kSto3g);
  const auto r = run_rhf(ints, 2);
  REQUIRE(r.converged);
  const auto ref = oracle::h2_minimal(ints);
  CHECK(std::abs(r.electronic_energy - ref.e_rhf) < 1e-10);
  CHECK(r.total_energy == doctest::Approx(-1.1167).epsilon(1e-4));
  CHECK(std::abs(r.total_energy - (r.electronic_energy + ints.core_energy)) < 1e-12);
  CHECK(r.kind == ScfKind::kRhf);
  check_orthonormal(r, ints.overlap);
  CHECK(r.max_commutator < ScfOptions{}.comm_tol);
  CHECK(std::abs(r.spin_contamination) < 1e-10);
}

TEST_CASE("RHF precondition") {
  const auto ints = ints_for(h2(1.4), BasisName::kSto3g);
  CHECK_THROWS_AS(run_rhf(ints, 3), InvalidArgument);
  CHECK_THROWS_AS(run_rhf(ints, 0), InvalidArgument);
  CHECK_THROWS_AS(run_rhf(ints, 6), InvalidArgument);
  CHECK_THROWS_AS(run_uhf(ints, 3, 0), InvalidArgument);
  CHECK_THROWS_AS(run_uhf(ints, 0, 0), InvalidArgument);
}

TEST_CASE("RHF and UHF coincide near equilibrium") {
  const auto ints = ints_for(h2(1.0), BasisName::k321g);
  const auto r = run_rhf(ints, 2), u = run_uhf(ints, 1, 1);
  REQUIRE(r.converged);
  REQUIRE(u.converged);
  CHECK(std::abs(r.total_energy - u.total_energy) < 1e-8);
  CHECK(u.spin_contamination < 1e-6);
  check_orthonormal(u, ints.overlap);
}

TEST_CASE("UHF dissociates into atoms, RHF does not") {
  for (auto b : {BasisName::kSto3g, BasisName::k321g, BasisName::k631g}) {
    const auto e_atom = isolated_h(b);
    const auto ints = ints_for(h2(10.0), b);
    const auto u = run_uhf(ints, 1, 1);
    REQUIRE(u.converged);
    CHECK(std::abs(u.total_energy - 2 * e_atom) < 1e-4);
    CHECK(u.spin_contamination == doctest::Approx(1.0).epsilon(1e-3));
    check_orthonormal(u, ints.overlap);
    const auto far = run_rhf(ints_for(h2(50.0), b), 2);
    REQUIRE(far.converged);
    CHECK(far.total_energy > 2 * e_atom + 0.1);
  }
  CHECK(isolated_h(BasisName::k321g) == doctest::Approx(-0.496199).epsilon(1e-6));
}

TEST_CASE("damped iterations never raise the energy") {
  ScfOptions opts;
  opts.acceleration = ScfAcceleration::kDamping;
  opts.max_iter = 500;
  for (double r : {1.4, 2.5}) {
    const auto ints = ints_for(h2(r), BasisName::k321g);
    const auto res = run_rhf(ints, 2, opts);
    REQUIRE(res.converged);
    REQUIRE(res.energy_history.size() > 3);
    for (std::size_t i = 1; i < res.energy_history.size(); ++i)
      CHECK(res.energy_history[i] <= res.energy_history[i - 1] + 1e-10);
    CHECK(std::abs(res.total_energy - run_rhf(ints, 2).total_energy) < 1e-9);
  }
}

TEST_CASE("energy is translation invariant") {
  const auto mol = Molecule({{1, {0, 0, 0}}, {1, {0.4, 0.9, 1.1}}, {1, {-1.2, 0.3, 0.5}}, {1, {0.2, -1.0, 1.9}}});
  const auto moved = mol.translated(Eigen::Vector3d(3.0, -7.0, 2.0));
  const auto a = run_rhf(ints_for(mol, BasisName::k631g), 4);
  const auto b = run_rhf(ints_for(moved, BasisName::k631g), 4);
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  CHECK(std::abs(a.total_energy - b.total_energy) < 1e-9);
  const auto ua = run_uhf(ints_for(mol, BasisName::k631g), 2, 2);
  const auto ub = run_uhf(ints_for(moved, BasisName::k631g), 2, 2);
  CHECK(std::abs(ua.total_energy - ub.total_energy) < 1e-9);
  CHECK(ua.total_energy <= a.total_energy + 1e-9);
}

TEST_CASE("non-convergence is reported, not thrown") {
  ScfOptions opts;
  opts.max_iter = 2;
  const auto r = run_rhf(ints_for(h2(1.4), BasisName::k631g), 2, opts);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 2);
}

TEST_CASE("Fock builders") {
  std::mt19937_64 rng(5);
  const auto eri = oracle::random_eri8(3, rng);
  const MatrixXd D = oracle::random_symmetric(3, rng);
  const MatrixXd J = coulomb_matrix(eri, D), K = exchange_matrix(eri, D);
  for (std::size_t m = 0; m < 3; ++m)
    for (std::size_t n = 0; n < 3; ++n) {
      double j = 0, k = 0;
      for (std::size_t l = 0; l < 3; ++l)
        for (std::size_t s = 0; s < 3; ++s) {
          j += D(l, s) * eri(m, n, l, s);
          k += D(l, s) * eri(m, l, n, s);
        }
      CHECK(std::abs(J(m, n) - j) < 1e-14);
      CHECK(std::abs(K(m, n) - k) < 1e-14);
    }
}

TEST_CASE("deterministic orbitals") {
  const auto ints = ints_for(h2(3.0), BasisName::k631g);
  const auto a = run_uhf(ints, 1, 1), b = run_uhf(ints, 1, 1);
  CHECK((a.coeffs_alpha - b.coeffs_alpha).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.total_energy == b.total_energy);
  for (Eigen::Index i = 1; i < a.orbital_energies_alpha.size(); ++i)
    CHECK(a.orbital_energies_alpha(i) >= a.orbital_energies_alpha(i - 1));
}
