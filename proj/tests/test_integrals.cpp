#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "entcorr/error.hpp"
#include "entcorr/geom_basis.hpp"
#include "entcorr/integrals.hpp"
#include "integral_cases.hpp"
#include "oracles.hpp"

#include <random>

using namespace entcorr;

namespace {

Molecule h2(double r) { return Molecule({{1, {0, 0, 0}}, {1, {0, 0, r}}}); }

}  // namespace

TEST_CASE("boys function") {
  CHECK(boys_f0(0.0) == 1.0);
  CHECK(boys_f0(1.0) == doctest::Approx(0.746824132812427).epsilon(1e-14));
  CHECK(boys_f0(30.0) == doctest::Approx(0.161802159379640).epsilon(1e-13));
  for (double x : {1e-9, 1e-7, 9.9e-7, 1e-6, 1.01e-6, 1e-4, 0.3, 2.5, 11.0, 47.0})
    CHECK(std::abs(boys_f0(x) - oracle::boys_quadrature(x)) < 1e-13);
  CHECK_THROWS_AS(boys_f0(-1.0), InvalidArgument);
}

TEST_CASE("boys function is continuous across the series branch") {
  const double lo = boys_f0(1e-6 * (1 - 1e-12)), hi = boys_f0(1e-6 * (1 + 1e-12));
  CHECK(std::abs(lo - hi) < 1e-13);
}

TEST_CASE("H2/STO-3G integrals") {
  const auto mol = h2(1.4);
  const auto ints = build_integrals(mol, build_basis(mol, BasisName::kSto3g));
  CHECK(ints.n == 2);
  CHECK(ints.overlap(0, 1) == doctest::Approx(0.6593).epsilon(1e-4));
  CHECK(ints.core_energy == doctest::Approx(1.0 / 1.4).epsilon(1e-14));
  for (int i = 0; i < 2; ++i) CHECK(std::abs(ints.overlap(i, i) - 1.0) < 1e-12);

  // Same pair through the quadrature oracle.
  oracle::SFunction f{0.0, {}, 1.0}, g{1.4, {}, 1.0};
  const auto basis = build_basis(mol, BasisName::kSto3g);
  for (const auto& p : basis.shells()[0].primitives) {
    f.prims.emplace_back(p.exponent, p.coefficient);
    g.prims.emplace_back(p.exponent, p.coefficient);
  }
  oracle::normalize(f);
  oracle::normalize(g);
  CHECK(std::abs(ints.overlap(0, 1) - oracle::overlap_quad(f, g)) < 1e-10);
  CHECK(std::abs(ints.kinetic(0, 1) - oracle::kinetic_quad(f, g)) < 1e-9);
  CHECK(std::abs(ints.eri(0, 0, 1, 1) - oracle::eri_quad(f, f, g, g)) < 1e-8);
}

TEST_CASE("single function basis has unit overlap") {
  const Molecule h({{1, {0.3, -0.2, 0.1}}}, 0, 2);
  const auto ints = build_integrals(h, build_basis(h, BasisName::kSto3g));
  REQUIRE(ints.n == 1);
  CHECK(std::abs(ints.overlap(0, 0) - 1.0) < 1e-12);
  CHECK(ints.core_energy == 0.0);
}

TEST_CASE("far-apart functions do not overlap") {
  const auto mol = h2(50.0);
  const auto ints = build_integrals(mol, build_basis(mol, BasisName::kSto3g));
  CHECK(std::abs(ints.overlap(0, 1)) < 1e-12);
}

TEST_CASE("random two-center cases agree with quadrature") {
  std::mt19937_64 rng(20240611);
  oracle::IntegralErrors worst;
  for (int i = 0; i < 6; ++i) worst.absorb(oracle::integral_case(rng));
  CHECK(worst.overlap < 1e-7);
  CHECK(worst.kinetic < 1e-7);
  CHECK(worst.nuclear < 1e-7);
  CHECK(worst.eri < 1e-7);
  MESSAGE("max errors S ", worst.overlap, " T ", worst.kinetic, " V ", worst.nuclear, " ERI ", worst.eri);
}

TEST_CASE("integral set invariants") {
  for (auto name : {BasisName::kSto3g, BasisName::k321g, BasisName::k631g}) {
    const Molecule mol({{1, {0.1, 0.4, -0.3}}, {1, {1.2, -0.5, 0.9}}, {1, {-1.3, 0.2, 1.5}}}, 0, 2);
    const auto ints = build_integrals(mol, build_basis(mol, name));
    const auto n = ints.n;
    CHECK((ints.overlap - ints.overlap.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((ints.kinetic - ints.kinetic.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((ints.nuclear_attraction - ints.nuclear_attraction.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ints.overlap);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(ints.overlap(i, i) - 1.0) < 1e-12);
    double worst = 0.0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          for (std::size_t d = 0; d < n; ++d) {
            const double v = ints.eri(a, b, c, d);
            for (double w : {ints.eri(b, a, c, d), ints.eri(a, b, d, c), ints.eri(b, a, d, c), ints.eri(c, d, a, b),
                             ints.eri(d, c, a, b), ints.eri(c, d, b, a), ints.eri(d, c, b, a)})
              worst = std::max(worst, std::abs(v - w));
          }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("translation invariance") {
  const auto mol = h2(1.7);
  const Eigen::Vector3d shift(2.5, -1.0, 0.75);
  const auto moved = mol.translated(shift);
  const auto a = build_integrals(mol, build_basis(mol, BasisName::k631g));
  const auto b = build_integrals(moved, build_basis(moved, BasisName::k631g));
  CHECK((a.overlap - b.overlap).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((a.kinetic - b.kinetic).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((a.nuclear_attraction - b.nuclear_attraction).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(a.eri.max_abs_diff(b.eri) < 1e-12);
}
