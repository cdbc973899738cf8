#pragma once
// Random two-center contracted s-Gaussian cases checked against quadrature.

#include "entcorr/geom_basis.hpp"
#include "entcorr/integrals.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace oracle {

struct IntegralErrors {
  double overlap = 0, kinetic = 0, nuclear = 0, eri = 0;
  void absorb(const IntegralErrors& o) {
    overlap = std::max(overlap, o.overlap);
    kinetic = std::max(kinetic, o.kinetic);
    nuclear = std::max(nuclear, o.nuclear);
    eri = std::max(eri, o.eri);
  }
};

inline std::vector<entcorr::Primitive> random_contraction(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 3);
  std::uniform_real_distribution<double> lg(std::log(0.15), std::log(8.0));
  std::uniform_real_distribution<double> coef(0.1, 1.0);
  std::vector<entcorr::Primitive> p(static_cast<std::size_t>(count(rng)));
  for (auto& x : p) x = {std::exp(lg(rng)), coef(rng)};
  return p;
}

// Places the pair at a random position and orientation for the library; the
// oracle works in the frame where both centers lie on the z axis.
inline IntegralErrors integral_case(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> sep(0.5, 5.0), u(-1.0, 1.0);
  const double d = sep(rng);
  Eigen::Vector3d axis(u(rng), u(rng), u(rng));
  axis.normalize();
  const Eigen::Vector3d A(3 * u(rng), 3 * u(rng), 3 * u(rng));
  const Eigen::Vector3d B = A + d * axis;
  const auto pa = random_contraction(rng), pb = random_contraction(rng);

  entcorr::Molecule mol({{1, A}, {1, B}});
  entcorr::BasisSetInstance basis({{0, A, pa, 1.0}, {1, B, pb, 1.0}}, "random");
  const auto ints = entcorr::build_integrals(mol, basis);

  SFunction f{0.0, {}, 1.0}, g{d, {}, 1.0};
  for (auto p : pa) f.prims.emplace_back(p.exponent, p.coefficient);
  for (auto p : pb) g.prims.emplace_back(p.exponent, p.coefficient);
  normalize(f);
  normalize(g);
  const SFunction* fn[2] = {&f, &g};

  IntegralErrors e;
  for (int i = 0; i < 2; ++i)
    for (int j = i; j < 2; ++j) {
      e.overlap = std::max(e.overlap, std::abs(ints.overlap(i, j) - overlap_quad(*fn[i], *fn[j])));
      e.kinetic = std::max(e.kinetic, std::abs(ints.kinetic(i, j) - kinetic_quad(*fn[i], *fn[j])));
      const double v = nuclear_quad(*fn[i], *fn[j], 0.0) + nuclear_quad(*fn[i], *fn[j], d);
      e.nuclear = std::max(e.nuclear, std::abs(ints.nuclear_attraction(i, j) - v));
    }
  const int idx[5][4] = {{0, 0, 0, 0}, {0, 0, 1, 1}, {0, 1, 0, 1}, {0, 0, 0, 1}, {0, 1, 1, 1}};
  for (const auto& q : idx) {
    const double ref = eri_quad(*fn[q[0]], *fn[q[1]], *fn[q[2]], *fn[q[3]]);
    const double got = ints.eri(static_cast<std::size_t>(q[0]), static_cast<std::size_t>(q[1]),
                                static_cast<std::size_t>(q[2]), static_cast<std::size_t>(q[3]));
    e.eri = std::max(e.eri, std::abs(got - ref));
  }
  return e;
}

}  // namespace oracle
