#include "entcorr/integrals.hpp"

#include "entcorr/error.hpp"

#include <cmath>
#include <numbers>

namespace entcorr {

namespace {

constexpr double kBoysSeriesThreshold = 1e-6;

struct ScaledPrimitive {
  double exponent;
  double weight;  // contraction coefficient * primitive norm * contracted norm
  Eigen::Vector3d origin;
};

std::vector<std::vector<ScaledPrimitive>> flatten(const BasisSetInstance& basis) {
  std::vector<std::vector<ScaledPrimitive>> out;
  out.reserve(basis.size());
  for (const auto& sh : basis.shells()) {
    auto& prims = out.emplace_back();
    for (const auto& p : sh.primitives)
      prims.push_back({p.exponent, p.coefficient * primitive_norm(p.exponent) * sh.norm, sh.origin});
  }
  return out;
}

double kinetic_primitive(const ScaledPrimitive& a, const ScaledPrimitive& b) {
  const double p = a.exponent + b.exponent;
  const double mu = a.exponent * b.exponent / p;
  const double r2 = (a.origin - b.origin).squaredNorm();
  return mu * (3.0 - 2.0 * mu * r2) * std::pow(std::numbers::pi / p, 1.5) * std::exp(-mu * r2);
}

double attraction_primitive(const ScaledPrimitive& a, const ScaledPrimitive& b, const Molecule& mol) {
  const double p = a.exponent + b.exponent;
  const double mu = a.exponent * b.exponent / p;
  const Eigen::Vector3d P = (a.exponent * a.origin + b.exponent * b.origin) / p;
  const double pre = 2.0 * std::numbers::pi / p * std::exp(-mu * (a.origin - b.origin).squaredNorm());
  double v = 0.0;
  for (const auto& atom : mol.atoms())
    v -= atom.atomic_number * boys_f0(p * (P - atom.position).squaredNorm());
  return pre * v;
}

double eri_primitive(const ScaledPrimitive& a, const ScaledPrimitive& b, const ScaledPrimitive& c,
                     const ScaledPrimitive& d) {
  const double p = a.exponent + b.exponent;
  const double q = c.exponent + d.exponent;
  const Eigen::Vector3d P = (a.exponent * a.origin + b.exponent * b.origin) / p;
  const Eigen::Vector3d Q = (c.exponent * c.origin + d.exponent * d.origin) / q;
  const double kab = std::exp(-a.exponent * b.exponent / p * (a.origin - b.origin).squaredNorm());
  const double kcd = std::exp(-c.exponent * d.exponent / q * (c.origin - d.origin).squaredNorm());
  const double rho = p * q / (p + q);
  return 2.0 * std::pow(std::numbers::pi, 2.5) / (p * q * std::sqrt(p + q)) * kab * kcd *
         boys_f0(rho * (P - Q).squaredNorm());
}

}  // namespace

void Eri4::set_symmetric(std::size_t p, std::size_t q, std::size_t r, std::size_t s, double v) {
  (*this)(p, q, r, s) = v;
  (*this)(q, p, r, s) = v;
  (*this)(p, q, s, r) = v;
  (*this)(q, p, s, r) = v;
  (*this)(r, s, p, q) = v;
  (*this)(s, r, p, q) = v;
  (*this)(r, s, q, p) = v;
  (*this)(s, r, q, p) = v;
}

double Eri4::max_abs_diff(const Eri4& other) const {
  if (other.n_ != n_) throw InvalidArgument("ERI tensors differ in dimension");
  double m = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i) m = std::max(m, std::abs(data_[i] - other.data_[i]));
  return m;
}

double boys_f0(double x) {
  if (!(x >= 0.0)) throw InvalidArgument("Boys function argument must be non-negative");
  if (x < kBoysSeriesThreshold) return 1.0 - x / 3.0;
  const double t = std::sqrt(x);
  return 0.5 * std::sqrt(std::numbers::pi) * std::erf(t) / t;
}

IntegralSet build_integrals(const Molecule& mol, const BasisSetInstance& basis) {
  const auto prims = flatten(basis);
  const std::size_t n = basis.size();

  IntegralSet ints;
  ints.n = n;
  ints.overlap = Eigen::MatrixXd::Zero(n, n);
  ints.kinetic = Eigen::MatrixXd::Zero(n, n);
  ints.nuclear_attraction = Eigen::MatrixXd::Zero(n, n);
  ints.eri = Eri4(n);
  ints.core_energy = nuclear_repulsion(mol);

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = 0.0, t = 0.0, v = 0.0;
      for (const auto& a : prims[i])
        for (const auto& b : prims[j]) {
          const double w = a.weight * b.weight;
          s += w * primitive_overlap(a.exponent, a.origin, b.exponent, b.origin);
          t += w * kinetic_primitive(a, b);
          v += w * attraction_primitive(a, b, mol);
        }
      ints.overlap(i, j) = ints.overlap(j, i) = s;
      ints.kinetic(i, j) = ints.kinetic(j, i) = t;
      ints.nuclear_attraction(i, j) = ints.nuclear_attraction(j, i) = v;
    }
  }

  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q <= p; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s <= r; ++s) {
          if (p * (p + 1) / 2 + q < r * (r + 1) / 2 + s) continue;
          double v = 0.0;
          for (const auto& a : prims[p])
            for (const auto& b : prims[q])
              for (const auto& c : prims[r])
                for (const auto& d : prims[s])
                  v += a.weight * b.weight * c.weight * d.weight * eri_primitive(a, b, c, d);
          ints.eri.set_symmetric(p, q, r, s, v);
        }
  return ints;
}

}  // namespace entcorr
