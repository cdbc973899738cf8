#pragma once

#include "entcorr/geom_basis.hpp"

#include <Eigen/Core>

#include <vector>

namespace entcorr {

// Dense four-index tensor, chemists' notation (pq|rs), row-major in p,q,r,s.
class Eri4 {
 public:
  Eri4() = default;
  explicit Eri4(std::size_t n) : n_(n), data_(n * n * n * n, 0.0) {}

  std::size_t dim() const noexcept { return n_; }

  double& operator()(std::size_t p, std::size_t q, std::size_t r, std::size_t s) {
    return data_[((p * n_ + q) * n_ + r) * n_ + s];
  }
  double operator()(std::size_t p, std::size_t q, std::size_t r, std::size_t s) const {
    return data_[((p * n_ + q) * n_ + r) * n_ + s];
  }

  // Writes v into all eight positions related by real-orbital symmetry.
  void set_symmetric(std::size_t p, std::size_t q, std::size_t r, std::size_t s, double v);

  const std::vector<double>& data() const noexcept { return data_; }

  double max_abs_diff(const Eri4& other) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

struct IntegralSet {
  std::size_t n = 0;
  Eigen::MatrixXd overlap;
  Eigen::MatrixXd kinetic;
  Eigen::MatrixXd nuclear_attraction;
  Eri4 eri;
  double core_energy = 0.0;

  Eigen::MatrixXd core_hamiltonian() const { return kinetic + nuclear_attraction; }
};

// F0(x) = int_0^1 exp(-x t^2) dt.
double boys_f0(double x);

IntegralSet build_integrals(const Molecule& mol, const BasisSetInstance& basis);

}  // namespace entcorr
