#pragma once

#include <Eigen/Core>

#include <string>
#include <string_view>
#include <vector>

namespace entcorr {

inline constexpr double kBohrPerAngstrom = 1.8897259886;

struct Atom {
  int atomic_number = 1;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();  // bohr
};

// A set of nuclei plus total charge and spin multiplicity. Construction
// validates that the electron count and multiplicity are consistent and
// that no two nuclei coincide.
class Molecule {
 public:
  Molecule(std::vector<Atom> atoms, int net_charge = 0, int multiplicity = 0);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  int net_charge() const noexcept { return net_charge_; }
  int multiplicity() const noexcept { return multiplicity_; }

  int n_electrons() const noexcept;
  int n_alpha() const noexcept { return (n_electrons() + multiplicity_ - 1) / 2; }
  int n_beta() const noexcept { return (n_electrons() - multiplicity_ + 1) / 2; }

  Eigen::Vector3d centroid() const;
  double distance(std::size_t i, std::size_t j) const;

  // Rigid-body moves; the result is a new validated Molecule.
  Molecule translated(const Eigen::Vector3d& shift) const;
  Molecule transformed(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& shift) const;

 private:
  std::vector<Atom> atoms_;
  int net_charge_;
  int multiplicity_;
};

// Standard XYZ text (Angstrom) -> Molecule (bohr). Multiplicity defaults to
// the lowest one compatible with the electron count.
Molecule parse_xyz(std::string_view text, int net_charge = 0, int multiplicity = 0);
Molecule read_xyz_file(const std::string& path, int net_charge = 0, int multiplicity = 0);
std::string to_xyz(const Molecule& mol, std::string_view comment = "");

int atomic_number_of(std::string_view symbol);  // 0 if unknown
std::string_view element_symbol(int atomic_number);

double nuclear_repulsion(const Molecule& mol);

struct Primitive {
  double exponent;
  double coefficient;  // multiplies the normalized primitive
};

struct Shell {
  std::size_t center;
  Eigen::Vector3d origin;  // bohr
  std::vector<Primitive> primitives;
  double norm = 1.0;  // contracted-function normalization factor
};

enum class BasisName { kSto3g, k321g, k631g };

std::string_view to_string(BasisName name);
BasisName parse_basis_name(std::string_view label);  // case-insensitive

// Contracted s-type Gaussians. Every shell is one basis function.
class BasisSetInstance {
 public:
  // Normalizes each contracted function to unit self-overlap.
  BasisSetInstance(std::vector<Shell> shells, std::string label);

  const std::vector<Shell>& shells() const noexcept { return shells_; }
  std::size_t size() const noexcept { return shells_.size(); }
  const std::string& label() const noexcept { return label_; }
  std::size_t n_primitives() const noexcept;

 private:
  std::vector<Shell> shells_;
  std::string label_;
};

BasisSetInstance build_basis(const Molecule& mol, BasisName name);
BasisSetInstance build_basis(const Molecule& mol, std::string_view name);

// Overlap of two unnormalized s primitives exp(-a|r-A|^2), exp(-b|r-B|^2).
double primitive_overlap(double a, const Eigen::Vector3d& A, double b, const Eigen::Vector3d& B);
double primitive_norm(double exponent);

}  // namespace entcorr
