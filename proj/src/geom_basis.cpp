#include "entcorr/geom_basis.hpp"

#include "entcorr/error.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace entcorr {

namespace {

constexpr std::array<std::string_view, 54> kSymbols = {
    "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg", "Al", "Si",
    "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr", "Mn", "Fe", "Co", "Ni",
    "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br", "Kr", "Rb", "Sr", "Y",  "Zr", "Nb", "Mo",
    "Tc", "Ru", "Rh", "Pd", "Ag", "Cd", "In", "Sn", "Sb", "Te", "I",  "Xe"};

constexpr double kMinSeparation = 1e-8;

// Published hydrogen contractions (coefficients for normalized primitives).
const std::vector<std::vector<Primitive>>& hydrogen_shells(BasisName name) {
  static const std::vector<std::vector<Primitive>> sto3g = {
      {{3.42525091, 0.15432897}, {0.62391373, 0.53532814}, {0.16885540, 0.44463454}}};
  static const std::vector<std::vector<Primitive>> b321g = {
      {{5.4471780, 0.1562850}, {0.8245470, 0.9046910}},
      {{0.1831920, 1.0}}};
  static const std::vector<std::vector<Primitive>> b631g = {
      {{18.7311370, 0.03349460}, {2.8253937, 0.23472695}, {0.6401217, 0.81375733}},
      {{0.1612778, 1.0}}};
  switch (name) {
    case BasisName::kSto3g:
      return sto3g;
    case BasisName::k321g:
      return b321g;
    case BasisName::k631g:
      return b631g;
  }
  throw InvalidArgument("unknown basis");
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool parse_double(const std::string& token, double& out) {
  // from_chars for double is available in libstdc++ 11.
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

Molecule::Molecule(std::vector<Atom> atoms, int net_charge, int multiplicity)
    : atoms_(std::move(atoms)), net_charge_(net_charge), multiplicity_(multiplicity) {
  if (atoms_.empty()) throw InvalidArgument("molecule has no atoms");
  for (const auto& a : atoms_) {
    if (a.atomic_number < 1) throw InvalidArgument("atomic number must be positive");
    if (!a.position.allFinite()) throw InvalidArgument("non-finite atomic position");
  }
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    for (std::size_t j = i + 1; j < atoms_.size(); ++j)
      if (distance(i, j) <= kMinSeparation)
        throw InvalidArgument("atoms " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                              " share a position");
  const int n = n_electrons();
  if (n < 1) throw InvalidArgument("electron count must be at least 1");
  if (multiplicity_ == 0) multiplicity_ = (n % 2 == 0) ? 1 : 2;
  if (multiplicity_ < 1) throw InvalidArgument("multiplicity must be positive");
  const int paired = n - (multiplicity_ - 1);
  if (paired < 0 || paired % 2 != 0)
    throw InvalidArgument("multiplicity " + std::to_string(multiplicity_) +
                          " is incompatible with " + std::to_string(n) + " electrons");
}

int Molecule::n_electrons() const noexcept {
  int z = 0;
  for (const auto& a : atoms_) z += a.atomic_number;
  return z - net_charge_;
}

Eigen::Vector3d Molecule::centroid() const {
  Eigen::Vector3d c = Eigen::Vector3d::Zero();
  for (const auto& a : atoms_) c += a.position;
  return c / static_cast<double>(atoms_.size());
}

double Molecule::distance(std::size_t i, std::size_t j) const {
  return (atoms_.at(i).position - atoms_.at(j).position).norm();
}

Molecule Molecule::translated(const Eigen::Vector3d& shift) const {
  return transformed(Eigen::Matrix3d::Identity(), shift);
}

Molecule Molecule::transformed(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& shift) const {
  std::vector<Atom> moved = atoms_;
  for (auto& a : moved) a.position = rotation * a.position + shift;
  return Molecule(std::move(moved), net_charge_, multiplicity_);
}

int atomic_number_of(std::string_view symbol) {
  std::string s = trim(symbol);
  if (s.empty()) return 0;
  s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  for (std::size_t i = 1; i < s.size(); ++i)
    s[i] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[i])));
  for (std::size_t z = 0; z < kSymbols.size(); ++z)
    if (kSymbols[z] == s) return static_cast<int>(z + 1);
  return 0;
}

std::string_view element_symbol(int atomic_number) {
  if (atomic_number < 1 || atomic_number > static_cast<int>(kSymbols.size()))
    throw InvalidArgument("no symbol for atomic number " + std::to_string(atomic_number));
  return kSymbols[atomic_number - 1];
}

Molecule parse_xyz(std::string_view text, int net_charge, int multiplicity) {
  std::vector<std::string> lines;
  {
    std::string buf(text);
    std::istringstream in(buf);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
  }
  if (lines.empty()) throw ParseError("empty XYZ input", 1);

  const std::string count_text = trim(lines[0]);
  long count = 0;
  {
    auto [ptr, ec] = std::from_chars(count_text.data(), count_text.data() + count_text.size(), count);
    if (ec != std::errc() || ptr != count_text.data() + count_text.size() || count < 1)
      throw ParseError("malformed atom count '" + count_text + "'", 1);
  }
  if (lines.size() < static_cast<std::size_t>(count) + 2)
    throw ParseError("expected " + std::to_string(count) + " atom lines", lines.size() + 1);

  std::vector<Atom> atoms;
  atoms.reserve(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    const std::size_t line_no = static_cast<std::size_t>(i) + 3;
    std::istringstream fields(lines[line_no - 1]);
    std::string symbol, x, y, z;
    if (!(fields >> symbol >> x >> y >> z))
      throw ParseError("expected element and three coordinates", line_no);
    const int zval = atomic_number_of(symbol);
    if (zval == 0) throw ParseError("unknown element '" + symbol + "'", line_no);
    Eigen::Vector3d pos;
    if (!parse_double(x, pos.x()) || !parse_double(y, pos.y()) || !parse_double(z, pos.z()))
      throw ParseError("could not parse coordinates", line_no);
    atoms.push_back({zval, pos * kBohrPerAngstrom});
  }
  return Molecule(std::move(atoms), net_charge, multiplicity);
}

Molecule read_xyz_file(const std::string& path, int net_charge, int multiplicity) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open geometry file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_xyz(ss.str(), net_charge, multiplicity);
}

std::string to_xyz(const Molecule& mol, std::string_view comment) {
  std::string out = std::to_string(mol.size()) + "\n" + std::string(comment) + "\n";
  char buf[128];
  for (const auto& a : mol.atoms()) {
    const Eigen::Vector3d p = a.position / kBohrPerAngstrom;
    std::snprintf(buf, sizeof buf, "%s %.17g %.17g %.17g\n",
                  std::string(element_symbol(a.atomic_number)).c_str(), p.x(), p.y(), p.z());
    out += buf;
  }
  return out;
}

double nuclear_repulsion(const Molecule& mol) {
  double e = 0.0;
  const auto& atoms = mol.atoms();
  for (std::size_t i = 0; i < atoms.size(); ++i)
    for (std::size_t j = i + 1; j < atoms.size(); ++j)
      e += atoms[i].atomic_number * atoms[j].atomic_number / mol.distance(i, j);
  return e;
}

std::string_view to_string(BasisName name) {
  switch (name) {
    case BasisName::kSto3g:
      return "STO-3G";
    case BasisName::k321g:
      return "3-21G";
    case BasisName::k631g:
      return "6-31G";
  }
  return "?";
}

BasisName parse_basis_name(std::string_view label) {
  std::string up = trim(label);
  for (auto& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (up == "STO-3G") return BasisName::kSto3g;
  if (up == "3-21G") return BasisName::k321g;
  if (up == "6-31G") return BasisName::k631g;
  throw InvalidArgument("unknown basis set '" + std::string(label) +
                        "' (supported: STO-3G, 3-21G, 6-31G)");
}

double primitive_norm(double exponent) {
  return std::pow(2.0 * exponent / std::numbers::pi, 0.75);
}

double primitive_overlap(double a, const Eigen::Vector3d& A, double b, const Eigen::Vector3d& B) {
  const double p = a + b;
  return std::pow(std::numbers::pi / p, 1.5) * std::exp(-a * b / p * (A - B).squaredNorm());
}

BasisSetInstance::BasisSetInstance(std::vector<Shell> shells, std::string label)
    : shells_(std::move(shells)), label_(std::move(label)) {
  if (shells_.empty()) throw InvalidArgument("basis has no functions");
  for (auto& sh : shells_) {
    if (sh.primitives.empty()) throw InvalidArgument("shell without primitives");
    for (const auto& p : sh.primitives)
      if (!(p.exponent > 0.0)) throw InvalidArgument("Gaussian exponent must be positive");
    double self = 0.0;
    for (const auto& p : sh.primitives)
      for (const auto& q : sh.primitives)
        self += p.coefficient * q.coefficient * primitive_norm(p.exponent) *
                primitive_norm(q.exponent) * primitive_overlap(p.exponent, sh.origin, q.exponent, sh.origin);
    if (!(self > 0.0)) throw InvalidArgument("contracted function has zero norm");
    sh.norm = 1.0 / std::sqrt(self);
  }
}

std::size_t BasisSetInstance::n_primitives() const noexcept {
  std::size_t n = 0;
  for (const auto& sh : shells_) n += sh.primitives.size();
  return n;
}

BasisSetInstance build_basis(const Molecule& mol, BasisName name) {
  std::vector<Shell> shells;
  const auto& atoms = mol.atoms();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i].atomic_number != 1)
      throw Unsupported("element " + std::string(element_symbol(atoms[i].atomic_number)) +
                        " has no built-in " + std::string(to_string(name)) +
                        " basis; only hydrogen is built in, supply integrals through an FCIDUMP file instead");
    for (const auto& prims : hydrogen_shells(name)) shells.push_back({i, atoms[i].position, prims});
  }
  return BasisSetInstance(std::move(shells), std::string(to_string(name)));
}

BasisSetInstance build_basis(const Molecule& mol, std::string_view name) {
  return build_basis(mol, parse_basis_name(name));
}

}  // namespace entcorr
