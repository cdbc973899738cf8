#pragma once

#include "entcorr/entanglement.hpp"
#include "entcorr/geom_basis.hpp"
#include "entcorr/scf.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace entcorr {

struct MethodSet {
  bool rhf = false;
  bool uhf = false;
  bool fci = false;
  bool cisd = false;

  static MethodSet parse(std::string_view comma_list);  // e.g. "RHF,UHF,FCI"
  static MethodSet all() { return {true, true, true, false}; }
  std::string to_string() const;
  bool has_hf() const noexcept { return rhf || uhf; }
  bool has_ci() const noexcept { return fci || cisd; }
  // FCI when requested, otherwise CISD.
  CiMode ci_mode() const noexcept { return fci ? CiMode::kFci : CiMode::kCisd; }
};

struct PipelineOptions {
  BasisName basis = BasisName::k321g;
  MethodSet methods = MethodSet::all();
  ScfOptions scf;
};

// One geometry through integrals, SCF, CI and the entropy measures. The CI
// is expanded in UHF orbitals when UHF is requested and converged, in RHF
// orbitals otherwise. RHF is skipped for open-shell molecules.
EntropyReport compute_point(const Molecule& mol, const PipelineOptions& opts);

enum class ScanMode { kSingle, kDissociation, kFragments };

struct ScanConfig {
  ScanMode mode = ScanMode::kDissociation;
  std::optional<Molecule> geometry;    // diatomic template or fragment
  std::optional<Molecule> geometry_b;  // optional second fragment, must match the first
  PipelineOptions pipeline;
  std::vector<double> r_values;      // bohr
  std::vector<double> theta_values;  // degrees
  std::string output_path;
  unsigned threads = 0;  // 0: hardware concurrency

  // Throws InvalidArgument describing the first violated constraint.
  void validate() const;
};

struct ScanRow {
  ScanMode mode = ScanMode::kDissociation;
  std::optional<double> r_bohr;
  std::optional<double> theta_deg;
  std::optional<double> e_rhf;
  std::optional<double> e_uhf;
  std::optional<double> e_fci;
  std::optional<double> e_c_rhf;
  std::optional<double> e_c_uhf;
  std::optional<double> s_rho1_cisd;
  std::optional<double> s_nso;
  std::optional<double> s_int;
  std::optional<double> e_c_int;
  bool converged = false;
  std::string error;  // non-empty when the point failed
};

ScanRow row_from_report(ScanMode mode, std::optional<double> r, std::optional<double> theta,
                        const EntropyReport& report);

// Diatomic with atom 0 of the template fixed and atom 1 moved to distance r
// along the template bond direction.
Molecule place_diatomic(const Molecule& templ, double r);

// Fragment A centered at the origin; fragment B rotated by theta about z
// through its centroid and translated by r along z.
Molecule place_fragments(const Molecule& fragment, double r, double theta_deg);
Molecule centered(const Molecule& mol);

std::vector<ScanRow> run_dissociation_scan(const ScanConfig& cfg);
std::vector<ScanRow> run_fragment_scan(const ScanConfig& cfg);
ScanRow run_single(const ScanConfig& cfg);

// Fixed column order: r_bohr, theta_deg, e_rhf, e_uhf, e_fci, e_c_rhf,
// e_c_uhf, s_rho1_cisd, s_nso, s_int, e_c_int, converged. Absent values are
// empty cells; floats carry 12 significant digits.
std::string format_csv(const std::vector<ScanRow>& rows);
void write_csv(const std::vector<ScanRow>& rows, const std::string& path);
std::vector<ScanRow> parse_csv(std::string_view text);

std::vector<double> linspace(double lo, double hi, int steps);

}  // namespace entcorr
