#include "entcorr/scan.hpp"

#include "entcorr/detci.hpp"
#include "entcorr/error.hpp"
#include "entcorr/integrals.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <thread>

namespace entcorr {

namespace {

constexpr double kFragmentMatchTol = 1e-6;

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
}

std::vector<double> sorted_distances(const Molecule& mol) {
  std::vector<double> d;
  for (std::size_t i = 0; i < mol.size(); ++i)
    for (std::size_t j = i + 1; j < mol.size(); ++j) d.push_back(mol.distance(i, j));
  std::sort(d.begin(), d.end());
  return d;
}

bool same_fragment(const Molecule& a, const Molecule& b) {
  if (a.size() != b.size() || a.net_charge() != b.net_charge() || a.multiplicity() != b.multiplicity())
    return false;
  std::vector<int> za, zb;
  for (const auto& x : a.atoms()) za.push_back(x.atomic_number);
  for (const auto& x : b.atoms()) zb.push_back(x.atomic_number);
  std::sort(za.begin(), za.end());
  std::sort(zb.begin(), zb.end());
  if (za != zb) return false;
  const auto da = sorted_distances(a), db = sorted_distances(b);
  for (std::size_t i = 0; i < da.size(); ++i)
    if (std::abs(da[i] - db[i]) > kFragmentMatchTol) return false;
  return true;
}

ScanRow failed_row(ScanMode mode, std::optional<double> r, std::optional<double> theta, const std::string& what) {
  ScanRow row;
  row.mode = mode;
  row.r_bohr = r;
  row.theta_deg = theta;
  row.converged = false;
  row.error = what;
  return row;
}

std::string format_value(const std::optional<double>& v) {
  if (!v) return {};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", *v);
  return buf;
}

constexpr const char* kCsvHeader =
    "r_bohr,theta_deg,e_rhf,e_uhf,e_fci,e_c_rhf,e_c_uhf,s_rho1_cisd,s_nso,s_int,e_c_int,converged";

}  // namespace

MethodSet MethodSet::parse(std::string_view comma_list) {
  MethodSet m;
  std::string s(comma_list);
  std::stringstream ss(s);
  std::string item;
  bool any = false;
  while (std::getline(ss, item, ',')) {
    std::string u;
    for (char c : item)
      if (!std::isspace(static_cast<unsigned char>(c))) u += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (u.empty()) continue;
    if (u == "RHF")
      m.rhf = true;
    else if (u == "UHF")
      m.uhf = true;
    else if (u == "FCI")
      m.fci = true;
    else if (u == "CISD")
      m.cisd = true;
    else
      throw InvalidArgument("unknown method '" + item + "' (expected RHF, UHF, FCI, CISD)");
    any = true;
  }
  if (!any) throw InvalidArgument("method list is empty");
  return m;
}

std::string MethodSet::to_string() const {
  std::string out;
  auto add = [&](bool on, const char* name) {
    if (!on) return;
    if (!out.empty()) out += ",";
    out += name;
  };
  add(rhf, "RHF");
  add(uhf, "UHF");
  add(fci, "FCI");
  add(cisd, "CISD");
  return out;
}

EntropyReport compute_point(const Molecule& mol, const PipelineOptions& opts) {
  if (!opts.methods.has_hf() || !opts.methods.has_ci())
    throw InvalidArgument("methods must include a Hartree-Fock variant and a CI variant");
  const BasisSetInstance basis = build_basis(mol, opts.basis);
  const IntegralSet ints = build_integrals(mol, basis);
  const int na = mol.n_alpha(), nb = mol.n_beta();

  std::optional<ScfResult> rhf, uhf;
  if (opts.methods.rhf && na == nb) rhf = run_rhf(ints, na + nb, opts.scf);
  if (opts.methods.uhf) uhf = run_uhf(ints, na, nb, opts.scf);
  if (!rhf && !uhf) throw InvalidArgument("RHF cannot describe an open-shell molecule; request UHF");

  const ScfResult* ref_scf = nullptr;
  if (uhf && uhf->converged)
    ref_scf = &*uhf;
  else if (rhf && rhf->converged)
    ref_scf = &*rhf;
  else
    ref_scf = uhf ? &*uhf : &*rhf;

  const MOIntegrals mo = mo_transform(ints, *ref_scf, /*allow_unconverged=*/true);
  const CiMode mode = opts.methods.ci_mode();
  const auto dets = enumerate_determinants(mo.m, na, nb, mode, aufbau_determinant(na, nb));
  const CIWavefunction wf = solve_ci(dets, mo, ints.core_energy, mode);

  EntropyReport report = make_entropy_report(
      wf, rhf ? std::optional<double>(rhf->total_energy) : std::nullopt,
      uhf ? std::optional<double>(uhf->total_energy) : std::nullopt, std::string(to_string(opts.basis)),
      std::string(to_string(ref_scf->kind)));
  report.rhf_converged = !rhf || rhf->converged;
  report.uhf_converged = !uhf || uhf->converged;
  if (uhf) report.uhf_s2 = uhf->spin_contamination;
  return report;
}

void ScanConfig::validate() const {
  if (!geometry) throw InvalidArgument("scan configuration has no geometry");
  const auto& m = pipeline.methods;
  if (!m.has_hf() || !m.has_ci())
    throw InvalidArgument("methods must include a Hartree-Fock variant (RHF/UHF) and a CI variant (FCI/CISD)");
  if (mode == ScanMode::kSingle) return;
  if (r_values.empty()) throw InvalidArgument("r_values is empty");
  for (std::size_t i = 0; i < r_values.size(); ++i) {
    if (!(r_values[i] > 0.0) || !std::isfinite(r_values[i]))
      throw InvalidArgument("r_values must be strictly positive");
    if (i > 0 && !(r_values[i] > r_values[i - 1]))
      throw InvalidArgument("r_values must be strictly increasing");
  }
  for (double t : theta_values)
    if (!(t >= 0.0 && t < 360.0)) throw InvalidArgument("theta values must lie in [0, 360) degrees");
  {
    auto sorted = theta_values;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw InvalidArgument("theta values must be distinct");
  }
  if (mode == ScanMode::kDissociation) {
    if (geometry->size() != 2) throw InvalidArgument("dissociation scans need a diatomic geometry");
    if (!theta_values.empty()) throw InvalidArgument("theta values are not used in dissociation mode");
  }
  if (mode == ScanMode::kFragments) {
    if (geometry_b && !same_fragment(*geometry, *geometry_b))
      throw InvalidArgument("fragment scans need two identical fragments");
  }
}

ScanRow row_from_report(ScanMode mode, std::optional<double> r, std::optional<double> theta,
                        const EntropyReport& report) {
  ScanRow row;
  row.mode = mode;
  row.r_bohr = r;
  row.theta_deg = theta;
  row.e_rhf = report.e_hf_rhf;
  row.e_uhf = report.e_hf_uhf;
  row.e_fci = report.e_fci;
  row.e_c_rhf = report.e_c_rhf;
  row.e_c_uhf = report.e_c_uhf;
  row.s_rho1_cisd = report.s_rho1_cisd;
  row.s_nso = report.s_nso;
  row.converged = report.converged();
  return row;
}

Molecule place_diatomic(const Molecule& templ, double r) {
  if (templ.size() != 2) throw InvalidArgument("diatomic template must have two atoms");
  const Eigen::Vector3d axis = (templ.atoms()[1].position - templ.atoms()[0].position).normalized();
  std::vector<Atom> atoms = templ.atoms();
  atoms[1].position = atoms[0].position + r * axis;
  return Molecule(std::move(atoms), templ.net_charge(), templ.multiplicity());
}

Molecule centered(const Molecule& mol) { return mol.translated(-mol.centroid()); }

Molecule place_fragments(const Molecule& fragment, double r, double theta_deg) {
  const Molecule a = centered(fragment);
  const Eigen::Matrix3d rot =
      Eigen::AngleAxisd(theta_deg * std::numbers::pi / 180.0, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  const Molecule b = a.transformed(rot, Eigen::Vector3d(0.0, 0.0, r));
  std::vector<Atom> atoms = a.atoms();
  atoms.insert(atoms.end(), b.atoms().begin(), b.atoms().end());
  const int unpaired = fragment.multiplicity() - 1;
  return Molecule(std::move(atoms), 2 * fragment.net_charge(), 2 * unpaired + 1);
}

ScanRow run_single(const ScanConfig& cfg) {
  cfg.validate();
  try {
    return row_from_report(ScanMode::kSingle, std::nullopt, std::nullopt, compute_point(*cfg.geometry, cfg.pipeline));
  } catch (const std::exception& e) {
    return failed_row(ScanMode::kSingle, std::nullopt, std::nullopt, e.what());
  }
}

std::vector<ScanRow> run_dissociation_scan(const ScanConfig& cfg) {
  if (cfg.mode != ScanMode::kDissociation) throw InvalidArgument("configuration is not a dissociation scan");
  cfg.validate();
  std::vector<ScanRow> rows(cfg.r_values.size());
  parallel_for(rows.size(), cfg.threads, [&](std::size_t i) {
    const double r = cfg.r_values[i];
    try {
      rows[i] = row_from_report(ScanMode::kDissociation, r, std::nullopt,
                                compute_point(place_diatomic(*cfg.geometry, r), cfg.pipeline));
    } catch (const std::exception& e) {
      rows[i] = failed_row(ScanMode::kDissociation, r, std::nullopt, e.what());
    }
  });
  return rows;
}

std::vector<ScanRow> run_fragment_scan(const ScanConfig& cfg) {
  if (cfg.mode != ScanMode::kFragments) throw InvalidArgument("configuration is not a fragment scan");
  cfg.validate();
  std::vector<double> thetas = cfg.theta_values.empty() ? std::vector<double>{0.0} : cfg.theta_values;
  std::sort(thetas.begin(), thetas.end());

  std::optional<EntropyReport> monomer;
  std::string monomer_error;
  try {
    monomer = compute_point(centered(*cfg.geometry), cfg.pipeline);
  } catch (const std::exception& e) {
    monomer_error = std::string("monomer: ") + e.what();
  }

  const std::size_t nt = thetas.size();
  std::vector<ScanRow> rows(cfg.r_values.size() * nt);
  parallel_for(rows.size(), cfg.threads, [&](std::size_t idx) {
    const double r = cfg.r_values[idx / nt];
    const double theta = thetas[idx % nt];
    if (!monomer) {
      rows[idx] = failed_row(ScanMode::kFragments, r, theta, monomer_error);
      return;
    }
    try {
      const EntropyReport dimer = compute_point(place_fragments(*cfg.geometry, r, theta), cfg.pipeline);
      ScanRow row = row_from_report(ScanMode::kFragments, r, theta, dimer);
      const InteractionQuantities q = interaction_quantities(dimer, *monomer);
      row.s_int = q.s_int;
      row.e_c_int = q.e_c_int;
      row.converged = dimer.converged() && monomer->converged();
      rows[idx] = std::move(row);
    } catch (const std::exception& e) {
      rows[idx] = failed_row(ScanMode::kFragments, r, theta, e.what());
    }
  });
  return rows;
}

std::string format_csv(const std::vector<ScanRow>& rows) {
  for (const auto& row : rows)
    if (row.mode != rows.front().mode)
      throw InvalidArgument("rows from different scan modes do not share a column set");
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& row : rows) {
    const std::optional<double> cells[] = {row.r_bohr, row.theta_deg, row.e_rhf,       row.e_uhf,
                                           row.e_fci,  row.e_c_rhf,   row.e_c_uhf,     row.s_rho1_cisd,
                                           row.s_nso,  row.s_int,     row.e_c_int};
    for (const auto& c : cells) out += format_value(c) + ",";
    out += row.converged ? "1\n" : "0\n";
  }
  return out;
}

void write_csv(const std::vector<ScanRow>& rows, const std::string& path) {
  const std::string text = format_csv(rows);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write CSV file '" + path + "'");
  out << text;
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::vector<ScanRow> parse_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw ParseError("unexpected CSV header", 1);
  std::vector<ScanRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 12) throw ParseError("expected 12 columns", line_no);
    std::optional<double> v[11];
    for (std::size_t i = 0; i < 11; ++i) {
      if (cells[i].empty()) continue;
      try {
        v[i] = std::stod(cells[i]);
      } catch (const std::exception&) {
        throw ParseError("bad number '" + cells[i] + "'", line_no);
      }
    }
    ScanRow row;
    row.r_bohr = v[0];
    row.theta_deg = v[1];
    row.e_rhf = v[2];
    row.e_uhf = v[3];
    row.e_fci = v[4];
    row.e_c_rhf = v[5];
    row.e_c_uhf = v[6];
    row.s_rho1_cisd = v[7];
    row.s_nso = v[8];
    row.s_int = v[9];
    row.e_c_int = v[10];
    row.converged = cells[11] == "1";
    row.mode = row.theta_deg ? ScanMode::kFragments : row.r_bohr ? ScanMode::kDissociation : ScanMode::kSingle;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> linspace(double lo, double hi, int steps) {
  if (steps < 1) throw InvalidArgument("step count must be positive");
  if (steps == 1) return {lo};
  std::vector<double> out(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (steps - 1);
  return out;
}

}  // namespace entcorr
