// entcorr command-line driver. Talks to the library only through the C API.
#include "entcorr/entcorr.h"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr double kBohrPerAngstrom = 1.8897259886;
constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitConvergence = 2;

// Equilibrium H2 along x (in the fragment plane), used when no --geometry is given.
constexpr const char* kDefaultH2 = "2\nH2\nH 0 0 0\nH 0.7414 0 0\n";

struct ConfigError {
  std::string message;
};

void check(entcorr_status st, const char* what) {
  if (st != ENTCORR_OK) {
    const std::string detail = entcorr_last_error();
    throw ConfigError{std::string(what) + ": " + (detail.empty() ? entcorr_status_string(st) : detail)};
  }
}

struct MoleculeDeleter {
  void operator()(entcorr_molecule_s* m) const { entcorr_molecule_free(m); }
};
struct ConfigDeleter {
  void operator()(entcorr_config_s* c) const { entcorr_config_free(c); }
};
struct RowsDeleter {
  void operator()(entcorr_rows_s* r) const { entcorr_rows_free(r); }
};
using MoleculePtr = std::unique_ptr<entcorr_molecule_s, MoleculeDeleter>;
using ConfigPtr = std::unique_ptr<entcorr_config_s, ConfigDeleter>;
using RowsPtr = std::unique_ptr<entcorr_rows_s, RowsDeleter>;

struct Options {
  std::string geometry;
  std::string geometry_b;
  std::string basis = "3-21G";
  std::string methods = "RHF,UHF,FCI";
  std::optional<double> rmin, rmax;
  int steps = 0;
  std::vector<double> rlist;
  std::vector<double> thetalist;
  std::string output;
  double e_tol = 1e-10;
  int max_iter = 200;
  unsigned seed = 0;  // reserved: the pipeline is deterministic
  unsigned threads = 0;
  bool angstrom = false;
  bool strict = false;
  std::string input;         // fcidump
  std::string write_fcidump;  // single
};

MoleculePtr load_molecule(const std::string& path) {
  entcorr_molecule m = nullptr;
  if (path.empty())
    check(entcorr_molecule_from_xyz(kDefaultH2, 0, 0, &m), "default geometry");
  else
    check(entcorr_molecule_from_xyz_file(path.c_str(), 0, 0, &m), "geometry");
  return MoleculePtr(m);
}

std::vector<double> r_values(const Options& o) {
  std::vector<double> r;
  const bool range = o.rmin || o.rmax || o.steps != 0;
  if (!o.rlist.empty() && range) throw ConfigError{"use either --rlist or --rmin/--rmax/--steps, not both"};
  if (!o.rlist.empty()) {
    r = o.rlist;
  } else if (range) {
    if (!o.rmin || !o.rmax || o.steps < 1) throw ConfigError{"--rmin, --rmax and --steps must be given together"};
    if (o.steps == 1) {
      r.push_back(*o.rmin);
    } else {
      for (int i = 0; i < o.steps; ++i) r.push_back(*o.rmin + (*o.rmax - *o.rmin) * i / (o.steps - 1));
    }
  }
  if (o.angstrom)
    for (auto& v : r) v *= kBohrPerAngstrom;
  return r;
}

ConfigPtr make_config(const Options& o, entcorr_mode mode) {
  entcorr_config c = nullptr;
  check(entcorr_config_create(&c), "config");
  ConfigPtr cfg(c);
  check(entcorr_config_set_mode(c, mode), "mode");
  auto mol = load_molecule(o.geometry);
  check(entcorr_config_set_geometry(c, mol.get()), "geometry");
  if (!o.geometry_b.empty()) {
    auto b = load_molecule(o.geometry_b);
    check(entcorr_config_set_second_fragment(c, b.get()), "--geometry-b");
  }
  check(entcorr_config_set_basis(c, o.basis.c_str()), "--basis");
  check(entcorr_config_set_methods(c, o.methods.c_str()), "--methods");
  check(entcorr_config_set_e_tol(c, o.e_tol), "--e-tol");
  check(entcorr_config_set_max_iter(c, o.max_iter), "--max-iter");
  check(entcorr_config_set_threads(c, o.threads), "--threads");
  if (mode != ENTCORR_MODE_SINGLE) {
    const auto r = r_values(o);
    check(entcorr_config_set_r_values(c, r.data(), r.size()), "r values");
  }
  if (mode == ENTCORR_MODE_FRAGMENTS) {
    const std::vector<double> theta = o.thetalist.empty() ? std::vector<double>{0.0} : o.thetalist;
    check(entcorr_config_set_theta_values(c, theta.data(), theta.size()), "--thetalist");
  }
  return cfg;
}

void print_value(const char* name, const entcorr_row& row, unsigned bit, double v, const char* unit) {
  if (row.present & bit) std::printf("  %-14s %20.12f %s\n", name, v, unit);
}

void print_report(entcorr_rows rows) {
  size_t n = 0;
  check(entcorr_rows_count(rows, &n), "rows");
  for (size_t i = 0; i < n; ++i) {
    entcorr_row row;
    check(entcorr_rows_get(rows, i, &row), "rows");
    const char* err = "";
    check(entcorr_rows_error(rows, i, &err), "rows");
    if (*err) {
      std::printf("point failed: %s\n", err);
      continue;
    }
    print_value("E_RHF", row, ENTCORR_HAS_E_RHF, row.e_rhf, "Eh");
    print_value("E_UHF", row, ENTCORR_HAS_E_UHF, row.e_uhf, "Eh");
    print_value("E_CI", row, ENTCORR_HAS_E_FCI, row.e_fci, "Eh");
    print_value("E_c(RHF)", row, ENTCORR_HAS_E_C_RHF, row.e_c_rhf, "Eh");
    print_value("E_c(UHF)", row, ENTCORR_HAS_E_C_UHF, row.e_c_uhf, "Eh");
    print_value("S(rho1)", row, ENTCORR_HAS_S_RHO1, row.s_rho1_cisd, "bits");
    print_value("S_nso", row, ENTCORR_HAS_S_NSO, row.s_nso, "bits");
    std::printf("  %-14s %20s\n", "converged", row.converged ? "yes" : "no");
  }
}

int finish(entcorr_rows rows, const Options& o, bool to_stdout_when_no_output) {
  if (!o.output.empty())
    check(entcorr_rows_write_csv(rows, o.output.c_str()), "--output");
  else if (to_stdout_when_no_output) {
    const char* csv = nullptr;
    check(entcorr_rows_csv(rows, &csv), "csv");
    std::fputs(csv, stdout);
  }
  size_t n = 0;
  check(entcorr_rows_count(rows, &n), "rows");
  int failed = 0;
  for (size_t i = 0; i < n; ++i) {
    entcorr_row row;
    check(entcorr_rows_get(rows, i, &row), "rows");
    if (!row.converged) ++failed;
  }
  if (failed) {
    std::fprintf(stderr, "%d of %zu point(s) did not converge\n", failed, n);
    if (o.strict) return kExitConvergence;
  }
  return kExitOk;
}

int run_mode(const Options& o, entcorr_mode mode) {
  auto cfg = make_config(o, mode);
  entcorr_rows r = nullptr;
  check(entcorr_run(cfg.get(), &r), "run");
  RowsPtr rows(r);
  if (mode == ENTCORR_MODE_SINGLE) {
    if (!o.write_fcidump.empty())
      check(entcorr_write_fcidump(cfg.get(), o.write_fcidump.c_str()), "--write-fcidump");
    print_report(rows.get());
    return finish(rows.get(), o, false);
  }
  return finish(rows.get(), o, true);
}

int run_fcidump(const Options& o) {
  if (o.input.empty()) throw ConfigError{"fcidump requires --input"};
  std::string ci = "FCI";
  if (o.methods.find("CISD") != std::string::npos || o.methods.find("cisd") != std::string::npos) ci = "CISD";
  entcorr_rows r = nullptr;
  check(entcorr_run_fcidump(o.input.c_str(), ci.c_str(), &r), "fcidump");
  RowsPtr rows(r);
  print_report(rows.get());
  return finish(rows.get(), o, false);
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--geometry", o.geometry, "XYZ file (Angstrom); default H2 at 0.7414 A");
  sub->add_option("--basis", o.basis, "STO-3G, 3-21G or 6-31G");
  sub->add_option("--methods", o.methods, "comma list from RHF,UHF,FCI,CISD");
  sub->add_option("--output", o.output, "CSV output path");
  sub->add_option("--e-tol", o.e_tol, "SCF energy tolerance (hartree)");
  sub->add_option("--max-iter", o.max_iter, "SCF iteration limit");
  sub->add_option("--seed", o.seed, "reserved; results do not depend on it");
  sub->add_option("--threads", o.threads, "worker threads for scans (0 = all cores)");
  sub->add_flag("--strict", o.strict, "exit 2 if any point fails to converge");
}

void add_distances(CLI::App* sub, Options& o) {
  sub->add_option("--rmin", o.rmin, "first distance");
  sub->add_option("--rmax", o.rmax, "last distance");
  sub->add_option("--steps", o.steps, "number of evenly spaced distances");
  sub->add_option("--rlist", o.rlist, "explicit distances")->delimiter(',');
  sub->add_flag("--angstrom", o.angstrom, "distances are in Angstrom instead of bohr");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Correlation energy and entanglement entropy for small molecules"};
  app.set_version_flag("--version", entcorr_version());
  app.require_subcommand(1);
  Options o;

  auto* single = app.add_subcommand("single", "one geometry, full report on stdout");
  add_common(single, o);
  single->add_option("--write-fcidump", o.write_fcidump, "also write RHF MO integrals as FCIDUMP");

  auto* scan = app.add_subcommand("scan", "dissociation scan over the bond length");
  add_common(scan, o);
  add_distances(scan, o);

  auto* frag = app.add_subcommand("fragments", "two-fragment distance/rotation scan");
  add_common(frag, o);
  add_distances(frag, o);
  frag->add_option("--geometry-b", o.geometry_b, "second fragment (must match the first)");
  frag->add_option("--thetalist", o.thetalist, "rotation angles in degrees")->delimiter(',');

  auto* dump = app.add_subcommand("fcidump", "CI and entropies from an FCIDUMP file");
  dump->add_option("--input", o.input, "FCIDUMP file")->required();
  dump->add_option("--methods", o.methods, "FCI (default) or CISD");
  dump->add_option("--output", o.output, "CSV output path");
  dump->add_option("--seed", o.seed, "reserved; results do not depend on it");
  dump->add_flag("--strict", o.strict, "exit 2 if the computation fails");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*single) return run_mode(o, ENTCORR_MODE_SINGLE);
    if (*scan) return run_mode(o, ENTCORR_MODE_DISSOCIATION);
    if (*frag) return run_mode(o, ENTCORR_MODE_FRAGMENTS);
    return run_fcidump(o);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return kExitConfig;
  }
}
