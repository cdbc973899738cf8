#include "entcorr/entcorr.h"

#include "entcorr/detci.hpp"
#include "entcorr/error.hpp"
#include "entcorr/fcidump.hpp"
#include "entcorr/integrals.hpp"
#include "entcorr/scan.hpp"
#include "entcorr/scf.hpp"

#include <cctype>
#include <memory>
#include <new>
#include <string>
#include <vector>

struct entcorr_molecule_s {
  entcorr::Molecule mol;
};

struct entcorr_config_s {
  entcorr::ScanConfig cfg;
};

struct entcorr_rows_s {
  std::vector<entcorr::ScanRow> rows;
  std::string csv;
};

namespace {

thread_local std::string g_last_error;

entcorr_status status_of(entcorr::ErrorKind kind) {
  using entcorr::ErrorKind;
  switch (kind) {
    case ErrorKind::kInvalidArgument:
      return ENTCORR_ERR_INVALID_ARGUMENT;
    case ErrorKind::kParse:
      return ENTCORR_ERR_PARSE;
    case ErrorKind::kUnsupported:
      return ENTCORR_ERR_UNSUPPORTED;
    case ErrorKind::kLinearDependence:
      return ENTCORR_ERR_LINEAR_DEPENDENCE;
    case ErrorKind::kSize:
      return ENTCORR_ERR_SIZE;
    case ErrorKind::kIo:
      return ENTCORR_ERR_IO;
    case ErrorKind::kNumerical:
      return ENTCORR_ERR_NUMERICAL;
  }
  return ENTCORR_ERR_INTERNAL;
}

entcorr_status fail(entcorr_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <class F>
entcorr_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return ENTCORR_OK;
  } catch (const entcorr::Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(ENTCORR_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ENTCORR_ERR_INTERNAL, e.what());
  }
}

#define ENTCORR_REQUIRE(ptr)                                          \
  do {                                                                \
    if (!(ptr)) return fail(ENTCORR_ERR_NULL_HANDLE, #ptr " is NULL"); \
  } while (0)

entcorr_row to_c_row(const entcorr::ScanRow& r) {
  entcorr_row out{};
  auto put = [&](const std::optional<double>& v, double& dst, unsigned bit) {
    if (v) {
      dst = *v;
      out.present |= bit;
    }
  };
  put(r.r_bohr, out.r_bohr, ENTCORR_HAS_R);
  put(r.theta_deg, out.theta_deg, ENTCORR_HAS_THETA);
  put(r.e_rhf, out.e_rhf, ENTCORR_HAS_E_RHF);
  put(r.e_uhf, out.e_uhf, ENTCORR_HAS_E_UHF);
  put(r.e_fci, out.e_fci, ENTCORR_HAS_E_FCI);
  put(r.e_c_rhf, out.e_c_rhf, ENTCORR_HAS_E_C_RHF);
  put(r.e_c_uhf, out.e_c_uhf, ENTCORR_HAS_E_C_UHF);
  put(r.s_rho1_cisd, out.s_rho1_cisd, ENTCORR_HAS_S_RHO1);
  put(r.s_nso, out.s_nso, ENTCORR_HAS_S_NSO);
  put(r.s_int, out.s_int, ENTCORR_HAS_S_INT);
  put(r.e_c_int, out.e_c_int, ENTCORR_HAS_E_C_INT);
  out.converged = r.converged ? 1 : 0;
  return out;
}

}  // namespace

extern "C" {

const char* entcorr_version(void) { return "1.0.0"; }

const char* entcorr_status_string(entcorr_status status) {
  switch (status) {
    case ENTCORR_OK:
      return "ok";
    case ENTCORR_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case ENTCORR_ERR_PARSE:
      return "parse error";
    case ENTCORR_ERR_UNSUPPORTED:
      return "unsupported";
    case ENTCORR_ERR_LINEAR_DEPENDENCE:
      return "linear dependence";
    case ENTCORR_ERR_SIZE:
      return "size limit exceeded";
    case ENTCORR_ERR_IO:
      return "i/o error";
    case ENTCORR_ERR_NUMERICAL:
      return "numerical failure";
    case ENTCORR_ERR_NULL_HANDLE:
      return "null handle";
    case ENTCORR_ERR_OUT_OF_RANGE:
      return "index out of range";
    case ENTCORR_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* entcorr_last_error(void) { return g_last_error.c_str(); }

entcorr_status entcorr_molecule_from_xyz(const char* text, int net_charge, int multiplicity,
                                         entcorr_molecule* out) {
  ENTCORR_REQUIRE(text);
  ENTCORR_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new entcorr_molecule_s{entcorr::parse_xyz(text, net_charge, multiplicity)}; });
}

entcorr_status entcorr_molecule_from_xyz_file(const char* path, int net_charge, int multiplicity,
                                              entcorr_molecule* out) {
  ENTCORR_REQUIRE(path);
  ENTCORR_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new entcorr_molecule_s{entcorr::read_xyz_file(path, net_charge, multiplicity)}; });
}

entcorr_status entcorr_molecule_atom_count(entcorr_molecule mol, size_t* out) {
  ENTCORR_REQUIRE(mol);
  ENTCORR_REQUIRE(out);
  *out = mol->mol.size();
  return ENTCORR_OK;
}

entcorr_status entcorr_molecule_nuclear_repulsion(entcorr_molecule mol, double* out) {
  ENTCORR_REQUIRE(mol);
  ENTCORR_REQUIRE(out);
  return guarded([&] { *out = entcorr::nuclear_repulsion(mol->mol); });
}

void entcorr_molecule_free(entcorr_molecule mol) { delete mol; }

entcorr_status entcorr_config_create(entcorr_config* out) {
  ENTCORR_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new entcorr_config_s{}; });
}

void entcorr_config_free(entcorr_config cfg) { delete cfg; }

entcorr_status entcorr_config_set_mode(entcorr_config cfg, entcorr_mode mode) {
  ENTCORR_REQUIRE(cfg);
  switch (mode) {
    case ENTCORR_MODE_SINGLE:
      cfg->cfg.mode = entcorr::ScanMode::kSingle;
      return ENTCORR_OK;
    case ENTCORR_MODE_DISSOCIATION:
      cfg->cfg.mode = entcorr::ScanMode::kDissociation;
      return ENTCORR_OK;
    case ENTCORR_MODE_FRAGMENTS:
      cfg->cfg.mode = entcorr::ScanMode::kFragments;
      return ENTCORR_OK;
  }
  return fail(ENTCORR_ERR_INVALID_ARGUMENT, "unknown mode");
}

entcorr_status entcorr_config_set_geometry(entcorr_config cfg, entcorr_molecule mol) {
  ENTCORR_REQUIRE(cfg);
  ENTCORR_REQUIRE(mol);
  return guarded([&] { cfg->cfg.geometry = mol->mol; });
}

entcorr_status entcorr_config_set_second_fragment(entcorr_config cfg, entcorr_molecule mol) {
  ENTCORR_REQUIRE(cfg);
  ENTCORR_REQUIRE(mol);
  return guarded([&] { cfg->cfg.geometry_b = mol->mol; });
}

entcorr_status entcorr_config_set_basis(entcorr_config cfg, const char* name) {
  ENTCORR_REQUIRE(cfg);
  ENTCORR_REQUIRE(name);
  return guarded([&] { cfg->cfg.pipeline.basis = entcorr::parse_basis_name(name); });
}

entcorr_status entcorr_config_set_methods(entcorr_config cfg, const char* comma_list) {
  ENTCORR_REQUIRE(cfg);
  ENTCORR_REQUIRE(comma_list);
  return guarded([&] { cfg->cfg.pipeline.methods = entcorr::MethodSet::parse(comma_list); });
}

entcorr_status entcorr_config_set_r_values(entcorr_config cfg, const double* r_bohr, size_t n) {
  ENTCORR_REQUIRE(cfg);
  if (n > 0) ENTCORR_REQUIRE(r_bohr);
  return guarded([&] { cfg->cfg.r_values.assign(r_bohr, r_bohr + n); });
}

entcorr_status entcorr_config_set_theta_values(entcorr_config cfg, const double* theta_deg, size_t n) {
  ENTCORR_REQUIRE(cfg);
  if (n > 0) ENTCORR_REQUIRE(theta_deg);
  return guarded([&] { cfg->cfg.theta_values.assign(theta_deg, theta_deg + n); });
}

entcorr_status entcorr_config_set_e_tol(entcorr_config cfg, double e_tol) {
  ENTCORR_REQUIRE(cfg);
  if (!(e_tol > 0.0)) return fail(ENTCORR_ERR_INVALID_ARGUMENT, "e_tol must be positive");
  cfg->cfg.pipeline.scf.e_tol = e_tol;
  return ENTCORR_OK;
}

entcorr_status entcorr_config_set_max_iter(entcorr_config cfg, int max_iter) {
  ENTCORR_REQUIRE(cfg);
  if (max_iter < 1) return fail(ENTCORR_ERR_INVALID_ARGUMENT, "max_iter must be at least 1");
  cfg->cfg.pipeline.scf.max_iter = max_iter;
  return ENTCORR_OK;
}

entcorr_status entcorr_config_set_threads(entcorr_config cfg, unsigned threads) {
  ENTCORR_REQUIRE(cfg);
  cfg->cfg.threads = threads;
  return ENTCORR_OK;
}

entcorr_status entcorr_run(entcorr_config cfg, entcorr_rows* out) {
  ENTCORR_REQUIRE(cfg);
  ENTCORR_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    auto rows = std::make_unique<entcorr_rows_s>();
    switch (cfg->cfg.mode) {
      case entcorr::ScanMode::kSingle:
        rows->rows.push_back(entcorr::run_single(cfg->cfg));
        break;
      case entcorr::ScanMode::kDissociation:
        rows->rows = entcorr::run_dissociation_scan(cfg->cfg);
        break;
      case entcorr::ScanMode::kFragments:
        rows->rows = entcorr::run_fragment_scan(cfg->cfg);
        break;
    }
    *out = rows.release();
  });
}

entcorr_status entcorr_run_fcidump(const char* path, const char* ci_method, entcorr_rows* out) {
  ENTCORR_REQUIRE(path);
  ENTCORR_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    entcorr::CiMode mode = entcorr::CiMode::kFci;
    if (ci_method) {
      std::string m(ci_method);
      for (auto& c : m) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      if (m == "CISD")
        mode = entcorr::CiMode::kCisd;
      else if (m != "FCI")
        throw entcorr::InvalidArgument("CI method must be FCI or CISD");
    }
    const auto dump = entcorr::read_fcidump(path);
    const auto report = entcorr::fcidump_report(dump, mode);
    auto rows = std::make_unique<entcorr_rows_s>();
    rows->rows.push_back(entcorr::row_from_report(entcorr::ScanMode::kSingle, std::nullopt, std::nullopt, report));
    *out = rows.release();
  });
}

entcorr_status entcorr_write_fcidump(entcorr_config cfg, const char* path) {
  ENTCORR_REQUIRE(cfg);
  ENTCORR_REQUIRE(path);
  return guarded([&] {
    if (!cfg->cfg.geometry) throw entcorr::InvalidArgument("configuration has no geometry");
    const auto& mol = *cfg->cfg.geometry;
    const auto basis = entcorr::build_basis(mol, cfg->cfg.pipeline.basis);
    const auto ints = entcorr::build_integrals(mol, basis);
    const auto scf = entcorr::run_rhf(ints, mol.n_electrons(), cfg->cfg.pipeline.scf);
    if (!scf.converged) throw entcorr::NumericalError("RHF did not converge; no FCIDUMP written");
    const auto mo = entcorr::mo_transform(ints, scf);
    entcorr::FcidumpMetadata meta;
    meta.norb = static_cast<int>(mo.m);
    meta.nelec = mol.n_electrons();
    meta.ms2 = 0;
    meta.orbsym.assign(mo.m, 1);
    entcorr::write_fcidump(path, mo, meta);
  });
}

entcorr_status entcorr_rows_count(entcorr_rows rows, size_t* out) {
  ENTCORR_REQUIRE(rows);
  ENTCORR_REQUIRE(out);
  *out = rows->rows.size();
  return ENTCORR_OK;
}

entcorr_status entcorr_rows_get(entcorr_rows rows, size_t index, entcorr_row* out) {
  ENTCORR_REQUIRE(rows);
  ENTCORR_REQUIRE(out);
  if (index >= rows->rows.size()) return fail(ENTCORR_ERR_OUT_OF_RANGE, "row index out of range");
  *out = to_c_row(rows->rows[index]);
  return ENTCORR_OK;
}

entcorr_status entcorr_rows_error(entcorr_rows rows, size_t index, const char** out) {
  ENTCORR_REQUIRE(rows);
  ENTCORR_REQUIRE(out);
  if (index >= rows->rows.size()) return fail(ENTCORR_ERR_OUT_OF_RANGE, "row index out of range");
  *out = rows->rows[index].error.c_str();
  return ENTCORR_OK;
}

entcorr_status entcorr_rows_write_csv(entcorr_rows rows, const char* path) {
  ENTCORR_REQUIRE(rows);
  ENTCORR_REQUIRE(path);
  return guarded([&] { entcorr::write_csv(rows->rows, path); });
}

entcorr_status entcorr_rows_csv(entcorr_rows rows, const char** out) {
  ENTCORR_REQUIRE(rows);
  ENTCORR_REQUIRE(out);
  return guarded([&] {
    rows->csv = entcorr::format_csv(rows->rows);
    *out = rows->csv.c_str();
  });
}

void entcorr_rows_free(entcorr_rows rows) { delete rows; }

}  // extern "C"
