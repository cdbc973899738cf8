// Exercises the shared library through its C header only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "entcorr/entcorr.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>

namespace {

constexpr const char* kH2 = "2\nH2\nH 0 0 0\nH 0.7408481 0 0\n";  // 1.4 bohr

struct Session {
  entcorr_molecule mol = nullptr;
  entcorr_config cfg = nullptr;
  entcorr_rows rows = nullptr;
  Session() {
    REQUIRE(entcorr_molecule_from_xyz(kH2, 0, 0, &mol) == ENTCORR_OK);
    REQUIRE(entcorr_config_create(&cfg) == ENTCORR_OK);
    REQUIRE(entcorr_config_set_geometry(cfg, mol) == ENTCORR_OK);
  }
  ~Session() {
    entcorr_rows_free(rows);
    entcorr_config_free(cfg);
    entcorr_molecule_free(mol);
  }
};

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / (std::string("entcorr_test_capi_") + name)).string();
}

}  // namespace

TEST_CASE("version and status strings") {
  CHECK(std::strlen(entcorr_version()) > 0);
  CHECK(std::string(entcorr_status_string(ENTCORR_OK)).size() > 0);
  CHECK(std::string(entcorr_status_string(ENTCORR_ERR_PARSE)) != entcorr_status_string(ENTCORR_OK));
  CHECK(entcorr_status_string(static_cast<entcorr_status>(999)) != nullptr);
}

TEST_CASE("null handles are rejected") {
  CHECK(entcorr_config_create(nullptr) == ENTCORR_ERR_NULL_HANDLE);
  CHECK(entcorr_config_set_basis(nullptr, "STO-3G") == ENTCORR_ERR_NULL_HANDLE);
  CHECK(entcorr_run(nullptr, nullptr) == ENTCORR_ERR_NULL_HANDLE);
  size_t n = 0;
  CHECK(entcorr_rows_count(nullptr, &n) == ENTCORR_ERR_NULL_HANDLE);
  CHECK(entcorr_molecule_atom_count(nullptr, &n) == ENTCORR_ERR_NULL_HANDLE);
  CHECK(std::strlen(entcorr_last_error()) > 0);
  entcorr_molecule_free(nullptr);
  entcorr_config_free(nullptr);
  entcorr_rows_free(nullptr);
}

TEST_CASE("molecule handles") {
  entcorr_molecule m = nullptr;
  REQUIRE(entcorr_molecule_from_xyz(kH2, 0, 0, &m) == ENTCORR_OK);
  size_t n = 0;
  CHECK(entcorr_molecule_atom_count(m, &n) == ENTCORR_OK);
  CHECK(n == 2);
  double enuc = 0;
  CHECK(entcorr_molecule_nuclear_repulsion(m, &enuc) == ENTCORR_OK);
  CHECK(enuc == doctest::Approx(1 / 1.4).epsilon(1e-7));
  entcorr_molecule_free(m);

  entcorr_molecule bad = reinterpret_cast<entcorr_molecule>(0x1);
  CHECK(entcorr_molecule_from_xyz("2\nx\nH 0 0 0\n", 0, 0, &bad) == ENTCORR_ERR_PARSE);
  CHECK(bad == nullptr);
  CHECK(std::string(entcorr_last_error()).find("line") != std::string::npos);
  CHECK(entcorr_molecule_from_xyz_file("/nonexistent.xyz", 0, 0, &bad) == ENTCORR_ERR_IO);
}

TEST_CASE("configuration errors map to status codes") {
  Session s;
  CHECK(entcorr_config_set_basis(s.cfg, "cc-pVTZ") != ENTCORR_OK);
  CHECK(entcorr_config_set_methods(s.cfg, "MP2") == ENTCORR_ERR_INVALID_ARGUMENT);
  CHECK(entcorr_config_set_e_tol(s.cfg, -1) == ENTCORR_ERR_INVALID_ARGUMENT);
  CHECK(entcorr_config_set_max_iter(s.cfg, 0) == ENTCORR_ERR_INVALID_ARGUMENT);
  CHECK(entcorr_config_set_r_values(s.cfg, nullptr, 3) == ENTCORR_ERR_NULL_HANDLE);
  // Dissociation with no distances is a validation failure, not a crash.
  CHECK(entcorr_run(s.cfg, &s.rows) == ENTCORR_ERR_INVALID_ARGUMENT);
  CHECK(s.rows == nullptr);
  CHECK(std::string(entcorr_last_error()).find("r_values") != std::string::npos);
}

TEST_CASE("single point") {
  Session s;
  CHECK(entcorr_config_set_mode(s.cfg, ENTCORR_MODE_SINGLE) == ENTCORR_OK);
  CHECK(entcorr_config_set_basis(s.cfg, "3-21G") == ENTCORR_OK);
  REQUIRE(entcorr_run(s.cfg, &s.rows) == ENTCORR_OK);
  size_t n = 0;
  CHECK(entcorr_rows_count(s.rows, &n) == ENTCORR_OK);
  REQUIRE(n == 1);
  entcorr_row row;
  REQUIRE(entcorr_rows_get(s.rows, 0, &row) == ENTCORR_OK);
  CHECK(row.converged == 1);
  CHECK((row.present & ENTCORR_HAS_E_RHF));
  CHECK((row.present & ENTCORR_HAS_S_NSO));
  CHECK_FALSE((row.present & ENTCORR_HAS_R));
  CHECK_FALSE((row.present & ENTCORR_HAS_S_INT));
  CHECK(row.e_fci == doctest::Approx(-1.1478239).epsilon(1e-6));
  CHECK(row.e_fci <= row.e_rhf);
  const char* err = nullptr;
  CHECK(entcorr_rows_error(s.rows, 0, &err) == ENTCORR_OK);
  CHECK(std::string(err).empty());
  CHECK(entcorr_rows_get(s.rows, 1, &row) == ENTCORR_ERR_OUT_OF_RANGE);
}

TEST_CASE("dissociation scan and CSV") {
  Session s;
  const double r[] = {1.0, 1.4, 3.0};
  CHECK(entcorr_config_set_r_values(s.cfg, r, 3) == ENTCORR_OK);
  CHECK(entcorr_config_set_basis(s.cfg, "STO-3G") == ENTCORR_OK);
  CHECK(entcorr_config_set_threads(s.cfg, 2) == ENTCORR_OK);
  REQUIRE(entcorr_run(s.cfg, &s.rows) == ENTCORR_OK);
  size_t n = 0;
  entcorr_rows_count(s.rows, &n);
  REQUIRE(n == 3);
  for (size_t i = 0; i < n; ++i) {
    entcorr_row row;
    entcorr_rows_get(s.rows, i, &row);
    CHECK(row.r_bohr == r[i]);
    CHECK((row.present & ENTCORR_HAS_E_UHF));
    CHECK_FALSE((row.present & ENTCORR_HAS_THETA));
  }
  const char* csv = nullptr;
  REQUIRE(entcorr_rows_csv(s.rows, &csv) == ENTCORR_OK);
  const std::string text(csv);
  CHECK(text.starts_with("r_bohr,theta_deg,"));
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);

  const auto path = temp_path("scan.csv");
  CHECK(entcorr_rows_write_csv(s.rows, path.c_str()) == ENTCORR_OK);
  CHECK(std::filesystem::file_size(path) == text.size());
  std::filesystem::remove(path);
  CHECK(entcorr_rows_write_csv(s.rows, "/nonexistent/dir/x.csv") == ENTCORR_ERR_IO);
}

TEST_CASE("fragment scan") {
  Session s;
  const double r[] = {5.0};
  const double th[] = {0.0, 90.0};
  entcorr_config_set_mode(s.cfg, ENTCORR_MODE_FRAGMENTS);
  entcorr_config_set_basis(s.cfg, "STO-3G");
  entcorr_config_set_r_values(s.cfg, r, 1);
  entcorr_config_set_theta_values(s.cfg, th, 2);
  REQUIRE(entcorr_run(s.cfg, &s.rows) == ENTCORR_OK);
  size_t n = 0;
  entcorr_rows_count(s.rows, &n);
  REQUIRE(n == 2);
  entcorr_row row;
  entcorr_rows_get(s.rows, 1, &row);
  CHECK(row.theta_deg == 90.0);
  CHECK((row.present & ENTCORR_HAS_S_INT));
  CHECK((row.present & ENTCORR_HAS_E_C_INT));
  CHECK(std::abs(row.s_int) > 1e-6);

  const double bad_theta[] = {400.0};
  entcorr_rows_free(s.rows);
  s.rows = nullptr;
  entcorr_config_set_theta_values(s.cfg, bad_theta, 1);
  CHECK(entcorr_run(s.cfg, &s.rows) == ENTCORR_ERR_INVALID_ARGUMENT);
}

TEST_CASE("FCIDUMP write and ingest") {
  Session s;
  entcorr_config_set_mode(s.cfg, ENTCORR_MODE_SINGLE);
  entcorr_config_set_basis(s.cfg, "6-31G");
  entcorr_config_set_methods(s.cfg, "RHF,FCI");
  const auto path = temp_path("h2.fcidump");
  REQUIRE(entcorr_write_fcidump(s.cfg, path.c_str()) == ENTCORR_OK);
  REQUIRE(entcorr_run(s.cfg, &s.rows) == ENTCORR_OK);
  entcorr_row direct;
  entcorr_rows_get(s.rows, 0, &direct);

  for (const char* ci : {"FCI", "cisd"}) {
    entcorr_rows dumped = nullptr;
    REQUIRE(entcorr_run_fcidump(path.c_str(), ci, &dumped) == ENTCORR_OK);
    entcorr_row row;
    entcorr_rows_get(dumped, 0, &row);
    CHECK(std::abs(row.e_fci - direct.e_fci) < 1e-10);
    CHECK(std::abs(row.s_nso - direct.s_nso) < 1e-8);
    entcorr_rows_free(dumped);
  }
  entcorr_rows dumped = nullptr;
  CHECK(entcorr_run_fcidump(path.c_str(), "MP2", &dumped) == ENTCORR_ERR_INVALID_ARGUMENT);
  std::filesystem::remove(path);
  CHECK(entcorr_run_fcidump(path.c_str(), "FCI", &dumped) == ENTCORR_ERR_IO);
  CHECK(dumped == nullptr);

  const auto broken = temp_path("broken.fcidump");
  std::FILE* f = std::fopen(broken.c_str(), "w");
  std::fputs("&FCI NORB=4,NELEC=2,MS2=0,&END\n 0.5 5 1 1 1\n", f);
  std::fclose(f);
  CHECK(entcorr_run_fcidump(broken.c_str(), "FCI", &dumped) == ENTCORR_ERR_PARSE);
  CHECK(std::string(entcorr_last_error()).find("index 5") != std::string::npos);
  std::filesystem::remove(broken);
}

TEST_CASE("unconverged points are rows, not failures") {
  Session s;
  const double r[] = {1.4};
  entcorr_config_set_r_values(s.cfg, r, 1);
  entcorr_config_set_max_iter(s.cfg, 1);
  REQUIRE(entcorr_run(s.cfg, &s.rows) == ENTCORR_OK);
  entcorr_row row;
  entcorr_rows_get(s.rows, 0, &row);
  CHECK(row.converged == 0);
}
