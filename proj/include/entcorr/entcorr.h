/*
 * C interface to the entcorr library: correlation energies and
 * entanglement entropies for small molecules.
 *
 * Every function returns an entcorr_status. On failure a description of
 * the last error on the calling thread is available from
 * entcorr_last_error(). Handles are opaque and must be released with the
 * matching *_free function; passing NULL to a free function is a no-op.
 */
#ifndef ENTCORR_ENTCORR_H
#define ENTCORR_ENTCORR_H

#include <stddef.h>

#if defined(ENTCORR_BUILDING_LIBRARY)
#define ENTCORR_API __attribute__((visibility("default")))
#else
#define ENTCORR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum entcorr_status {
  ENTCORR_OK = 0,
  ENTCORR_ERR_INVALID_ARGUMENT = 1,
  ENTCORR_ERR_PARSE = 2,
  ENTCORR_ERR_UNSUPPORTED = 3,
  ENTCORR_ERR_LINEAR_DEPENDENCE = 4,
  ENTCORR_ERR_SIZE = 5,
  ENTCORR_ERR_IO = 6,
  ENTCORR_ERR_NUMERICAL = 7,
  ENTCORR_ERR_NULL_HANDLE = 8,
  ENTCORR_ERR_OUT_OF_RANGE = 9,
  ENTCORR_ERR_INTERNAL = 10
} entcorr_status;

typedef enum entcorr_mode {
  ENTCORR_MODE_SINGLE = 0,
  ENTCORR_MODE_DISSOCIATION = 1,
  ENTCORR_MODE_FRAGMENTS = 2
} entcorr_mode;

/* Bits of entcorr_row.present. */
#define ENTCORR_HAS_R (1u << 0)
#define ENTCORR_HAS_THETA (1u << 1)
#define ENTCORR_HAS_E_RHF (1u << 2)
#define ENTCORR_HAS_E_UHF (1u << 3)
#define ENTCORR_HAS_E_FCI (1u << 4)
#define ENTCORR_HAS_E_C_RHF (1u << 5)
#define ENTCORR_HAS_E_C_UHF (1u << 6)
#define ENTCORR_HAS_S_RHO1 (1u << 7)
#define ENTCORR_HAS_S_NSO (1u << 8)
#define ENTCORR_HAS_S_INT (1u << 9)
#define ENTCORR_HAS_E_C_INT (1u << 10)

/* One computed point. Energies in hartree, distances in bohr, angles in
 * degrees, entropies in bits. A field is meaningful only when its
 * ENTCORR_HAS_* bit is set. */
typedef struct entcorr_row {
  double r_bohr;
  double theta_deg;
  double e_rhf;
  double e_uhf;
  double e_fci;
  double e_c_rhf;
  double e_c_uhf;
  double s_rho1_cisd;
  double s_nso;
  double s_int;
  double e_c_int;
  unsigned present;
  int converged;
} entcorr_row;

typedef struct entcorr_molecule_s* entcorr_molecule;
typedef struct entcorr_config_s* entcorr_config;
typedef struct entcorr_rows_s* entcorr_rows;

ENTCORR_API const char* entcorr_version(void);
ENTCORR_API const char* entcorr_status_string(entcorr_status status);
/* Message for the most recent failure on this thread ("" if none). */
ENTCORR_API const char* entcorr_last_error(void);

/* Molecules (XYZ input is in Angstrom). multiplicity 0 picks the lowest
 * multiplicity compatible with the electron count. */
ENTCORR_API entcorr_status entcorr_molecule_from_xyz(const char* text, int net_charge, int multiplicity,
                                                     entcorr_molecule* out);
ENTCORR_API entcorr_status entcorr_molecule_from_xyz_file(const char* path, int net_charge, int multiplicity,
                                                          entcorr_molecule* out);
ENTCORR_API entcorr_status entcorr_molecule_atom_count(entcorr_molecule mol, size_t* out);
ENTCORR_API entcorr_status entcorr_molecule_nuclear_repulsion(entcorr_molecule mol, double* out);
ENTCORR_API void entcorr_molecule_free(entcorr_molecule mol);

/* Scan configuration. Defaults: dissociation mode, 3-21G, methods
 * RHF,UHF,FCI, e_tol 1e-10, max_iter 200. */
ENTCORR_API entcorr_status entcorr_config_create(entcorr_config* out);
ENTCORR_API void entcorr_config_free(entcorr_config cfg);
ENTCORR_API entcorr_status entcorr_config_set_mode(entcorr_config cfg, entcorr_mode mode);
/* The molecule is copied. */
ENTCORR_API entcorr_status entcorr_config_set_geometry(entcorr_config cfg, entcorr_molecule mol);
ENTCORR_API entcorr_status entcorr_config_set_second_fragment(entcorr_config cfg, entcorr_molecule mol);
ENTCORR_API entcorr_status entcorr_config_set_basis(entcorr_config cfg, const char* name);
ENTCORR_API entcorr_status entcorr_config_set_methods(entcorr_config cfg, const char* comma_list);
ENTCORR_API entcorr_status entcorr_config_set_r_values(entcorr_config cfg, const double* r_bohr, size_t n);
ENTCORR_API entcorr_status entcorr_config_set_theta_values(entcorr_config cfg, const double* theta_deg, size_t n);
ENTCORR_API entcorr_status entcorr_config_set_e_tol(entcorr_config cfg, double e_tol);
ENTCORR_API entcorr_status entcorr_config_set_max_iter(entcorr_config cfg, int max_iter);
ENTCORR_API entcorr_status entcorr_config_set_threads(entcorr_config cfg, unsigned threads);

/* Runs the configured computation. Point failures do not make the call
 * fail; they show up as rows with converged == 0. */
ENTCORR_API entcorr_status entcorr_run(entcorr_config cfg, entcorr_rows* out);

/* Ingests an FCIDUMP file and runs CI ("FCI" or "CISD"), producing one row. */
ENTCORR_API entcorr_status entcorr_run_fcidump(const char* path, const char* ci_method, entcorr_rows* out);

/* Writes the RHF molecular-orbital integrals of cfg's geometry as FCIDUMP. */
ENTCORR_API entcorr_status entcorr_write_fcidump(entcorr_config cfg, const char* path);

ENTCORR_API entcorr_status entcorr_rows_count(entcorr_rows rows, size_t* out);
ENTCORR_API entcorr_status entcorr_rows_get(entcorr_rows rows, size_t index, entcorr_row* out);
/* Error text for a failed point ("" when the point succeeded). */
ENTCORR_API entcorr_status entcorr_rows_error(entcorr_rows rows, size_t index, const char** out);
ENTCORR_API entcorr_status entcorr_rows_write_csv(entcorr_rows rows, const char* path);
/* CSV text; the buffer stays valid until the rows are freed. */
ENTCORR_API entcorr_status entcorr_rows_csv(entcorr_rows rows, const char** out);
ENTCORR_API void entcorr_rows_free(entcorr_rows rows);

#ifdef __cplusplus
}
#endif

#endif /* ENTCORR_ENTCORR_H */
