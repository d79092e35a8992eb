#ifndef ELLSPIN_H
#define ELLSPIN_H

/* C interface to the ellspin library. Every call returns an ellspin_status;
 * on failure ellspin_last_error() describes the problem for the calling
 * thread. Objects returned through out-pointers are owned by the caller and
 * released with the matching _free function. */

#include <stddef.h>
#include <stdint.h>

#if defined(ELLSPIN_BUILDING)
#define ELLSPIN_API __attribute__((visibility("default")))
#else
#define ELLSPIN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  ELLSPIN_OK = 0,
  ELLSPIN_ERR_POLE = 1,
  ELLSPIN_ERR_ACCURACY = 2,
  ELLSPIN_ERR_PARAMETER = 3,
  ELLSPIN_ERR_CONTRACT = 4,
  ELLSPIN_ERR_DEGENERATE = 5,
  ELLSPIN_ERR_GATE = 6,
  ELLSPIN_ERR_SIZE = 7,
  ELLSPIN_ERR_ARGUMENT = 8, /* null pointer, unknown enum value, index out of range */
  ELLSPIN_ERR_INTERNAL = 9
} ellspin_status;

typedef struct {
  double re, im;
} ellspin_complex;

typedef enum {
  ELLSPIN_MODEL_DEFORMED_L = 0,
  ELLSPIN_MODEL_DEFORMED_R,
  ELLSPIN_MODEL_INOZEMTSEV,
  ELLSPIN_MODEL_INTERMEDIATE,
  ELLSPIN_MODEL_XXZ,
  ELLSPIN_MODEL_HS,
  ELLSPIN_MODEL_DEFORMED_HS
} ellspin_model;

typedef enum { ELLSPIN_LEFT = 0, ELLSPIN_RIGHT = 1 } ellspin_chirality;

/* Fields a model does not use are ignored. */
typedef struct {
  ellspin_model model;
  int n;
  double kappa;
  ellspin_complex eta;
  ellspin_complex a;
  ellspin_complex a_prime; /* intermediate */
  double gamma;            /* xxz */
  ellspin_chirality chirality; /* deformed-hs */
} ellspin_model_params;

/* Defaults: deformed-L, N = 4, kappa = 1, eta = 0.3+0.1i, a = 0.7+0.2i,
 * a' = 0.3+0.4i, gamma = 0.23, left chirality. */
ELLSPIN_API void ellspin_model_params_default(ellspin_model_params* p);
ELLSPIN_API ellspin_status ellspin_model_params_validate(const ellspin_model_params* p);

ELLSPIN_API const char* ellspin_last_error(void);
ELLSPIN_API const char* ellspin_status_name(ellspin_status s);

/* ---- operators and spectra ---- */

typedef struct ellspin_operator ellspin_operator;
typedef struct ellspin_values ellspin_values;

ELLSPIN_API ellspin_status ellspin_operator_build(const ellspin_model_params* p, ellspin_operator** out);
/* The model rescaled by sinh^2(kappa)/kappa^2 with eta = -i pi gamma / kappa:
 * the finite-kappa approach to the XXZ chain. Needs kappa > 0. */
ELLSPIN_API ellspin_status ellspin_operator_build_xxz_linked(const ellspin_model_params* p, ellspin_operator** out);
ELLSPIN_API void ellspin_operator_free(ellspin_operator* op);
ELLSPIN_API int ellspin_operator_sites(const ellspin_operator* op);
ELLSPIN_API int ellspin_operator_conserves_sz(const ellspin_operator* op);

/* Eigenvalues sorted by (Re, Im). sector < 0: the whole space; otherwise
 * the block with `sector` down spins. */
ELLSPIN_API ellspin_status ellspin_operator_spectrum(const ellspin_operator* op, int sector, ellspin_values** out);

ELLSPIN_API size_t ellspin_values_size(const ellspin_values* v);
ELLSPIN_API ellspin_complex ellspin_values_get(const ellspin_values* v, size_t i);
ELLSPIN_API void ellspin_values_free(ellspin_values* v);

/* ---- magnons ---- */

typedef struct {
  int momentum_index;
  ellspin_complex g_eigenvalue; /* eigenvalue of the normalised translation */
  ellspin_complex energy_left;  /* Rayleigh quotients on the one-magnon vector */
  ellspin_complex energy_right;
} ellspin_magnon;

typedef struct ellspin_magnon_table ellspin_magnon_table;

/* Uses n, kappa, eta and a of p whatever the model. */
ELLSPIN_API ellspin_status ellspin_magnons(const ellspin_model_params* p, ellspin_magnon_table** out);
ELLSPIN_API size_t ellspin_magnon_table_size(const ellspin_magnon_table* t);
ELLSPIN_API ellspin_status ellspin_magnon_table_get(const ellspin_magnon_table* t, size_t i, ellspin_magnon* out);
ELLSPIN_API void ellspin_magnon_table_free(ellspin_magnon_table* t);

/* ---- freezing ---- */

typedef struct {
  double deviation;
  double gate_residual;
  double unweighted_spread;
  ellspin_complex a_star;
  ellspin_complex fitted_constant;
} ellspin_freeze_result;

/* Uses n, kappa, eta and a of p. step <= 0 selects the default 1e-5.
 * ELLSPIN_ERR_GATE if the weighted coefficients are not j-independent. */
ELLSPIN_API ellspin_status ellspin_freeze(const ellspin_model_params* p, ellspin_chirality c, double step,
                                          ellspin_freeze_result* out);

/* ---- verification ---- */

typedef struct {
  int has_n, has_kappa, has_eta, has_a, has_gamma, has_a_prime;
  int n;
  double kappa;
  ellspin_complex eta, a, a_prime;
  double gamma;
  int draws; /* <= 0: default */
  int jobs;  /* <= 0: 1 */
} ellspin_overrides;

ELLSPIN_API void ellspin_overrides_default(ellspin_overrides* o);

/* Names of the registered checks of a suite as a JSON array. */
ELLSPIN_API ellspin_status ellspin_check_names(const char* suite, char** json_out);

/* Runs a suite (elliptic, rmatrix, chain, qmbs, limits, all) and returns the
 * report as a JSON array of check results; *all_pass is 1 iff all passed. */
ELLSPIN_API ellspin_status ellspin_verify(const char* suite, uint64_t seed, const ellspin_overrides* o,
                                          char** json_out, int* all_pass);

ELLSPIN_API void ellspin_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
