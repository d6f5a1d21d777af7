/* iontrap.h — C interface to the iontrap library.
 *
 * Every call returns an iontrap_status; on failure the message is available
 * from iontrap_last_error() in the calling thread until its next call.
 * Objects are opaque handles released with the matching _destroy function.
 * Operators are (2 n_max + 2)-square complex matrices in the basis
 * index = 2 * fock + spin, spin g = 0, e = 1.
 */

#ifndef IONTRAP_IONTRAP_H
#define IONTRAP_IONTRAP_H

#if defined(_WIN32)
#define IONTRAP_API __declspec(dllexport)
#else
#define IONTRAP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum iontrap_status {
    IONTRAP_OK = 0,
    IONTRAP_INVALID_ARGUMENT = 1,
    IONTRAP_DIMENSION_MISMATCH = 2,
    IONTRAP_CONFIG_ERROR = 3,
    IONTRAP_NUMERICAL = 4,
    IONTRAP_CLUSTERING_AMBIGUOUS = 5,
    IONTRAP_IO_ERROR = 6,
    IONTRAP_INTERNAL = 7
} iontrap_status;

typedef enum iontrap_route { IONTRAP_ROUTE_CLOSED_FORM = 0, IONTRAP_ROUTE_CONJUGATION = 1 } iontrap_route;

typedef enum iontrap_regime {
    IONTRAP_ETA_MUCH_LESS = 0,
    IONTRAP_ETA_COMPARABLE = 1,
    IONTRAP_ETA_MUCH_GREATER = 2,
    IONTRAP_NEAR_RESONANT = 3
} iontrap_regime;

/* Laser-driven ion; angular frequencies in units of the trap frequency. */
typedef struct iontrap_model_params {
    double nu;
    double omega_ge;
    double omega_L;
    double Omega_R;
    double eta;
} iontrap_model_params;

/* The four numbers the balanced Hamiltonian depends on. */
typedef struct iontrap_bh_params {
    double nu;
    double delta_breve;
    double eta_breve;
    double lambda;
} iontrap_bh_params;

typedef struct iontrap_space iontrap_space;
typedef struct iontrap_operator iontrap_operator;

IONTRAP_API const char* iontrap_version(void);
IONTRAP_API const char* iontrap_last_error(void);
IONTRAP_API const char* iontrap_status_name(iontrap_status status);

/* --- truncated space --- */
IONTRAP_API iontrap_status iontrap_space_create(int n_max, int interior_margin, iontrap_space** out);
IONTRAP_API void iontrap_space_destroy(iontrap_space* space);
IONTRAP_API iontrap_status iontrap_space_dim(const iontrap_space* space, int* dim, int* interior_dim);

/* --- parameters --- */
IONTRAP_API iontrap_status iontrap_reduce_params(const iontrap_model_params* p, iontrap_bh_params* out);
/* (λ² − λη̆)ν: conjugated minus closed-form balanced Hamiltonian. */
IONTRAP_API iontrap_status iontrap_bh_scalar_offset(const iontrap_model_params* p, double* out);

/* --- operators --- */
IONTRAP_API iontrap_status iontrap_rfh(const iontrap_model_params* p, const iontrap_space* space,
                                       iontrap_operator** out);
IONTRAP_API iontrap_status iontrap_t_delta(const iontrap_model_params* p, const iontrap_space* space,
                                           iontrap_operator** out);
IONTRAP_API iontrap_status iontrap_bh(const iontrap_model_params* p, const iontrap_space* space, iontrap_route route,
                                      iontrap_operator** out);
IONTRAP_API iontrap_status iontrap_bh_reduced(const iontrap_bh_params* p, const iontrap_space* space,
                                              iontrap_operator** out);
/* exp(−iHt). */
IONTRAP_API iontrap_status iontrap_propagator(const iontrap_operator* h, double t, iontrap_operator** out);
IONTRAP_API void iontrap_operator_destroy(iontrap_operator* op);
IONTRAP_API iontrap_status iontrap_operator_dim(const iontrap_operator* op, int* dim);
IONTRAP_API iontrap_status iontrap_operator_entry(const iontrap_operator* op, int row, int col, double* re,
                                                  double* im);
/* Spectral norm of the leading interior block of a − b. */
IONTRAP_API iontrap_status iontrap_interior_distance(const iontrap_operator* a, const iontrap_operator* b,
                                                     double* out);
/* Ascending eigenvalues of a hermitian operator; capacity must be >= dim. */
IONTRAP_API iontrap_status iontrap_eigenvalues(const iontrap_operator* h, double* values, int capacity);

/* --- closed forms and the perturbation engine --- */
/* e_minus and e_plus receive n_levels values each, for n = 1 … n_levels. */
IONTRAP_API iontrap_status iontrap_spectrum_second_order(const iontrap_bh_params* p, int n_levels, double rho,
                                                         double* e0, double* e_minus, double* e_plus);
/* R_1 … R_order of the engine for one regime; residuals holds order values. */
IONTRAP_API iontrap_status iontrap_engine_residuals(const iontrap_bh_params* p, iontrap_regime regime, int order,
                                                    const iontrap_space* space, double* residuals);
IONTRAP_API iontrap_status iontrap_anticrossing_shift(int n, const iontrap_bh_params* p, double* out);

/* --- batch runs --- */
IONTRAP_API int iontrap_experiment_count(void);
IONTRAP_API const char* iontrap_experiment_name(int index);
/* Reads the config, runs its experiment and writes the tables into out_dir.
 * IONTRAP_CONFIG_ERROR for config problems, IONTRAP_NUMERICAL or
 * IONTRAP_CLUSTERING_AMBIGUOUS for failed self-checks; outputs of a run whose
 * self-checks failed are still written. */
IONTRAP_API iontrap_status iontrap_run_config(const char* config_path, const char* out_dir, int threads);

#ifdef __cplusplus
}
#endif

#endif /* IONTRAP_IONTRAP_H */
