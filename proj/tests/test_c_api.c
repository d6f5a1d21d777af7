/* test_c_api — the shared-library interface, exercised from plain C */

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "iontrap/iontrap.h"

static int failures = 0;

#define EXPECT(cond)                                                        \
    do {                                                                    \
        if (!(cond)) {                                                      \
            fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
            ++failures;                                                     \
        }                                                                   \
    } while (0)

static iontrap_model_params reference_point(void) {
    iontrap_model_params p = {1.0, 1.9, 1.0, 0.25, 0.1};
    return p;
}

static void space_and_errors(void) {
    iontrap_space* s = NULL;
    EXPECT(iontrap_space_create(3, 1, &s) == IONTRAP_INVALID_ARGUMENT);
    EXPECT(s == NULL);
    EXPECT(strlen(iontrap_last_error()) > 0);
    EXPECT(iontrap_space_create(40, 10, NULL) == IONTRAP_INVALID_ARGUMENT);

    EXPECT(iontrap_space_create(40, 10, &s) == IONTRAP_OK);
    EXPECT(strlen(iontrap_last_error()) == 0);
    int dim = 0, interior = 0;
    EXPECT(iontrap_space_dim(s, &dim, &interior) == IONTRAP_OK);
    EXPECT(dim == 82);
    EXPECT(interior == 62);
    iontrap_space_destroy(s);
    iontrap_space_destroy(NULL);
    EXPECT(strcmp(iontrap_status_name(IONTRAP_CONFIG_ERROR), "config error") == 0);
}

static void parameters(void) {
    const iontrap_model_params p = reference_point();
    iontrap_bh_params b;
    EXPECT(iontrap_reduce_params(&p, &b) == IONTRAP_OK);
    const double db = sqrt(4 * 0.25 * 0.25 + 0.81);
    EXPECT(fabs(b.delta_breve - db) < 1e-15);
    EXPECT(fabs(b.lambda - 0.25 * 0.1 / db) < 1e-15);
    EXPECT(fabs(b.eta_breve - 0.9 * 0.1 / db) < 1e-15);

    double offset = 0.0;
    EXPECT(iontrap_bh_scalar_offset(&p, &offset) == IONTRAP_OK);
    EXPECT(fabs(offset - (b.lambda * b.lambda - b.lambda * b.eta_breve)) < 1e-15);

    iontrap_model_params zero = p;
    zero.Omega_R = 0.0;
    iontrap_space* s = NULL;
    iontrap_operator* op = NULL;
    iontrap_space_create(40, 10, &s);
    EXPECT(iontrap_t_delta(&zero, s, &op) == IONTRAP_INVALID_ARGUMENT);
    EXPECT(op == NULL);
    iontrap_space_destroy(s);
}

static void operators(void) {
    const iontrap_model_params p = reference_point();
    iontrap_space* s = NULL;
    iontrap_space_create(40, 10, &s);

    iontrap_operator *closed = NULL, *conj = NULL, *rfh = NULL;
    EXPECT(iontrap_bh(&p, s, IONTRAP_ROUTE_CLOSED_FORM, &closed) == IONTRAP_OK);
    EXPECT(iontrap_bh(&p, s, IONTRAP_ROUTE_CONJUGATION, &conj) == IONTRAP_OK);
    EXPECT(iontrap_rfh(&p, s, &rfh) == IONTRAP_OK);
    int dim = 0;
    EXPECT(iontrap_operator_dim(closed, &dim) == IONTRAP_OK && dim == 82);

    /* the routes differ by the scalar offset only */
    double offset = 0.0, dist = 0.0;
    iontrap_bh_scalar_offset(&p, &offset);
    EXPECT(iontrap_interior_distance(closed, conj, &dist) == IONTRAP_OK);
    EXPECT(fabs(dist - fabs(offset)) < 1e-8);

    /* H̆ and H̃ are unitarily equivalent: low spectra agree */
    double* e1 = malloc(sizeof(double) * dim);
    double* e2 = malloc(sizeof(double) * dim);
    EXPECT(iontrap_eigenvalues(rfh, e1, dim) == IONTRAP_OK);
    EXPECT(iontrap_eigenvalues(conj, e2, dim) == IONTRAP_OK);
    double worst = 0.0;
    for (int i = 0; i < 30; ++i) worst = fmax(worst, fabs(e1[i] - e2[i]));
    EXPECT(worst < 1e-6);
    EXPECT(iontrap_eigenvalues(rfh, e1, dim - 1) == IONTRAP_INVALID_ARGUMENT);
    free(e1);
    free(e2);

    double re = 0.0, im = 0.0;
    EXPECT(iontrap_operator_entry(closed, 0, 0, &re, &im) == IONTRAP_OK);
    EXPECT(iontrap_operator_entry(closed, 82, 0, &re, &im) == IONTRAP_INVALID_ARGUMENT);

    iontrap_operator* u = NULL;
    EXPECT(iontrap_propagator(closed, 0.0, &u) == IONTRAP_OK);
    EXPECT(iontrap_operator_entry(u, 5, 5, &re, &im) == IONTRAP_OK);
    EXPECT(fabs(re - 1.0) < 1e-14 && fabs(im) < 1e-14);

    /* operators on different spaces */
    iontrap_space* other = NULL;
    iontrap_operator* small = NULL;
    iontrap_space_create(20, 5, &other);
    iontrap_bh(&p, other, IONTRAP_ROUTE_CLOSED_FORM, &small);
    EXPECT(iontrap_interior_distance(closed, small, &dist) == IONTRAP_DIMENSION_MISMATCH);

    iontrap_operator_destroy(small);
    iontrap_operator_destroy(u);
    iontrap_operator_destroy(closed);
    iontrap_operator_destroy(conj);
    iontrap_operator_destroy(rfh);
    iontrap_space_destroy(other);
    iontrap_space_destroy(s);
}

static void closed_forms_and_engine(void) {
    const iontrap_bh_params b = {1.0, 1.0, 0.01, 0.05};
    double e0 = 0.0, em[3], ep[3];
    EXPECT(iontrap_spectrum_second_order(&b, 3, 0.1, &e0, em, ep) == IONTRAP_OK);
    const double lam = 0.05;
    EXPECT(fabs(e0 - (-0.5 + lam * 0.01 - 0.5 * lam * lam)) < 1e-15);
    EXPECT(em[0] < ep[0]);

    double shift = 0.0;
    EXPECT(iontrap_anticrossing_shift(2, &b, &shift) == IONTRAP_OK);
    EXPECT(fabs(shift - lam * lam) < 1e-15);
    EXPECT(iontrap_anticrossing_shift(0, &b, &shift) == IONTRAP_INVALID_ARGUMENT);

    iontrap_space* s = NULL;
    iontrap_space_create(20, 5, &s);
    double r[2];
    EXPECT(iontrap_engine_residuals(&b, IONTRAP_ETA_MUCH_LESS, 2, s, r) == IONTRAP_OK);
    EXPECT(r[1] < r[0]);
    const iontrap_bh_params off = {1.0, 1.3, 0.0, 0.05};
    EXPECT(iontrap_engine_residuals(&off, IONTRAP_NEAR_RESONANT, 2, s, r) == IONTRAP_INVALID_ARGUMENT);
    iontrap_space_destroy(s);
}

static void batch(void) {
    EXPECT(iontrap_experiment_count() == 7);
    EXPECT(strcmp(iontrap_experiment_name(0), "spectrum") == 0);
    EXPECT(iontrap_experiment_name(7) == NULL);
    EXPECT(iontrap_run_config("/nonexistent/config.ini", ".", 1) == IONTRAP_CONFIG_ERROR);
    EXPECT(iontrap_run_config(NULL, ".", 1) == IONTRAP_INVALID_ARGUMENT);
}

int main(void) {
    printf("iontrap %s\n", iontrap_version());
    space_and_errors();
    parameters();
    operators();
    closed_forms_and_engine();
    batch();
    if (failures) fprintf(stderr, "%d failed expectation(s)\n", failures);
    return failures ? 1 : 0;
}
