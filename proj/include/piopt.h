/* C interface to the piopt core. All functions return piopt_status; outputs
 * are written through pointers. Strings returned via char** are owned by the
 * caller and must be released with piopt_string_free. On error, a thread-local
 * message is available from piopt_last_error. */
#ifndef PIOPT_H
#define PIOPT_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum piopt_status {
    PIOPT_OK = 0,
    PIOPT_ERR_DOMAIN = 1,
    PIOPT_ERR_CONSTRAINT = 2,
    PIOPT_ERR_CERTIFICATION = 3,
    PIOPT_ERR_BRACKET = 4,
    PIOPT_ERR_SIZE = 5,
    PIOPT_ERR_INVALID_ARGUMENT = 6,
    PIOPT_ERR_INTERNAL = 7
} piopt_status;

typedef struct piopt_curve piopt_curve;
typedef struct piopt_mech piopt_mech;

const char* piopt_last_error(void);
void piopt_string_free(char* s);
void piopt_set_threads(int n);

/* Revenue curves */
piopt_status piopt_curve_triangle(double qbar, piopt_curve** out);
piopt_status piopt_curve_quadrilateral(double qbar, double qprime, double r,
                                       piopt_curve** out);
piopt_status piopt_curve_fbar(double q1, double q2, double d1, double d2,
                              piopt_curve** out);
void piopt_curve_free(piopt_curve* c);
piopt_status piopt_curve_revenue_at(const piopt_curve* c, double q,
                                    double* out);
piopt_status piopt_curve_value_at(const piopt_curve* c, double q, double* out);
piopt_status piopt_curve_quantile_at_price(const piopt_curve* c, double p,
                                           double* out);
piopt_status piopt_curve_opt_revenue(const piopt_curve* c, double* out);
piopt_status piopt_curve_json(const piopt_curve* c, char** json_out);

/* Mechanisms and revenue */
piopt_status piopt_mech_spa(piopt_mech** out);
piopt_status piopt_mech_markup(double r, piopt_mech** out);
piopt_status piopt_mech_mix(double alpha, double r, piopt_mech** out);
piopt_status piopt_mech_atoms(const double* weights, const double* rs, int n,
                              piopt_mech** out);
void piopt_mech_free(piopt_mech* m);

piopt_status piopt_markup_revenue_triangle(double r, double qbar, double* out);
piopt_status piopt_markup_revenue(double r, const piopt_curve* c,
                                  int use_quadrature, double* out);
piopt_status piopt_mech_revenue(const piopt_mech* m, const piopt_curve* c,
                                double* out);
piopt_status piopt_mech_revenue_triangle(const piopt_mech* m, double qbar,
                                         double* out);
piopt_status piopt_opt_revenue_truncated(double qbar, double* out);

/* Closed form, quadrature, and seeded Monte Carlo side by side (JSON). */
piopt_status piopt_revenue_report(const piopt_mech* m, const piopt_curve* c,
                                  uint64_t mc_samples, uint64_t seed,
                                  char** json_out);

/* Solver and verifiers */
piopt_status piopt_solve(double grid_eps, double r_max, char** json_out);
piopt_status piopt_gap(const char* mode, double delta, int* established,
                       char** json_out);
piopt_status piopt_dominated_bound(double r, double q1, double q2, double d1,
                                   double d2, double* out);
piopt_status piopt_second_derivative_inv_apx(double r, double alpha,
                                             double qbar, double* out);

/* Expert learning on the alternating instance */
piopt_status piopt_experts_alternating(int n, int k, const char* algo,
                                       double eta, double* payoff, double* bih,
                                       double* regret);

/* Pricing explorations: target in {"quad-maxmin","anonymous","indifference"} */
piopt_status piopt_explore(const char* target, char** json_out);

#ifdef __cplusplus
}
#endif

#endif /* PIOPT_H */
