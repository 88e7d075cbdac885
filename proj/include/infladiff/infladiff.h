/*
 * C interface to the infladiff library: binary inflation tilings
 * 0 -> 0 1^m, 1 -> 0, their pair correlations and diffraction.
 *
 * Every fallible call returns an idf_status; on failure a description is
 * available from idf_last_error() on the calling thread. Objects are opaque
 * handles released with the matching *_free function (NULL is accepted).
 */
#ifndef INFLADIFF_H
#define INFLADIFF_H

#include <stddef.h>
#include <stdint.h>

#if defined(IDF_BUILDING_LIBRARY)
#define IDF_API __attribute__((visibility("default")))
#else
#define IDF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum idf_status {
  IDF_OK = 0,
  IDF_ERR_INVALID_ARGUMENT = 1,
  IDF_ERR_OVERFLOW = 2,
  IDF_ERR_NOT_DIVISIBLE = 3,
  IDF_ERR_LEGALITY = 4,
  IDF_ERR_RECODING = 5,
  IDF_ERR_EMPTY_PATCH = 6,
  IDF_ERR_WINDOW_TOO_SMALL = 7,
  IDF_ERR_INSUFFICIENT_WINDOW = 8,
  IDF_ERR_DEGENERATE_KERNEL = 9,
  IDF_ERR_MISSING_ENTRY = 10,
  IDF_ERR_IO = 11,
  IDF_ERR_INTERNAL = 12
} idf_status;

typedef struct idf_quadint {
  int64_t a; /* rational part */
  int64_t b; /* coefficient of lambda */
} idf_quadint;

typedef struct idf_complex {
  double re;
  double im;
} idf_complex;

typedef enum idf_pv_status { IDF_PISOT_UNIT = 0, IDF_INTEGER = 1, IDF_NON_PISOT = 2 } idf_pv_status;

typedef enum idf_spectral_type {
  IDF_PURE_POINT = 0,
  IDF_TRIVIAL_BRAGG_PLUS_CONTINUOUS = 1
} idf_spectral_type;

typedef struct idf_spectrum_report {
  int64_t m;
  double lambda_plus;
  double lambda_minus;
  idf_pv_status pv_status;
  idf_spectral_type spectral_type;
  int has_ell;          /* ell, coincidence, witness and height are set iff 4m+1 is a square */
  int64_t ell;
  int coincidence;
  size_t witness_length;
  size_t witness[8];
  int64_t height;
} idf_spectrum_report;

typedef struct idf_eigen_data {
  double lambda_plus;
  double lambda_minus;
  double pf_right[2];
  double pf_left[2];
} idf_eigen_data;

typedef struct idf_solve_info {
  size_t core_size;
  size_t kernel_dimension;
  double elimination_residual;
  double power_iteration_deviation;
  size_t power_iterations;
  size_t support_size;
  int support_patch_iterations;
  double support_patch_radius;
  double min_support_value;
} idf_solve_info;

typedef struct idf_residuals {
  double max;
  double mean;
  size_t tested;
  double zcheck;
} idf_residuals;

typedef struct idf_probe_summary {
  double beta;
  int classification; /* 0 Bragg-like, 1 SC-like, 2 AC-like */
} idf_probe_summary;

typedef struct idf_patch idf_patch;
typedef struct idf_pair_table idf_pair_table;
typedef struct idf_grid idf_grid;
typedef struct idf_distribution idf_distribution;

IDF_API const char* idf_version(void);
IDF_API const char* idf_last_error(void);
IDF_API const char* idf_status_name(idf_status status);

/* ring arithmetic in Z[lambda], lambda^2 = lambda + m */
IDF_API idf_status idf_quadint_add(int64_t m, idf_quadint x, idf_quadint y, idf_quadint* out);
IDF_API idf_status idf_quadint_mul(int64_t m, idf_quadint x, idf_quadint y, idf_quadint* out);
/* IDF_ERR_NOT_DIVISIBLE when z / lambda is not in Z[lambda] */
IDF_API idf_status idf_quadint_div_lambda(int64_t m, idf_quadint z, idf_quadint* out);
/* *out is -1, 0 or 1 */
IDF_API idf_status idf_quadint_cmp(int64_t m, idf_quadint x, idf_quadint y, int* out);
IDF_API idf_status idf_quadint_value(int64_t m, idf_quadint z, double* out);

IDF_API idf_status idf_eigen(int64_t m, idf_eigen_data* out);
IDF_API idf_status idf_classify(int64_t m, idf_spectrum_report* out);

/* Writes "left|right" of rho^{2n}(0|0) into buf (NUL-terminated); *needed
 * receives the required size including the terminator. */
IDF_API idf_status idf_fixed_point_string(int64_t m, int iterations, char* buf, size_t cap, size_t* needed);

IDF_API idf_status idf_patch_generate(int64_t m, int iterations, idf_patch** out);
IDF_API idf_status idf_patch_generate_radius(int64_t m, double min_radius, idf_patch** out);
IDF_API void idf_patch_free(idf_patch* patch);
IDF_API size_t idf_patch_size(const idf_patch* patch);
IDF_API size_t idf_patch_marker(const idf_patch* patch);
IDF_API double idf_patch_radius(const idf_patch* patch);
IDF_API int idf_patch_iterations(const idf_patch* patch);
IDF_API int64_t idf_patch_m(const idf_patch* patch);
IDF_API idf_status idf_patch_point(const idf_patch* patch, size_t index, idf_quadint* position, int* type,
                                   double* value);
/* r <= 0 selects the patch radius */
IDF_API idf_status idf_patch_density(const idf_patch* patch, double r, double* out);
IDF_API idf_status idf_patch_frequencies(const idf_patch* patch, double r, double* f0, double* f1);
IDF_API idf_status idf_patch_write_csv(const idf_patch* patch, const char* path);
IDF_API idf_status idf_patch_write_json(const idf_patch* patch, const char* path);

IDF_API idf_status idf_pair_table_empirical(const idf_patch* patch, double r, double zmax, idf_pair_table** out);
IDF_API idf_status idf_pair_table_solve(int64_t m, double rmax, idf_pair_table** out);
IDF_API void idf_pair_table_free(idf_pair_table* table);
IDF_API size_t idf_pair_table_size(const idf_pair_table* table);
/* nonzero for renormalisation-solved tables */
IDF_API int idf_pair_table_is_solved(const idf_pair_table* table);
IDF_API size_t idf_pair_table_window_count(const idf_pair_table* table);
IDF_API idf_status idf_pair_table_solve_info(const idf_pair_table* table, idf_solve_info* out);
/* entries in (i, j, z) order */
IDF_API idf_status idf_pair_table_entry(const idf_pair_table* table, size_t index, int* i, int* j, idf_quadint* z,
                                        double* z_value, double* value);
IDF_API idf_status idf_pair_table_get(const idf_pair_table* table, int i, int j, idf_quadint z, double* out);
/* zcheck <= 0 selects the largest admissible radius */
IDF_API idf_status idf_pair_table_check_renorm(const idf_pair_table* table, double zcheck, idf_residuals* out);
IDF_API idf_status idf_pair_table_max_deviation(const idf_pair_table* a, const idf_pair_table* b, double zlim,
                                                double* out);
IDF_API idf_status idf_pair_table_eta(const idf_pair_table* table, idf_complex u0, idf_complex u1, idf_quadint z,
                                      idf_complex* out);
IDF_API idf_status idf_pair_tables_write_csv(const idf_pair_table* const* tables, size_t count, const char* path);

/* "u0,u1" with the token lambda resolved for m */
IDF_API idf_status idf_weights_parse(int64_t m, const char* text, idf_complex* u0, idf_complex* u1);
IDF_API idf_status idf_density_closed_form(int64_t m, double* out);
IDF_API idf_status idf_bragg_intensity(int64_t m, idf_complex u0, idf_complex u1, double* out);
IDF_API idf_status idf_eta_zero(int64_t m, idf_complex u0, idf_complex u1, double* out);
/* R <= 0 selects the patch radius */
IDF_API idf_status idf_exponential_sum(const idf_patch* patch, idf_complex u0, idf_complex u1, double k, double R,
                                       idf_complex* out);

IDF_API idf_status idf_grid_compute(const idf_patch* patch, idf_complex u0, idf_complex u1, double kmax, double dk,
                                    double R, idf_grid** out);
IDF_API void idf_grid_free(idf_grid* grid);
IDF_API size_t idf_grid_size(const idf_grid* grid);
IDF_API size_t idf_grid_point_count(const idf_grid* grid);
IDF_API idf_status idf_grid_sample(const idf_grid* grid, size_t index, double* k, double* intensity);
IDF_API idf_status idf_grid_write_csv(const idf_grid* grid, const char* path);

IDF_API idf_status idf_distribution_compute(const idf_grid* grid, double eta0, idf_distribution** out);
IDF_API void idf_distribution_free(idf_distribution* df);
IDF_API size_t idf_distribution_size(const idf_distribution* df);
IDF_API idf_status idf_distribution_sample(const idf_distribution* df, size_t index, double* x, double* F);
IDF_API idf_status idf_distribution_at(const idf_distribution* df, double x, double* F);
IDF_API double idf_distribution_min_step(const idf_distribution* df);
IDF_API idf_status idf_distribution_write_csv(const idf_distribution* df, const char* path);
IDF_API idf_status idf_distribution_write_svg(const idf_distribution* df, const char* path, const char* title);

/* Fills amplitudes[n] = |S_R(k)| and peak_k[n] per radius (arrays of length count). */
IDF_API idf_status idf_scaling_probe(const idf_patch* patch, idf_complex u0, idf_complex u1, double k_star,
                                     const double* R_list, size_t count, int refine, double* peak_k,
                                     double* amplitudes, idf_probe_summary* out);

#ifdef __cplusplus
}
#endif

#endif /* INFLADIFF_H */
