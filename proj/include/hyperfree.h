/*
Copyright 2026 The hyperfree Authors
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/


#ifndef HYPERFREE_H
#define HYPERFREE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define HF_API __declspec(dllexport)
#else
#define HF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hf_status {
    HF_OK = 0,
    HF_E_INVALID_ARGUMENT = 1,
    HF_E_DOMAIN = 2,
    HF_E_NOT_ADMISSIBLE = 3,
    HF_E_EXTRAPOLATION = 4,
    HF_E_REGIME_REFUSAL = 5,
    HF_E_CFL = 6,
    HF_E_IO = 7,
    HF_E_PARSE = 8,
    HF_E_INTERNAL = 100
} hf_status;

typedef struct hf_potential hf_potential;
typedef struct hf_density hf_density;

/* Message of the last failing call on this thread; never NULL. */
HF_API const char* hf_last_error(void);
HF_API const char* hf_version(void);
/* Frees strings returned through char** out-parameters. */
HF_API void hf_string_free(char* s);
HF_API hf_status hf_set_threads(int n);

HF_API hf_status hf_ball_volume(int d, double c, double theta, double* out);

/* Built from potential.* keys of a flat key/value config. */
HF_API hf_status hf_potential_from_config(const char* const* keys, const char* const* values, size_t n,
                                          hf_potential** out);
HF_API hf_status hf_potential_riesz(double beta, hf_potential** out);
HF_API hf_status hf_potential_power(double p, hf_potential** out);
HF_API void hf_potential_free(hf_potential* h);
HF_API hf_status hf_potential_eval(const hf_potential* h, double theta, double* out);
HF_API hf_status hf_potential_describe(const hf_potential* h, char** out);

/* JSON verdict object. */
HF_API hf_status hf_classify(const hf_potential* h, double m, int d, double c, char** json);

HF_API hf_status hf_density_uniform_ball(int d, double c, size_t cells, double theta_max, double radius,
                                         hf_density** out);
HF_API hf_status hf_density_from_values(int d, double c, const double* nodes, size_t n_nodes, const double* values,
                                        hf_density** out);
HF_API hf_status hf_density_read(const char* path, hf_density** out);
HF_API hf_status hf_density_write(const hf_density* rho, const char* path);
HF_API void hf_density_free(hf_density* rho);
HF_API size_t hf_density_cells(const hf_density* rho);
/* Copies min(n, cells) values. */
HF_API hf_status hf_density_values(const hf_density* rho, double* out, size_t n);
HF_API hf_status hf_density_mass(const hf_density* rho, double* out);
HF_API hf_status hf_density_rearrange(const hf_density* rho, hf_density** out);

/* Entropy, interaction and total as JSON. */
HF_API hf_status hf_energy(const hf_density* rho, const hf_potential* h, double m, char** json);

typedef struct hf_minimize_options {
    int d;
    double c;
    size_t cells;
    double theta_max;
    double m;
    int max_iters;
    double step0;
    double backtrack;
    double tol;
} hf_minimize_options;

HF_API void hf_minimize_options_default(hf_minimize_options* opt);
/* init may be NULL; out_density may be NULL. */
HF_API hf_status hf_minimize(const hf_potential* h, const hf_minimize_options* opt, const hf_density* init,
                             hf_density** out_density, char** json);

typedef struct hf_evolve_options {
    double m;
    double dt;
    double t_end;
    size_t record_every;
    size_t snapshot_every;
} hf_evolve_options;

HF_API void hf_evolve_options_default(hf_evolve_options* opt);
/* Snapshots are written as <snapshot_prefix><index>.dens when snapshot_every > 0 and the prefix is non-NULL. */
HF_API hf_status hf_evolve(const hf_density* rho0, const hf_potential* h, const hf_evolve_options* opt,
                           const char* snapshot_prefix, hf_density** out_final, char** csv, char** json);

/* variant 1 or 2; c_euclid <= 0 selects the calibrated constant. */
HF_API hf_status hf_hls_check(const hf_density* rho, int variant, double lambda, double m, double r, double c_m,
                              double c_euclid, char** json);

/* kernel: "exp" or "inverse"; returns JSON lines, one per random two-ball mixture pair. */
HF_API hf_status hf_rearrange_check(int d, double c, const char* kernel, size_t pairs, size_t samples, uint64_t seed,
                                    char** jsonl, int* all_pass);

HF_API hf_status hf_blowup(const hf_potential* h, double m, int d, double c, int levels, char** json);
/* Negative-energy witness for the m regime, re-verified by Monte Carlo. */
HF_API hf_status hf_witness(const hf_potential* h, double m, int d, double c, size_t samples, uint64_t seed,
                            char** json);

#ifdef __cplusplus
}
#endif

#endif
