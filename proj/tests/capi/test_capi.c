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


#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "hyperfree.h"

static int failures = 0;

#define EXPECT(cond)                                                        \
    do {                                                                    \
        if (!(cond)) {                                                      \
            fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
            ++failures;                                                     \
        }                                                                   \
    } while (0)

static void test_errors(void)
{
    double v = 0.0;
    hf_potential* h = NULL;
    EXPECT(hf_ball_volume(0, 1.0, 1.0, &v) == HF_E_INVALID_ARGUMENT);
    EXPECT(strlen(hf_last_error()) > 0);
    EXPECT(hf_ball_volume(2, 1.0, 1.0, NULL) == HF_E_INVALID_ARGUMENT);
    EXPECT(hf_ball_volume(2, 1.0, 1.0, &v) == HF_OK);
    EXPECT(fabs(v - 3.4122762652849023) < 1e-12);
    EXPECT(hf_potential_riesz(-1.0, &h) == HF_E_INVALID_ARGUMENT);
    EXPECT(h == NULL);
    {
        const char* keys[] = {"potential.family"};
        const char* vals[] = {"nonsense"};
        EXPECT(hf_potential_from_config(keys, vals, 1, &h) != HF_OK);
    }
    EXPECT(hf_density_read("/nonexistent/file.dens", NULL) == HF_E_INVALID_ARGUMENT);
    {
        hf_density* rho = NULL;
        EXPECT(hf_density_read("/nonexistent/file.dens", &rho) == HF_E_IO);
    }
    EXPECT(strcmp(hf_version(), "0.1.0") == 0);
}

static void test_potential_and_density(void)
{
    hf_potential* h = NULL;
    hf_density* rho = NULL;
    hf_density* r2 = NULL;
    double x = 0.0;
    char* s = NULL;
    const char* keys[] = {"potential.family", "potential.p"};
    const char* vals[] = {"power", "2"};
    EXPECT(hf_potential_from_config(keys, vals, 2, &h) == HF_OK);
    EXPECT(hf_potential_eval(h, 3.0, &x) == HF_OK);
    EXPECT(fabs(x - 9.0) < 1e-14);
    EXPECT(hf_potential_describe(h, &s) == HF_OK);
    EXPECT(strstr(s, "power") != NULL);
    hf_string_free(s);

    EXPECT(hf_density_uniform_ball(2, 1.0, 16, 2.0, 1.0, &rho) == HF_OK);
    EXPECT(hf_density_cells(rho) == 16);
    EXPECT(hf_density_mass(rho, &x) == HF_OK);
    EXPECT(fabs(x - 1.0) < 1e-13);
    EXPECT(hf_density_write(rho, "capi_roundtrip.dens") == HF_OK);
    EXPECT(hf_density_read("capi_roundtrip.dens", &r2) == HF_OK);
    {
        double a[16], b[16];
        int same = 1;
        hf_density_values(rho, a, 16);
        hf_density_values(r2, b, 16);
        for (int i = 0; i < 16; ++i)
            same &= a[i] == b[i];
        EXPECT(same);
    }
    remove("capi_roundtrip.dens");

    EXPECT(hf_energy(rho, h, 2.0, &s) == HF_OK);
    EXPECT(strstr(s, "\"total\"") != NULL);
    hf_string_free(s);
    EXPECT(hf_energy(rho, h, 1.0, &s) == HF_E_INVALID_ARGUMENT);

    {
        const double nodes[] = {0.0, 1.0, 2.0};
        const double up[] = {0.1, 0.2};
        hf_density* u = NULL;
        hf_density* sorted = NULL;
        double vals2[2];
        EXPECT(hf_density_from_values(2, 1.0, nodes, 3, up, &u) == HF_OK);
        EXPECT(hf_density_rearrange(u, &sorted) == HF_OK);
        hf_density_values(sorted, vals2, 2);
        EXPECT(vals2[0] >= vals2[1]);
        hf_density_free(u);
        hf_density_free(sorted);
        EXPECT(hf_density_from_values(2, 1.0, nodes, 1, up, &u) != HF_OK);
    }
    hf_density_free(r2);
    hf_density_free(rho);
    hf_potential_free(h);
}

static void test_workflows(void)
{
    hf_potential* h = NULL;
    hf_potential* strong = NULL;
    hf_density* out = NULL;
    hf_density* fin = NULL;
    char* json = NULL;
    char* csv = NULL;
    hf_minimize_options mo;
    hf_evolve_options eo;

    EXPECT(hf_potential_power(2.0, &h) == HF_OK);
    EXPECT(hf_potential_riesz(2.5, &strong) == HF_OK);

    EXPECT(hf_classify(strong, 2.0, 2, 1.0, &json) == HF_OK);
    EXPECT(strstr(json, "NonexistenceSingular") != NULL);
    hf_string_free(json);

    hf_minimize_options_default(&mo);
    mo.cells = 64;
    mo.theta_max = 4.0;
    EXPECT(hf_minimize(h, &mo, NULL, &out, &json) == HF_OK);
    EXPECT(strstr(json, "\"converged\":true") != NULL);
    hf_string_free(json);
    json = NULL;
    EXPECT(hf_minimize(strong, &mo, NULL, NULL, &json) == HF_E_REGIME_REFUSAL);
    EXPECT(json == NULL);

    hf_evolve_options_default(&eo);
    eo.t_end = 0.1;
    EXPECT(hf_evolve(out, h, &eo, NULL, &fin, &csv, &json) == HF_OK);
    EXPECT(strncmp(csv, "t,energy,mass,support_radius", 28) == 0);
    hf_string_free(csv);
    hf_string_free(json);
    eo.dt = 50.0;
    eo.t_end = 100.0;
    EXPECT(hf_evolve(out, h, &eo, NULL, NULL, NULL, NULL) == HF_E_CFL);

    EXPECT(hf_hls_check(out, 2, 1.0, 2.0, 1.0, 1.0, 0.0, &json) == HF_OK);
    EXPECT(strstr(json, "\"slack\"") != NULL);
    hf_string_free(json);
    EXPECT(hf_hls_check(out, 3, 1.0, 2.0, 1.0, 1.0, 0.0, &json) == HF_E_INVALID_ARGUMENT);

    EXPECT(hf_blowup(strong, 2.0, 2, 1.0, 5, &json) == HF_OK);
    EXPECT(strstr(json, "\"divergent\":true") != NULL);
    hf_string_free(json);

    {
        hf_potential* mild = NULL;
        int all_pass = 0;
        EXPECT(hf_potential_riesz(0.5, &mild) == HF_OK);
        EXPECT(hf_witness(mild, 3.0, 2, 1.0, 20000, 7, &json) == HF_OK);
        EXPECT(strstr(json, "multi-ball") != NULL);
        hf_string_free(json);
        EXPECT(hf_rearrange_check(2, 1.0, "exp", 2, 5000, 3, &json, &all_pass) == HF_OK);
        EXPECT(all_pass == 1);
        hf_string_free(json);
        EXPECT(hf_rearrange_check(2, 1.0, "gauss", 2, 5000, 3, &json, &all_pass) == HF_E_INVALID_ARGUMENT);
        hf_potential_free(mild);
    }

    hf_density_free(fin);
    hf_density_free(out);
    hf_potential_free(strong);
    hf_potential_free(h);
}

int main(void)
{
    hf_set_threads(1);
    test_errors();
    test_potential_and_density();
    test_workflows();
    if (failures)
        fprintf(stderr, "%d failure(s)\n", failures);
    else
        printf("all C API checks passed\n");
    return failures ? 1 : 0;
}
