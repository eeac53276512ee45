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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hyperfree/density.hpp"
#include "hyperfree/kernel.hpp"

namespace hyperfree {

double critical_exponent(double lambda, int d);
// (m - m_c) / (m_c (m - 1)).
double interpolation_theta(double lambda, int d, double m);

double vitali_count(int d, double c_m, double r);
double tilde_constant(double lambda, int d, double r, double c_m, double c_euclid);

struct CalibrationResult {
    double constant = 0.0;
    double max_ratio = 0.0;
    double safety = 2.0;
    std::vector<double> ratios;
};

// LHS / (int rho^m)^{lambda / (d (m - 1))} for a flat density.
double hls_ratio(const RadialDensity& rho, double lambda, double m, const KernelOptions& opt = {});
// Uniform balls over 20 radii and truncated power profiles in R^d.
std::vector<RadialDensity> default_stress_family(int d);
CalibrationResult calibrate_euclid_constant(double lambda, int d, double m, const std::vector<RadialDensity>& family,
                                            double safety = 2.0, const KernelOptions& opt = {});
CalibrationResult calibrate_euclid_constant(double lambda, int d, double m);

struct HlsReport {
    std::string variant;
    double lambda = 0.0;
    double m = 0.0;
    double m_c = 0.0;
    double r = 0.0;
    double c_m = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double c_euclid = 0.0;
    double c_tilde = 0.0;
    double n_vitali = 0.0;
    double slack = 0.0;
    double theta = 0.0;
    std::string label;

    std::string to_json() const;
};

HlsReport hls_variant1_check(const RadialDensity& rho, double lambda, double c_m, double c_euclid,
                             const KernelOptions& opt = {});
HlsReport hls_variant2_check(const RadialDensity& rho, double lambda, double m, double r, double c_m,
                             double c_euclid, const KernelOptions& opt = {});

struct RearrangementCheck {
    double lhs = 0.0;
    double lhs_std_error = 0.0;
    double rhs = 0.0;
    bool pass = false;

    std::string to_json() const;
};

RadialKernel exp_kernel();
RadialKernel inverse_kernel();

// Radial rearrangement of a mixture of pairwise disjoint balls on a grid of at least min_cells cells.
RadialDensity rearranged_mixture(const BallMixture& mix, double theta_max, std::size_t min_cells = 64);

RearrangementCheck riesz_rearrangement_check(const BallMixture& mix1, const BallMixture& mix2, const RadialKernel& g,
                                             std::size_t n_samples, std::uint64_t seed,
                                             const KernelOptions& opt = {});

// Pairwise disjoint balls with radii in [0.2, 1], centers within max_center of the pole, random weights.
BallMixture random_disjoint_mixture(const ManifoldParams& p, std::size_t balls, Rng& rng, double max_center = 3.0);

} // namespace hyperfree
