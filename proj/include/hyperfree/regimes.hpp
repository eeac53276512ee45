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
#include <optional>
#include <string>
#include <vector>

#include "hyperfree/density.hpp"
#include "hyperfree/kernel.hpp"
#include "hyperfree/potentials.hpp"

namespace hyperfree {

struct BlowupReport {
    std::vector<double> radii;
    std::vector<double> energies;
    std::vector<double> upper_bounds;
    // Kernel cutoff used at each level; 0 when the potential is integrable.
    std::vector<double> cutoffs;
    bool divergent = false;
    bool bound_respected = true;

    std::string to_json() const;
};

// Energies of uniform balls of radius 2^-k, k = 0 .. levels - 1.
BlowupReport blowup_demo(const PotentialSpec& h, double m, const ManifoldParams& p, int levels = 8,
                         const KernelOptions& opt = {});

struct NegativeEnergyWitness {
    // "single-ball", "multi-ball" or "none".
    std::string construction = "none";
    bool found = false;
    std::optional<RadialDensity> density;
    BallMixture mixture;
    double certified_energy = 0.0;
    double closed_form_bound = 0.0;
    double theta_tilde = 0.0;
    double a_coef = 0.0;
    double b_coef = 0.0;
    double alpha0 = 0.0;
    double alpha_star = 0.0;
    int n_balls = 0;
    std::optional<double> theta0;
    Verdict verdict = Verdict::kUndetermined;

    std::string to_json() const;
};

NegativeEnergyWitness construct_negative_energy_mgt2(const PotentialSpec& h, double m, const ManifoldParams& p,
                                                     const KernelOptions& opt = {});
NegativeEnergyWitness construct_negative_energy_mle2(const PotentialSpec& h, double m, const ManifoldParams& p,
                                                     const KernelOptions& opt = {});

struct WitnessCheck {
    double entropy = 0.0;
    double interaction = 0.0;
    double interaction_std_error = 0.0;
    double total = 0.0;
    bool certified = false;

    std::string to_json() const;
};

// Exact entropy of the ball mixture plus a Monte-Carlo interaction; certified when total + 3 sigma < 0.
WitnessCheck verify_witness(const NegativeEnergyWitness& w, const PotentialSpec& h, double m, std::size_t n_samples,
                            std::uint64_t seed);

// Layer-cake decomposition of a non-increasing radial density, recentered at new_center.
BallMixture isometry_translate(const RadialDensity& rho, const Point& new_center);

struct SplittingCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

// int (a+b)^m - a^m <= m 2^{m-1} (int b^m)^{1/m} (int a^m + int b^m)^{(m-1)/m}.
SplittingCheck entropy_splitting_check(const RadialDensity& a, const RadialDensity& b, double m, double tol = 1e-10);

} // namespace hyperfree
