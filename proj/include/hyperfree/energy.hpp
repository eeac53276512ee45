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

#include "hyperfree/density.hpp"
#include "hyperfree/kernel.hpp"
#include "hyperfree/potentials.hpp"

namespace hyperfree {

struct EnergyParams {
    double m = 2.0;
    ManifoldParams manifold = ManifoldParams::hyperbolic(2);

    void validate() const;
};

struct EnergyBreakdown {
    double entropy = 0.0;
    double interaction = 0.0;
    double total = 0.0;
    double m = 0.0;
    int d = 0;
    double c = 0.0;

    std::string to_json() const;
};

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

double entropy_term(const RadialDensity& rho, double m);

// (1/2) sum_ij rho_i rho_j K_ij v_i v_j. Refuses kernels that are not locally integrable.
double interaction_energy(const RadialDensity& rho, const PotentialSpec& h, const KernelOptions& opt = {});
// Same, additionally refusing singularities that are not admissible for exponent m.
double interaction_energy(const RadialDensity& rho, const PotentialSpec& h, double m, const KernelOptions& opt = {});

EnergyBreakdown total_energy(const RadialDensity& rho, const PotentialSpec& h, const EnergyParams& params,
                             const KernelOptions& opt = {});

// Riesz kernel d^{-lambda} as a radial kernel.
RadialKernel riesz_kernel(double lambda);
double riesz_bilinear(const RadialDensity& rho1, const RadialDensity& rho2, double lambda,
                      const KernelOptions& opt = {});

struct LowerBoundDecomposition;

// entropy - (gamma1 C~ / 2) (int rho^m)^{alpha/(d(m-1))} - (gamma1 r^{-alpha} + gamma2) / 2.
double energy_lower_bound(const RadialDensity& rho, const EnergyParams& params, double r,
                          const LowerBoundDecomposition& dec, double c_euclid);

// (1/2) E h(d(X, Y)) for X, Y independent draws from the mixture.
McEstimate interaction_energy_mixture(const BallMixture& mix, const PotentialSpec& h, std::size_t n_samples,
                                      std::uint64_t seed);
McEstimate kernel_energy_mixture(const BallMixture& mix, const RadialKernel& k, std::size_t n_samples,
                                 std::uint64_t seed);
// E k(d(X, Y)) with X from a and Y from b.
McEstimate cross_kernel_mixture(const BallMixture& a, const BallMixture& b, const RadialKernel& k,
                                std::size_t n_samples, std::uint64_t seed);

} // namespace hyperfree
