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

#include <optional>
#include <string>
#include <vector>

#include "hyperfree/density.hpp"
#include "hyperfree/energy.hpp"
#include "hyperfree/kernel.hpp"
#include "hyperfree/potentials.hpp"

namespace hyperfree {

struct MinimizerConfig {
    GridPtr grid;
    EnergyParams energy;
    PotentialSpec potential;
    int max_iters = 20000;
    double step0 = 0.5;
    double backtrack = 0.5;
    double tol = 1e-7;
    double projection_tol = 1e-14;
    KernelOptions kernel;
    std::optional<RadialDensity> initial;
};

struct MinimizerResult {
    RadialDensity density;
    std::vector<double> energy_trace;
    double energy = 0.0;
    double el_residual = 0.0;
    double el_multiplier = 0.0;
    double support_radius = 0.0;
    int iterations = 0;
    bool converged = false;
    bool boundary_limited = false;
    std::string stop_reason;

    std::string to_json() const;
};

struct ElResidual {
    double residual = 0.0;
    double multiplier = 0.0;
    std::size_t components = 0;
    // Largest violation of first_variation >= C outside the support (0 when satisfied).
    double outside_violation = 0.0;
};

// m/(m-1) rho^{m-1} + W * rho, cellwise.
std::vector<double> first_variation(const RadialDensity& rho, const PotentialSpec& h, const EnergyParams& params,
                                    const KernelOptions& opt = {});
ElResidual el_residual(const RadialDensity& rho, const PotentialSpec& h, const EnergyParams& params,
                       const KernelOptions& opt = {});
// Residual of a precomputed first variation.
ElResidual el_residual_of(const RadialDensity& rho, const std::vector<double>& fv);

// Nearest point of {x >= 0, sum v_i x_i = mass} to y in the v-weighted Euclidean metric.
std::vector<double> project_to_simplex(const std::vector<double>& y, const std::vector<double>& v, double mass = 1.0);

MinimizerResult minimize_energy(const MinimizerConfig& config);

struct TrajectoryRow {
    double t = 0.0;
    double energy = 0.0;
    double mass = 0.0;
    double support_radius = 0.0;
};

struct EvolveOptions {
    // Record a row every record_every steps; 0 records only the endpoints.
    std::size_t record_every = 1;
    // Keep a density snapshot every snapshot_every steps; 0 disables snapshots.
    std::size_t snapshot_every = 0;
    KernelOptions kernel;
};

struct Trajectory {
    std::vector<TrajectoryRow> rows;
    std::vector<std::pair<double, RadialDensity>> snapshots;
    RadialDensity final_density;
    std::size_t steps = 0;
    double max_energy_increase = 0.0;
    double max_mass_drift = 0.0;
    double max_cfl = 0.0;

    std::string to_csv() const;
};

// Advective CFL number dt * max_i sum_faces T_f |w_nb - w_i| / v_i for the drift potential w.
double advective_cfl(const RadialGrid& g, const std::vector<double>& w, double dt);

Trajectory evolve_pde(const RadialDensity& rho0, const PotentialSpec& h, const EnergyParams& params, double dt,
                      double T, const EvolveOptions& opt = {});

struct TailMassCheck {
    bool ok = false;
    double tail_mass = 0.0;
    double bound = 0.0;
};

TailMassCheck tail_mass_bound_check(const RadialDensity& rho, const PotentialSpec& h, double V, double delta);

// Weighted L1 distance sum_i |a_i - b_i| v_i on a shared grid.
double weighted_l1(const RadialDensity& a, const RadialDensity& b);

} // namespace hyperfree
