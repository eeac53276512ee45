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

#include <memory>
#include <vector>

#include "hyperfree/density.hpp"
#include "hyperfree/potentials.hpp"

namespace hyperfree {

struct KernelOptions {
    // Points per cell in the radial (outer) integral.
    int radial_order = 12;
    // Points per piece in the sphere-fraction (inner) integral.
    int piece_order = 16;
};

// Phi(t, R) = integral of k(d(x, y)) over y in B_R(o), for a point x with d(o, x) = t.
class BallPotential {
public:
    BallPotential(const ManifoldParams& p, const RadialKernel& k, double max_radius, const KernelOptions& opt = {});

    double operator()(double t, double R) const;
    // Integral of k over B_L(x) for any x.
    double centered(double L) const;
    // Fraction of the geodesic sphere of radius s about x (d(o, x) = t) lying inside B_R(o).
    double sphere_fraction(double t, double s, double R) const;

private:
    double integrand(double s) const;
    double origin_part(double L) const;
    double segment(double a, double b) const;
    double transition(double t, double R) const;

    ManifoldParams params_;
    RadialKernel kernel_;
    KernelOptions opt_;
    double sqrt_c_;
    double area_;
    double max_radius_;
    std::vector<double> table_L_;
    std::vector<double> table_P_;
};

// Cell-averaged interaction matrix K_ij = (1 / (v_i v_j)) iint_{cell i x cell j} k(d(x, y)) dx dy.
class KernelMatrix {
public:
    static std::shared_ptr<const KernelMatrix> build(const GridPtr& grid, const RadialKernel& k,
                                                     const KernelOptions& opt = {});

    std::size_t size() const { return n_; }
    const GridPtr& grid() const { return grid_; }
    double operator()(std::size_t i, std::size_t j) const { return k_[i * n_ + j]; }
    // (W * rho)_i = sum_j K_ij rho_j v_j.
    std::vector<double> apply(const std::vector<double>& rho) const;
    // sum_ij a_i b_j v_i v_j K_ij.
    double bilinear(const std::vector<double>& a, const std::vector<double>& b) const;

private:
    GridPtr grid_;
    std::size_t n_ = 0;
    std::vector<double> k_;
};

// Shared, memoized kernel matrices keyed by grid nodes, kernel identity and options.
std::shared_ptr<const KernelMatrix> cached_kernel(const GridPtr& grid, const RadialKernel& k,
                                                  const KernelOptions& opt = {});
void clear_kernel_cache();

} // namespace hyperfree
