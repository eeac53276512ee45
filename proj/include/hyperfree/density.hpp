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

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hyperfree/geometry.hpp"

namespace hyperfree {

class RadialGrid;
using GridPtr = std::shared_ptr<const RadialGrid>;

class RadialGrid {
public:
    static GridPtr from_nodes(const ManifoldParams& p, std::vector<double> nodes);
    static GridPtr uniform(const ManifoldParams& p, std::size_t cells, double theta_max);
    // Geometric cells near the origin followed by uniform cells up to theta_max.
    static GridPtr default_grid(const ManifoldParams& p, std::size_t cells = 512, double theta_max = 20.0);

    const ManifoldParams& params() const { return params_; }
    std::size_t cells() const { return volumes_.size(); }
    double theta_max() const { return nodes_.back(); }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& volumes() const { return volumes_; }
    // ball_volume at each node.
    const std::vector<double>& cumulative() const { return cumulative_; }
    double left(std::size_t i) const { return nodes_[i]; }
    double right(std::size_t i) const { return nodes_[i + 1]; }
    // Index of the node nearest to theta.
    std::size_t nearest_node(double theta) const;
    // Index of the cell containing theta (the last cell for theta_max).
    std::size_t locate(double theta) const;

private:
    ManifoldParams params_;
    std::vector<double> nodes_;
    std::vector<double> volumes_;
    std::vector<double> cumulative_;
};

class RadialDensity {
public:
    RadialDensity() = default;
    RadialDensity(GridPtr grid, std::vector<double> values);

    const GridPtr& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& mutable_values() { return values_; }
    std::size_t cells() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    // Outer radius of the support, 0 for the zero density.
    double support_radius() const;
    bool is_non_increasing() const;
    // True if ball_volume was snapped when constructing a ball profile.
    bool snapped = false;

private:
    GridPtr grid_;
    std::vector<double> values_;
};

double mass(const RadialDensity& rho);
double lp_integral(const RadialDensity& rho, double m);

// Symmetric decreasing rearrangement on a refined grid with level-set radii inserted as nodes.
RadialDensity rearrange(const RadialDensity& rho);
// Rearrangement averaged back onto the input grid; mass preserving, non-increasing.
RadialDensity rearrange_onto_grid(const RadialDensity& rho);

RadialDensity uniform_ball(const GridPtr& grid, double R);
RadialDensity scaled_indicator(const GridPtr& grid, double alpha, double theta_tilde);

struct TailCheck {
    bool ok = true;
    std::optional<std::size_t> violating_cell;
};

// rho(theta) <= 1 / |B_theta| for theta >= R.
TailCheck linf_tail_bound_check(const RadialDensity& rho, double R);

// Union of two node sets over the same manifold.
GridPtr union_grid(const RadialGrid& a, const RadialGrid& b);
// Exact transfer of a piecewise-constant profile onto a grid whose nodes include those of rho's grid.
RadialDensity refine_to(const RadialDensity& rho, const GridPtr& finer);

void write_density(std::ostream& out, const RadialDensity& rho);
RadialDensity read_density(std::istream& in);
void write_density_file(const std::string& path, const RadialDensity& rho);
RadialDensity read_density_file(const std::string& path);

struct Ball {
    Point center;
    double radius = 0.0;
    double weight = 0.0;
};

// Convex combination of uniform ball densities.
struct BallMixture {
    ManifoldParams params;
    std::vector<Ball> balls;

    void validate() const;
    Point sample(Rng& rng) const;
    // Exact entropy integral for pairwise disjoint balls.
    double lp_integral_disjoint(double m) const;
    bool pairwise_disjoint() const;
};

} // namespace hyperfree
