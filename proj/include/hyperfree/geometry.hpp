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

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace hyperfree {

// Curvature data of the model space. Sectional curvature is -c, c >= 0;
// c = 0 is the flat branch. c_M and c_m bound the curvature from above and
// below in comparison estimates and equal c for the model itself.
struct ManifoldParams {
    int d = 2;
    double c_M = 1.0;
    double c_m = 1.0;
    double c = 1.0;

    static ManifoldParams hyperbolic(int d, double c = 1.0) { return {d, c, c, c}; }
    static ManifoldParams flat(int d) { return {d, 0.0, 0.0, 0.0}; }

    void validate() const;
};

// Seeded generator with independent streams.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream = 0);

    double uniform();
    double normal();
    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

// sinh(x) / x, Taylor expanded near 0.
double sinhc(double x);

// Radial warping function sinh(sqrt(c) t) / sqrt(c); t when c = 0.
double warp(double c, double t);

double unit_ball_volume(int d);
double ball_volume(int d, double c, double theta);
double ball_volume(const ManifoldParams& p, double c, double theta);
double sphere_area(int d, double c, double theta);
double sphere_area(const ManifoldParams& p, double c, double theta);

// Radius whose ball has the given volume.
double ball_radius_for_volume(int d, double c, double volume);

struct JacobianBounds {
    double lower;
    double upper;
};

// Bounds on the exponential-map Jacobian at distance r; lower uses c_M, upper uses c_m.
JacobianBounds jacobian_bounds(const ManifoldParams& p, double r);

// Distance between points at radii tx, ty from the origin separated by angle phi.
double geodesic_distance(double tx, double ty, double phi, double c);
double tangent_chord_distance(double tx, double ty, double phi);

// Point on the hyperboloid <x, x> = -1/c in R^{d+1}, or a point of R^d when c = 0.
struct Point {
    std::vector<double> x;
};

Point origin(int d, double c);
// Point at distance r along the first coordinate axis.
Point point_on_ray(int d, double c, double r);
// Point with polar coordinates (r, direction) about the origin; direction is a unit vector in R^d.
Point point_from_polar(double c, double r, const std::vector<double>& direction);
double distance(const Point& a, const Point& b, double c);
double distance_from_origin(const Point& a, double c);
// Isometry taking the origin to center, applied to p.
Point translate(const Point& p, const Point& center, double c);

// Uniform samples from the geodesic ball of radius R about center.
std::vector<Point> sample_ball(const ManifoldParams& p, const Point& center, double R, std::size_t n, Rng& rng);
// Radius and direction of one uniform sample about the origin.
double sample_ball_radius(int d, double c, double R, Rng& rng);
std::vector<double> sample_direction(int d, Rng& rng);

} // namespace hyperfree
