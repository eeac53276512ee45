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

#include "hyperfree/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "hyperfree/error.hpp"

namespace hyperfree {

void ManifoldParams::validate() const
{
    require(d >= 2, ErrorCode::kInvalidArgument, "manifold: d must be >= 2");
    require(c_M >= 0.0 && c >= 0.0 && c_m >= 0.0, ErrorCode::kInvalidArgument, "manifold: curvatures must be >= 0");
    require(c_M <= c && c <= c_m, ErrorCode::kInvalidArgument, "manifold: need c_M <= c <= c_m");
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), 0x68797066u};
    engine_.seed(seq);
}

double Rng::uniform() { return std::generate_canonical<double, 53>(engine_); }

double Rng::normal() { return normal_(engine_); }

double sinhc(double x)
{
    const double ax = std::fabs(x);
    if (ax < 1e-4) {
        const double x2 = x * x;
        return 1.0 + x2 / 6.0 * (1.0 + x2 / 20.0 * (1.0 + x2 / 42.0 * (1.0 + x2 / 72.0)));
    }
    return std::sinh(ax) / ax;
}

double warp(double c, double t)
{
    if (c == 0.0)
        return t;
    const double s = std::sqrt(c);
    return t * sinhc(s * t);
}

double unit_ball_volume(int d)
{
    require(d >= 1, ErrorCode::kInvalidArgument, "unit_ball_volume: d must be >= 1");
    return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

namespace {

// Volume of the unit-curvature ball of radius x.
double unit_curvature_volume(int d, double x)
{
    const double pi = std::numbers::pi;
    if (x == 0.0)
        return 0.0;
    if (d == 2) {
        const double s = std::sinh(0.5 * x);
        return 4.0 * pi * s * s;
    }
    if (d == 3 && x >= 0.5)
        return pi * (std::sinh(2.0 * x) - 2.0 * x);
    const double area = d * unit_ball_volume(d);
    auto f = [d](double t) { return std::pow(t * sinhc(t), d - 1); };
    // Entire integrand: fixed 30-point Gauss on unit-length pieces.
    const int pieces = static_cast<int>(std::ceil(x));
    double val = 0.0;
    for (int k = 0; k < pieces; ++k) {
        const double a = x * k / pieces, b = x * (k + 1) / pieces;
        val += boost::math::quadrature::gauss<double, 30>::integrate(f, a, b);
    }
    return area * val;
}

} // namespace

double ball_volume(int d, double c, double theta)
{
    require(d >= 1, ErrorCode::kInvalidArgument, "ball_volume: d must be >= 1");
    require(theta >= 0.0 && c >= 0.0, ErrorCode::kDomain, "ball_volume: theta and c must be >= 0");
    if (c == 0.0)
        return unit_ball_volume(d) * std::pow(theta, d);
    const double s = std::sqrt(c);
    return unit_curvature_volume(d, s * theta) / std::pow(s, d);
}

double ball_volume(const ManifoldParams& p, double c, double theta) { return ball_volume(p.d, c, theta); }

double sphere_area(int d, double c, double theta)
{
    require(theta >= 0.0 && c >= 0.0, ErrorCode::kDomain, "sphere_area: theta and c must be >= 0");
    return d * unit_ball_volume(d) * std::pow(warp(c, theta), d - 1);
}

double sphere_area(const ManifoldParams& p, double c, double theta) { return sphere_area(p.d, c, theta); }

double ball_radius_for_volume(int d, double c, double volume)
{
    require(volume >= 0.0, ErrorCode::kDomain, "ball_radius_for_volume: volume must be >= 0");
    if (volume == 0.0)
        return 0.0;
    const double flat = std::pow(volume / unit_ball_volume(d), 1.0 / d);
    if (c == 0.0)
        return flat;
    if (d == 2)
        return 2.0 * std::asinh(std::sqrt(volume * c / (4.0 * std::numbers::pi))) / std::sqrt(c);
    // Safeguarded Newton; the volume is convex in theta so Newton from above is monotone.
    double lo = 0.0;
    double hi = flat;
    while (ball_volume(d, c, hi) < volume)
        hi *= 2.0;
    double x = hi;
    for (int it = 0; it < 200; ++it) {
        const double f = ball_volume(d, c, x) - volume;
        if (f == 0.0)
            return x;
        if (f > 0.0)
            hi = x;
        else
            lo = x;
        double nx = x - f / sphere_area(d, c, x);
        if (!(nx > lo && nx < hi))
            nx = 0.5 * (lo + hi);
        if (std::fabs(nx - x) <= 1e-16 * x)
            return nx;
        x = nx;
    }
    return x;
}

JacobianBounds jacobian_bounds(const ManifoldParams& p, double r)
{
    require(r >= 0.0, ErrorCode::kDomain, "jacobian_bounds: r must be >= 0");
    const double lo = std::pow(sinhc(std::sqrt(p.c_M) * r), p.d - 1);
    const double hi = std::pow(sinhc(std::sqrt(p.c_m) * r), p.d - 1);
    return {lo, hi};
}

double geodesic_distance(double tx, double ty, double phi, double c)
{
    require(tx >= 0.0 && ty >= 0.0, ErrorCode::kDomain, "geodesic_distance: radii must be >= 0");
    if (c == 0.0)
        return tangent_chord_distance(tx, ty, phi);
    const double s = std::sqrt(c);
    const double a = s * tx;
    const double b = s * ty;
    // cosh D - 1 = cosh(a - b) - 1 + sinh a sinh b (1 - cos phi), written without cancellation.
    const double h = std::sinh(0.5 * (a - b));
    const double sp = std::sin(0.5 * phi);
    const double q = 2.0 * h * h + 2.0 * std::sinh(a) * std::sinh(b) * sp * sp;
    return 2.0 * std::asinh(std::sqrt(0.5 * q)) / s;
}

double tangent_chord_distance(double tx, double ty, double phi)
{
    const double sp = std::sin(0.5 * phi);
    const double q = (tx - ty) * (tx - ty) + 4.0 * tx * ty * sp * sp;
    return std::sqrt(std::max(q, 0.0));
}

Point origin(int d, double c)
{
    Point p;
    if (c == 0.0) {
        p.x.assign(d, 0.0);
    } else {
        p.x.assign(d + 1, 0.0);
        p.x[0] = 1.0 / std::sqrt(c);
    }
    return p;
}

Point point_from_polar(double c, double r, const std::vector<double>& direction)
{
    const std::size_t d = direction.size();
    Point p;
    if (c == 0.0) {
        p.x.resize(d);
        for (std::size_t i = 0; i < d; ++i)
            p.x[i] = r * direction[i];
        return p;
    }
    const double s = std::sqrt(c);
    p.x.resize(d + 1);
    p.x[0] = std::cosh(s * r) / s;
    const double w = std::sinh(s * r) / s;
    for (std::size_t i = 0; i < d; ++i)
        p.x[i + 1] = w * direction[i];
    return p;
}

Point point_on_ray(int d, double c, double r)
{
    std::vector<double> e(d, 0.0);
    e[0] = 1.0;
    return point_from_polar(c, r, e);
}

double distance(const Point& a, const Point& b, double c)
{
    require(a.x.size() == b.x.size(), ErrorCode::kInvalidArgument, "distance: dimension mismatch");
    if (c == 0.0) {
        double q = 0.0;
        for (std::size_t i = 0; i < a.x.size(); ++i)
            q += (a.x[i] - b.x[i]) * (a.x[i] - b.x[i]);
        return std::sqrt(q);
    }
    // Minkowski norm of the difference: c <x-y, x-y> = 2 (cosh(sqrt(c) D) - 1).
    double q = -(a.x[0] - b.x[0]) * (a.x[0] - b.x[0]);
    for (std::size_t i = 1; i < a.x.size(); ++i)
        q += (a.x[i] - b.x[i]) * (a.x[i] - b.x[i]);
    q = std::max(q * c, 0.0);
    return 2.0 * std::asinh(0.5 * std::sqrt(q)) / std::sqrt(c);
}

double distance_from_origin(const Point& a, double c)
{
    if (c == 0.0) {
        double q = 0.0;
        for (double v : a.x)
            q += v * v;
        return std::sqrt(q);
    }
    double q = 0.0;
    for (std::size_t i = 1; i < a.x.size(); ++i)
        q += a.x[i] * a.x[i];
    return std::asinh(std::sqrt(q * c)) / std::sqrt(c);
}

Point translate(const Point& p, const Point& center, double c)
{
    require(p.x.size() == center.x.size(), ErrorCode::kInvalidArgument, "translate: dimension mismatch");
    Point out;
    out.x.resize(p.x.size());
    if (c == 0.0) {
        for (std::size_t i = 0; i < p.x.size(); ++i)
            out.x[i] = p.x[i] + center.x[i];
        return out;
    }
    // Lorentz boost on the unit hyperboloid mapping e0 to sqrt(c) * center.
    const double s = std::sqrt(c);
    const std::size_t n = p.x.size();
    const double q0 = s * center.x[0];
    double dot = 0.0;
    for (std::size_t i = 1; i < n; ++i)
        dot += s * center.x[i] * s * p.x[i];
    const double y0 = s * p.x[0];
    out.x[0] = (q0 * y0 + dot) / s;
    const double k = y0 + dot / (1.0 + q0);
    for (std::size_t i = 1; i < n; ++i)
        out.x[i] = (s * center.x[i] * k + s * p.x[i]) / s;
    return out;
}

std::vector<double> sample_direction(int d, Rng& rng)
{
    std::vector<double> u(d);
    double norm = 0.0;
    do {
        norm = 0.0;
        for (int i = 0; i < d; ++i) {
            u[i] = rng.normal();
            norm += u[i] * u[i];
        }
    } while (norm == 0.0);
    norm = std::sqrt(norm);
    for (double& v : u)
        v /= norm;
    return u;
}

double sample_ball_radius(int d, double c, double R, Rng& rng)
{
    if (c == 0.0)
        return R * std::pow(rng.uniform(), 1.0 / d);
    const double s = std::sqrt(c);
    if (d == 2) {
        const double u = rng.uniform();
        return std::acosh(1.0 + u * (std::cosh(s * R) - 1.0)) / s;
    }
    // Rejection from the flat radial law; sinh(x)/x is increasing.
    const double top = std::pow(sinhc(s * R), d - 1);
    for (;;) {
        const double t = R * std::pow(rng.uniform(), 1.0 / d);
        if (rng.uniform() * top <= std::pow(sinhc(s * t), d - 1))
            return t;
    }
}

std::vector<Point> sample_ball(const ManifoldParams& p, const Point& center, double R, std::size_t n, Rng& rng)
{
    require(p.c > 0.0, ErrorCode::kInvalidArgument, "sample_ball: c > 0 required");
    require(R >= 0.0, ErrorCode::kDomain, "sample_ball: R must be >= 0");
    require(center.x.size() == static_cast<std::size_t>(p.d + 1), ErrorCode::kInvalidArgument,
            "sample_ball: center dimension mismatch");
    std::vector<Point> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = sample_ball_radius(p.d, p.c, R, rng);
        const auto dir = sample_direction(p.d, rng);
        out.push_back(translate(point_from_polar(p.c, r, dir), center, p.c));
    }
    return out;
}

} // namespace hyperfree
