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


#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "hyperfree/error.hpp"
#include "hyperfree/geometry.hpp"

using namespace hyperfree;
using std::numbers::pi;

namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

// Composite Simpson on the volume integrand, independent of the library quadrature.
double simpson_volume(int d, double c, double theta, int n = 20000)
{
    const double s = std::sqrt(c);
    auto f = [&](double t) { return std::pow(std::sinh(s * t) / s, d - 1); };
    const double h = theta / n;
    double acc = f(0.0) + f(theta);
    for (int i = 1; i < n; ++i)
        acc += f(i * h) * (i % 2 ? 4.0 : 2.0);
    return d * unit_ball_volume(d) * acc * h / 3.0;
}

double minkowski_distance(const Point& a, const Point& b, double c)
{
    double inner = -a.x[0] * b.x[0];
    for (std::size_t i = 1; i < a.x.size(); ++i)
        inner += a.x[i] * b.x[i];
    return std::acosh(std::max(1.0, -c * inner)) / std::sqrt(c);
}

} // namespace

TEST_CASE("unit ball volumes")
{
    CHECK(unit_ball_volume(2) == doctest::Approx(pi).epsilon(1e-15));
    CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * pi / 3.0).epsilon(1e-15));
    CHECK(unit_ball_volume(4) == doctest::Approx(4.9348022005446793094).epsilon(1e-14));
}

TEST_CASE("ball volume closed forms and frozen values")
{
    for (double t : {0.1, 1.0, 5.0}) {
        CHECK(rel(ball_volume(2, 1.0, t), 2.0 * pi * (std::cosh(t) - 1.0)) < 1e-12);
        CHECK(rel(ball_volume(3, 1.0, t), pi * (std::sinh(2.0 * t) - 2.0 * t)) < 1e-12);
    }
    CHECK(rel(ball_volume(2, 1.0, 1.0), 3.4122762652849023064) < 1e-13);
    CHECK(rel(ball_volume(4, 1.0, 1.0), 6.8757195882414266905) < 1e-12);
    CHECK(rel(ball_volume(5, 1.0, 2.0), 1066.0484491146748864) < 1e-12);
    CHECK(rel(ball_volume(4, 0.5, 3.0), 1711.9977361269706642) < 1e-12);
    CHECK(rel(ball_volume(6, 2.0, 1.5), 869.64325162604792132) < 1e-12);
    CHECK(rel(ball_volume(3, 1.0, 5.0), 34567.675564905882539) < 1e-12);
    CHECK(ball_volume(3, 0.0, 2.0) == doctest::Approx(4.0 / 3.0 * pi * 8.0).epsilon(1e-15));
    CHECK(ball_volume(5, 1.0, 0.0) == 0.0);
    CHECK_THROWS_AS(ball_volume(2, 1.0, -1.0), Error);
}

TEST_CASE("ball volume agrees with a Simpson oracle")
{
    for (int d : {2, 3, 4, 5, 7})
        for (double c : {0.25, 1.0, 3.0})
            for (double t : {0.05, 0.7, 2.5})
                CHECK(rel(ball_volume(d, c, t), simpson_volume(d, c, t)) < 1e-9);
}

TEST_CASE("flat branch is exact and volume is continuous at c = 0")
{
    for (int d : {2, 3, 4, 6})
        for (double t : {0.3, 1.0, 4.0}) {
            CHECK(ball_volume(d, 0.0, t) == unit_ball_volume(d) * std::pow(t, d));
            CHECK(rel(ball_volume(d, 1e-10, t), ball_volume(d, 0.0, t)) < 1e-8);
        }
}

TEST_CASE("curvature scaling")
{
    for (int d : {2, 4})
        for (double c : {0.5, 2.0})
            for (double t : {0.4, 1.7})
                CHECK(rel(ball_volume(d, c, t), std::pow(c, -0.5 * d) * ball_volume(d, 1.0, std::sqrt(c) * t)) < 1e-11);
}

TEST_CASE("sphere area is the derivative of ball volume")
{
    CHECK(sphere_area(2, 1.0, 0.8) == doctest::Approx(2.0 * pi * std::sinh(0.8)).epsilon(1e-14));
    CHECK(sphere_area(3, 0.0, 1.0) == doctest::Approx(4.0 * pi).epsilon(1e-15));
    CHECK(sphere_area(4, 1.0, 0.0) == 0.0);
    for (int d : {2, 3, 5})
        for (double t : {0.3, 1.2, 3.0}) {
            const double h = 1e-5;
            const double fd = (ball_volume(d, 1.0, t + h) - ball_volume(d, 1.0, t - h)) / (2.0 * h);
            CHECK(rel(sphere_area(d, 1.0, t), fd) < 1e-7);
        }
}

TEST_CASE("ball radius for volume inverts ball volume")
{
    for (int d : {2, 3, 5})
        for (double c : {0.0, 1.0})
            for (double t : {0.01, 0.5, 3.0})
                CHECK(ball_radius_for_volume(d, c, ball_volume(d, c, t)) == doctest::Approx(t).epsilon(1e-11));
}

TEST_CASE("jacobian bounds")
{
    const ManifoldParams flat = ManifoldParams::flat(3);
    auto f = jacobian_bounds(flat, 2.0);
    CHECK(f.lower == 1.0);
    CHECK(f.upper == 1.0);
    ManifoldParams p{2, 0.0, 1.0, 1.0};
    CHECK(jacobian_bounds(p, 1.0).upper == doctest::Approx(1.1752011936438014).epsilon(1e-14));
    auto z = jacobian_bounds(ManifoldParams::hyperbolic(4), 0.0);
    CHECK(z.lower == 1.0);
    CHECK(z.upper == 1.0);
}

TEST_CASE("manifold validation")
{
    CHECK_NOTHROW(ManifoldParams::hyperbolic(2).validate());
    ManifoldParams bad{1, 0.0, 0.0, 0.0};
    CHECK_THROWS_AS(bad.validate(), Error);
    ManifoldParams inverted{2, 2.0, 1.0, 1.5};
    CHECK_THROWS_AS(inverted.validate(), Error);
}

TEST_CASE("geodesic distance special cases")
{
    CHECK(geodesic_distance(1.0, 1.0, pi, 1.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(geodesic_distance(3.0, 0.0, 0.7, 1.0) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(geodesic_distance(1.0, 1.0, pi / 2, 1.0) == doctest::Approx(1.5133740065965039598).epsilon(1e-14));
    CHECK(geodesic_distance(2.5, 1.0, 0.0, 1.0) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(tangent_chord_distance(1.0, 2.0, pi / 3) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
    CHECK(tangent_chord_distance(1.3, 1.3, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("geodesic distance agrees with the cosine law away from cancellation")
{
    Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
        const double a = 3.0 * rng.uniform(), b = 3.0 * rng.uniform(), phi = pi * rng.uniform();
        const double ref = std::acosh(std::cosh(a) * std::cosh(b) - std::sinh(a) * std::sinh(b) * std::cos(phi));
        if (ref > 0.1)
            CHECK(geodesic_distance(a, b, phi, 1.0) == doctest::Approx(ref).epsilon(1e-10));
    }
}

TEST_CASE("points: hyperboloid constraint, distances and isometries")
{
    Rng rng(5);
    for (int d : {2, 3, 5}) {
        const double c = 0.7;
        const ManifoldParams p = ManifoldParams::hyperbolic(d, c);
        const Point o = origin(d, c);
        const Point center = point_on_ray(d, c, 2.0);
        auto pts = sample_ball(p, center, 1.5, 200, rng);
        for (const Point& x : pts) {
            double q = -x.x[0] * x.x[0];
            for (std::size_t i = 1; i < x.x.size(); ++i)
                q += x.x[i] * x.x[i];
            CHECK(q == doctest::Approx(-1.0 / c).epsilon(1e-12));
            CHECK(distance(x, center, c) <= 1.5 * (1 + 1e-12));
        }
        for (std::size_t i = 0; i + 2 < pts.size(); i += 3) {
            const double ab = distance(pts[i], pts[i + 1], c);
            const double bc = distance(pts[i + 1], pts[i + 2], c);
            const double ac = distance(pts[i], pts[i + 2], c);
            CHECK(ac <= ab + bc + 1e-12);
            CHECK(ab == doctest::Approx(minkowski_distance(pts[i], pts[i + 1], c)).epsilon(1e-9));
            const Point t1 = translate(pts[i], pts[i + 2], c);
            const Point t2 = translate(pts[i + 1], pts[i + 2], c);
            CHECK(distance(t1, t2, c) == doctest::Approx(ab).epsilon(1e-9));
        }
        CHECK(distance_from_origin(translate(o, center, c), c) == doctest::Approx(2.0).epsilon(1e-12));
    }
}

TEST_CASE("sampling: empty request and radial law")
{
    Rng rng(3);
    const ManifoldParams p = ManifoldParams::hyperbolic(2);
    CHECK(sample_ball(p, origin(2, 1.0), 1.0, 0, rng).empty());
    auto tiny = sample_ball(p, origin(2, 1.0), 1e-9, 10, rng);
    for (const Point& x : tiny)
        CHECK(distance_from_origin(x, 1.0) <= 1e-9 * (1 + 1e-9));
    const int n = 100000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = sample_ball_radius(2, 1.0, 1.0, rng);
        s += r;
        s2 += r * r;
    }
    const double mean = s / n;
    const double sd = std::sqrt((s2 / n - mean * mean) / n);
    CHECK(std::fabs(mean - 0.67739377467693178912) < 3.0 * sd);
    for (int d : {3, 4}) {
        int below = 0;
        const int m = 20000;
        for (int i = 0; i < m; ++i)
            if (ball_volume(d, 1.0, sample_ball_radius(d, 1.0, 2.0, rng)) < 0.5 * ball_volume(d, 1.0, 2.0))
                ++below;
        CHECK(std::fabs(below / double(m) - 0.5) < 4.0 * std::sqrt(0.25 / m));
    }
}

TEST_CASE("seeded streams are reproducible and distinct")
{
    Rng a(42, 1), b(42, 1), c(42, 2);
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x != c.uniform());
}
