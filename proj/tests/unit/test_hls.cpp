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

#include <json.hpp>

#include "hyperfree/energy.hpp"
#include "hyperfree/error.hpp"
#include "hyperfree/hls.hpp"

using namespace hyperfree;

namespace {

RadialDensity normalized(const GridPtr& g, std::vector<double> v)
{
    RadialDensity rho(g, v);
    const double ms = mass(rho);
    for (double& x : v)
        x /= ms;
    return RadialDensity(g, std::move(v));
}

// Truncated Gaussians and ball-plus-ring profiles; none of them is in the stress family.
std::vector<RadialDensity> held_out(const ManifoldParams& p)
{
    std::vector<RadialDensity> out;
    for (double s : {0.05, 0.2, 0.5, 1.0, 2.0, 4.0}) {
        auto g = RadialGrid::uniform(p, 32, 3.0 * s);
        std::vector<double> v(g->cells());
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double t = 0.5 * (g->left(i) + g->right(i));
            v[i] = std::exp(-0.5 * t * t / (s * s));
        }
        out.push_back(normalized(g, v));
    }
    for (double R : {0.1, 0.4, 1.0, 2.5}) {
        auto g = RadialGrid::uniform(p, 40, R);
        std::vector<double> v(g->cells(), 0.0);
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i < 10)
                v[i] = 3.0;
            else if (i >= 25 && i < 35)
                v[i] = 1.0;
        }
        out.push_back(normalized(g, v));
    }
    for (double R : {0.03, 0.3, 0.8, 1.7, 3.0}) {
        auto g = RadialGrid::uniform(p, 16, R);
        out.push_back(uniform_ball(g, R));
    }
    for (double q : {0.5, 1.5, 3.0}) {
        auto g = RadialGrid::uniform(p, 32, 1.2);
        std::vector<double> v(g->cells());
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double t = 0.5 * (g->left(i) + g->right(i)) / 1.2;
            v[i] = std::pow(1.0 - t, q);
        }
        out.push_back(normalized(g, v));
    }
    for (double w : {0.3, 1.0}) {
        auto g = RadialGrid::uniform(p, 24, 3.0 * w);
        std::vector<double> v(g->cells());
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = std::exp(-0.5 * (g->left(i) + g->right(i)) / w);
        out.push_back(normalized(g, v));
    }
    return out;
}

} // namespace

TEST_CASE("critical exponent and interpolation parameter")
{
    CHECK(critical_exponent(1.0, 2) == 1.5);
    CHECK(critical_exponent(0.9, 3) == doctest::Approx(1.3));
    for (double lambda : {0.3, 0.9, 1.5})
        for (double m : {critical_exponent(lambda, 2), 2.0, 3.0, 7.5}) {
            const double mc = critical_exponent(lambda, 2);
            const double th = interpolation_theta(lambda, 2, m);
            CHECK(1.0 / mc == doctest::Approx(th + (1.0 - th) / m).epsilon(1e-15));
            CHECK(th >= 0.0);
            CHECK(th < 1.0);
        }
    CHECK(interpolation_theta(1.0, 2, 1.5) == 0.0);
}

TEST_CASE("vitali count")
{
    for (int d : {2, 3, 4})
        for (double r : {0.1, 1.0, 5.0}) {
            CHECK(vitali_count(d, 0.0, r) == doctest::Approx(std::pow(7.0, d)).epsilon(1e-13));
            double prev = std::pow(7.0, d);
            for (double c_m : {0.5, 1.0, 2.0}) {
                const double n = vitali_count(d, c_m, r);
                CHECK(n > prev);
                prev = n;
            }
        }
    CHECK(vitali_count(2, 1.0, 1.0) == doctest::Approx(1094.63407031042415378).epsilon(1e-12));
    CHECK(vitali_count(3, 0.5, 0.5) == doctest::Approx(1113.54670010413405834).epsilon(1e-12));
    CHECK_THROWS_AS(vitali_count(2, -1.0, 1.0), Error);
    CHECK_THROWS_AS(vitali_count(2, 1.0, 0.0), Error);
}

TEST_CASE("tilde constant")
{
    CHECK(tilde_constant(1.0, 2, 1.0, 1.0, 1.0) == doctest::Approx(6346.88237669756809853).epsilon(1e-12));
    CHECK(tilde_constant(0.9, 3, 0.5, 0.5, 2.5) == doctest::Approx(4140.58571244397617087).epsilon(1e-12));
    CHECK(tilde_constant(0.7, 3, 2.0, 0.0, 3.0) == doctest::Approx(3.0 * 343.0).epsilon(1e-13));
    CHECK(tilde_constant(1.2, 2, 0.4, 1.5, 4.0) == doctest::Approx(2.0 * tilde_constant(1.2, 2, 0.4, 1.5, 2.0)));
    for (double c_m : {0.5, 1.0, 2.0})
        CHECK(tilde_constant(1.0, 3, 1.0, c_m, 1.0) >= 343.0);
    CHECK_THROWS_AS(tilde_constant(2.0, 2, 1.0, 1.0, 1.0), Error);
}

TEST_CASE("calibration")
{
    const auto fam = default_stress_family(2);
    CHECK(fam.size() == 25);
    const auto one = calibrate_euclid_constant(1.0, 2, 1.5, {fam[3]});
    CHECK(one.constant == doctest::Approx(2.0 * hls_ratio(fam[3], 1.0, 1.5)).epsilon(1e-15));
    const auto base = calibrate_euclid_constant(1.0, 2, 1.5);
    CHECK(std::isfinite(base.constant));
    CHECK(base.constant > 0.0);
    for (double r : base.ratios)
        CHECK(r * base.safety <= base.constant);
    auto enriched = fam;
    for (auto& rho : held_out(ManifoldParams::flat(2)))
        enriched.push_back(rho);
    const auto more = calibrate_euclid_constant(1.0, 2, 1.5, enriched);
    CHECK(more.constant == doctest::Approx(base.constant).epsilon(0.02));
    CHECK_THROWS_AS(calibrate_euclid_constant(1.0, 2, 1.2), Error);
    CHECK_THROWS_AS(calibrate_euclid_constant(1.0, 3, 2.0, {fam[0]}), Error);
}

TEST_CASE("calibrated constant holds on held-out flat densities")
{
    const auto corpus = held_out(ManifoldParams::flat(2));
    for (double lambda : {0.3, 0.9, 1.5})
        for (double m : {critical_exponent(lambda, 2), 2.0, 3.0}) {
            const double c = calibrate_euclid_constant(lambda, 2, m).constant;
            for (const auto& rho : corpus) {
                const double rhs = c * std::pow(lp_integral(rho, m), lambda / (2.0 * (m - 1.0)));
                CHECK(riesz_bilinear(rho, rho, lambda) <= rhs);
            }
        }
}

TEST_CASE("dilation structure in the flat branch")
{
    const auto p = ManifoldParams::flat(2);
    for (double lambda : {0.5, 1.0, 1.5}) {
        const double m = 2.0;
        const double a = hls_ratio(uniform_ball(RadialGrid::uniform(p, 16, 0.7), 0.7), lambda, m);
        const double b = hls_ratio(uniform_ball(RadialGrid::uniform(p, 16, 1.4), 1.4), lambda, m);
        CHECK(a == doctest::Approx(b).epsilon(1e-6));
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        int n = 0;
        for (double s : {1.0, 2.0, 4.0, 8.0, 16.0}) {
            const double R = 1.0 / s;
            const double lhs = riesz_bilinear(uniform_ball(RadialGrid::uniform(p, 16, R), R),
                                              uniform_ball(RadialGrid::uniform(p, 16, R), R), lambda);
            const double x = std::log(s), y = std::log(lhs);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++n;
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        CHECK(slope == doctest::Approx(lambda).epsilon(1e-3));
    }
}

TEST_CASE("variant I")
{
    const double c = calibrate_euclid_constant(0.5, 2, 1.25).constant;
    auto g = RadialGrid::uniform(ManifoldParams::hyperbolic(2), 32, 1.0);
    const auto rep = hls_variant1_check(uniform_ball(g, 1.0), 0.5, 1.0, c);
    CHECK(rep.slack >= 0.0);
    CHECK(rep.m == doctest::Approx(1.25));
    auto gf = RadialGrid::uniform(ManifoldParams::flat(2), 32, 1.0);
    const auto rho = uniform_ball(gf, 1.0);
    const auto flat = hls_variant1_check(rho, 0.5, 0.0, c);
    CHECK(flat.rhs == doctest::Approx(c * lp_integral(rho, 1.25)).epsilon(1e-12));
    // Weight tends to 1 at the pole: tiny balls see no curvature weight.
    auto gs = RadialGrid::uniform(ManifoldParams::hyperbolic(2), 8, 1e-4);
    const auto tiny = uniform_ball(gs, 1e-4);
    CHECK(hls_variant1_check(tiny, 0.5, 1.0, 1.0).rhs == doctest::Approx(lp_integral(tiny, 1.25)).epsilon(1e-7));
}

TEST_CASE("variant II on the hyperbolic corpus")
{
    const auto p = ManifoldParams::hyperbolic(2);
    const auto corpus = held_out(p);
    CHECK(corpus.size() == 20);
    for (double lambda : {0.3, 0.9, 1.5})
        for (double m : {critical_exponent(lambda, 2), 2.0, 3.0}) {
            const double c = calibrate_euclid_constant(lambda, 2, m).constant;
            for (const auto& rho : corpus) {
                const auto rep = hls_variant2_check(rho, lambda, m, 1.0, p.c_m, c);
                CHECK(rep.slack >= 0.0);
                CHECK(1.0 / rep.m_c == doctest::Approx(rep.theta + (1.0 - rep.theta) / rep.m).epsilon(1e-15));
            }
        }
}

TEST_CASE("variant II examples")
{
    const auto p = ManifoldParams::hyperbolic(2);
    const double c = calibrate_euclid_constant(1.0, 2, 2.0).constant;
    const auto spread = uniform_ball(RadialGrid::uniform(p, 32, 10.0), 10.0);
    const auto rs = hls_variant2_check(spread, 1.0, 2.0, 1.0, 1.0, c);
    CHECK(rs.lhs <= 1.0);
    CHECK(rs.slack >= 0.0);
    const auto small = uniform_ball(RadialGrid::uniform(p, 16, 0.1), 0.1);
    const auto r1 = hls_variant2_check(small, 1.0, 2.0, 1.0, 1.0, c);
    CHECK(r1.slack >= 0.0);
    const auto far = hls_variant2_check(small, 1.0, 2.0, 1e3, 1e-6, c);
    CHECK(far.rhs - far.c_tilde * std::pow(lp_integral(small, 2.0), 0.5) == doctest::Approx(1e-3).epsilon(1e-6));
    CHECK(std::isinf(tilde_constant(1.0, 2, 1e3, 1.0, 1.0)));
    const auto j = nlohmann::json::parse(r1.to_json());
    for (const char* k : {"lambda", "m", "m_c", "r", "c_m", "lhs", "rhs", "constants", "slack", "theta"})
        CHECK(j.contains(k));
    CHECK(j["constants"].contains("N_vitali"));
    CHECK_THROWS_AS(hls_variant2_check(small, 1.0, 1.2, 1.0, 1.0, c), Error);
    CHECK_THROWS_AS(hls_variant2_check(small, 1.0, 2.0, 0.0, 1.0, c), Error);
}

TEST_CASE("rearrangement inequality")
{
    const auto p = ManifoldParams::hyperbolic(2);
    const BallMixture a{p, {{origin(2, 1.0), 0.8, 1.0}}};
    const BallMixture b{p, {{origin(2, 1.0), 0.5, 1.0}}};
    const auto same = riesz_rearrangement_check(a, b, exp_kernel(), 200000, 3);
    CHECK(same.pass);
    CHECK(std::fabs(same.lhs - same.rhs) < 4.0 * same.lhs_std_error);

    RadialKernel one;
    one.f = [](double) { return 1.0; };
    one.key = "1";
    const BallMixture sep{p, {{origin(2, 1.0), 0.4, 0.5}, {point_on_ray(2, 1.0, 2.0), 0.6, 0.5}}};
    const auto eq = riesz_rearrangement_check(sep, a, one, 1000, 4);
    CHECK(eq.lhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eq.rhs == doctest::Approx(1.0).epsilon(1e-10));

    const auto gap = riesz_rearrangement_check(sep, sep, exp_kernel(), 200000, 5);
    CHECK(gap.pass);
    CHECK(gap.lhs < gap.rhs);

    Rng rng(11, 0);
    for (int trial = 0; trial < 6; ++trial) {
        const auto m1 = random_disjoint_mixture(p, 1 + trial % 3, rng);
        const auto m2 = random_disjoint_mixture(p, 2, rng);
        CHECK(riesz_rearrangement_check(m1, m2, exp_kernel(), 50000, 100 + trial).pass);
        CHECK(riesz_rearrangement_check(m1, m2, inverse_kernel(), 50000, 200 + trial).pass);
    }
    const auto rr = rearranged_mixture(sep, 2.0);
    CHECK(mass(rr) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rr.is_non_increasing());
    const auto j = nlohmann::json::parse(gap.to_json());
    CHECK(j.contains("pass"));
}
