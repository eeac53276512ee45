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

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

#include "hyperfree/density.hpp"
#include "hyperfree/error.hpp"

using namespace hyperfree;

namespace {

// Value at cumulative volume V of the decreasing rearrangement, by stacking sorted cells.
double stacked_value(const RadialDensity& rho, double V)
{
    std::vector<std::pair<double, double>> cells;
    for (std::size_t i = 0; i < rho.cells(); ++i)
        cells.emplace_back(rho[i], rho.grid()->volumes()[i]);
    std::sort(cells.begin(), cells.end(), [](auto a, auto b) { return a.first > b.first; });
    double acc = 0.0;
    for (auto [val, vol] : cells) {
        acc += vol;
        if (V < acc)
            return val;
    }
    return 0.0;
}

RadialDensity random_profile(const GridPtr& g, Rng& rng, int levels)
{
    std::vector<double> v(g->cells());
    for (double& x : v)
        x = std::floor(levels * rng.uniform()) * rng.uniform();
    RadialDensity r(g, v);
    const double ms = mass(r);
    for (double& x : v)
        x /= ms;
    return RadialDensity(g, v);
}

} // namespace

TEST_CASE("grid invariants")
{
    auto g = RadialGrid::default_grid(ManifoldParams::hyperbolic(2), 64, 8.0);
    CHECK(g->cells() == 64);
    double total = 0.0;
    for (std::size_t i = 0; i < g->cells(); ++i) {
        CHECK(g->volumes()[i] > 0.0);
        CHECK(g->right(i) > g->left(i));
        total += g->volumes()[i];
    }
    CHECK(total == doctest::Approx(ball_volume(2, 1.0, 8.0)).epsilon(1e-13));
    CHECK_THROWS_AS(RadialGrid::from_nodes(ManifoldParams::hyperbolic(2), {0.0, 1.0, 1.0}), Error);
    CHECK_THROWS_AS(RadialGrid::from_nodes(ManifoldParams::hyperbolic(2), {0.5, 1.0}), Error);
}

TEST_CASE("mass and Lp integrals of uniform balls")
{
    auto g = RadialGrid::uniform(ManifoldParams::hyperbolic(2), 40, 4.0);
    auto rho = uniform_ball(g, 1.0);
    CHECK(mass(rho) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rho[0] == doctest::Approx(1.0 / (2.0 * M_PI * (std::cosh(1.0) - 1.0))).epsilon(1e-14));
    for (double m : {1.5, 2.0, 3.0})
        CHECK(lp_integral(rho, m) == doctest::Approx(std::pow(ball_volume(2, 1.0, 1.0), 1.0 - m)).epsilon(1e-13));
    CHECK(lp_integral(RadialDensity(g, std::vector<double>(40, 0.0)), 2.0) == 0.0);
    auto full = uniform_ball(g, 4.0);
    CHECK(full[39] == doctest::Approx(1.0 / ball_volume(2, 1.0, 4.0)).epsilon(1e-14));
    auto snapped = uniform_ball(g, 1.03);
    CHECK(snapped.snapped);
    CHECK(mass(snapped) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(uniform_ball(g, 5.0), Error);
    CHECK_THROWS_AS(RadialDensity(g, std::vector<double>(40, -1.0)), Error);
}

TEST_CASE("scaled indicator")
{
    const double tt = ball_radius_for_volume(2, 1.0, 3.0);
    auto g = RadialGrid::from_nodes(ManifoldParams::hyperbolic(2), {0.0, 0.5 * tt, tt, 2.0 * tt});
    CHECK(mass(scaled_indicator(g, 0.2, tt)) == doctest::Approx(0.6).epsilon(1e-13));
    CHECK(mass(scaled_indicator(g, 0.0, tt)) == 0.0);
    auto u = scaled_indicator(g, 1.0 / 3.0, tt);
    auto b = uniform_ball(g, tt);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(u[i] == doctest::Approx(b[i]).epsilon(1e-13));
}

TEST_CASE("rearrangement: two-level shell moves inward")
{
    const auto p = ManifoldParams::hyperbolic(2);
    auto g = RadialGrid::from_nodes(p, {0.0, 1.0, 1.5});
    const double shell = g->volumes()[1];
    RadialDensity rho(g, {0.0, 1.0 / shell});
    auto r = rearrange(rho);
    CHECK(r.is_non_increasing());
    const double R = ball_radius_for_volume(2, 1.0, shell);
    const auto& nodes = r.grid()->nodes();
    const auto k = static_cast<std::size_t>(std::find_if(nodes.begin(), nodes.end(), [&](double t) {
                                                return std::fabs(t - R) <= 1e-12 * R;
                                            }) - nodes.begin());
    REQUIRE(k < nodes.size());
    for (std::size_t i = 0; i < r.cells(); ++i)
        CHECK(r[i] == (i < k ? 1.0 / shell : 0.0));
    CHECK(mass(r) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("rearrangement invariants on random profiles")
{
    Rng rng(21);
    const auto p = ManifoldParams::hyperbolic(3, 0.5);
    auto g = RadialGrid::default_grid(p, 48, 5.0);
    for (int k = 0; k < 100; ++k) {
        auto rho = random_profile(g, rng, 6);
        auto r = rearrange(rho);
        CHECK(r.is_non_increasing());
        CHECK(mass(r) == doctest::Approx(mass(rho)).epsilon(1e-12));
        for (double m : {1.0, 1.5, 2.0, 3.0})
            CHECK(std::fabs(lp_integral(r, m) - lp_integral(rho, m)) <= 1e-12 * lp_integral(rho, m));
        auto rr = rearrange(r);
        CHECK(rr.values() == r.values());
        CHECK(rr.grid()->nodes() == r.grid()->nodes());
        for (double V : {0.01, 0.3, 1.7, 10.0, 60.0}) {
            const std::size_t cell = r.grid()->locate(ball_radius_for_volume(3, 0.5, V));
            const double lo = r.grid()->cumulative()[cell], hi = r.grid()->cumulative()[cell + 1];
            if (V - lo > 1e-9 * hi && hi - V > 1e-9 * hi)
                CHECK(r[cell] == stacked_value(rho, V));
        }
    }
    auto ball = uniform_ball(g, 2.0);
    CHECK(rearrange(ball).values() == ball.values());
}

TEST_CASE("rearrangement onto the input grid is monotone and conservative")
{
    Rng rng(8);
    auto g = RadialGrid::uniform(ManifoldParams::hyperbolic(2), 32, 4.0);
    for (int k = 0; k < 20; ++k) {
        auto rho = random_profile(g, rng, 4);
        auto r = rearrange_onto_grid(rho);
        CHECK(r.is_non_increasing());
        CHECK(r.grid()->nodes() == g->nodes());
        CHECK(mass(r) == doctest::Approx(mass(rho)).epsilon(1e-12));
    }
}

TEST_CASE("tail bound check")
{
    auto g = RadialGrid::uniform(ManifoldParams::hyperbolic(2), 20, 4.0);
    auto rho = uniform_ball(g, 1.0);
    CHECK(linf_tail_bound_check(rho, 1.0).ok);
    std::vector<double> v = rho.values();
    v[10] = 0.2;
    auto bad = linf_tail_bound_check(RadialDensity(g, v), 1.0);
    CHECK_FALSE(bad.ok);
    REQUIRE(bad.violating_cell);
    CHECK(*bad.violating_cell == 10);
}

TEST_CASE("union grid and refinement preserve profiles")
{
    const auto p = ManifoldParams::hyperbolic(2);
    auto a = RadialGrid::uniform(p, 7, 3.0);
    auto b = RadialGrid::uniform(p, 5, 2.0);
    auto u = union_grid(*a, *b);
    auto rho = uniform_ball(a, 3.0 * 4.0 / 7.0);
    auto fine = refine_to(rho, u);
    CHECK(mass(fine) == doctest::Approx(mass(rho)).epsilon(1e-14));
    CHECK(lp_integral(fine, 2.0) == doctest::Approx(lp_integral(rho, 2.0)).epsilon(1e-14));
}

TEST_CASE("density files round-trip bit-exactly")
{
    Rng rng(2);
    auto g = RadialGrid::default_grid(ManifoldParams::hyperbolic(4, 0.3), 33, 6.5);
    auto rho = random_profile(g, rng, 5);
    std::stringstream ss;
    write_density(ss, rho);
    auto back = read_density(ss);
    CHECK(back.values() == rho.values());
    CHECK(back.grid()->nodes() == rho.grid()->nodes());
    CHECK(back.grid()->params().d == 4);
    CHECK(back.grid()->params().c == 0.3);
    std::stringstream bad("# d=2 c=1 cells=2\n0,1,0.5\n1.5,2,0.1\n");
    CHECK_THROWS_AS(read_density(bad), Error);
    std::stringstream junk("# d=2 c=1 cells=1\n0,1,abc\n");
    CHECK_THROWS_AS(read_density(junk), Error);
}

TEST_CASE("ball mixtures")
{
    const auto p = ManifoldParams::hyperbolic(2);
    BallMixture mix{p, {{origin(2, 1.0), 0.5, 0.4}, {point_on_ray(2, 1.0, 3.0), 1.0, 0.6}}};
    CHECK_NOTHROW(mix.validate());
    CHECK(mix.pairwise_disjoint());
    const double expect = std::pow(0.4, 2.0) / ball_volume(2, 1.0, 0.5) + std::pow(0.6, 2.0) / ball_volume(2, 1.0, 1.0);
    CHECK(mix.lp_integral_disjoint(2.0) == doctest::Approx(expect).epsilon(1e-14));
    BallMixture overlap{p, {{origin(2, 1.0), 1.0, 0.5}, {point_on_ray(2, 1.0, 1.5), 1.0, 0.5}}};
    CHECK_FALSE(overlap.pairwise_disjoint());
    BallMixture unnormalized{p, {{origin(2, 1.0), 1.0, 0.5}}};
    CHECK_THROWS_AS(unnormalized.validate(), Error);
}
