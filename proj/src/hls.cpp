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

#include "hyperfree/hls.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "hyperfree/energy.hpp"
#include "hyperfree/error.hpp"
#include "hyperfree/quadrature.hpp"
#include "hyperfree/util.hpp"

namespace hyperfree {

double critical_exponent(double lambda, int d) { return 1.0 + lambda / d; }

double interpolation_theta(double lambda, int d, double m)
{
    const double mc = critical_exponent(lambda, d);
    return (m - mc) / (mc * (m - 1.0));
}

double vitali_count(int d, double c_m, double r)
{
    require(r > 0.0 && c_m >= 0.0, ErrorCode::kInvalidArgument, "vitali_count: need r > 0 and c_m >= 0");
    if (c_m == 0.0)
        return std::pow(7.0, d);
    return ball_volume(d, c_m, 7.0 * r) / (unit_ball_volume(d) * std::pow(r, d));
}

double tilde_constant(double lambda, int d, double r, double c_m, double c_euclid)
{
    require(lambda > 0.0 && lambda < d, ErrorCode::kInvalidArgument, "tilde_constant: need 0 < lambda < d");
    const double mc = critical_exponent(lambda, d);
    const double w = std::pow(sinhc(6.0 * std::sqrt(c_m) * r), (d - 1) * (mc - 1.0));
    return c_euclid * w * vitali_count(d, c_m, r);
}

double hls_ratio(const RadialDensity& rho, double lambda, double m, const KernelOptions& opt)
{
    const int d = rho.grid()->params().d;
    require(m >= critical_exponent(lambda, d) - 1e-15, ErrorCode::kInvalidArgument, "hls_ratio: need m >= m_c");
    const double lhs = riesz_bilinear(rho, rho, lambda, opt);
    return lhs / std::pow(lp_integral(rho, m), lambda / (d * (m - 1.0)));
}

std::vector<RadialDensity> default_stress_family(int d)
{
    const ManifoldParams flat = ManifoldParams::flat(d);
    std::vector<RadialDensity> out;
    for (int k = 0; k < 20; ++k) {
        const double R = std::pow(10.0, -1.0 + 2.0 * k / 19.0);
        out.push_back(uniform_ball(RadialGrid::uniform(flat, 8, R), R));
    }
    auto g = RadialGrid::uniform(flat, 48, 1.0);
    for (double p : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        std::vector<double> v(g->cells());
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double t = 0.5 * (g->left(i) + g->right(i));
            v[i] = std::pow(1.0 - t * t, p);
        }
        RadialDensity rho(g, v);
        const double ms = mass(rho);
        for (double& x : v)
            x /= ms;
        out.emplace_back(g, std::move(v));
    }
    return out;
}

CalibrationResult calibrate_euclid_constant(double lambda, int d, double m, const std::vector<RadialDensity>& family,
                                            double safety, const KernelOptions& opt)
{
    require(lambda > 0.0 && lambda < d, ErrorCode::kInvalidArgument, "calibrate: need 0 < lambda < d");
    require(m >= critical_exponent(lambda, d) - 1e-15, ErrorCode::kInvalidArgument, "calibrate: need m >= m_c");
    require(!family.empty(), ErrorCode::kInvalidArgument, "calibrate: empty family");
    CalibrationResult res;
    res.safety = safety;
    for (const RadialDensity& rho : family) {
        require(rho.grid()->params().c == 0.0 && rho.grid()->params().d == d, ErrorCode::kInvalidArgument,
                "calibrate: family must live in the flat branch of the same dimension");
        const double r = hls_ratio(rho, lambda, m, opt);
        res.ratios.push_back(r);
        res.max_ratio = std::max(res.max_ratio, r);
    }
    res.constant = safety * res.max_ratio;
    return res;
}

CalibrationResult calibrate_euclid_constant(double lambda, int d, double m)
{
    return calibrate_euclid_constant(lambda, d, m, default_stress_family(d));
}

std::string HlsReport::to_json() const
{
    nlohmann::ordered_json j;
    j["variant"] = variant;
    if (!label.empty())
        j["label"] = label;
    j["lambda"] = lambda;
    j["m"] = m;
    j["m_c"] = m_c;
    j["r"] = r;
    j["c_m"] = c_m;
    j["lhs"] = lhs;
    j["rhs"] = rhs;
    j["constants"] = {{"C_euclid", c_euclid}, {"C_tilde", c_tilde}, {"N_vitali", n_vitali}};
    j["slack"] = slack;
    j["theta"] = theta;
    j["C_euclid_source"] = "calibrated";
    return j.dump();
}

HlsReport hls_variant1_check(const RadialDensity& rho, double lambda, double c_m, double c_euclid,
                             const KernelOptions& opt)
{
    const RadialGrid& g = *rho.grid();
    const int d = g.params().d;
    require(lambda > 0.0 && lambda < d, ErrorCode::kInvalidArgument, "hls variant I: need 0 < lambda < d");
    const double mc = critical_exponent(lambda, d);
    HlsReport rep;
    rep.variant = "I";
    rep.lambda = lambda;
    rep.m = mc;
    rep.m_c = mc;
    rep.c_m = c_m;
    rep.c_euclid = c_euclid;
    rep.theta = 0.0;
    rep.lhs = riesz_bilinear(rho, rho, lambda, opt);
    const double e = (d - 1) * (mc - 1.0);
    const double sc = std::sqrt(c_m);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.cells(); ++i) {
        if (rho[i] == 0.0)
            continue;
        auto f = [&](double t) { return std::pow(sinhc(sc * t), e) * sphere_area(d, g.params().c, t); };
        acc += std::pow(rho[i], mc) * integrate_gl(f, g.left(i), g.right(i), 8);
    }
    rep.rhs = c_euclid * acc;
    rep.slack = rep.rhs - rep.lhs;
    return rep;
}

HlsReport hls_variant2_check(const RadialDensity& rho, double lambda, double m, double r, double c_m,
                             double c_euclid, const KernelOptions& opt)
{
    const int d = rho.grid()->params().d;
    require(lambda > 0.0 && lambda < d, ErrorCode::kInvalidArgument, "hls variant II: need 0 < lambda < d");
    require(r > 0.0, ErrorCode::kInvalidArgument, "hls variant II: r must be > 0");
    const double mc = critical_exponent(lambda, d);
    require(m >= mc - 1e-15, ErrorCode::kInvalidArgument, "hls variant II: need m >= m_c");
    HlsReport rep;
    rep.variant = "II";
    rep.lambda = lambda;
    rep.m = m;
    rep.m_c = mc;
    rep.r = r;
    rep.c_m = c_m;
    rep.c_euclid = c_euclid;
    rep.n_vitali = vitali_count(d, c_m, r);
    rep.c_tilde = tilde_constant(lambda, d, r, c_m, c_euclid);
    rep.theta = interpolation_theta(lambda, d, m);
    rep.lhs = riesz_bilinear(rho, rho, lambda, opt);
    rep.rhs = std::pow(r, -lambda) + rep.c_tilde * std::pow(lp_integral(rho, m), lambda / (d * (m - 1.0)));
    rep.slack = rep.rhs - rep.lhs;
    return rep;
}

std::string RearrangementCheck::to_json() const
{
    nlohmann::ordered_json j;
    j["lhs"] = lhs;
    j["lhs_std_error"] = lhs_std_error;
    j["rhs"] = rhs;
    j["pass"] = pass;
    return j.dump();
}

RadialKernel exp_kernel()
{
    RadialKernel k;
    k.f = [](double s) { return std::exp(-s); };
    k.key = "exp(-t)";
    return k;
}

RadialKernel inverse_kernel()
{
    RadialKernel k;
    k.f = [](double s) { return 1.0 / (1.0 + s); };
    k.key = "1/(1+t)";
    return k;
}

namespace {

struct Level {
    double radius;
    double value;
};

std::vector<Level> mixture_levels(const BallMixture& mix)
{
    mix.validate();
    require(mix.pairwise_disjoint(), ErrorCode::kInvalidArgument, "rearranged mixture: balls must be disjoint");
    const int d = mix.params.d;
    const double c = mix.params.c;
    std::vector<std::pair<double, double>> lv;
    for (const Ball& b : mix.balls) {
        if (b.weight == 0.0)
            continue;
        const double vol = ball_volume(d, c, b.radius);
        lv.emplace_back(b.weight / vol, vol);
    }
    std::stable_sort(lv.begin(), lv.end(), [](auto& a, auto& b) { return a.first > b.first; });
    std::vector<Level> out;
    double cum = 0.0;
    for (auto& [value, vol] : lv) {
        cum += vol;
        const double r = ball_radius_for_volume(d, c, cum);
        if (!out.empty() && out.back().value == value)
            out.back().radius = r;
        else
            out.push_back({r, value});
    }
    return out;
}

GridPtr level_grid(const ManifoldParams& p, std::vector<double> radii, double theta_max, std::size_t min_cells)
{
    radii.push_back(0.0);
    radii.push_back(theta_max);
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
    std::vector<double> nodes{0.0};
    for (std::size_t k = 1; k < radii.size(); ++k) {
        const double a = radii[k - 1], b = radii[k];
        const auto n = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::ceil(static_cast<double>(min_cells) * (b - a) / theta_max)));
        for (std::size_t j = 1; j <= n; ++j)
            nodes.push_back(j == n ? b : a + (b - a) * static_cast<double>(j) / static_cast<double>(n));
    }
    return RadialGrid::from_nodes(p, std::move(nodes));
}

RadialDensity levels_on(const GridPtr& g, const std::vector<Level>& levels)
{
    std::vector<double> v(g->cells(), 0.0);
    for (std::size_t i = 0; i < g->cells(); ++i) {
        const double mid = 0.5 * (g->left(i) + g->right(i));
        for (const Level& l : levels)
            if (mid < l.radius) {
                v[i] = l.value;
                break;
            }
    }
    return RadialDensity(g, std::move(v));
}

} // namespace

RadialDensity rearranged_mixture(const BallMixture& mix, double theta_max, std::size_t min_cells)
{
    const auto levels = mixture_levels(mix);
    std::vector<double> radii;
    for (const Level& l : levels)
        radii.push_back(l.radius);
    require(levels.back().radius <= theta_max, ErrorCode::kDomain, "rearranged mixture: theta_max too small");
    return levels_on(level_grid(mix.params, radii, theta_max, min_cells), levels);
}

RearrangementCheck riesz_rearrangement_check(const BallMixture& mix1, const BallMixture& mix2, const RadialKernel& g,
                                             std::size_t n_samples, std::uint64_t seed, const KernelOptions& opt)
{
    require(mix1.params.c > 0.0, ErrorCode::kInvalidArgument, "rearrangement check: c > 0 required");
    const auto l1 = mixture_levels(mix1);
    const auto l2 = mixture_levels(mix2);
    std::vector<double> radii;
    for (const Level& l : l1)
        radii.push_back(l.radius);
    for (const Level& l : l2)
        radii.push_back(l.radius);
    const double tmax = *std::max_element(radii.begin(), radii.end());
    GridPtr grid = level_grid(mix1.params, radii, tmax, 48);
    const RadialDensity a = levels_on(grid, l1);
    const RadialDensity b = levels_on(grid, l2);
    RearrangementCheck out;
    auto K = cached_kernel(grid, g, opt);
    out.rhs = K->bilinear(a.values(), b.values());
    const McEstimate mc = cross_kernel_mixture(mix1, mix2, g, n_samples, seed);
    out.lhs = mc.estimate;
    out.lhs_std_error = mc.std_error;
    out.pass = out.lhs <= out.rhs + 3.0 * out.lhs_std_error + 1e-9 * std::fabs(out.rhs);
    return out;
}

BallMixture random_disjoint_mixture(const ManifoldParams& p, std::size_t balls, Rng& rng, double max_center)
{
    p.validate();
    require(balls >= 1 && max_center >= 0.0, ErrorCode::kInvalidArgument, "random mixture: need balls >= 1");
    BallMixture mix;
    mix.params = p;
    double wsum = 0.0;
    for (int attempt = 0; mix.balls.size() < balls; ++attempt) {
        require(attempt < 100000, ErrorCode::kDomain, "random mixture: could not place disjoint balls");
        const double r = 0.2 + 0.8 * rng.uniform();
        const double t = max_center * rng.uniform();
        Point c = point_from_polar(p.c, t, sample_direction(p.d, rng));
        bool ok = true;
        for (const Ball& b : mix.balls)
            if (distance(b.center, c, p.c) <= b.radius + r)
                ok = false;
        if (!ok)
            continue;
        const double w = 0.2 + 0.8 * rng.uniform();
        mix.balls.push_back({std::move(c), r, w});
        wsum += w;
    }
    for (Ball& b : mix.balls)
        b.weight /= wsum;
    return mix;
}

} // namespace hyperfree
