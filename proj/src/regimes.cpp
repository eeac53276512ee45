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


#include "hyperfree/regimes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "hyperfree/energy.hpp"
#include "hyperfree/error.hpp"

namespace hyperfree {

namespace {

nlohmann::ordered_json number_or_null(double x)
{
    return std::isfinite(x) ? nlohmann::ordered_json(x) : nlohmann::ordered_json(nullptr);
}

nlohmann::ordered_json array_json(const std::vector<double>& xs)
{
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (double x : xs)
        a.push_back(number_or_null(x));
    return a;
}

} // namespace

std::string BlowupReport::to_json() const
{
    nlohmann::ordered_json j;
    j["radii"] = array_json(radii);
    j["energies"] = array_json(energies);
    j["upper_bounds"] = array_json(upper_bounds);
    j["cutoffs"] = array_json(cutoffs);
    j["divergent"] = divergent;
    j["bound_respected"] = bound_respected;
    return j.dump();
}

BlowupReport blowup_demo(const PotentialSpec& h, double m, const ManifoldParams& p, int levels,
                         const KernelOptions& opt)
{
    p.validate();
    require(m > 1.0, ErrorCode::kInvalidArgument, "blowup: m must be > 1");
    require(levels >= 1 && levels <= 30, ErrorCode::kInvalidArgument, "blowup: levels must lie in [1, 30]");
    const int d = p.d;
    const double s0 = h.singularity_exponent();
    const double w = unit_ball_volume(d);
    // Cutoff exponent making the truncated attraction outgrow the entropy.
    const double kappa = 1.0 + 2.0 * (d * std::max(m - 2.0, 0.0) + 1.0) / std::max(s0 - d, 0.5);

    BlowupReport rep;
    for (int k = 0; k < levels; ++k) {
        const double R = std::ldexp(1.0, -k);
        GridPtr grid = RadialGrid::uniform(p, 8, R);
        const RadialDensity rho = uniform_ball(grid, R);
        const double ent = entropy_term(rho, m);
        double inter = 0.0, cut = 0.0;
        if (s0 >= d) {
            cut = std::pow(R, kappa);
            auto K = cached_kernel(grid, h.truncated_kernel(cut), opt);
            inter = 0.5 * K->bilinear(rho.values(), rho.values());
        } else {
            inter = interaction_energy(rho, h, opt);
        }
        rep.radii.push_back(R);
        rep.energies.push_back(ent + inter);
        rep.cutoffs.push_back(cut);
        const double ub = 1.0 / ((m - 1.0) * std::pow(w, m - 1.0) * std::pow(R, d * (m - 1.0))) + 0.5 * h(2.0 * R);
        rep.upper_bounds.push_back(ub);
        if (!(ent + inter <= ub + 1e-10 * std::fabs(ub) + 1e-12))
            rep.bound_respected = false;
    }
    const std::size_t n = rep.energies.size();
    if (n >= 4) {
        const auto& e = rep.energies;
        bool div = true;
        double prev = 0.0;
        for (std::size_t i = n - 3; i < n; ++i) {
            const double dec = e[i - 1] - e[i];
            if (!(dec > 0.0) || !(dec > prev))
                div = false;
            prev = dec;
        }
        rep.divergent = div;
    }
    return rep;
}

std::string NegativeEnergyWitness::to_json() const
{
    nlohmann::ordered_json j;
    j["construction"] = construction;
    j["found"] = found;
    j["verdict"] = verdict_name(verdict);
    j["certified_energy"] = certified_energy;
    j["closed_form_bound"] = closed_form_bound;
    if (construction == "multi-ball") {
        j["theta_tilde"] = theta_tilde;
        j["A"] = a_coef;
        j["B"] = b_coef;
        j["alpha0"] = alpha0;
        j["alpha_star"] = alpha_star;
        j["N"] = n_balls;
    }
    if (theta0)
        j["theta0"] = *theta0;
    nlohmann::ordered_json balls = nlohmann::ordered_json::array();
    for (const Ball& b : mixture.balls)
        balls.push_back({{"center", b.center.x}, {"radius", b.radius}, {"weight", b.weight}});
    j["balls"] = balls;
    return j.dump();
}

NegativeEnergyWitness construct_negative_energy_mgt2(const PotentialSpec& h, double m, const ManifoldParams& p,
                                                     const KernelOptions& opt)
{
    p.validate();
    require(m > 2.0, ErrorCode::kInvalidArgument, "witness: the multi-ball construction needs m > 2");
    require(h.tail() == TailClass::kZero, ErrorCode::kInvalidArgument, "witness: the multi-ball construction needs h_inf = 0");
    const Admissibility adm = check_singularity_admissible(h, m, p.d);
    require(adm.admissible, ErrorCode::kNotAdmissible, "witness: singularity not admissible");

    double tt = ball_radius_for_volume(p.d, p.c, 1.0);
    int tries = 0;
    while (!(h(2.0 * tt) < 0.0) && tries < 60) {
        tt *= 0.5;
        ++tries;
    }
    require(h(2.0 * tt) < 0.0, ErrorCode::kDomain, "witness: no radius with h(2 theta) < 0");

    const double vol = ball_volume(p.d, p.c, tt);
    GridPtr grid = RadialGrid::uniform(p, 16, tt);
    const std::vector<double> ones(grid->cells(), 1.0);
    auto K = cached_kernel(grid, h.kernel(), opt);
    const double A = vol / (m - 1.0);
    const double B = 0.5 * K->bilinear(ones, ones);
    require(B < 0.0, ErrorCode::kDomain, "witness: self-interaction of the ball is not negative");

    auto f = [&](double a) { return A * std::pow(a, m) + B * a * a; };
    double hi = 1.0;
    while (f(hi) < 0.0)
        hi *= 2.0;
    double lo = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    const double alpha0 = 0.5 * lo;
    const int N = static_cast<int>(std::ceil(1.0 / (alpha0 * vol) - 1e-12));
    const double alpha_star = 1.0 / (N * vol);

    NegativeEnergyWitness w;
    w.construction = "multi-ball";
    w.theta_tilde = tt;
    w.a_coef = A;
    w.b_coef = B;
    w.alpha0 = alpha0;
    w.alpha_star = alpha_star;
    w.n_balls = N;
    w.certified_energy = N * f(alpha_star);
    w.closed_form_bound = w.certified_energy;
    w.found = w.certified_energy < 0.0;
    w.verdict = classify_regime(h, m, p).verdict;
    w.mixture.params = p;
    for (int k = 0; k < N; ++k)
        w.mixture.balls.push_back({point_on_ray(p.d, p.c, k * (2.0 * tt + 1.0)), tt, 1.0 / N});
    if (N == 1)
        w.density = scaled_indicator(grid, alpha_star, tt);
    return w;
}

NegativeEnergyWitness construct_negative_energy_mle2(const PotentialSpec& h, double m, const ManifoldParams& p,
                                                     const KernelOptions& opt)
{
    p.validate();
    require(m > 1.0 && m <= 2.0, ErrorCode::kInvalidArgument, "witness: the single-ball construction needs 1 < m <= 2");
    require(h.singularity_exponent() < p.d, ErrorCode::kNotAdmissible, "witness: potential not locally integrable");
    NegativeEnergyWitness w;
    w.verdict = classify_regime(h, m, p).verdict;
    w.theta0 = find_theta0(h, m, p);
    if (!w.theta0)
        return w;
    const double R = 0.5 * *w.theta0;
    GridPtr grid = RadialGrid::uniform(p, 32, R);
    RadialDensity rho = uniform_ball(grid, R);
    w.construction = "single-ball";
    w.certified_energy = entropy_term(rho, m) + interaction_energy(rho, h, opt);
    w.closed_form_bound = 1.0 / ((m - 1.0) * std::pow(ball_volume(p.d, p.c, R), m - 1.0)) + 0.5 * h(*w.theta0);
    w.found = w.certified_energy < 0.0;
    w.density = std::move(rho);
    w.mixture.params = p;
    w.mixture.balls.push_back({origin(p.d, p.c), R, 1.0});
    return w;
}

std::string WitnessCheck::to_json() const
{
    nlohmann::ordered_json j;
    j["entropy"] = entropy;
    j["interaction"] = interaction;
    j["interaction_std_error"] = interaction_std_error;
    j["total"] = total;
    j["certified"] = certified;
    return j.dump();
}

WitnessCheck verify_witness(const NegativeEnergyWitness& w, const PotentialSpec& h, double m, std::size_t n_samples,
                            std::uint64_t seed)
{
    require(!w.mixture.balls.empty(), ErrorCode::kInvalidArgument, "verify_witness: witness has no balls");
    require(w.mixture.pairwise_disjoint(), ErrorCode::kInvalidArgument, "verify_witness: balls overlap");
    WitnessCheck out;
    out.entropy = w.mixture.lp_integral_disjoint(m) / (m - 1.0);
    const McEstimate e = interaction_energy_mixture(w.mixture, h, n_samples, seed);
    out.interaction = e.estimate;
    out.interaction_std_error = e.std_error;
    out.total = out.entropy + out.interaction;
    out.certified = out.total + 3.0 * out.interaction_std_error < 0.0;
    return out;
}

BallMixture isometry_translate(const RadialDensity& rho, const Point& new_center)
{
    const RadialGrid& g = *rho.grid();
    const ManifoldParams& p = g.params();
    require(p.c > 0.0, ErrorCode::kInvalidArgument, "isometry_translate: c > 0 required");
    require(new_center.x.size() == static_cast<std::size_t>(p.d + 1), ErrorCode::kInvalidArgument,
            "isometry_translate: center dimension mismatch");
    require(rho.is_non_increasing(), ErrorCode::kInvalidArgument, "isometry_translate: profile must be non-increasing");
    BallMixture mix;
    mix.params = p;
    double total = 0.0;
    for (std::size_t i = 0; i < rho.cells(); ++i) {
        const double next = i + 1 < rho.cells() ? rho[i + 1] : 0.0;
        const double wgt = (rho[i] - next) * g.cumulative()[i + 1];
        if (wgt <= 0.0)
            continue;
        mix.balls.push_back({new_center, g.right(i), wgt});
        total += wgt;
    }
    require(std::fabs(total - 1.0) <= 1e-9, ErrorCode::kInvalidArgument, "isometry_translate: density must have mass 1");
    for (Ball& b : mix.balls)
        b.weight /= total;
    return mix;
}

SplittingCheck entropy_splitting_check(const RadialDensity& a, const RadialDensity& b, double m, double tol)
{
    require(m >= 1.0, ErrorCode::kInvalidArgument, "entropy splitting: m must be >= 1");
    require(a.grid()->nodes() == b.grid()->nodes(), ErrorCode::kInvalidArgument, "entropy splitting: grids differ");
    const auto& v = a.grid()->volumes();
    double lhs = 0.0;
    for (std::size_t i = 0; i < a.cells(); ++i) {
        require(a[i] >= 0.0 && b[i] >= 0.0, ErrorCode::kInvalidArgument, "entropy splitting: values must be >= 0");
        lhs += v[i] * (std::pow(a[i] + b[i], m) - std::pow(a[i], m));
    }
    const double am = lp_integral(a, m);
    const double bm = lp_integral(b, m);
    SplittingCheck out;
    out.lhs = lhs;
    out.rhs = m * std::pow(2.0, m - 1.0) * std::pow(bm, 1.0 / m) * std::pow(am + bm, (m - 1.0) / m);
    out.holds = out.lhs <= out.rhs + tol * std::max(1.0, std::fabs(out.rhs));
    return out;
}

} // namespace hyperfree
