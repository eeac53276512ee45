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

#include "hyperfree/energy.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "hyperfree/error.hpp"
#include "hyperfree/hls.hpp"
#include "hyperfree/util.hpp"

namespace hyperfree {

void EnergyParams::validate() const
{
    require(m > 1.0 && std::isfinite(m), ErrorCode::kInvalidArgument, "energy: m must be > 1");
    manifold.validate();
}

std::string EnergyBreakdown::to_json() const
{
    nlohmann::ordered_json j;
    j["entropy"] = entropy;
    j["interaction"] = interaction;
    j["total"] = total;
    j["m"] = m;
    j["d"] = d;
    j["c"] = c;
    return j.dump();
}

double entropy_term(const RadialDensity& rho, double m)
{
    require(m > 1.0, ErrorCode::kInvalidArgument, "entropy: m must be > 1");
    return lp_integral(rho, m) / (m - 1.0);
}

double interaction_energy(const RadialDensity& rho, const PotentialSpec& h, const KernelOptions& opt)
{
    const int d = rho.grid()->params().d;
    require(h.singularity_exponent() < d, ErrorCode::kNotAdmissible,
            "interaction_energy: potential is not locally integrable; the energy is unbounded below");
    auto K = cached_kernel(rho.grid(), h.kernel(), opt);
    return 0.5 * K->bilinear(rho.values(), rho.values());
}

double interaction_energy(const RadialDensity& rho, const PotentialSpec& h, double m, const KernelOptions& opt)
{
    const int d = rho.grid()->params().d;
    const Admissibility a = check_singularity_admissible(h, m, d);
    require(a.admissible, ErrorCode::kNotAdmissible,
            "interaction_energy: singularity not admissible for this m; the energy is unbounded below");
    return interaction_energy(rho, h, opt);
}

EnergyBreakdown total_energy(const RadialDensity& rho, const PotentialSpec& h, const EnergyParams& params,
                             const KernelOptions& opt)
{
    params.validate();
    const auto& gp = rho.grid()->params();
    require(gp.d == params.manifold.d && gp.c == params.manifold.c, ErrorCode::kInvalidArgument,
            "total_energy: density grid and energy manifold differ");
    EnergyBreakdown e;
    e.entropy = entropy_term(rho, params.m);
    e.interaction = interaction_energy(rho, h, params.m, opt);
    e.total = e.entropy + e.interaction;
    e.m = params.m;
    e.d = gp.d;
    e.c = gp.c;
    return e;
}

RadialKernel riesz_kernel(double lambda)
{
    require(lambda > 0.0, ErrorCode::kInvalidArgument, "riesz kernel: lambda must be > 0");
    RadialKernel k;
    k.f = [lambda](double s) { return std::pow(s, -lambda); };
    k.singular_exponent = lambda;
    k.key = "riesz-kernel(" + fmt17(lambda) + ")";
    return k;
}

double riesz_bilinear(const RadialDensity& rho1, const RadialDensity& rho2, double lambda, const KernelOptions& opt)
{
    const int d = rho1.grid()->params().d;
    require(lambda > 0.0 && lambda < d, ErrorCode::kNotAdmissible, "riesz_bilinear: need 0 < lambda < d");
    if (rho1.grid() == rho2.grid() || rho1.grid()->nodes() == rho2.grid()->nodes()) {
        auto K = cached_kernel(rho1.grid(), riesz_kernel(lambda), opt);
        return K->bilinear(rho1.values(), rho2.values());
    }
    GridPtr u = union_grid(*rho1.grid(), *rho2.grid());
    const RadialDensity a = refine_to(rho1, u);
    const RadialDensity b = refine_to(rho2, u);
    auto K = cached_kernel(u, riesz_kernel(lambda), opt);
    return K->bilinear(a.values(), b.values());
}

double energy_lower_bound(const RadialDensity& rho, const EnergyParams& params, double r,
                          const LowerBoundDecomposition& dec, double c_euclid)
{
    params.validate();
    require(r > 0.0, ErrorCode::kInvalidArgument, "energy_lower_bound: r must be > 0");
    const int d = params.manifold.d;
    const double m = params.m;
    const double lp = lp_integral(rho, m);
    const double entropy = lp / (m - 1.0);
    const double ct = tilde_constant(dec.alpha, d, r, params.manifold.c_m, c_euclid);
    return entropy - 0.5 * dec.gamma1 * ct * std::pow(lp, dec.alpha / (d * (m - 1.0))) -
           0.5 * (dec.gamma1 * std::pow(r, -dec.alpha) + dec.gamma2);
}

namespace {

constexpr std::size_t kStreams = 16;

// Welford accumulation over independent seeded substreams.
template <class Draw>
McEstimate mc_mean(std::size_t n, std::uint64_t seed, Draw&& draw)
{
    require(n >= 2, ErrorCode::kInvalidArgument, "monte carlo: need at least two samples");
    std::vector<double> mean(kStreams, 0.0), m2(kStreams, 0.0);
    std::vector<std::size_t> cnt(kStreams, 0);
    parallel_for(kStreams, [&](std::size_t s) {
        Rng rng(seed, s + 1);
        const std::size_t lo = n * s / kStreams;
        const std::size_t hi = n * (s + 1) / kStreams;
        double mu = 0.0, q = 0.0;
        std::size_t k = 0;
        for (std::size_t i = lo; i < hi; ++i) {
            const double x = draw(rng);
            ++k;
            const double delta = x - mu;
            mu += delta / static_cast<double>(k);
            q += delta * (x - mu);
        }
        mean[s] = mu;
        m2[s] = q;
        cnt[s] = k;
    });
    double mu = 0.0, q = 0.0;
    std::size_t k = 0;
    for (std::size_t s = 0; s < kStreams; ++s) {
        if (cnt[s] == 0)
            continue;
        const std::size_t nk = k + cnt[s];
        const double delta = mean[s] - mu;
        mu += delta * static_cast<double>(cnt[s]) / static_cast<double>(nk);
        q += m2[s] + delta * delta * static_cast<double>(k) * static_cast<double>(cnt[s]) / static_cast<double>(nk);
        k = nk;
    }
    McEstimate e;
    e.estimate = mu;
    e.std_error = std::sqrt(q / static_cast<double>(k - 1) / static_cast<double>(k));
    e.samples = k;
    return e;
}

} // namespace

McEstimate cross_kernel_mixture(const BallMixture& a, const BallMixture& b, const RadialKernel& k,
                                std::size_t n_samples, std::uint64_t seed)
{
    a.validate();
    b.validate();
    require(b.params.c == a.params.c && b.params.d == a.params.d, ErrorCode::kInvalidArgument,
            "mixture energy: manifolds differ");
    const double c = a.params.c;
    return mc_mean(n_samples, seed, [&](Rng& rng) {
        const Point x = a.sample(rng);
        const Point y = b.sample(rng);
        return k.f(distance(x, y, c));
    });
}

McEstimate kernel_energy_mixture(const BallMixture& mix, const RadialKernel& k, std::size_t n_samples,
                                 std::uint64_t seed)
{
    McEstimate e = cross_kernel_mixture(mix, mix, k, n_samples, seed);
    e.estimate *= 0.5;
    e.std_error *= 0.5;
    return e;
}

McEstimate interaction_energy_mixture(const BallMixture& mix, const PotentialSpec& h, std::size_t n_samples,
                                      std::uint64_t seed)
{
    require(mix.params.c > 0.0, ErrorCode::kInvalidArgument, "interaction_energy_mixture: c > 0 required");
    return kernel_energy_mixture(mix, h.kernel(), n_samples, seed);
}

} // namespace hyperfree
