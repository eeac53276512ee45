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

#include "hyperfree/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <list>
#include <map>
#include <mutex>
#include <numbers>

#include <boost/math/special_functions/beta.hpp>

#include "hyperfree/error.hpp"
#include "hyperfree/quadrature.hpp"
#include "hyperfree/util.hpp"

namespace hyperfree {

namespace {

constexpr int kJacobiOrder = 24;

QuadratureRule origin_rule(int d, const RadialKernel& k)
{
    const double beta = k.log_singular ? d - 1.0 : d - 1.0 - k.singular_exponent;
    return gauss_jacobi(kJacobiOrder, 0.0, beta);
}

} // namespace

BallPotential::BallPotential(const ManifoldParams& p, const RadialKernel& k, double max_radius, const KernelOptions& opt)
    : params_(p), kernel_(k), opt_(opt), max_radius_(max_radius)
{
    p.validate();
    require(static_cast<bool>(k.f), ErrorCode::kInvalidArgument, "ball potential: empty kernel");
    require(max_radius > 0.0, ErrorCode::kInvalidArgument, "ball potential: max_radius must be > 0");
    require(opt.piece_order >= 2 && opt.radial_order >= 1, ErrorCode::kInvalidArgument, "ball potential: bad orders");
    require(k.singular_exponent < p.d, ErrorCode::kNotAdmissible,
            "ball potential: kernel is not locally integrable (singular exponent >= d)");
    sqrt_c_ = std::sqrt(p.c);
    area_ = p.d * unit_ball_volume(p.d);

    double floor = 1e-6 * max_radius;
    if (k.cutoff > 0.0)
        floor = std::min(floor, k.cutoff);
    std::vector<double> L;
    for (double x = max_radius; x > floor; x *= std::pow(2.0, -0.25))
        L.push_back(x);
    L.push_back(floor);
    std::reverse(L.begin(), L.end());
    table_L_ = L;
    table_P_.resize(L.size());
    table_P_[0] = origin_part(L[0]);
    for (std::size_t j = 1; j < L.size(); ++j)
        table_P_[j] = table_P_[j - 1] + segment(L[j - 1], L[j]);
}

double BallPotential::integrand(double s) const
{
    const double w = params_.c == 0.0 ? s : std::sinh(sqrt_c_ * s) / sqrt_c_;
    return kernel_.f(s) * area_ * std::pow(w, params_.d - 1);
}

double BallPotential::origin_part(double L) const
{
    if (L <= 0.0)
        return 0.0;
    if (kernel_.cutoff > 0.0 && L <= kernel_.cutoff)
        return kernel_.f(kernel_.cutoff) * ball_volume(params_.d, params_.c, L);
    static thread_local std::map<std::pair<int, double>, QuadratureRule> rules;
    const double beta = kernel_.log_singular ? params_.d - 1.0 : params_.d - 1.0 - kernel_.singular_exponent;
    auto key = std::make_pair(params_.d, beta);
    auto it = rules.find(key);
    if (it == rules.end())
        it = rules.emplace(key, origin_rule(params_.d, kernel_)).first;
    const QuadratureRule& q = it->second;
    double acc = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        const double s = 0.5 * L * (1.0 + q.nodes[i]);
        const double ws = params_.c == 0.0 ? 1.0 : sinhc(sqrt_c_ * s);
        // k(s) sigma(s) / s^beta with sigma(s) / s^{d-1} = area * sinhc^{d-1}.
        const double g = kernel_.f(s) * std::pow(s, params_.d - 1.0 - beta) * area_ * std::pow(ws, params_.d - 1);
        acc += q.weights[i] * g;
    }
    return acc * std::pow(0.5 * L, beta + 1.0);
}

double BallPotential::segment(double a, double b) const
{
    if (b <= a)
        return 0.0;
    auto f = [this](double s) { return integrand(s); };
    const double cut = kernel_.cutoff;
    if (cut > a && cut < b)
        return integrate_gl(f, a, cut, opt_.piece_order) + integrate_gl(f, cut, b, opt_.piece_order);
    // Keep exponential growth per piece bounded.
    const double growth = (params_.d - 1) * sqrt_c_ * (b - a);
    const int pieces = std::max(1, static_cast<int>(std::ceil(growth / 6.0)));
    double acc = 0.0;
    for (int k = 0; k < pieces; ++k)
        acc += integrate_gl(f, a + (b - a) * k / pieces, a + (b - a) * (k + 1) / pieces, opt_.piece_order);
    return acc;
}

double BallPotential::centered(double L) const
{
    if (L <= 0.0)
        return 0.0;
    if (L <= table_L_.front())
        return origin_part(L);
    if (L >= table_L_.back())
        return table_P_.back() + segment(table_L_.back(), L);
    auto it = std::upper_bound(table_L_.begin(), table_L_.end(), L);
    const std::size_t k = static_cast<std::size_t>(it - table_L_.begin()) - 1;
    return table_P_[k] + segment(table_L_[k], L);
}

double BallPotential::sphere_fraction(double t, double s, double R) const
{
    double u;
    if (params_.c == 0.0) {
        u = (R - t + s) * (R + t - s) / (4.0 * t * s);
    } else {
        const double x = sqrt_c_;
        u = std::sinh(0.5 * x * (R + t - s)) * std::sinh(0.5 * x * (R - t + s)) / (std::sinh(x * t) * std::sinh(x * s));
    }
    u = std::clamp(u, 0.0, 1.0);
    switch (params_.d) {
    case 2:
        return 2.0 / std::numbers::pi * std::asin(std::sqrt(u));
    case 3:
        return u;
    default: {
        const double a = 0.5 * (params_.d - 1);
        return boost::math::ibeta(a, a, u);
    }
    }
}

double BallPotential::transition(double t, double R) const
{
    const double lo = std::fabs(t - R);
    const double hi = t + R;
    const double width = hi - lo;
    if (width <= 0.0)
        return 0.0;
    const double pi = std::numbers::pi;
    auto phi_of = [&](double s) { return std::acos(std::clamp(1.0 - 2.0 * (s - lo) / width, -1.0, 1.0)); };

    double bp[96];
    int nb = 0;
    bp[nb++] = 0.0;
    bp[nb++] = pi;
    const bool singular = kernel_.singular_exponent > 0.0 || kernel_.log_singular;
    if (singular && lo < 0.25 * width) {
        double pc = std::max(2.0 * std::sqrt(lo / width), 1e-9);
        for (; pc < 1.0 && nb < 60; pc *= 2.0)
            bp[nb++] = pc;
    }
    if (kernel_.cutoff > lo && kernel_.cutoff < hi)
        bp[nb++] = phi_of(kernel_.cutoff);
    const double growth = (params_.d - 1) * sqrt_c_ * width;
    if (growth > 6.0) {
        const int pieces = std::min(30, static_cast<int>(std::ceil(growth / 6.0)));
        for (int k = 1; k < pieces; ++k)
            bp[nb++] = phi_of(lo + width * k / pieces);
    }
    std::sort(bp, bp + nb);

    const QuadratureRule& q = gauss_legendre(opt_.piece_order);
    const double x = sqrt_c_;
    const double sht = params_.c == 0.0 ? t : std::sinh(x * t);
    const int d = params_.d;
    double acc = 0.0;
    for (int p = 0; p + 1 < nb; ++p) {
        const double a = bp[p];
        const double b = bp[p + 1];
        if (b <= a)
            continue;
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        double part = 0.0;
        for (std::size_t k = 0; k < q.nodes.size(); ++k) {
            const double phi = mid + half * q.nodes[k];
            const double s = lo + 0.5 * width * (1.0 - std::cos(phi));
            if (s <= 0.0)
                continue;
            double u, w;
            if (params_.c == 0.0) {
                u = (R - t + s) * (R + t - s) / (4.0 * t * s);
                w = s;
            } else {
                const double shs = std::sinh(x * s);
                u = std::sinh(0.5 * x * (R + t - s)) * std::sinh(0.5 * x * (R - t + s)) / (sht * shs);
                w = shs / x;
            }
            u = std::clamp(u, 0.0, 1.0);
            double F;
            if (d == 2)
                F = 2.0 / pi * std::asin(std::sqrt(u));
            else if (d == 3)
                F = u;
            else
                F = boost::math::ibeta(0.5 * (d - 1), 0.5 * (d - 1), u);
            if (F == 0.0)
                continue;
            part += q.weights[k] * kernel_.f(s) * area_ * std::pow(w, d - 1) * F * std::sin(phi);
        }
        acc += part * half;
    }
    return acc * 0.5 * width;
}

double BallPotential::operator()(double t, double R) const
{
    if (R <= 0.0)
        return 0.0;
    if (t <= 0.0)
        return centered(R);
    double v = t < R ? centered(R - t) : 0.0;
    return v + transition(t, R);
}

std::shared_ptr<const KernelMatrix> KernelMatrix::build(const GridPtr& grid, const RadialKernel& k,
                                                        const KernelOptions& opt)
{
    require(grid != nullptr, ErrorCode::kInvalidArgument, "kernel: null grid");
    const RadialGrid& g = *grid;
    const std::size_t n = g.cells();
    BallPotential phi(g.params(), k, g.theta_max(), opt);

    // Smoothstep substitution clusters radial nodes at cell edges where Phi is least regular.
    const QuadratureRule& q = gauss_legendre(opt.radial_order);
    std::vector<double> xs(q.nodes.size()), ws(q.nodes.size());
    for (std::size_t a = 0; a < q.nodes.size(); ++a) {
        const double x = 0.5 * (1.0 + q.nodes[a]);
        xs[a] = x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
        ws[a] = 0.5 * q.weights[a] * 30.0 * x * x * (1.0 - x) * (1.0 - x);
    }

    auto km = std::make_shared<KernelMatrix>();
    km->grid_ = grid;
    km->n_ = n;
    km->k_.assign(n * n, 0.0);
    const auto& nodes = g.nodes();
    const auto& vols = g.volumes();
    parallel_for(n, [&](std::size_t i) {
        std::vector<double> S(n + 1);
        std::vector<double> row(n, 0.0);
        double wsum = 0.0;
        const double a0 = nodes[i];
        const double h = nodes[i + 1] - nodes[i];
        for (std::size_t a = 0; a < xs.size(); ++a) {
            const double t = a0 + h * xs[a];
            const double w = ws[a] * h * sphere_area(g.params().d, g.params().c, t);
            wsum += w;
            S[0] = 0.0;
            for (std::size_t kk = 1; kk <= n; ++kk)
                S[kk] = phi(t, nodes[kk]);
            for (std::size_t j = 0; j < n; ++j)
                row[j] += w * (S[j + 1] - S[j]);
        }
        for (std::size_t j = 0; j < n; ++j)
            km->k_[i * n + j] = row[j] / (wsum * vols[j]);
    });
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double s = 0.5 * (km->k_[i * n + j] + km->k_[j * n + i]);
            km->k_[i * n + j] = s;
            km->k_[j * n + i] = s;
        }
    return km;
}

std::vector<double> KernelMatrix::apply(const std::vector<double>& rho) const
{
    require(rho.size() == n_, ErrorCode::kInvalidArgument, "kernel: size mismatch");
    const auto& v = grid_->volumes();
    std::vector<double> mv(n_);
    for (std::size_t j = 0; j < n_; ++j)
        mv[j] = rho[j] * v[j];
    std::vector<double> out(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        const double* row = &k_[i * n_];
        double s = 0.0;
        for (std::size_t j = 0; j < n_; ++j)
            s += row[j] * mv[j];
        out[i] = s;
    }
    return out;
}

double KernelMatrix::bilinear(const std::vector<double>& a, const std::vector<double>& b) const
{
    require(a.size() == n_, ErrorCode::kInvalidArgument, "kernel: size mismatch");
    const std::vector<double> wb = apply(b);
    const auto& v = grid_->volumes();
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
        s += a[i] * v[i] * wb[i];
    return s;
}

namespace {

std::string grid_signature(const RadialGrid& g)
{
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&](const void* p, std::size_t n) {
        const auto* b = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= b[i];
            h *= 1099511628211ull;
        }
    };
    mix(&g.params().d, sizeof(int));
    mix(&g.params().c, sizeof(double));
    mix(g.nodes().data(), g.nodes().size() * sizeof(double));
    return std::to_string(h) + ":" + std::to_string(g.nodes().size());
}

std::mutex g_cache_mu;
std::list<std::pair<std::string, std::shared_ptr<const KernelMatrix>>> g_cache;
constexpr std::size_t kCacheSize = 24;

} // namespace

std::shared_ptr<const KernelMatrix> cached_kernel(const GridPtr& grid, const RadialKernel& k, const KernelOptions& opt)
{
    if (k.key.empty())
        return KernelMatrix::build(grid, k, opt);
    const std::string key = k.key + "|" + std::to_string(opt.radial_order) + "," + std::to_string(opt.piece_order) +
                            "|" + grid_signature(*grid);
    {
        std::lock_guard<std::mutex> lock(g_cache_mu);
        for (auto it = g_cache.begin(); it != g_cache.end(); ++it) {
            if (it->first == key && it->second->grid()->nodes() == grid->nodes()) {
                g_cache.splice(g_cache.begin(), g_cache, it);
                return g_cache.front().second;
            }
        }
    }
    auto km = KernelMatrix::build(grid, k, opt);
    std::lock_guard<std::mutex> lock(g_cache_mu);
    g_cache.emplace_front(key, km);
    while (g_cache.size() > kCacheSize)
        g_cache.pop_back();
    return km;
}

void clear_kernel_cache()
{
    std::lock_guard<std::mutex> lock(g_cache_mu);
    g_cache.clear();
}

} // namespace hyperfree
