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

#include "hyperfree/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "hyperfree/error.hpp"
#include "hyperfree/util.hpp"

namespace hyperfree {

namespace {

std::shared_ptr<const KernelMatrix> checked_kernel(const RadialDensity& rho, const PotentialSpec& h,
                                                   const EnergyParams& params, const KernelOptions& opt)
{
    params.validate();
    const auto& gp = rho.grid()->params();
    require(gp.d == params.manifold.d && gp.c == params.manifold.c, ErrorCode::kInvalidArgument,
            "density grid and energy manifold differ");
    const Admissibility a = check_singularity_admissible(h, params.m, gp.d);
    require(a.admissible, ErrorCode::kNotAdmissible, "singularity not admissible for this m");
    return cached_kernel(rho.grid(), h.kernel(), opt);
}

std::vector<double> pressure(const std::vector<double>& rho, double m)
{
    std::vector<double> p(rho.size());
    const double k = m / (m - 1.0);
    for (std::size_t i = 0; i < rho.size(); ++i)
        p[i] = rho[i] > 0.0 ? k * std::pow(rho[i], m - 1.0) : 0.0;
    return p;
}

// x^m - r^m without cancellation when x is close to r.
double pow_diff(double x, double r, double m)
{
    if (x > 0.0 && r > 0.0)
        return std::pow(r, m) * std::expm1(m * std::log1p((x - r) / r));
    return (x > 0.0 ? std::pow(x, m) : 0.0) - (r > 0.0 ? std::pow(r, m) : 0.0);
}

double energy_delta(const RadialGrid& g, const KernelMatrix& K, const std::vector<double>& rho,
                    const std::vector<double>& x, double m)
{
    const auto& v = g.volumes();
    std::vector<double> s(rho.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        s[i] = x[i] + rho[i];
    const std::vector<double> ws = K.apply(s);
    double ent = 0.0, inter = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        ent += v[i] * pow_diff(x[i], rho[i], m);
        inter += v[i] * (x[i] - rho[i]) * ws[i];
    }
    return ent / (m - 1.0) + 0.5 * inter;
}

double total_from(const RadialGrid& g, const KernelMatrix& K, const std::vector<double>& rho, double m)
{
    const std::vector<double> w = K.apply(rho);
    const auto& v = g.volumes();
    double ent = 0.0, inter = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (rho[i] > 0.0)
            ent += v[i] * std::pow(rho[i], m);
        inter += v[i] * rho[i] * w[i];
    }
    return ent / (m - 1.0) + 0.5 * inter;
}

} // namespace

std::vector<double> first_variation(const RadialDensity& rho, const PotentialSpec& h, const EnergyParams& params,
                                    const KernelOptions& opt)
{
    auto K = checked_kernel(rho, h, params, opt);
    std::vector<double> g = pressure(rho.values(), params.m);
    const std::vector<double> w = K->apply(rho.values());
    for (std::size_t i = 0; i < g.size(); ++i)
        g[i] += w[i];
    return g;
}

ElResidual el_residual_of(const RadialDensity& rho, const std::vector<double>& fv)
{
    require(fv.size() == rho.cells(), ErrorCode::kInvalidArgument, "el_residual: size mismatch");
    const auto& v = rho.grid()->volumes();
    double mx = 0.0;
    for (double x : rho.values())
        mx = std::max(mx, x);
    ElResidual out;
    if (mx == 0.0)
        return out;
    const double thr = 1e-12 * mx;
    double best_mass = -1.0;
    std::size_t i = 0;
    const std::size_t n = rho.cells();
    while (i < n) {
        if (rho[i] <= thr) {
            ++i;
            continue;
        }
        std::size_t j = i;
        double sv = 0.0, sg = 0.0, sm = 0.0;
        while (j < n && rho[j] > thr) {
            sv += v[j];
            sg += v[j] * fv[j];
            sm += v[j] * rho[j];
            ++j;
        }
        const double C = sg / sv;
        double res = 0.0;
        for (std::size_t k = i; k < j; ++k)
            res = std::max(res, std::fabs(fv[k] - C));
        out.residual = std::max(out.residual, res);
        if (sm > best_mass) {
            best_mass = sm;
            out.multiplier = C;
        }
        ++out.components;
        i = j;
    }
    for (std::size_t k = 0; k < n; ++k)
        if (rho[k] <= thr)
            out.outside_violation = std::max(out.outside_violation, out.multiplier - fv[k]);
    return out;
}

ElResidual el_residual(const RadialDensity& rho, const PotentialSpec& h, const EnergyParams& params,
                       const KernelOptions& opt)
{
    return el_residual_of(rho, first_variation(rho, h, params, opt));
}

std::vector<double> project_to_simplex(const std::vector<double>& y, const std::vector<double>& v, double mass)
{
    require(y.size() == v.size() && !y.empty(), ErrorCode::kInvalidArgument, "projection: size mismatch");
    require(mass > 0.0, ErrorCode::kInvalidArgument, "projection: mass must be > 0");
    std::vector<char> active(y.size(), 1);
    double mu = 0.0;
    for (;;) {
        double sy = 0.0, sv = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i)
            if (active[i]) {
                sy += v[i] * y[i];
                sv += v[i];
            }
        mu = (sy - mass) / sv;
        bool removed = false;
        for (std::size_t i = 0; i < y.size(); ++i)
            if (active[i] && y[i] - mu <= 0.0) {
                active[i] = 0;
                removed = true;
            }
        if (!removed)
            break;
    }
    std::vector<double> x(y.size(), 0.0);
    for (std::size_t i = 0; i < y.size(); ++i)
        if (active[i])
            x[i] = y[i] - mu;
    return x;
}

std::string MinimizerResult::to_json() const
{
    nlohmann::ordered_json j;
    j["energy"] = energy;
    j["el_residual"] = el_residual;
    j["el_multiplier"] = el_multiplier;
    j["support_radius"] = support_radius;
    j["iterations"] = iterations;
    j["converged"] = converged;
    j["boundary_limited"] = boundary_limited;
    j["stop_reason"] = stop_reason;
    return j.dump();
}

MinimizerResult minimize_energy(const MinimizerConfig& cfg)
{
    require(cfg.grid != nullptr, ErrorCode::kInvalidArgument, "minimize: grid required");
    require(cfg.max_iters >= 0 && cfg.step0 > 0.0 && cfg.backtrack > 0.0 && cfg.backtrack < 1.0 && cfg.tol > 0.0,
            ErrorCode::kInvalidArgument, "minimize: steps and tolerances must be positive");
    cfg.energy.validate();
    const RegimeVerdict verdict = classify_regime(cfg.potential, cfg.energy.m, cfg.energy.manifold);
    if (verdict.verdict == Verdict::kNonexistenceSingular)
        fail(ErrorCode::kRegimeRefusal, "minimize: no minimizer exists (condition " + verdict.condition + ")");

    RadialDensity rho = cfg.initial ? *cfg.initial
                                    : uniform_ball(cfg.grid, cfg.grid->nodes()[cfg.grid->nearest_node(0.25 * cfg.grid->theta_max())]);
    require(rho.grid()->nodes() == cfg.grid->nodes(), ErrorCode::kInvalidArgument, "minimize: initial density grid differs");
    const RadialGrid& g = *cfg.grid;
    const double m = cfg.energy.m;
    auto K = checked_kernel(rho, cfg.potential, cfg.energy, cfg.kernel);
    {
        std::vector<double> x = project_to_simplex(rho.values(), g.volumes());
        rho = rearrange_onto_grid(RadialDensity(rho.grid(), std::move(x)));
    }

    MinimizerResult res;
    double energy = total_from(g, *K, rho.values(), m);
    res.energy_trace.push_back(energy);
    double tau = cfg.step0;
    const double tau_max = 1e3 * cfg.step0;
    res.stop_reason = "max_iters";
    int it = 0;
    for (; it < cfg.max_iters; ++it) {
        std::vector<double> fv = pressure(rho.values(), m);
        const std::vector<double> w = K->apply(rho.values());
        for (std::size_t i = 0; i < fv.size(); ++i)
            fv[i] += w[i];
        const ElResidual el = el_residual_of(rho, fv);
        if (el.residual <= cfg.tol && el.outside_violation <= cfg.tol) {
            res.converged = true;
            res.stop_reason = "tolerance";
            break;
        }
        bool accepted = false;
        while (tau > 1e-14 * cfg.step0) {
            std::vector<double> y(rho.cells());
            for (std::size_t i = 0; i < y.size(); ++i)
                y[i] = rho[i] - tau * fv[i];
            RadialDensity cand(rho.grid(), project_to_simplex(y, g.volumes()));
            cand = rearrange_onto_grid(cand);
            const double de = energy_delta(g, *K, rho.values(), cand.values(), m);
            if (de < 0.0) {
                energy += de;
                res.energy_trace.push_back(energy);
                rho = std::move(cand);
                tau = std::min(tau / cfg.backtrack, tau_max);
                accepted = true;
                break;
            }
            tau *= cfg.backtrack;
        }
        if (!accepted) {
            res.stop_reason = "stagnation";
            break;
        }
    }
    res.iterations = it;
    const ElResidual el = el_residual(rho, cfg.potential, cfg.energy, cfg.kernel);
    res.el_residual = el.residual;
    res.el_multiplier = el.multiplier;
    if (!res.converged && el.residual <= cfg.tol && el.outside_violation <= cfg.tol)
        res.converged = true;
    res.energy = total_from(g, *K, rho.values(), m);
    res.support_radius = rho.support_radius();
    res.boundary_limited = rho.values().back() > 0.0;
    res.density = std::move(rho);
    return res;
}

std::string Trajectory::to_csv() const
{
    std::ostringstream out;
    out << "t,energy,mass,support_radius\n";
    for (const TrajectoryRow& r : rows)
        out << fmt17(r.t) << "," << fmt17(r.energy) << "," << fmt17(r.mass) << "," << fmt17(r.support_radius) << "\n";
    return out.str();
}

namespace {

struct Faces {
    std::vector<double> trans;
};

Faces make_faces(const RadialGrid& g)
{
    Faces f;
    const std::size_t n = g.cells();
    f.trans.resize(n > 0 ? n - 1 : 0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double ci = 0.5 * (g.left(i) + g.right(i));
        const double cj = 0.5 * (g.left(i + 1) + g.right(i + 1));
        f.trans[i] = sphere_area(g.params().d, g.params().c, g.right(i)) / (cj - ci);
    }
    return f;
}

double cfl_number(const RadialGrid& g, const Faces& f, const std::vector<double>& w, double dt)
{
    const auto& v = g.volumes();
    double mx = 0.0;
    for (std::size_t i = 0; i < g.cells(); ++i) {
        double s = 0.0;
        if (i > 0)
            s += f.trans[i - 1] * std::fabs(w[i - 1] - w[i]);
        if (i + 1 < g.cells())
            s += f.trans[i] * std::fabs(w[i + 1] - w[i]);
        mx = std::max(mx, dt * s / v[i]);
    }
    return mx;
}

// One semi-implicit step; returns false if the result has significant negative values.
bool pde_step(const RadialGrid& g, const Faces& f, const std::vector<double>& rho, const std::vector<double>& w,
              double m, double dt, std::vector<double>& out)
{
    const std::size_t n = g.cells();
    const auto& v = g.volumes();
    double mx = 0.0;
    for (double x : rho)
        mx = std::max(mx, x);
    const double floor = std::max(1e-12 * mx, 1e-300);
    const std::vector<double> P = pressure(rho, m);
    std::vector<double> a(n), b(n), gv(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = m * std::pow(std::max(rho[i], floor), m - 2.0);
        b[i] = P[i] - a[i] * rho[i] + w[i];
        gv[i] = P[i] + w[i];
    }
    std::vector<double> lower(n, 0.0), diag(n), upper(n, 0.0), rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        diag[i] = v[i] / dt;
        rhs[i] = v[i] * rho[i] / dt;
    }
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const std::size_t i = k, j = k + 1;
        const double M = gv[i] > gv[j] ? rho[i] : rho[j];
        const double c = f.trans[k] * M;
        if (c == 0.0)
            continue;
        diag[i] += c * a[i];
        upper[i] -= c * a[j];
        rhs[i] += c * (b[j] - b[i]);
        diag[j] += c * a[j];
        lower[j] -= c * a[i];
        rhs[j] += c * (b[i] - b[j]);
    }
    // Thomas algorithm.
    std::vector<double> cp(n), dp(n);
    cp[0] = upper[0] / diag[0];
    dp[0] = rhs[0] / diag[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double den = diag[i] - lower[i] * cp[i - 1];
        cp[i] = upper[i] / den;
        dp[i] = (rhs[i] - lower[i] * dp[i - 1]) / den;
    }
    out.assign(n, 0.0);
    out[n - 1] = dp[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        out[i] = dp[i] - cp[i] * out[i + 1];
    double omx = 0.0;
    for (double x : out)
        omx = std::max(omx, x);
    for (double& x : out) {
        if (x < 0.0) {
            if (x < -1e-13 * omx)
                return false;
            x = 0.0;
        }
    }
    return true;
}

// Outer radius of {rho > 1e-12 max rho}.
double thresholded_support(const RadialGrid& g, const std::vector<double>& rho)
{
    double mx = 0.0;
    for (double x : rho)
        mx = std::max(mx, x);
    for (std::size_t i = rho.size(); i-- > 0;)
        if (rho[i] > 1e-12 * mx)
            return g.right(i);
    return 0.0;
}

} // namespace

double advective_cfl(const RadialGrid& g, const std::vector<double>& w, double dt)
{
    return cfl_number(g, make_faces(g), w, dt);
}

Trajectory evolve_pde(const RadialDensity& rho0, const PotentialSpec& h, const EnergyParams& params, double dt,
                      double T, const EvolveOptions& opt)
{
    require(dt > 0.0 && T >= 0.0, ErrorCode::kInvalidArgument, "evolve: need dt > 0 and T >= 0");
    auto K = checked_kernel(rho0, h, params, opt.kernel);
    const RadialGrid& g = *rho0.grid();
    require(g.cells() >= 2, ErrorCode::kInvalidArgument, "evolve: need at least two cells");
    const Faces faces = make_faces(g);
    const double m = params.m;
    const std::size_t steps = static_cast<std::size_t>(std::llround(T / dt));
    const double mass0 = mass(rho0);

    Trajectory tr;
    std::vector<double> rho = rho0.values();
    double prev_energy = 0.0;
    for (std::size_t n = 0;; ++n) {
        const std::vector<double> w = K->apply(rho);
        const auto& v = g.volumes();
        double ent = 0.0, inter = 0.0, ms = 0.0;
        for (std::size_t i = 0; i < rho.size(); ++i) {
            if (rho[i] > 0.0)
                ent += v[i] * std::pow(rho[i], m);
            inter += v[i] * rho[i] * w[i];
            ms += v[i] * rho[i];
        }
        const double energy = ent / (m - 1.0) + 0.5 * inter;
        if (n > 0)
            tr.max_energy_increase = std::max(tr.max_energy_increase, energy - prev_energy);
        prev_energy = energy;
        tr.max_mass_drift = std::max(tr.max_mass_drift, std::fabs(ms - mass0));
        const bool last = n == steps;
        const double t = static_cast<double>(n) * dt;
        if (last || (opt.record_every > 0 && n % opt.record_every == 0) || n == 0) {
            tr.rows.push_back({t, energy, ms, thresholded_support(g, rho)});
        }
        if (opt.snapshot_every > 0 && (n % opt.snapshot_every == 0 || last))
            tr.snapshots.emplace_back(t, RadialDensity(rho0.grid(), rho));
        if (last)
            break;
        const double cfl = cfl_number(g, faces, w, dt);
        tr.max_cfl = std::max(tr.max_cfl, cfl);
        if (cfl > 1.0)
            fail(ErrorCode::kCfl, "evolve: advective CFL number " + fmt17(cfl) + " exceeds 1; reduce dt");
        std::vector<double> next;
        if (!pde_step(g, faces, rho, w, m, dt, next)) {
            // Two half steps with a refreshed drift.
            std::vector<double> mid;
            bool ok = pde_step(g, faces, rho, w, m, 0.5 * dt, mid);
            if (ok) {
                const std::vector<double> w2 = K->apply(mid);
                ok = pde_step(g, faces, mid, w2, m, 0.5 * dt, next);
            }
            if (!ok)
                fail(ErrorCode::kCfl, "evolve: step lost positivity; reduce dt");
        }
        rho = std::move(next);
        ++tr.steps;
    }
    tr.final_density = RadialDensity(rho0.grid(), rho);
    return tr;
}

TailMassCheck tail_mass_bound_check(const RadialDensity& rho, const PotentialSpec& h, double V, double delta)
{
    require(delta > 0.0, ErrorCode::kInvalidArgument, "tail check: delta must be > 0");
    const double hd = h(delta);
    require(hd > 0.0, ErrorCode::kDomain, "tail check: h(delta) must be > 0");
    require(V >= 0.0, ErrorCode::kInvalidArgument, "tail check: V must be >= 0");
    const RadialGrid& g = *rho.grid();
    const int d = g.params().d;
    const double c = g.params().c;
    double tail = 0.0;
    for (std::size_t i = 0; i < rho.cells(); ++i) {
        if (rho[i] == 0.0 || g.right(i) <= delta)
            continue;
        if (g.left(i) >= delta)
            tail += rho[i] * g.volumes()[i];
        else
            tail += rho[i] * (g.cumulative()[i + 1] - ball_volume(d, c, delta));
    }
    TailMassCheck out;
    out.tail_mass = tail;
    out.bound = std::sqrt(2.0 * V / hd);
    out.ok = tail <= out.bound;
    return out;
}

double weighted_l1(const RadialDensity& a, const RadialDensity& b)
{
    require(a.grid()->nodes() == b.grid()->nodes(), ErrorCode::kInvalidArgument, "weighted_l1: grids differ");
    const auto& v = a.grid()->volumes();
    double s = 0.0;
    for (std::size_t i = 0; i < a.cells(); ++i)
        s += std::fabs(a[i] - b[i]) * v[i];
    return s;
}

} // namespace hyperfree
