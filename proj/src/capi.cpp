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


#include "hyperfree.h"

#include <cstdlib>
#include <cstring>
#include <map>
#include <new>
#include <string>

#include <json.hpp>

#include "hyperfree/density.hpp"
#include "hyperfree/energy.hpp"
#include "hyperfree/error.hpp"
#include "hyperfree/hls.hpp"
#include "hyperfree/minimize.hpp"
#include "hyperfree/potentials.hpp"
#include "hyperfree/regimes.hpp"
#include "hyperfree/util.hpp"

struct hf_potential {
    hyperfree::PotentialSpec spec;
};

struct hf_density {
    hyperfree::RadialDensity rho;
};

namespace {

thread_local std::string g_last_error;

using json = nlohmann::ordered_json;

template <class F>
hf_status guarded(F&& f)
{
    try {
        f();
        g_last_error.clear();
        return HF_OK;
    } catch (const hyperfree::Error& e) {
        g_last_error = e.what();
        return static_cast<hf_status>(static_cast<int>(e.code()));
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
    } catch (const std::exception& e) {
        g_last_error = e.what();
    } catch (...) {
        g_last_error = "unknown error";
    }
    return HF_E_INTERNAL;
}

void need(const void* p, const char* what)
{
    hyperfree::require(p != nullptr, hyperfree::ErrorCode::kInvalidArgument, std::string(what) + " must not be NULL");
}

char* dup_string(const std::string& s)
{
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out)
        throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

hyperfree::ManifoldParams manifold(int d, double c)
{
    hyperfree::ManifoldParams p = c == 0.0 ? hyperfree::ManifoldParams::flat(d) : hyperfree::ManifoldParams::hyperbolic(d, c);
    p.validate();
    return p;
}

} // namespace

extern "C" {

const char* hf_last_error(void) { return g_last_error.c_str(); }

const char* hf_version(void) { return "0.1.0"; }

void hf_string_free(char* s) { std::free(s); }

hf_status hf_set_threads(int n)
{
    return guarded([&] {
        hyperfree::require(n >= 1, hyperfree::ErrorCode::kInvalidArgument, "threads must be >= 1");
        hyperfree::set_thread_count(static_cast<std::size_t>(n));
    });
}

hf_status hf_ball_volume(int d, double c, double theta, double* out)
{
    return guarded([&] {
        need(out, "out");
        *out = hyperfree::ball_volume(d, c, theta);
    });
}

hf_status hf_potential_from_config(const char* const* keys, const char* const* values, size_t n, hf_potential** out)
{
    return guarded([&] {
        need(out, "out");
        std::map<std::string, std::string> kv;
        for (size_t i = 0; i < n; ++i) {
            need(keys[i], "key");
            need(values[i], "value");
            kv[keys[i]] = values[i];
        }
        *out = new hf_potential{hyperfree::PotentialSpec::from_config(kv)};
    });
}

hf_status hf_potential_riesz(double beta, hf_potential** out)
{
    return guarded([&] {
        need(out, "out");
        *out = new hf_potential{hyperfree::PotentialSpec::riesz(beta)};
    });
}

hf_status hf_potential_power(double p, hf_potential** out)
{
    return guarded([&] {
        need(out, "out");
        *out = new hf_potential{hyperfree::PotentialSpec::power(p)};
    });
}

void hf_potential_free(hf_potential* h) { delete h; }

hf_status hf_potential_eval(const hf_potential* h, double theta, double* out)
{
    return guarded([&] {
        need(h, "potential");
        need(out, "out");
        *out = h->spec(theta);
    });
}

hf_status hf_potential_describe(const hf_potential* h, char** out)
{
    return guarded([&] {
        need(h, "potential");
        need(out, "out");
        *out = dup_string(h->spec.describe());
    });
}

hf_status hf_classify(const hf_potential* h, double m, int d, double c, char** out)
{
    return guarded([&] {
        need(h, "potential");
        need(out, "out");
        const auto p = manifold(d, c);
        const auto v = hyperfree::classify_regime(h->spec, m, p);
        const auto adm = hyperfree::check_singularity_admissible(h->spec, m, d);
        const auto non = hyperfree::check_nonexistence(h->spec, m, d);
        json j;
        j["potential"] = h->spec.describe();
        j["m"] = m;
        j["d"] = d;
        j["c"] = c;
        j["verdict"] = hyperfree::verdict_name(v.verdict);
        j["condition"] = v.condition;
        j["theta0"] = v.theta0 ? json(*v.theta0) : json(nullptr);
        j["alpha"] = v.alpha;
        j["admissible"] = adm.admissible;
        j["admissibility_threshold"] = adm.threshold;
        j["nonexistent"] = non.nonexistent;
        j["heuristic"] = v.heuristic;
        *out = dup_string(j.dump());
    });
}

hf_status hf_density_uniform_ball(int d, double c, size_t cells, double theta_max, double radius, hf_density** out)
{
    return guarded([&] {
        need(out, "out");
        auto grid = hyperfree::RadialGrid::uniform(manifold(d, c), cells, theta_max);
        *out = new hf_density{hyperfree::uniform_ball(grid, radius)};
    });
}

hf_status hf_density_from_values(int d, double c, const double* nodes, size_t n_nodes, const double* values,
                                 hf_density** out)
{
    return guarded([&] {
        need(nodes, "nodes");
        need(values, "values");
        need(out, "out");
        hyperfree::require(n_nodes >= 2, hyperfree::ErrorCode::kInvalidArgument, "need at least two nodes");
        auto grid = hyperfree::RadialGrid::from_nodes(manifold(d, c), std::vector<double>(nodes, nodes + n_nodes));
        *out = new hf_density{hyperfree::RadialDensity(grid, std::vector<double>(values, values + n_nodes - 1))};
    });
}

hf_status hf_density_read(const char* path, hf_density** out)
{
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = new hf_density{hyperfree::read_density_file(path)};
    });
}

hf_status hf_density_write(const hf_density* rho, const char* path)
{
    return guarded([&] {
        need(rho, "density");
        need(path, "path");
        hyperfree::write_density_file(path, rho->rho);
    });
}

void hf_density_free(hf_density* rho) { delete rho; }

size_t hf_density_cells(const hf_density* rho) { return rho ? rho->rho.cells() : 0; }

hf_status hf_density_values(const hf_density* rho, double* out, size_t n)
{
    return guarded([&] {
        need(rho, "density");
        need(out, "out");
        const auto& v = rho->rho.values();
        std::copy(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(std::min(n, v.size())), out);
    });
}

hf_status hf_density_mass(const hf_density* rho, double* out)
{
    return guarded([&] {
        need(rho, "density");
        need(out, "out");
        *out = hyperfree::mass(rho->rho);
    });
}

hf_status hf_density_rearrange(const hf_density* rho, hf_density** out)
{
    return guarded([&] {
        need(rho, "density");
        need(out, "out");
        *out = new hf_density{hyperfree::rearrange(rho->rho)};
    });
}

hf_status hf_energy(const hf_density* rho, const hf_potential* h, double m, char** out)
{
    return guarded([&] {
        need(rho, "density");
        need(h, "potential");
        need(out, "out");
        hyperfree::EnergyParams params;
        params.m = m;
        params.manifold = rho->rho.grid()->params();
        *out = dup_string(hyperfree::total_energy(rho->rho, h->spec, params).to_json());
    });
}

void hf_minimize_options_default(hf_minimize_options* opt)
{
    if (!opt)
        return;
    const hyperfree::MinimizerConfig def;
    opt->d = 2;
    opt->c = 1.0;
    opt->cells = 128;
    opt->theta_max = 6.0;
    opt->m = 2.0;
    opt->max_iters = def.max_iters;
    opt->step0 = def.step0;
    opt->backtrack = def.backtrack;
    opt->tol = def.tol;
}

hf_status hf_minimize(const hf_potential* h, const hf_minimize_options* opt, const hf_density* init,
                      hf_density** out_density, char** out)
{
    return guarded([&] {
        need(h, "potential");
        need(opt, "options");
        hyperfree::MinimizerConfig cfg;
        cfg.energy.m = opt->m;
        cfg.energy.manifold = manifold(opt->d, opt->c);
        cfg.grid = init ? init->rho.grid() : hyperfree::RadialGrid::uniform(cfg.energy.manifold, opt->cells, opt->theta_max);
        cfg.potential = h->spec;
        cfg.max_iters = opt->max_iters;
        cfg.step0 = opt->step0;
        cfg.backtrack = opt->backtrack;
        cfg.tol = opt->tol;
        if (init)
            cfg.initial = init->rho;
        hyperfree::MinimizerResult res = hyperfree::minimize_energy(cfg);
        if (out) {
            json j = json::parse(res.to_json());
            j["energy_trace"] = res.energy_trace;
            *out = dup_string(j.dump());
        }
        if (out_density)
            *out_density = new hf_density{std::move(res.density)};
    });
}

void hf_evolve_options_default(hf_evolve_options* opt)
{
    if (!opt)
        return;
    opt->m = 2.0;
    opt->dt = 1e-3;
    opt->t_end = 1.0;
    opt->record_every = 10;
    opt->snapshot_every = 0;
}

hf_status hf_evolve(const hf_density* rho0, const hf_potential* h, const hf_evolve_options* opt,
                    const char* snapshot_prefix, hf_density** out_final, char** csv, char** out)
{
    return guarded([&] {
        need(rho0, "density");
        need(h, "potential");
        need(opt, "options");
        hyperfree::EnergyParams params;
        params.m = opt->m;
        params.manifold = rho0->rho.grid()->params();
        hyperfree::EvolveOptions eo;
        eo.record_every = opt->record_every;
        eo.snapshot_every = snapshot_prefix ? opt->snapshot_every : 0;
        hyperfree::Trajectory tr = hyperfree::evolve_pde(rho0->rho, h->spec, params, opt->dt, opt->t_end, eo);
        json j;
        j["steps"] = tr.steps;
        j["final_energy"] = tr.rows.empty() ? 0.0 : tr.rows.back().energy;
        j["final_mass"] = tr.rows.empty() ? 0.0 : tr.rows.back().mass;
        j["final_support_radius"] = tr.rows.empty() ? 0.0 : tr.rows.back().support_radius;
        j["max_energy_increase"] = tr.max_energy_increase;
        j["max_mass_drift"] = tr.max_mass_drift;
        j["max_cfl"] = tr.max_cfl;
        json snaps = json::array();
        for (std::size_t i = 0; i < tr.snapshots.size(); ++i) {
            const std::string path = std::string(snapshot_prefix) + std::to_string(i) + ".dens";
            hyperfree::write_density_file(path, tr.snapshots[i].second);
            snaps.push_back({{"t", tr.snapshots[i].first}, {"file", path}});
        }
        j["snapshots"] = snaps;
        if (csv)
            *csv = dup_string(tr.to_csv());
        if (out)
            *out = dup_string(j.dump());
        if (out_final)
            *out_final = new hf_density{std::move(tr.final_density)};
    });
}

hf_status hf_hls_check(const hf_density* rho, int variant, double lambda, double m, double r, double c_m,
                       double c_euclid, char** out)
{
    return guarded([&] {
        need(rho, "density");
        need(out, "out");
        const int d = rho->rho.grid()->params().d;
        hyperfree::HlsReport rep;
        if (variant == 1) {
            const double mc = hyperfree::critical_exponent(lambda, d);
            const double ce = c_euclid > 0.0 ? c_euclid : hyperfree::calibrate_euclid_constant(lambda, d, mc).constant;
            rep = hyperfree::hls_variant1_check(rho->rho, lambda, c_m, ce);
        } else if (variant == 2) {
            const double ce = c_euclid > 0.0 ? c_euclid : hyperfree::calibrate_euclid_constant(lambda, d, m).constant;
            rep = hyperfree::hls_variant2_check(rho->rho, lambda, m, r, c_m, ce);
        } else {
            hyperfree::fail(hyperfree::ErrorCode::kInvalidArgument, "hls variant must be 1 or 2");
        }
        json j = json::parse(rep.to_json());
        if (c_euclid > 0.0)
            j["C_euclid_source"] = "user";
        *out = dup_string(j.dump());
    });
}

hf_status hf_rearrange_check(int d, double c, const char* kernel, size_t pairs, size_t samples, uint64_t seed,
                             char** out, int* all_pass)
{
    return guarded([&] {
        need(kernel, "kernel");
        need(out, "out");
        const auto p = manifold(d, c);
        const std::string name = kernel;
        hyperfree::RadialKernel g;
        if (name == "exp")
            g = hyperfree::exp_kernel();
        else if (name == "inverse")
            g = hyperfree::inverse_kernel();
        else
            hyperfree::fail(hyperfree::ErrorCode::kInvalidArgument, "kernel must be exp or inverse");
        hyperfree::Rng rng(seed, 0);
        std::string lines;
        bool ok = true;
        for (size_t i = 0; i < pairs; ++i) {
            const auto a = hyperfree::random_disjoint_mixture(p, 2, rng);
            const auto b = hyperfree::random_disjoint_mixture(p, 2, rng);
            const auto chk = hyperfree::riesz_rearrangement_check(a, b, g, samples, seed + 1000 + i);
            json row;
            row["pair"] = i;
            row["kernel"] = name;
            row.update(json::parse(chk.to_json()));
            lines += row.dump() + "\n";
            ok = ok && chk.pass;
        }
        if (all_pass)
            *all_pass = ok ? 1 : 0;
        *out = dup_string(lines);
    });
}

hf_status hf_blowup(const hf_potential* h, double m, int d, double c, int levels, char** out)
{
    return guarded([&] {
        need(h, "potential");
        need(out, "out");
        const auto p = manifold(d, c);
        const auto rep = hyperfree::blowup_demo(h->spec, m, p, levels);
        json j;
        j["potential"] = h->spec.describe();
        j["m"] = m;
        j["d"] = d;
        j["c"] = c;
        j["nonexistence"] = hyperfree::check_nonexistence(h->spec, m, d).nonexistent;
        j.update(json::parse(rep.to_json()));
        *out = dup_string(j.dump());
    });
}

hf_status hf_witness(const hf_potential* h, double m, int d, double c, size_t samples, uint64_t seed, char** out)
{
    return guarded([&] {
        need(h, "potential");
        need(out, "out");
        const auto p = manifold(d, c);
        const auto w = m > 2.0 ? hyperfree::construct_negative_energy_mgt2(h->spec, m, p)
                               : hyperfree::construct_negative_energy_mle2(h->spec, m, p);
        json j;
        j["potential"] = h->spec.describe();
        j["m"] = m;
        j["witness"] = json::parse(w.to_json());
        if (w.found)
            j["verification"] = json::parse(hyperfree::verify_witness(w, h->spec, m, samples, seed).to_json());
        *out = dup_string(j.dump());
    });
}

} // extern "C"
