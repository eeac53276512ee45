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


#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include "config.hpp"
#include "hyperfree.h"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using hfcli::Config;
using hfcli::ConfigError;

namespace {

struct ApiError : std::runtime_error {
    hf_status status;
    ApiError(hf_status s, const std::string& what) : std::runtime_error(what), status(s) {}
};

void check(hf_status s)
{
    if (s != HF_OK)
        throw ApiError(s, hf_last_error());
}

struct PotentialDel {
    void operator()(hf_potential* p) const { hf_potential_free(p); }
};
struct DensityDel {
    void operator()(hf_density* p) const { hf_density_free(p); }
};
struct StringDel {
    void operator()(char* p) const { hf_string_free(p); }
};
using PotentialPtr = std::unique_ptr<hf_potential, PotentialDel>;
using DensityPtr = std::unique_ptr<hf_density, DensityDel>;
using StringPtr = std::unique_ptr<char, StringDel>;

std::string sha256_file(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string data = ss.str();
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

class Run {
public:
    Run(std::string sub, Config cfg, fs::path out, std::uint64_t seed)
        : sub_(std::move(sub)), cfg_(std::move(cfg)), out_(std::move(out)), seed_(seed)
    {
    }

    int execute();
    void write_manifest(const std::string& status, double wall);

private:
    fs::path path(const std::string& name)
    {
        outputs_.push_back(name);
        return out_ / name;
    }
    void write_text(const std::string& name, const std::string& text)
    {
        std::ofstream f(path(name), std::ios::binary);
        if (!f)
            throw ApiError(HF_E_IO, "cannot write " + (out_ / name).string());
        f << text;
    }

    int dim() { return static_cast<int>(cfg_.get_int("manifold.d", 2)); }
    double curvature() { return cfg_.get_double("manifold.c", 1.0); }
    double m() { return cfg_.get_double("energy.m", 2.0); }
    PotentialPtr potential();
    DensityPtr density(bool allow_ball = true);

    int classify();
    int energy();
    int minimize();
    int evolve();
    int hls_check();
    int rearrange_check();
    int blowup();
    int witness();
    int report();

    std::string sub_;
    Config cfg_;
    fs::path out_;
    std::uint64_t seed_;
    std::vector<std::string> outputs_;
};

PotentialPtr Run::potential()
{
    std::vector<std::string> keys, values;
    for (const auto& [k, v] : cfg_.entries())
        if (k.rfind("potential.", 0) == 0) {
            keys.push_back(k);
            values.push_back(cfg_.get(k, v));
        }
    if (keys.empty())
        throw ConfigError("config: potential.family is required");
    std::vector<const char*> kp, vp;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        kp.push_back(keys[i].c_str());
        vp.push_back(values[i].c_str());
    }
    hf_potential* h = nullptr;
    check(hf_potential_from_config(kp.data(), vp.data(), kp.size(), &h));
    return PotentialPtr(h);
}

DensityPtr Run::density(bool allow_ball)
{
    hf_density* rho = nullptr;
    if (cfg_.has("density.file")) {
        check(hf_density_read(cfg_.get("density.file", "").c_str(), &rho));
    } else {
        if (!allow_ball)
            throw ConfigError("config: density.file is required");
        const int d = dim();
        const double c = curvature();
        check(hf_density_uniform_ball(d, c, static_cast<size_t>(cfg_.get_int("grid.cells", 128)),
                                      cfg_.get_double("grid.theta-max", 6.0), cfg_.get_double("density.radius", 1.0),
                                      &rho));
    }
    return DensityPtr(rho);
}

int Run::classify()
{
    auto h = potential();
    char* s = nullptr;
    check(hf_classify(h.get(), m(), dim(), curvature(), &s));
    StringPtr out(s);
    const json j = json::parse(out.get());
    std::cout << j["verdict"].get<std::string>() << "\n" << out.get() << "\n";
    write_text("classify.json", std::string(out.get()) + "\n");
    return 0;
}

int Run::energy()
{
    auto h = potential();
    auto rho = density();
    char* s = nullptr;
    check(hf_energy(rho.get(), h.get(), m(), &s));
    StringPtr out(s);
    std::cout << out.get() << "\n";
    write_text("energy.json", std::string(out.get()) + "\n");
    return 0;
}

int Run::minimize()
{
    auto h = potential();
    hf_minimize_options opt;
    hf_minimize_options_default(&opt);
    opt.d = dim();
    opt.c = curvature();
    opt.m = m();
    opt.cells = static_cast<size_t>(cfg_.get_int("grid.cells", static_cast<long long>(opt.cells)));
    opt.theta_max = cfg_.get_double("grid.theta-max", opt.theta_max);
    opt.max_iters = static_cast<int>(cfg_.get_int("minimize.max-iters", opt.max_iters));
    opt.step0 = cfg_.get_double("minimize.step0", opt.step0);
    opt.backtrack = cfg_.get_double("minimize.backtrack", opt.backtrack);
    opt.tol = cfg_.get_double("minimize.tol", opt.tol);
    DensityPtr init;
    if (cfg_.has("density.file"))
        init = density(false);
    hf_density* rho = nullptr;
    char* s = nullptr;
    check(hf_minimize(h.get(), &opt, init.get(), &rho, &s));
    DensityPtr result(rho);
    StringPtr out(s);
    json j = json::parse(out.get());
    std::string trace = "iteration,energy\n";
    std::size_t i = 0;
    for (const auto& e : j["energy_trace"])
        trace += std::to_string(i++) + "," + hfcli::fmt17(e.get<double>()) + "\n";
    j.erase("energy_trace");
    write_text("trace.csv", trace);
    check(hf_density_write(result.get(), path("minimizer.dens").string().c_str()));
    write_text("minimize.json", j.dump() + "\n");
    std::cout << j.dump() << "\n";
    return 0;
}

int Run::evolve()
{
    auto h = potential();
    auto rho0 = density();
    hf_evolve_options opt;
    hf_evolve_options_default(&opt);
    opt.m = m();
    opt.dt = cfg_.get_double("evolve.dt", opt.dt);
    opt.t_end = cfg_.get_double("evolve.t-end", opt.t_end);
    opt.record_every = static_cast<size_t>(cfg_.get_int("evolve.record-every", static_cast<long long>(opt.record_every)));
    opt.snapshot_every =
        static_cast<size_t>(cfg_.get_int("evolve.snapshot-every", static_cast<long long>(opt.snapshot_every)));
    const std::string prefix = (out_ / "snapshot_").string();
    hf_density* fin = nullptr;
    char* csv = nullptr;
    char* s = nullptr;
    check(hf_evolve(rho0.get(), h.get(), &opt, prefix.c_str(), &fin, &csv, &s));
    DensityPtr final_density(fin);
    StringPtr csv_out(csv), out(s);
    const json j = json::parse(out.get());
    for (const auto& snap : j["snapshots"])
        outputs_.push_back(fs::path(snap["file"].get<std::string>()).filename().string());
    write_text("trajectory.csv", csv_out.get());
    check(hf_density_write(final_density.get(), path("final.dens").string().c_str()));
    write_text("evolve.json", std::string(out.get()) + "\n");
    std::cout << out.get() << "\n";
    return 0;
}

int Run::hls_check()
{
    auto rho = density();
    char* s = nullptr;
    check(hf_hls_check(rho.get(), static_cast<int>(cfg_.get_int("hls.variant", 2)), cfg_.get_double("hls.lambda", 1.0),
                       cfg_.get_double("hls.m", m()), cfg_.get_double("hls.r", 1.0),
                       cfg_.get_double("hls.c-m", curvature()), cfg_.get_double("hls.c-euclid", 0.0), &s));
    StringPtr out(s);
    std::cout << out.get() << "\n";
    write_text("hls.jsonl", std::string(out.get()) + "\n");
    return 0;
}

int Run::rearrange_check()
{
    char* s = nullptr;
    int pass = 0;
    const std::string kernel = cfg_.get("rearrange.kernel", "exp");
    check(hf_rearrange_check(dim(), curvature(), kernel.c_str(),
                             static_cast<size_t>(cfg_.get_int("rearrange.pairs", 5)),
                             static_cast<size_t>(cfg_.get_int("rearrange.samples", 100000)), seed_, &s, &pass));
    StringPtr out(s);
    write_text("rearrange.jsonl", out.get());
    std::cout << out.get() << (pass ? "all pairs pass\n" : "some pairs fail\n");
    return 0;
}

int Run::blowup()
{
    auto h = potential();
    char* s = nullptr;
    check(hf_blowup(h.get(), m(), dim(), curvature(), static_cast<int>(cfg_.get_int("blowup.levels", 8)), &s));
    StringPtr out(s);
    std::cout << out.get() << "\n";
    write_text("blowup.json", std::string(out.get()) + "\n");
    return 0;
}

int Run::witness()
{
    auto h = potential();
    char* s = nullptr;
    check(hf_witness(h.get(), m(), dim(), curvature(), static_cast<size_t>(cfg_.get_int("witness.samples", 100000)),
                     seed_, &s));
    StringPtr out(s);
    std::cout << out.get() << "\n";
    write_text("witness.json", std::string(out.get()) + "\n");
    return 0;
}

int Run::report()
{
    const int d = dim();
    const double c = curvature();
    const auto betas = cfg_.get_list("report.betas", {0.5, 1.5, 2.5});
    const auto ms = cfg_.get_list("report.ms", {1.5, 2.0, 3.0});
    std::string lines;
    std::printf("%-8s %-6s %-28s %s\n", "beta", "m", "verdict", "condition");
    for (double b : betas) {
        hf_potential* raw = nullptr;
        check(hf_potential_riesz(b, &raw));
        PotentialPtr h(raw);
        for (double mm : ms) {
            char* s = nullptr;
            check(hf_classify(h.get(), mm, d, c, &s));
            StringPtr out(s);
            const json j = json::parse(out.get());
            std::printf("%-8g %-6g %-28s %s\n", b, mm, j["verdict"].get<std::string>().c_str(),
                        j["condition"].get<std::string>().c_str());
            lines += std::string(out.get()) + "\n";
        }
    }
    write_text("report.jsonl", lines);
    return 0;
}

int Run::execute()
{
    fs::create_directories(out_);
    if (sub_ == "classify")
        return classify();
    if (sub_ == "energy")
        return energy();
    if (sub_ == "minimize")
        return minimize();
    if (sub_ == "evolve")
        return evolve();
    if (sub_ == "hls-check")
        return hls_check();
    if (sub_ == "rearrange-check")
        return rearrange_check();
    if (sub_ == "blowup")
        return blowup();
    if (sub_ == "witness")
        return witness();
    return report();
}

void Run::write_manifest(const std::string& status, double wall)
{
    json j;
    j["subcommand"] = sub_;
    j["status"] = status;
    json cfg = json::object();
    for (const auto& [k, v] : cfg_.entries())
        cfg[k] = v;
    for (const auto& [k, v] : cfg_.resolved())
        cfg[k] = v;
    j["config"] = cfg;
    j["seed"] = seed_;
    j["version"] = hf_version();
    j["wall_time_s"] = wall;
    json outs = json::array();
    for (const std::string& name : outputs_) {
        const fs::path p = out_ / name;
        if (fs::exists(p))
            outs.push_back({{"file", name}, {"sha256", sha256_file(p)}});
    }
    j["outputs"] = outs;
    std::ofstream f(out_ / "manifest.json");
    f << j.dump(2) << "\n";
}

int exit_code(hf_status s)
{
    switch (s) {
    case HF_E_PARSE:
    case HF_E_INVALID_ARGUMENT:
    case HF_E_IO:
        return 2;
    case HF_E_REGIME_REFUSAL:
        return 3;
    default:
        return 1;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"hyperfree: radial energies, minimizers and gradient flows"};
    std::string sub, config_path, out_dir = "out";
    std::uint64_t seed = 1;
    int threads = 0;
    std::optional<long long> cells;
    std::optional<double> theta_max;
    std::vector<std::string> sets;
    app.add_option("subcommand", sub, "classify | energy | minimize | evolve | hls-check | rearrange-check | blowup | witness | report")
        ->required()
        ->check(CLI::IsMember({"classify", "energy", "minimize", "evolve", "hls-check", "rearrange-check", "blowup",
                               "witness", "report"}));
    app.add_option("--config", config_path, "key = value config file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--grid.cells", cells, "radial grid cells");
    app.add_option("--grid.theta-max", theta_max, "radial grid extent");
    app.add_option("--set", sets, "extra key=value overrides");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    const auto t0 = std::chrono::steady_clock::now();
    std::optional<Run> run;
    int code = 0;
    std::string status = "ok";
    try {
        Config cfg = config_path.empty() ? Config() : Config::load(config_path);
        if (cells)
            cfg.set("grid.cells", std::to_string(*cells));
        if (theta_max)
            cfg.set("grid.theta-max", hfcli::fmt17(*theta_max));
        for (const std::string& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos || eq == 0)
                throw ConfigError("--set expects key=value, got '" + s + "'");
            cfg.set(s.substr(0, eq), s.substr(eq + 1));
        }
        if (threads > 0)
            check(hf_set_threads(threads));
        run.emplace(sub, std::move(cfg), fs::path(out_dir), seed);
        code = run->execute();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        code = 2;
        status = "config-error";
    } catch (const ApiError& e) {
        code = exit_code(e.status);
        if (code == 3) {
            std::cerr << "refused: " << e.what() << "\n";
            status = "regime-refusal";
        } else {
            std::cerr << "error: " << e.what() << "\n";
            status = "error";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        code = 1;
        status = "error";
    }
    if (run) {
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        try {
            run->write_manifest(status, wall);
        } catch (const std::exception& e) {
            std::cerr << "error: manifest: " << e.what() << "\n";
            if (code == 0)
                code = 1;
        }
    }
    return code;
}
