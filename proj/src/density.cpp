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

#include "hyperfree/density.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "hyperfree/error.hpp"
#include "hyperfree/util.hpp"

namespace hyperfree {

GridPtr RadialGrid::from_nodes(const ManifoldParams& p, std::vector<double> nodes)
{
    p.validate();
    require(nodes.size() >= 2, ErrorCode::kInvalidArgument, "grid: need at least one cell");
    require(nodes.front() == 0.0, ErrorCode::kInvalidArgument, "grid: first node must be 0");
    auto g = std::make_shared<RadialGrid>();
    g->params_ = p;
    g->cumulative_.resize(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        require(std::isfinite(nodes[i]), ErrorCode::kInvalidArgument, "grid: nodes must be finite");
        if (i > 0)
            require(nodes[i] > nodes[i - 1], ErrorCode::kInvalidArgument, "grid: nodes must be strictly increasing");
        g->cumulative_[i] = ball_volume(p.d, p.c, nodes[i]);
    }
    g->volumes_.resize(nodes.size() - 1);
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        g->volumes_[i] = g->cumulative_[i + 1] - g->cumulative_[i];
        require(g->volumes_[i] > 0.0, ErrorCode::kInvalidArgument, "grid: cell volume underflow");
    }
    g->nodes_ = std::move(nodes);
    return g;
}

GridPtr RadialGrid::uniform(const ManifoldParams& p, std::size_t cells, double theta_max)
{
    require(cells >= 1 && theta_max > 0.0, ErrorCode::kInvalidArgument, "grid: need cells >= 1 and theta_max > 0");
    std::vector<double> nodes(cells + 1);
    for (std::size_t i = 0; i <= cells; ++i)
        nodes[i] = theta_max * static_cast<double>(i) / static_cast<double>(cells);
    nodes.back() = theta_max;
    return from_nodes(p, std::move(nodes));
}

GridPtr RadialGrid::default_grid(const ManifoldParams& p, std::size_t cells, double theta_max)
{
    require(cells >= 8 && theta_max > 0.0, ErrorCode::kInvalidArgument, "grid: need cells >= 8 and theta_max > 0");
    const std::size_t n_geo = cells / 8;
    const std::size_t n_uni = cells - n_geo + 1;
    const double h = theta_max / static_cast<double>(n_uni);
    std::vector<double> nodes{0.0};
    for (std::size_t k = 0; k < n_geo; ++k) {
        const double e = -3.0 * static_cast<double>(n_geo - 1 - k) / static_cast<double>(std::max<std::size_t>(n_geo - 1, 1));
        nodes.push_back(h * std::pow(10.0, e));
    }
    for (std::size_t j = 2; j <= n_uni; ++j)
        nodes.push_back(h * static_cast<double>(j));
    nodes.back() = theta_max;
    return from_nodes(p, std::move(nodes));
}

std::size_t RadialGrid::nearest_node(double theta) const
{
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), theta);
    if (it == nodes_.end())
        return nodes_.size() - 1;
    std::size_t j = static_cast<std::size_t>(it - nodes_.begin());
    if (j > 0 && theta - nodes_[j - 1] <= nodes_[j] - theta)
        --j;
    return j;
}

std::size_t RadialGrid::locate(double theta) const
{
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), theta);
    std::size_t j = static_cast<std::size_t>(it - nodes_.begin());
    if (j == 0)
        return 0;
    return std::min(j - 1, cells() - 1);
}

RadialDensity::RadialDensity(GridPtr grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values))
{
    require(grid_ != nullptr, ErrorCode::kInvalidArgument, "density: null grid");
    require(values_.size() == grid_->cells(), ErrorCode::kInvalidArgument, "density: value count must equal cell count");
    for (double v : values_)
        require(std::isfinite(v) && v >= 0.0, ErrorCode::kInvalidArgument, "density: values must be finite and >= 0");
}

double RadialDensity::support_radius() const
{
    for (std::size_t i = values_.size(); i-- > 0;)
        if (values_[i] > 0.0)
            return grid_->right(i);
    return 0.0;
}

bool RadialDensity::is_non_increasing() const
{
    for (std::size_t i = 1; i < values_.size(); ++i)
        if (values_[i] > values_[i - 1])
            return false;
    return true;
}

double mass(const RadialDensity& rho)
{
    const auto& v = rho.grid()->volumes();
    double s = 0.0;
    for (std::size_t i = 0; i < rho.cells(); ++i)
        s += rho[i] * v[i];
    return s;
}

double lp_integral(const RadialDensity& rho, double m)
{
    require(m >= 1.0, ErrorCode::kInvalidArgument, "lp_integral: m must be >= 1");
    const auto& v = rho.grid()->volumes();
    double s = 0.0;
    for (std::size_t i = 0; i < rho.cells(); ++i)
        if (rho[i] > 0.0)
            s += std::pow(rho[i], m) * v[i];
    return s;
}

RadialDensity rearrange(const RadialDensity& rho)
{
    if (rho.is_non_increasing())
        return rho;
    const RadialGrid& g = *rho.grid();
    const int d = g.params().d;
    const double c = g.params().c;
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < rho.cells(); ++i)
        if (rho[i] > 0.0)
            order.push_back(i);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rho[a] > rho[b]; });

    // Distinct levels with their total volume.
    std::vector<double> level_value;
    std::vector<double> level_volume;
    for (std::size_t i : order) {
        if (!level_value.empty() && level_value.back() == rho[i])
            level_volume.back() += g.volumes()[i];
        else {
            level_value.push_back(rho[i]);
            level_volume.push_back(g.volumes()[i]);
        }
    }
    const auto& nodes = g.nodes();
    std::vector<double> radii;
    std::vector<double> values;
    double cum = 0.0;
    double prev = 0.0;
    for (std::size_t k = 0; k < level_value.size(); ++k) {
        cum += level_volume[k];
        double r = std::min(ball_radius_for_volume(d, c, cum), g.theta_max());
        const std::size_t j = g.nearest_node(r);
        if (std::fabs(nodes[j] - r) <= 1e-14 * r)
            r = nodes[j];
        if (k + 1 == level_value.size() && cum >= g.cumulative().back() * (1.0 - 1e-15))
            r = g.theta_max();
        if (r <= prev)
            continue;
        radii.push_back(r);
        values.push_back(level_value[k]);
        prev = r;
    }
    std::vector<double> new_nodes(nodes.begin(), nodes.end());
    new_nodes.insert(new_nodes.end(), radii.begin(), radii.end());
    std::sort(new_nodes.begin(), new_nodes.end());
    new_nodes.erase(std::unique(new_nodes.begin(), new_nodes.end()), new_nodes.end());
    GridPtr ng = RadialGrid::from_nodes(g.params(), std::move(new_nodes));
    std::vector<double> out(ng->cells(), 0.0);
    std::size_t k = 0;
    for (std::size_t i = 0; i < ng->cells(); ++i) {
        while (k < radii.size() && ng->left(i) >= radii[k])
            ++k;
        if (k < radii.size())
            out[i] = values[k];
    }
    return RadialDensity(ng, std::move(out));
}

RadialDensity rearrange_onto_grid(const RadialDensity& rho)
{
    if (rho.is_non_increasing())
        return rho;
    const RadialDensity fine = rearrange(rho);
    const RadialGrid& g = *rho.grid();
    const RadialGrid& f = *fine.grid();
    std::vector<double> out(g.cells(), 0.0);
    std::size_t j = 0;
    for (std::size_t i = 0; i < g.cells(); ++i) {
        double acc = 0.0;
        while (j < f.cells() && f.right(j) <= g.right(i)) {
            acc += fine[j] * f.volumes()[j];
            ++j;
        }
        out[i] = acc / g.volumes()[i];
    }
    // Averages of a non-increasing profile are non-increasing up to rounding.
    for (std::size_t i = 1; i < out.size(); ++i)
        out[i] = std::min(out[i], out[i - 1]);
    return RadialDensity(rho.grid(), std::move(out));
}

RadialDensity uniform_ball(const GridPtr& grid, double R)
{
    require(R > 0.0, ErrorCode::kInvalidArgument, "uniform_ball: R must be > 0");
    require(R <= grid->theta_max() * (1.0 + 1e-12), ErrorCode::kDomain, "uniform_ball: R exceeds theta_max");
    std::size_t k = grid->nearest_node(R);
    if (k == 0)
        k = 1;
    const double value = 1.0 / grid->cumulative()[k];
    std::vector<double> vals(grid->cells(), 0.0);
    for (std::size_t i = 0; i < k; ++i)
        vals[i] = value;
    RadialDensity rho(grid, std::move(vals));
    rho.snapped = grid->nodes()[k] != R;
    if (rho.snapped)
        std::clog << "hyperfree: uniform_ball radius " << fmt17(R) << " snapped to node " << fmt17(grid->nodes()[k]) << "\n";
    return rho;
}

RadialDensity scaled_indicator(const GridPtr& grid, double alpha, double theta_tilde)
{
    require(alpha >= 0.0, ErrorCode::kInvalidArgument, "scaled_indicator: alpha must be >= 0");
    require(theta_tilde > 0.0 && theta_tilde <= grid->theta_max() * (1.0 + 1e-12), ErrorCode::kDomain,
            "scaled_indicator: theta_tilde out of grid range");
    std::size_t k = grid->nearest_node(theta_tilde);
    if (k == 0)
        k = 1;
    std::vector<double> vals(grid->cells(), 0.0);
    for (std::size_t i = 0; i < k; ++i)
        vals[i] = alpha;
    RadialDensity rho(grid, std::move(vals));
    rho.snapped = grid->nodes()[k] != theta_tilde;
    return rho;
}

TailCheck linf_tail_bound_check(const RadialDensity& rho, double R)
{
    const RadialGrid& g = *rho.grid();
    TailCheck out;
    for (std::size_t i = 0; i < rho.cells(); ++i) {
        if (g.right(i) < R)
            continue;
        if (rho[i] * g.cumulative()[i + 1] > 1.0 + 1e-12) {
            out.ok = false;
            out.violating_cell = i;
            return out;
        }
    }
    return out;
}

GridPtr union_grid(const RadialGrid& a, const RadialGrid& b)
{
    require(a.params().d == b.params().d && a.params().c == b.params().c, ErrorCode::kInvalidArgument,
            "union_grid: manifolds differ");
    std::vector<double> nodes(a.nodes());
    nodes.insert(nodes.end(), b.nodes().begin(), b.nodes().end());
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    return RadialGrid::from_nodes(a.params(), std::move(nodes));
}

RadialDensity refine_to(const RadialDensity& rho, const GridPtr& finer)
{
    const RadialGrid& g = *rho.grid();
    std::vector<double> out(finer->cells(), 0.0);
    for (std::size_t i = 0; i < finer->cells(); ++i) {
        const double mid = 0.5 * (finer->left(i) + finer->right(i));
        if (mid < g.theta_max())
            out[i] = rho[g.locate(mid)];
    }
    return RadialDensity(finer, std::move(out));
}

void write_density(std::ostream& out, const RadialDensity& rho)
{
    const RadialGrid& g = *rho.grid();
    out << "# d=" << g.params().d << " c=" << fmt17(g.params().c) << " cells=" << g.cells() << "\n";
    for (std::size_t i = 0; i < g.cells(); ++i)
        out << fmt17(g.left(i)) << "," << fmt17(g.right(i)) << "," << fmt17(rho[i]) << "\n";
}

RadialDensity read_density(std::istream& in)
{
    std::string line;
    int d = -1;
    double c = -1.0;
    long long cells = -1;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty())
            continue;
        if (t[0] != '#')
            fail(ErrorCode::kParse, "density file: missing header");
        std::istringstream ss(t.substr(1));
        std::string tok;
        while (ss >> tok) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos)
                continue;
            const std::string k = tok.substr(0, eq);
            const std::string v = tok.substr(eq + 1);
            if (k == "d")
                d = static_cast<int>(parse_int(v, "density header d"));
            else if (k == "c")
                c = parse_double(v, "density header c");
            else if (k == "cells")
                cells = parse_int(v, "density header cells");
        }
        break;
    }
    require(d >= 2 && c >= 0.0 && cells >= 1, ErrorCode::kParse, "density file: malformed header");
    std::vector<double> nodes{0.0};
    std::vector<double> values;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        std::istringstream ss(t);
        std::string a, b, v;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, v))
            fail(ErrorCode::kParse, "density file: row needs theta_left,theta_right,value");
        const double left = parse_double(a, "theta_left");
        if (left != nodes.back())
            fail(ErrorCode::kParse, "density file: cells are not contiguous");
        nodes.push_back(parse_double(b, "theta_right"));
        values.push_back(parse_double(v, "value"));
    }
    require(static_cast<long long>(values.size()) == cells, ErrorCode::kParse, "density file: cell count mismatch");
    ManifoldParams p{d, c, c, c};
    return RadialDensity(RadialGrid::from_nodes(p, std::move(nodes)), std::move(values));
}

void write_density_file(const std::string& path, const RadialDensity& rho)
{
    std::ofstream out(path);
    if (!out)
        fail(ErrorCode::kIo, "cannot write density file " + path);
    write_density(out, rho);
    if (!out)
        fail(ErrorCode::kIo, "write failed for " + path);
}

RadialDensity read_density_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        fail(ErrorCode::kIo, "cannot open density file " + path);
    return read_density(in);
}

void BallMixture::validate() const
{
    params.validate();
    require(!balls.empty(), ErrorCode::kInvalidArgument, "mixture: no balls");
    double w = 0.0;
    const std::size_t dim = params.c == 0.0 ? params.d : params.d + 1;
    for (const Ball& b : balls) {
        require(b.radius > 0.0, ErrorCode::kInvalidArgument, "mixture: radii must be > 0");
        require(b.weight >= 0.0, ErrorCode::kInvalidArgument, "mixture: weights must be >= 0");
        require(b.center.x.size() == dim, ErrorCode::kInvalidArgument, "mixture: center dimension mismatch");
        w += b.weight;
    }
    require(std::fabs(w - 1.0) <= 1e-12, ErrorCode::kInvalidArgument, "mixture: weights must sum to 1");
}

Point BallMixture::sample(Rng& rng) const
{
    double u = rng.uniform();
    std::size_t k = 0;
    for (; k + 1 < balls.size(); ++k) {
        if (u < balls[k].weight)
            break;
        u -= balls[k].weight;
    }
    const Ball& b = balls[k];
    const double r = sample_ball_radius(params.d, params.c, b.radius, rng);
    const auto dir = sample_direction(params.d, rng);
    return translate(point_from_polar(params.c, r, dir), b.center, params.c);
}

bool BallMixture::pairwise_disjoint() const
{
    for (std::size_t i = 0; i < balls.size(); ++i)
        for (std::size_t j = i + 1; j < balls.size(); ++j)
            if (distance(balls[i].center, balls[j].center, params.c) < balls[i].radius + balls[j].radius)
                return false;
    return true;
}

double BallMixture::lp_integral_disjoint(double m) const
{
    require(pairwise_disjoint(), ErrorCode::kInvalidArgument, "mixture: balls overlap");
    double s = 0.0;
    for (const Ball& b : balls) {
        if (b.weight == 0.0)
            continue;
        const double vol = ball_volume(params.d, params.c, b.radius);
        s += std::pow(b.weight / vol, m) * vol;
    }
    return s;
}

} // namespace hyperfree
