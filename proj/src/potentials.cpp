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

#include "hyperfree/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "hyperfree/error.hpp"
#include "hyperfree/util.hpp"

namespace hyperfree {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace

PotentialSpec PotentialSpec::riesz(double beta, std::optional<double> strength)
{
    require(beta > 0.0 && std::isfinite(beta), ErrorCode::kInvalidArgument, "riesz: beta must be > 0");
    PotentialSpec h;
    h.family_ = PotentialFamily::kRiesz;
    h.beta_ = beta;
    h.strength_ = strength.value_or(1.0 / beta);
    require(h.strength_ > 0.0, ErrorCode::kInvalidArgument, "riesz: strength must be > 0");
    h.s0_ = beta;
    h.coefficient_ = -h.strength_;
    h.tail_ = TailClass::kZero;
    return h;
}

PotentialSpec PotentialSpec::power(double p)
{
    require(p > 0.0 && std::isfinite(p), ErrorCode::kInvalidArgument, "power: p must be > 0");
    PotentialSpec h;
    h.family_ = PotentialFamily::kPower;
    h.p_ = p;
    h.s0_ = 0.0;
    h.coefficient_ = 0.0;
    h.tail_ = TailClass::kInfinity;
    return h;
}

PotentialSpec PotentialSpec::log()
{
    PotentialSpec h;
    h.family_ = PotentialFamily::kLog;
    h.s0_ = 0.0;
    h.coefficient_ = -kInf;
    h.tail_ = TailClass::kInfinity;
    return h;
}

PotentialSpec PotentialSpec::bounded_attractive(double beta)
{
    require(beta > 0.0 && std::isfinite(beta), ErrorCode::kInvalidArgument, "bounded-attractive: beta must be > 0");
    PotentialSpec h;
    h.family_ = PotentialFamily::kBoundedAttractive;
    h.beta_ = beta;
    h.s0_ = 0.0;
    h.coefficient_ = -1.0;
    h.tail_ = TailClass::kZero;
    return h;
}

PotentialSpec PotentialSpec::tabulated(std::vector<double> theta, std::vector<double> values, TailClass tail)
{
    require(theta.size() == values.size() && theta.size() >= 2, ErrorCode::kInvalidArgument,
            "tabulated: need at least two (theta, value) pairs");
    require(theta.front() >= 0.0, ErrorCode::kInvalidArgument, "tabulated: theta must be >= 0");
    for (std::size_t i = 1; i < theta.size(); ++i) {
        require(theta[i] > theta[i - 1], ErrorCode::kInvalidArgument, "tabulated: theta must be strictly increasing");
        require(values[i] >= values[i - 1], ErrorCode::kInvalidArgument, "tabulated: values must be non-decreasing");
    }
    for (double v : values)
        require(std::isfinite(v), ErrorCode::kInvalidArgument, "tabulated: values must be finite");
    PotentialSpec h;
    h.family_ = PotentialFamily::kTabulated;
    h.tail_ = tail;
    h.heuristic_ = true;
    if (theta.front() == 0.0) {
        h.s0_ = 0.0;
        h.coefficient_ = values.front();
    } else {
        // Log-log regression of |h| over the three smallest decades of the table.
        const double lo = theta.front();
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (std::size_t i = 0; i < theta.size() && theta[i] <= lo * 1e3; ++i) {
            if (values[i] >= 0.0)
                continue;
            const double x = std::log(theta[i]);
            const double y = std::log(-values[i]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++n;
        }
        double slope = 0.0;
        if (n >= 2 && n * sxx - sx * sx > 0.0)
            slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        h.s0_ = slope < -1e-3 ? -slope : 0.0;
        h.coefficient_ = values.front() * std::pow(theta.front(), h.s0_);
    }
    h.table_theta_ = std::move(theta);
    h.table_values_ = std::move(values);
    return h;
}

namespace {

std::vector<double> parse_list(const std::string& s)
{
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_double(item, "potential table entry"));
    return out;
}

TailClass parse_tail(const std::string& s)
{
    if (s == "zero")
        return TailClass::kZero;
    if (s == "infinity")
        return TailClass::kInfinity;
    fail(ErrorCode::kParse, "potential.tail must be zero or infinity, got '" + s + "'");
}

} // namespace

PotentialSpec PotentialSpec::from_config(const std::map<std::string, std::string>& kv)
{
    auto get = [&](const std::string& k) -> std::optional<std::string> {
        auto it = kv.find(k);
        if (it == kv.end())
            return std::nullopt;
        return it->second;
    };
    auto need = [&](const std::string& k) {
        auto v = get(k);
        if (!v)
            fail(ErrorCode::kParse, "missing config key " + k);
        return *v;
    };
    const std::string family = need("potential.family");
    if (family == "riesz") {
        std::optional<double> strength;
        if (auto s = get("potential.strength"))
            strength = parse_double(*s, "potential.strength");
        return riesz(parse_double(need("potential.beta"), "potential.beta"), strength);
    }
    if (family == "power")
        return power(parse_double(need("potential.p"), "potential.p"));
    if (family == "log")
        return log();
    if (family == "bounded-attractive" || family == "bounded")
        return bounded_attractive(parse_double(need("potential.beta"), "potential.beta"));
    if (family == "tabulated") {
        const TailClass tail = parse_tail(need("potential.tail"));
        std::vector<double> th, vals;
        if (auto path = get("potential.table")) {
            std::ifstream in(*path);
            if (!in)
                fail(ErrorCode::kIo, "cannot open potential table " + *path);
            std::string line;
            while (std::getline(in, line)) {
                const auto t = trim(line);
                if (t.empty() || t[0] == '#')
                    continue;
                const auto comma = t.find(',');
                if (comma == std::string::npos)
                    fail(ErrorCode::kParse, "potential table row needs theta,value: " + t);
                th.push_back(parse_double(t.substr(0, comma), "potential table theta"));
                vals.push_back(parse_double(t.substr(comma + 1), "potential table value"));
            }
        } else {
            th = parse_list(need("potential.theta"));
            vals = parse_list(need("potential.values"));
        }
        return tabulated(std::move(th), std::move(vals), tail);
    }
    fail(ErrorCode::kParse, "unknown potential.family '" + family + "'");
}

double PotentialSpec::operator()(double theta) const
{
    if (std::isnan(theta) || theta < 0.0)
        fail(ErrorCode::kDomain, "potential: theta must be >= 0");
    switch (family_) {
    case PotentialFamily::kRiesz:
        if (theta == 0.0)
            return -kInf;
        return -strength_ * std::pow(theta, -beta_);
    case PotentialFamily::kPower:
        return std::pow(theta, p_);
    case PotentialFamily::kLog:
        if (theta == 0.0)
            return -kInf;
        return std::log(theta);
    case PotentialFamily::kBoundedAttractive:
        return -std::pow(1.0 + theta, -beta_);
    case PotentialFamily::kTabulated: {
        const auto& x = table_theta_;
        if (theta < x.front() || theta > x.back())
            fail(ErrorCode::kExtrapolation, "tabulated potential: theta outside table range");
        auto it = std::upper_bound(x.begin(), x.end(), theta);
        if (it == x.end())
            return table_values_.back();
        const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
        const double w = (theta - x[i]) / (x[i + 1] - x[i]);
        return table_values_[i] + w * (table_values_[i + 1] - table_values_[i]);
    }
    }
    return 0.0;
}

double PotentialSpec::max_argument() const
{
    if (family_ == PotentialFamily::kTabulated)
        return table_theta_.back();
    return kInf;
}

std::string PotentialSpec::describe() const
{
    char buf[256];
    switch (family_) {
    case PotentialFamily::kRiesz:
        std::snprintf(buf, sizeof buf, "riesz(beta=%.17g,strength=%.17g)", beta_, strength_);
        break;
    case PotentialFamily::kPower:
        std::snprintf(buf, sizeof buf, "power(p=%.17g)", p_);
        break;
    case PotentialFamily::kLog:
        std::snprintf(buf, sizeof buf, "log");
        break;
    case PotentialFamily::kBoundedAttractive:
        std::snprintf(buf, sizeof buf, "bounded-attractive(beta=%.17g)", beta_);
        break;
    case PotentialFamily::kTabulated: {
        std::string s = "tabulated(";
        for (std::size_t i = 0; i < table_theta_.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g:%.17g;", table_theta_[i], table_values_[i]);
            s += buf;
        }
        return s + ")";
    }
    }
    return buf;
}

RadialKernel PotentialSpec::kernel() const
{
    RadialKernel k;
    PotentialSpec copy = *this;
    k.f = [copy](double s) { return copy(s); };
    k.singular_exponent = family_ == PotentialFamily::kLog ? 0.0 : s0_;
    k.log_singular = family_ == PotentialFamily::kLog;
    k.key = describe();
    return k;
}

RadialKernel PotentialSpec::truncated_kernel(double delta) const
{
    require(delta > 0.0, ErrorCode::kInvalidArgument, "truncated_kernel: delta must be > 0");
    RadialKernel k;
    PotentialSpec copy = *this;
    k.f = [copy, delta](double s) { return copy(std::max(s, delta)); };
    k.cutoff = delta;
    char buf[64];
    std::snprintf(buf, sizeof buf, "|cut=%.17g", delta);
    k.key = describe() + buf;
    return k;
}

const char* family_name(PotentialFamily f)
{
    switch (f) {
    case PotentialFamily::kRiesz:
        return "riesz";
    case PotentialFamily::kPower:
        return "power";
    case PotentialFamily::kLog:
        return "log";
    case PotentialFamily::kBoundedAttractive:
        return "bounded-attractive";
    case PotentialFamily::kTabulated:
        return "tabulated";
    }
    return "?";
}

const char* tail_name(TailClass t) { return t == TailClass::kZero ? "zero" : "infinity"; }

bool monotonicity_scan(const PotentialSpec& h, double lo, double hi, int n)
{
    require(lo > 0.0 && hi > lo && n >= 2, ErrorCode::kInvalidArgument, "monotonicity_scan: bad range");
    hi = std::min(hi, h.max_argument());
    if (!h.table_theta().empty())
        lo = std::max(lo, h.table_theta().front());
    double prev = -kInf;
    for (int i = 0; i < n; ++i) {
        const double t = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
        const double v = h(t);
        if (v < prev)
            return false;
        prev = v;
    }
    return true;
}

bool tail_class_consistent(const PotentialSpec& h)
{
    const double far = std::min(1e3, h.max_argument());
    const double near = std::min(1.0, 0.5 * far);
    const double hf = h(far);
    const double hn = h(near);
    if (h.tail() == TailClass::kZero)
        return hf <= 0.0 && std::fabs(hf) <= std::fabs(hn);
    return hf > 0.0 && hf > hn;
}

Admissibility check_singularity_admissible(const PotentialSpec& h, double m, int d)
{
    require(m > 1.0, ErrorCode::kInvalidArgument, "admissibility: m must be > 1");
    Admissibility a;
    a.threshold = std::min(d * (m - 1.0), static_cast<double>(d));
    a.admissible = h.singularity_exponent() < a.threshold;
    a.alpha = 0.5 * (h.singularity_exponent() + a.threshold);
    a.heuristic = h.heuristic();
    return a;
}

double nonexistence_barrier_coefficient(double m, int d)
{
    const double e = d * (m - 1.0);
    return std::pow(2.0, e + 1.0) / ((m - 1.0) * std::pow(unit_ball_volume(d), m - 1.0));
}

NonexistenceResult check_nonexistence(const PotentialSpec& h, double m, int d)
{
    require(m > 1.0, ErrorCode::kInvalidArgument, "nonexistence: m must be > 1");
    NonexistenceResult r;
    r.heuristic = h.heuristic();
    const double s0 = h.singularity_exponent();
    const double a = h.origin_coefficient();
    if (h.family() == PotentialFamily::kLog)
        return r;
    // liminf theta^d h < 0.
    if (a < 0.0 && s0 >= static_cast<double>(d)) {
        r.nonexistent = true;
        r.condition = "supercritical-singularity";
        return r;
    }
    // h + K theta^{-d(m-1)} -> -inf.
    const double e = d * (m - 1.0);
    const double K = nonexistence_barrier_coefficient(m, d);
    if (a < 0.0 && (s0 > e || (s0 == e && -a > K))) {
        r.nonexistent = true;
        r.condition = "critical-singularity";
    }
    return r;
}

namespace {

// Golden-section minimization of f on [a, b].
template <class F>
double golden_min(F&& f, double a, double b)
{
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 200 && (b - a) > 1e-15 * (std::fabs(a) + std::fabs(b)); ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    return std::min(f1, f2);
}

} // namespace

LowerBoundDecomposition lower_bound_decomposition(const PotentialSpec& h, double m, int d, double alpha, double eps)
{
    require(eps > 0.0, ErrorCode::kInvalidArgument, "lower_bound_decomposition: eps must be > 0");
    const Admissibility adm = check_singularity_admissible(h, m, d);
    require(adm.admissible, ErrorCode::kNotAdmissible, "lower_bound_decomposition: potential not admissible");
    require(alpha > h.singularity_exponent() && alpha < adm.threshold, ErrorCode::kNotAdmissible,
            "lower_bound_decomposition: alpha must lie in (s0, min(d(m-1), d))");
    LowerBoundDecomposition out;
    out.alpha = alpha;
    out.gamma2 = eps;
    const double lo_dom = h.table_theta().empty() ? 0.0 : h.table_theta().front();
    const double hi_dom = std::min(h.max_argument(), 1e300);
    const double vlo = std::max(1e-6, lo_dom > 0.0 ? lo_dom : 1e-6);
    const double vhi = std::min(1e3, hi_dom);
    char buf[96];
    std::snprintf(buf, sizeof buf, "[%.6g, %.6g]", vlo, vhi);
    out.valid_range = buf;

    const double inf_h = (h.singularity_exponent() > 0.0 || h.family() == PotentialFamily::kLog)
                             ? -kInf
                             : (lo_dom > 0.0 ? h(lo_dom) : h(0.0));
    if (inf_h >= -eps) {
        out.gamma1 = 0.0;
    } else {
        double theta2 = 1.0;
        while (h(theta2) < -eps) {
            theta2 *= 2.0;
            require(theta2 <= hi_dom, ErrorCode::kDomain, "lower_bound_decomposition: h stays below -eps");
        }
        const double theta1 = 0.5 * theta2;
        // gamma bounds -theta^alpha h on (0, theta1].
        double gamma = 0.0;
        const double tmin = std::max(lo_dom, theta1 * 1e-40);
        const int n = 4000;
        for (int i = 0; i <= n; ++i) {
            const double t = tmin * std::pow(theta1 / tmin, static_cast<double>(i) / n);
            if (t <= 0.0)
                continue;
            gamma = std::max(gamma, -std::pow(t, alpha) * h(t));
        }
        gamma = gamma * (1.0 + 1e-9) + 1e-300;
        auto g = [&](double t) { return h(t) + gamma * std::pow(t, -alpha); };
        const int ng = 10000;
        double best = kInf;
        int ibest = 0;
        std::vector<double> grid(ng + 1);
        for (int i = 0; i <= ng; ++i) {
            grid[i] = theta1 * std::pow(theta2 / theta1, static_cast<double>(i) / ng);
            const double v = g(grid[i]);
            if (v < best) {
                best = v;
                ibest = i;
            }
        }
        const double a = grid[std::max(ibest - 1, 0)];
        const double b = grid[std::min(ibest + 1, ng)];
        double C = std::min(best, golden_min(g, a, b));
        C -= 1e-9 * (1.0 + std::fabs(C));
        out.gamma1 = C < 0.0 ? gamma - C * std::pow(theta2, alpha) : gamma;
    }
    double vmin = kInf;
    const int nv = 100000;
    for (int i = 0; i <= nv; ++i) {
        const double t = vlo * std::pow(vhi / vlo, static_cast<double>(i) / nv);
        vmin = std::min(vmin, h(t) + out.gamma1 * std::pow(t, -alpha) + out.gamma2);
    }
    out.verification_min = vmin;
    return out;
}

const char* verdict_name(Verdict v)
{
    switch (v) {
    case Verdict::kNonexistenceSingular:
        return "NonexistenceSingular";
    case Verdict::kExistsCompactSupport:
        return "ExistsCompactSupport";
    case Verdict::kExistsBounded:
        return "ExistsBounded";
    case Verdict::kExistsBoundedConditional:
        return "ExistsBoundedConditional";
    case Verdict::kUndetermined:
        return "Undetermined";
    }
    return "?";
}

double growth_threshold(double theta0, double m, const ManifoldParams& p)
{
    const double vol = ball_volume(p.d, p.c, 0.5 * theta0);
    return -2.0 / ((m - 1.0) * std::pow(vol, m - 1.0));
}

std::optional<double> find_theta0(const PotentialSpec& h, double m, const ManifoldParams& p)
{
    for (double t = 1.0; t <= 1e6 && t <= h.max_argument(); t *= 2.0) {
        if (h(t) < growth_threshold(t, m, p))
            return t;
    }
    return std::nullopt;
}

RegimeVerdict classify_regime(const PotentialSpec& h, double m, const ManifoldParams& p)
{
    p.validate();
    require(m > 1.0, ErrorCode::kInvalidArgument, "classify_regime: m must be > 1");
    RegimeVerdict v;
    v.heuristic = h.heuristic();
    const NonexistenceResult ne = check_nonexistence(h, m, p.d);
    if (ne.nonexistent) {
        v.verdict = Verdict::kNonexistenceSingular;
        v.condition = ne.condition;
        return v;
    }
    const Admissibility adm = check_singularity_admissible(h, m, p.d);
    v.alpha = adm.alpha;
    if (!adm.admissible) {
        v.verdict = Verdict::kUndetermined;
        v.condition = "not-admissible";
        return v;
    }
    if (h.tail() == TailClass::kInfinity) {
        v.verdict = Verdict::kExistsCompactSupport;
        v.condition = "tail-infinity";
        return v;
    }
    if (m > 2.0) {
        v.verdict = Verdict::kExistsBounded;
        v.condition = "m>2";
        return v;
    }
    v.theta0 = find_theta0(h, m, p);
    if (v.theta0) {
        v.verdict = Verdict::kExistsBoundedConditional;
        v.condition = "volume-growth";
    } else {
        v.verdict = Verdict::kUndetermined;
        v.condition = "volume-growth-not-found";
    }
    return v;
}

} // namespace hyperfree
