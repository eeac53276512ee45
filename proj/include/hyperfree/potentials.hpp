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

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hyperfree/geometry.hpp"

namespace hyperfree {

enum class PotentialFamily { kRiesz, kPower, kLog, kBoundedAttractive, kTabulated };
enum class TailClass { kZero, kInfinity };

// Radial interaction profile k(s), s = geodesic distance, with its behavior at the origin.
struct RadialKernel {
    std::function<double(double)> f;
    // k(s) ~ s^{-singular_exponent} near 0 (0 for bounded kernels).
    double singular_exponent = 0.0;
    bool log_singular = false;
    // k is constant on [0, cutoff] when cutoff > 0.
    double cutoff = 0.0;
    // Identity used for caching; empty disables caching.
    std::string key;
};

class PotentialSpec {
public:
    // h = -strength * theta^{-beta}; strength defaults to 1 / beta.
    static PotentialSpec riesz(double beta, std::optional<double> strength = std::nullopt);
    // h = theta^p.
    static PotentialSpec power(double p);
    // h = log theta.
    static PotentialSpec log();
    // h = -(1 + theta)^{-beta}.
    static PotentialSpec bounded_attractive(double beta);
    // Piecewise-linear table, non-decreasing; singularity data is estimated from the first decades.
    static PotentialSpec tabulated(std::vector<double> theta, std::vector<double> values, TailClass tail);
    // Parse from "potential.*" keys of a flat key/value config.
    static PotentialSpec from_config(const std::map<std::string, std::string>& kv);

    double operator()(double theta) const;

    PotentialFamily family() const { return family_; }
    double singularity_exponent() const { return s0_; }
    // Limit of theta^{s0} h(theta) at 0+; -inf for the logarithm.
    double origin_coefficient() const { return coefficient_; }
    TailClass tail() const { return tail_; }
    bool heuristic() const { return heuristic_; }
    double beta() const { return beta_; }
    double strength() const { return strength_; }
    double p() const { return p_; }
    const std::vector<double>& table_theta() const { return table_theta_; }
    const std::vector<double>& table_values() const { return table_values_; }
    // Largest argument at which the potential may be evaluated.
    double max_argument() const;

    std::string describe() const;
    RadialKernel kernel() const;
    // Kernel h(max(s, delta)).
    RadialKernel truncated_kernel(double delta) const;

private:
    PotentialFamily family_ = PotentialFamily::kPower;
    double beta_ = 0.0;
    double strength_ = 0.0;
    double p_ = 0.0;
    double s0_ = 0.0;
    double coefficient_ = 0.0;
    TailClass tail_ = TailClass::kInfinity;
    bool heuristic_ = false;
    std::vector<double> table_theta_;
    std::vector<double> table_values_;
};

const char* family_name(PotentialFamily f);
const char* tail_name(TailClass t);

// Evaluates h on n log-spaced points in [lo, hi] and reports whether the sequence is non-decreasing.
bool monotonicity_scan(const PotentialSpec& h, double lo, double hi, int n = 1000);
// Sign/trend of h at theta = 1e3 (or the last table point) against the declared tail class.
bool tail_class_consistent(const PotentialSpec& h);

struct Admissibility {
    bool admissible = false;
    double alpha = 0.0;
    double threshold = 0.0;
    bool heuristic = false;
};

Admissibility check_singularity_admissible(const PotentialSpec& h, double m, int d);

struct NonexistenceResult {
    bool nonexistent = false;
    // "critical-singularity", "supercritical-singularity" or empty.
    std::string condition;
    bool heuristic = false;
};

// Coefficient 2^{d(m-1)+1} / ((m-1) w(d)^{m-1}) of the entropy barrier.
double nonexistence_barrier_coefficient(double m, int d);
NonexistenceResult check_nonexistence(const PotentialSpec& h, double m, int d);

struct LowerBoundDecomposition {
    double alpha = 0.0;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    std::string valid_range;
    // Minimum of h + gamma1 theta^{-alpha} + gamma2 over the verification grid.
    double verification_min = 0.0;
};

LowerBoundDecomposition lower_bound_decomposition(const PotentialSpec& h, double m, int d, double alpha, double eps);

enum class Verdict {
    kNonexistenceSingular,
    kExistsCompactSupport,
    kExistsBounded,
    kExistsBoundedConditional,
    kUndetermined,
};

const char* verdict_name(Verdict v);

struct RegimeVerdict {
    Verdict verdict = Verdict::kUndetermined;
    std::string condition;
    std::optional<double> theta0;
    double alpha = 0.0;
    bool heuristic = false;
};

// Threshold -2 / ((m-1) |B_{theta0/2}|^{m-1}) in the bounded-support condition.
double growth_threshold(double theta0, double m, const ManifoldParams& p);
std::optional<double> find_theta0(const PotentialSpec& h, double m, const ManifoldParams& p);
RegimeVerdict classify_regime(const PotentialSpec& h, double m, const ManifoldParams& p);

} // namespace hyperfree
