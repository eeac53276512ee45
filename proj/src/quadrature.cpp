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

#include "hyperfree/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include <Eigen/Dense>

#include "hyperfree/error.hpp"

namespace hyperfree {

namespace {

// Golub-Welsch on the Jacobi matrix of the monic recurrence.
QuadratureRule golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag, double mu0)
{
    const int n = static_cast<int>(diag.size());
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        J(i, i) = diag(i);
        if (i + 1 < n) {
            J(i, i + 1) = offdiag(i);
            J(i + 1, i) = offdiag(i);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = es.eigenvalues()(i);
        const double v = es.eigenvectors()(0, i);
        rule.weights[i] = mu0 * v * v;
    }
    return rule;
}

// Newton polish of Legendre roots for full double accuracy.
void polish_legendre(QuadratureRule& rule)
{
    const int n = static_cast<int>(rule.nodes.size());
    for (int i = 0; i < n; ++i) {
        double x = rule.nodes[i];
        double dp = 1.0;
        for (int it = 0; it < 3; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double pn = n == 0 ? 1.0 : p1;
            double pm = n == 1 ? 1.0 : p0;
            dp = n * (x * pn - pm) / (x * x - 1.0);
            x -= pn / dp;
        }
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

} // namespace

const QuadratureRule& gauss_legendre(int n)
{
    require(n >= 1 && n <= 512, ErrorCode::kInvalidArgument, "gauss_legendre: order out of range");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<QuadratureRule>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end())
        return *it->second;
    Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd b(n > 1 ? n - 1 : 0);
    for (int k = 1; k < n; ++k)
        b(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
    auto rule = std::make_unique<QuadratureRule>(golub_welsch(a, b, 2.0));
    if (n > 1)
        polish_legendre(*rule);
    auto& ref = *rule;
    cache.emplace(n, std::move(rule));
    return ref;
}

QuadratureRule gauss_jacobi(int n, double alpha, double beta)
{
    require(n >= 1 && n <= 512, ErrorCode::kInvalidArgument, "gauss_jacobi: order out of range");
    require(alpha > -1.0 && beta > -1.0, ErrorCode::kInvalidArgument, "gauss_jacobi: exponents must exceed -1");
    Eigen::VectorXd a(n);
    Eigen::VectorXd b(n > 1 ? n - 1 : 0);
    const double ab = alpha + beta;
    for (int k = 0; k < n; ++k) {
        const double t = 2.0 * k + ab;
        if (k == 0)
            a(k) = (beta - alpha) / (ab + 2.0);
        else
            a(k) = (beta * beta - alpha * alpha) / (t * (t + 2.0));
    }
    for (int k = 1; k < n; ++k) {
        const double t = 2.0 * k + ab;
        const double num = 4.0 * k * (k + alpha) * (k + beta) * (k + ab);
        const double den = t * t * (t + 1.0) * (t - 1.0);
        b(k - 1) = std::sqrt(num / den);
    }
    const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) -
                                std::lgamma(ab + 2.0));
    return golub_welsch(a, b, mu0);
}

} // namespace hyperfree
