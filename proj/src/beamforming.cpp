// SPDX-License-Identifier: Apache-2.0
//
// riskg - simulation library for RIS-assisted physical-layer key generation
// over spatially correlated multi-antenna channels
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "riskg/beamforming.hpp"

#include <cmath>
#include <stdexcept>

namespace riskg {

namespace {

/// All-ones Rayleigh quotient of the N-element exponential Toeplitz matrix:
/// (N(1 - rho^2) - 2 rho (1 - rho^N)) / (N (1 - rho)^2).
double ula_lower_bound(int n, double rho)
{
    if (rho == 0.0 || n == 1)
        return 1.0;
    const double one_minus = 1.0 - rho;
    return (n * (1.0 - rho * rho) - 2.0 * rho * (1.0 - std::pow(rho, n))) /
           (n * one_minus * one_minus);
}

/// Row sum of the (2N-1)-circulant extension; its largest eigenvalue, hence
/// an upper bound on lambda_max of the embedded Toeplitz block:
/// (1 + rho - 2 rho^N) / (1 - rho).
double ula_upper_bound_exact(int n, double rho)
{
    if (rho == 0.0 || n == 1)
        return 1.0;
    return (1.0 + rho - 2.0 * std::pow(rho, n)) / (1.0 - rho);
}

/// Truncated closed form of the same bound: (1 + rho)(1 - rho^(N-1))/(1 - rho).
double ula_upper_bound_printed(int n, double rho)
{
    if (rho == 0.0 || n == 1)
        return 1.0;
    return (1.0 + rho) * (1.0 - std::pow(rho, n - 1)) / (1.0 - rho);
}

} // namespace

Eigen::VectorXcd optimal_transmit(const CorrelationMatrix& r_s, double p_a)
{
    if (!(p_a > 0.0))
        throw std::invalid_argument("transmit power must be positive");
    const EigenPair pair = dominant_eigenpair(r_s);
    // The maximizer of w^T R_S w^* is the conjugate of the dominant
    // eigenvector (the quadratic form is Hermitian in w^*).
    Eigen::VectorXcd w = std::sqrt(p_a) * pair.vector.conjugate();
    w *= std::sqrt(p_a) / w.norm(); // ||w||^2 = P_A exactly
    return w;
}

Eigen::VectorXcd optimal_reflection(Eigen::Index n, double theta)
{
    if (n < 1)
        throw std::invalid_argument("reflection vector must have at least one element");
    const std::complex<double> phase{std::cos(theta), std::sin(theta)};
    return Eigen::VectorXcd::Constant(n, phase);
}

Eigen::VectorXcd random_transmit(Eigen::Index m, double p_a, Philox4x32& rng)
{
    if (m < 1 || !(p_a > 0.0))
        throw std::invalid_argument("invalid random transmit beamformer request");
    Eigen::VectorXcd w(m);
    for (Eigen::Index i = 0; i < m; ++i)
        w(i) = rng.complex_normal();
    w *= std::sqrt(p_a) / w.norm();
    return w;
}

Eigen::VectorXcd random_reflection(Eigen::Index n, Philox4x32& rng)
{
    if (n < 1)
        throw std::invalid_argument("reflection vector must have at least one element");
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        const double theta = 2.0 * M_PI * rng.uniform();
        v(i) = std::complex<double>(std::cos(theta), std::sin(theta));
    }
    return v;
}

BoundsReport lemma2_bounds(GridShape shape, double rho, double p_a)
{
    shape.validate();
    if (!(rho >= 0.0) || rho >= 1.0)
        throw std::invalid_argument("correlation index must lie in [0, 1)");
    if (!(p_a > 0.0))
        throw std::invalid_argument("transmit power must be positive");

    BoundsReport report;
    report.p_a = p_a;
    report.rho = rho;
    report.shape = shape;

    report.f_lower = p_a;
    report.f_upper = p_a;
    report.f_upper_printed = p_a;
    report.achieved = p_a;
    for (int n : {shape.horizontal, shape.vertical})
    {
        report.f_lower *= ula_lower_bound(n, rho);
        report.f_upper *= ula_upper_bound_exact(n, rho);
        report.f_upper_printed *= ula_upper_bound_printed(n, rho);
        // lambda_max of the Kronecker product is the product of the factor
        // maxima, so arbitrarily large grids stay cheap.
        report.achieved *= dominant_eigenpair(ula_correlation(n, rho)).value;
    }
    return report;
}

std::pair<Beamformers, KgrReport> joint_optimize(const CorrelationMatrix& r_s,
                                                 const CorrelationMatrix& r_i,
                                                 const PathLossSet& pl,
                                                 const SystemConfig& config)
{
    Beamformers bf;
    bf.w = optimal_transmit(r_s, config.p_a);
    bf.v = optimal_reflection(r_i.dim());
    bf.theta = Eigen::VectorXd::Zero(r_i.dim());
    const KgrReport report = kgr_closed_form(r_s, r_i, bf, pl, config);
    return {std::move(bf), report};
}

} // namespace riskg
