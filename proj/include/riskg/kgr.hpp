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

#pragma once

#include <complex>
#include <cstdint>

#include "riskg/probing.hpp"

namespace riskg {

/// Second moments of the combined channel-gain pair (h_a, h_b).
struct Covariances
{
    double r_aa = 0.0;               // E{|h_a|^2}
    double r_bb = 0.0;               // E{|h_b|^2}
    std::complex<double> r_ab{0.0};  // E{h_a conj(h_b)}
};

/// Key generation rate evaluation record.
struct KgrReport
{
    double r_aa = 0.0;
    double r_bb = 0.0;
    std::complex<double> r_ab{0.0};
    double q = 0.0;        // w^T R_S w^*  (watts)
    double t = 0.0;        // v^H (R_I^T o R_I) v
    double x = 0.0;        // q (beta_r t + beta_ba)  (watts)
    double kgr_bits = 0.0; // bits per probing round
};

/// Quadratic form w^T R_S w^*; real and non-negative for Hermitian PSD R_S.
double transmit_gain(const CorrelationMatrix& r_s, const Eigen::VectorXcd& w);

/// Quadratic form v^H (R_I^T o R_I) v; real for real symmetric R_I.
double reflection_gain(const CorrelationMatrix& r_i, const Eigen::VectorXcd& v);

/// The scalar the KGR grows with: x = w^T R_S w^* (beta_r v^H R~_I v + beta_ba).
double lemma1_x(const CorrelationMatrix& r_s, const CorrelationMatrix& r_i,
                const Beamformers& bf, const PathLossSet& pl);

/// Closed-form second moments of (h_a, h_b):
///   R_aa = P_B q (beta_r t + beta_ba) + ||w||^2 sigma_a^2
///   R_bb =     q (beta_r t + beta_ba) + sigma_b^2
///   R_ab = sqrt(P_B) q (beta_r t + beta_ba)
Covariances covariances(const CorrelationMatrix& r_s, const CorrelationMatrix& r_i,
                        const Beamformers& bf, const PathLossSet& pl,
                        const SystemConfig& config);

/// Mutual information of a zero-mean complex Gaussian pair:
/// log2(R_aa R_bb / (R_aa R_bb - |R_ab|^2)). Throws std::domain_error when
/// the implied determinant is not positive.
double kgr_general(double r_aa, double r_bb, std::complex<double> r_ab);

/// Equal-noise KGR as a function of the scalar x:
/// log2[ (P_B x + ||w||^2 s2)(x + s2) / ((||w||^2 + P_B) s2 x + ||w||^2 s2^2) ].
double kgr_from_x(double x, double w_norm2, double p_b, double sigma2);

/// Closed-form KGR. Uses the equal-noise expression when
/// sigma_a^2 == sigma_b^2 and falls back to the general 2x2 determinant
/// form otherwise. Throws on non-positive noise variance.
KgrReport kgr_closed_form(const CorrelationMatrix& r_s, const CorrelationMatrix& r_i,
                          const Beamformers& bf, const PathLossSet& pl,
                          const SystemConfig& config);

struct McEstimate
{
    double kgr_bits = 0.0;
    double stderr_bits = 0.0;
    std::size_t trials = 0;
};

/// Monte Carlo oracle: simulates full probing rounds (fresh channel and
/// noise per trial), forms unbiased sample covariances of (h_a, h_b) and
/// returns the plug-in Gaussian mutual information with a bootstrap
/// standard error (200 resamples). Deterministic for a given seed,
/// independent of the thread count.
McEstimate kgr_monte_carlo(const SystemConfig& config, const CorrelationMatrix& r_s,
                           const CorrelationMatrix& r_i, const Beamformers& bf,
                           const PathLossSet& pl, std::size_t trials, std::uint64_t seed,
                           unsigned threads = 1);

/// Same, with path losses derived from the configured geometry.
McEstimate kgr_monte_carlo(const SystemConfig& config, const CorrelationMatrix& r_s,
                           const CorrelationMatrix& r_i, const Beamformers& bf,
                           std::size_t trials, std::uint64_t seed, unsigned threads = 1);

} // namespace riskg
