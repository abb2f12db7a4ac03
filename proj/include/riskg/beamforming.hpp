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

#include "riskg/kgr.hpp"

namespace riskg {

/// Power-constrained transmit beamformer maximizing w^T R_S w^*:
/// sqrt(P_A) times the (conjugated) dominant eigenvector of R_S.
/// Satisfies ||w||^2 = P_A and w^T R_S w^* = P_A lambda_max.
Eigen::VectorXcd optimal_transmit(const CorrelationMatrix& r_s, double p_a);

/// Unit-modulus reflection vector maximizing v^H (R_I^T o R_I) v: all
/// elements share one phase. The common phase is a free parameter; the
/// attained value is the squared Frobenius norm of R_I.
Eigen::VectorXcd optimal_reflection(Eigen::Index n, double theta = 0.0);

/// Isotropic random direction scaled to ||w||^2 = P_A.
Eigen::VectorXcd random_transmit(Eigen::Index m, double p_a, Philox4x32& rng);

/// Independent uniform phases on [0, 2*pi).
Eigen::VectorXcd random_reflection(Eigen::Index n, Philox4x32& rng);

/// Analytic envelope of the optimal transmit gain P_A lambda_max(R_S) for a
/// planar array with per-dimension exponential correlation.
struct BoundsReport
{
    double f_lower = 0.0;         // all-ones Rayleigh-quotient lower bound
    double f_upper = 0.0;         // circulant-extension upper bound (exact row sum)
    double f_upper_printed = 0.0; // same bound in its truncated closed form
    double achieved = 0.0;        // P_A lambda_max(R_S)
    double p_a = 0.0;
    double rho = 0.0;
    GridShape shape;
};

/// Lower/upper bounds for P_A lambda_max of the planar-array correlation,
/// together with the exactly achieved value. The upper bound comes from
/// embedding each per-dimension Toeplitz factor into a (2N-1)-circulant and
/// interlacing; it is evaluated both as the exact circulant row sum and in
/// the truncated closed form, which differ by rho^(N-1) per dimension.
BoundsReport lemma2_bounds(GridShape shape, double rho, double p_a);

/// Globally optimal beamformer pair and its closed-form KGR. The objective
/// separates: w maximizes w^T R_S w^* alone and v maximizes v^H R~_I v alone.
std::pair<Beamformers, KgrReport> joint_optimize(const CorrelationMatrix& r_s,
                                                 const CorrelationMatrix& r_i,
                                                 const PathLossSet& pl,
                                                 const SystemConfig& config);

} // namespace riskg
