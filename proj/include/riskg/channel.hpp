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

#include <Eigen/Dense>
#include <optional>

#include "riskg/correlation.hpp"
#include "riskg/rng.hpp"

namespace riskg {

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// How the large-scale amplitude loss beta is derived from distance.
/// `Paper` keeps beta = sqrt(zeta0 * d^-alpha) and applies beta^(1/2) once
/// more inside the channel model; `Conventional` uses beta = zeta0 * d^-alpha.
enum class PathLossConvention
{
    Paper,
    Conventional
};

/// Node positions (2-D, meters) and path-loss constants.
struct Geometry
{
    Eigen::Vector2d alice_pos{0.0, 0.0};
    Eigen::Vector2d bob_pos{70.0, 0.0};
    Eigen::Vector2d ris_pos{50.0, 10.0};
    std::optional<Eigen::Vector2d> eve_pos;

    double alpha_ba = 4.0;
    double alpha_ar = 2.0;
    double alpha_br = 2.0;
    double zeta0 = 1e-3; // linear path loss at 1 m

    double dist_ba() const { return (alice_pos - bob_pos).norm(); }
    double dist_ar() const { return (alice_pos - ris_pos).norm(); }
    double dist_br() const { return (bob_pos - ris_pos).norm(); }
    void validate() const;
};

/// Linear amplitude-model path losses of the three legitimate links and the
/// cascaded RIS product beta_r = beta_ar * beta_br.
struct PathLossSet
{
    double beta_ba = 0.0;
    double beta_ar = 0.0;
    double beta_br = 0.0;
    double beta_r = 0.0;

    /// Copy with the RIS links removed; used by the no-RIS baseline.
    PathLossSet without_ris() const { return {beta_ba, 0.0, 0.0, 0.0}; }
};

PathLossSet path_losses(const Geometry& geometry,
                        PathLossConvention convention = PathLossConvention::Paper);

/// Full simulation setup: array shapes, powers, noise and geometry.
/// Powers and noise variances are stored in watts (linear scale).
struct SystemConfig
{
    GridShape bs_grid{4, 4};
    RisLayout ris_layout{{8, 8}, 0.05, 0.1};
    double rho = 0.3;

    double p_a = 0.1; // watts
    double p_b = 0.1; // watts
    double sigma2 = 1e-11;
    std::optional<double> sigma_a2; // defaults to sigma2
    std::optional<double> sigma_b2; // defaults to sigma2

    int eve_antennas = 0;
    bool sample_eve = false;
    double sigma_e2 = 1e-11;

    Geometry geometry;
    PathLossConvention pathloss_convention = PathLossConvention::Paper;

    int bs_antennas() const { return bs_grid.total(); }
    int ris_elements() const { return ris_layout.size(); }
    double noise_a() const { return sigma_a2.value_or(sigma2); }
    double noise_b() const { return sigma_b2.value_or(sigma2); }
    void set_power_dbm(double dbm) { p_a = p_b = dbm_to_watts(dbm); }
    void validate() const;
};

/// One draw of all channel matrices. Reciprocity holds by construction:
/// the reverse-direction channels are transposes of the stored ones.
struct ChannelRealization
{
    Eigen::MatrixXcd g_ra; // RIS -> Alice, M x N
    Eigen::VectorXcd h_br; // Bob -> RIS, N
    Eigen::VectorXcd h_ba; // Bob -> Alice, M

    // Optional eavesdropper channels.
    Eigen::MatrixXcd g_re; // RIS -> Eve, K x N
    Eigen::MatrixXcd h_ae; // Alice -> Eve, K x M
    Eigen::VectorXcd h_eb; // Bob -> Eve, K

    Eigen::MatrixXcd g_ar() const { return g_ra.transpose(); }
    bool has_eve() const { return h_eb.size() > 0; }
};

/// Samples Kronecker-model realizations. The correlation square roots are
/// computed once at construction, which keeps per-draw cost at two small
/// matrix products; all randomness comes from the caller's generator.
class ChannelSampler
{
public:
    ChannelSampler(const SystemConfig& config, const CorrelationMatrix& r_s,
                   const CorrelationMatrix& r_i);
    ChannelSampler(const SystemConfig& config, const CorrelationMatrix& r_s,
                   const CorrelationMatrix& r_i, const PathLossSet& pl);

    ChannelRealization sample(Philox4x32& rng) const;
    const PathLossSet& path_loss() const { return pl_; }

private:
    int m_;
    int n_;
    int k_;
    bool sample_eve_;
    PathLossSet pl_;
    double beta_ae_ = 0.0;
    double beta_er_ = 0.0;
    double beta_be_ = 0.0;
    Eigen::MatrixXcd sqrt_r_s_;
    Eigen::MatrixXcd sqrt_r_i_;
    // Real-valued copies of the square roots; the constructions used here are
    // real symmetric, and splitting the complex products into real/imaginary
    // parts halves the per-draw multiplication cost.
    bool real_roots_ = false;
    Eigen::MatrixXd sqrt_r_s_real_;
    Eigen::MatrixXd sqrt_r_i_real_;

    Eigen::MatrixXcd correlate(const Eigen::MatrixXcd& core, double beta) const;
};

/// Convenience wrapper: one realization drawn with freshly computed
/// correlation square roots. Prefer ChannelSampler inside loops.
ChannelRealization sample_channels(const SystemConfig& config, const CorrelationMatrix& r_s,
                                   const CorrelationMatrix& r_i, Philox4x32& rng);

/// Fill a matrix with i.i.d. CN(0,1) entries in a fixed (column-major) order.
Eigen::MatrixXcd complex_gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Philox4x32& rng);

} // namespace riskg
