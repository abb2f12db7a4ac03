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

#include "riskg/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace riskg {

namespace {

double beta_from_distance(double dist, double alpha, double zeta0, PathLossConvention conv)
{
    if (!(dist > 0.0))
        throw std::invalid_argument("node positions must not coincide");
    const double loss = zeta0 * std::pow(dist, -alpha);
    return conv == PathLossConvention::Paper ? std::sqrt(loss) : loss;
}

} // namespace

void Geometry::validate() const
{
    if (!alice_pos.allFinite() || !bob_pos.allFinite() || !ris_pos.allFinite())
        throw std::invalid_argument("node positions must be finite");
    if (eve_pos && !eve_pos->allFinite())
        throw std::invalid_argument("eve position must be finite");
    if (!(alpha_ba > 0.0) || !(alpha_ar > 0.0) || !(alpha_br > 0.0))
        throw std::invalid_argument("path-loss exponents must be positive");
    if (!(zeta0 > 0.0))
        throw std::invalid_argument("zeta0 must be positive");
    if (!(dist_ba() > 0.0) || !(dist_ar() > 0.0) || !(dist_br() > 0.0))
        throw std::invalid_argument("node positions must be pairwise distinct");
}

PathLossSet path_losses(const Geometry& geometry, PathLossConvention convention)
{
    geometry.validate();
    PathLossSet pl;
    pl.beta_ba = beta_from_distance(geometry.dist_ba(), geometry.alpha_ba, geometry.zeta0, convention);
    pl.beta_ar = beta_from_distance(geometry.dist_ar(), geometry.alpha_ar, geometry.zeta0, convention);
    pl.beta_br = beta_from_distance(geometry.dist_br(), geometry.alpha_br, geometry.zeta0, convention);
    pl.beta_r = pl.beta_ar * pl.beta_br;
    return pl;
}

void SystemConfig::validate() const
{
    bs_grid.validate();
    ris_layout.validate();
    geometry.validate();
    if (!(p_a > 0.0) || !(p_b > 0.0))
        throw std::invalid_argument("transmit powers must be positive");
    if (!(sigma2 > 0.0))
        throw std::invalid_argument("noise variance must be positive");
    if (!(rho >= 0.0) || rho >= 1.0)
        throw std::invalid_argument("BS correlation index must lie in [0, 1)");
    if (eve_antennas < 0)
        throw std::invalid_argument("eve antenna count must be non-negative");
    if (sample_eve && eve_antennas < 1)
        throw std::invalid_argument("eve sampling requires at least one eve antenna");
    if (sample_eve && !geometry.eve_pos)
        throw std::invalid_argument("eve sampling requires an eve position");
}

Eigen::MatrixXcd complex_gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Philox4x32& rng)
{
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            m(i, j) = rng.complex_normal();
    return m;
}

ChannelSampler::ChannelSampler(const SystemConfig& config, const CorrelationMatrix& r_s,
                               const CorrelationMatrix& r_i)
    : ChannelSampler(config, r_s, r_i, path_losses(config.geometry, config.pathloss_convention))
{
}

ChannelSampler::ChannelSampler(const SystemConfig& config, const CorrelationMatrix& r_s,
                               const CorrelationMatrix& r_i, const PathLossSet& pl)
    : m_(config.bs_antennas()),
      n_(config.ris_elements()),
      k_(config.eve_antennas),
      sample_eve_(config.sample_eve),
      pl_(pl)
{
    if (r_s.dim() != m_)
        throw std::invalid_argument("R_S dimension must equal the BS antenna count");
    if (r_i.dim() != n_)
        throw std::invalid_argument("R_I dimension must equal the RIS element count");
    sqrt_r_s_ = matrix_sqrt(r_s);
    sqrt_r_i_ = matrix_sqrt(r_i);
    if (sqrt_r_s_.imag().cwiseAbs().maxCoeff() <= 1e-13 &&
        sqrt_r_i_.imag().cwiseAbs().maxCoeff() <= 1e-13)
    {
        real_roots_ = true;
        sqrt_r_s_real_ = sqrt_r_s_.real();
        sqrt_r_i_real_ = sqrt_r_i_.real();
    }

    if (sample_eve_)
    {
        const Geometry& g = config.geometry;
        if (!g.eve_pos)
            throw std::invalid_argument("eve sampling requires an eve position");
        const auto conv = config.pathloss_convention;
        const double d_ae = (g.alice_pos - *g.eve_pos).norm();
        const double d_er = (g.ris_pos - *g.eve_pos).norm();
        const double d_be = (g.bob_pos - *g.eve_pos).norm();
        beta_ae_ = beta_from_distance(d_ae, g.alpha_ba, g.zeta0, conv);
        beta_er_ = beta_from_distance(d_er, g.alpha_br, g.zeta0, conv);
        beta_be_ = beta_from_distance(d_be, g.alpha_ba, g.zeta0, conv);
    }
}

Eigen::MatrixXcd ChannelSampler::correlate(const Eigen::MatrixXcd& core, double beta) const
{
    const double scale = std::sqrt(beta);
    if (real_roots_)
    {
        // Contiguous real operands keep Eigen on its packed GEMM kernels.
        const Eigen::MatrixXd re = core.real();
        const Eigen::MatrixXd im = core.imag();
        const Eigen::MatrixXd re_out = scale * (sqrt_r_s_real_ * re * sqrt_r_i_real_);
        const Eigen::MatrixXd im_out = scale * (sqrt_r_s_real_ * im * sqrt_r_i_real_);
        Eigen::MatrixXcd out(core.rows(), core.cols());
        out.real() = re_out;
        out.imag() = im_out;
        return out;
    }
    return scale * (sqrt_r_s_ * core * sqrt_r_i_);
}

ChannelRealization ChannelSampler::sample(Philox4x32& rng) const
{
    ChannelRealization ch;

    ch.g_ra = correlate(complex_gaussian_matrix(m_, n_, rng), pl_.beta_ar);

    const Eigen::VectorXcd core_br = complex_gaussian_matrix(n_, 1, rng);
    ch.h_br = std::sqrt(pl_.beta_br) * (sqrt_r_i_ * core_br);

    const Eigen::VectorXcd core_ba = complex_gaussian_matrix(m_, 1, rng);
    ch.h_ba = std::sqrt(pl_.beta_ba) * (sqrt_r_s_ * core_ba);

    if (sample_eve_ && k_ > 0)
    {
        // RIS-side and BS-side correlations apply; Eve's own array is i.i.d.
        const Eigen::MatrixXcd core_re = complex_gaussian_matrix(n_, k_, rng);
        ch.g_re = std::sqrt(beta_er_) * (sqrt_r_i_ * core_re).transpose();

        const Eigen::MatrixXcd core_ae = complex_gaussian_matrix(m_, k_, rng);
        ch.h_ae = std::sqrt(beta_ae_) * (sqrt_r_s_ * core_ae).transpose();

        ch.h_eb = std::sqrt(beta_be_) * complex_gaussian_matrix(k_, 1, rng);
    }
    return ch;
}

ChannelRealization sample_channels(const SystemConfig& config, const CorrelationMatrix& r_s,
                                   const CorrelationMatrix& r_i, Philox4x32& rng)
{
    return ChannelSampler(config, r_s, r_i).sample(rng);
}

} // namespace riskg
