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

#include "riskg/probing.hpp"

#include <cmath>
#include <stdexcept>

namespace riskg {

namespace {

constexpr double kConstraintTol = 1e-12;

Eigen::VectorXcd noise_vector(Eigen::Index n, double variance, Philox4x32& rng)
{
    Eigen::VectorXcd z(n);
    const double scale = std::sqrt(variance);
    for (Eigen::Index i = 0; i < n; ++i)
        z(i) = scale * rng.complex_normal();
    return z;
}

} // namespace

void Beamformers::validate(double p_a) const
{
    if (w.size() == 0 || v.size() == 0)
        throw std::invalid_argument("beamformers must be non-empty");
    if (w.squaredNorm() > p_a + kConstraintTol)
        throw std::domain_error("transmit beamformer violates the power constraint");
    for (Eigen::Index i = 0; i < v.size(); ++i)
    {
        if (std::abs(std::abs(v(i)) - 1.0) > kConstraintTol)
            throw std::domain_error("reflection coefficients must have unit modulus");
    }
}

Eigen::VectorXcd uplink_sound(const ChannelRealization& ch, const Beamformers& bf,
                              const SystemConfig& config, Philox4x32& rng)
{
    if (ch.g_ra.cols() != bf.v.size() || ch.g_ra.rows() != ch.h_ba.size())
        throw std::invalid_argument("uplink_sound: dimension mismatch");
    Eigen::VectorXcd estimate =
        std::sqrt(config.p_b) * (ch.g_ra * bf.v.asDiagonal() * ch.h_br + ch.h_ba);
    estimate += noise_vector(estimate.size(), config.noise_a(), rng);
    return estimate;
}

std::complex<double> downlink_sound(const ChannelRealization& ch, const Beamformers& bf,
                                    const SystemConfig& config, Philox4x32& rng)
{
    if (ch.g_ra.rows() != bf.w.size() || ch.g_ra.cols() != ch.h_br.size())
        throw std::invalid_argument("downlink_sound: dimension mismatch");
    const std::complex<double> gain =
        (ch.h_br.transpose() * bf.v.asDiagonal() * ch.g_ar() + ch.h_ba.transpose()) * bf.w;
    return gain + std::sqrt(config.noise_b()) * rng.complex_normal();
}

std::complex<double> combine_uplink(const Eigen::VectorXcd& h_hat_a_up,
                                    const Eigen::VectorXcd& w)
{
    if (h_hat_a_up.size() != w.size())
        throw std::invalid_argument("combine_uplink: dimension mismatch");
    return w.transpose() * h_hat_a_up;
}

EveObservation eve_observe(const ChannelRealization& ch, const Beamformers& bf,
                           const SystemConfig& config, Philox4x32& rng)
{
    if (!ch.has_eve())
        throw std::invalid_argument("eve_observe: realization carries no eve channels");

    EveObservation obs;
    obs.uplink = std::sqrt(config.p_b) * (ch.g_re * bf.v.asDiagonal() * ch.h_br + ch.h_eb);
    obs.uplink += noise_vector(obs.uplink.size(), config.sigma_e2, rng);

    obs.downlink = (ch.g_re * bf.v.asDiagonal() * ch.g_ar() + ch.h_ae) * bf.w;
    obs.downlink += noise_vector(obs.downlink.size(), config.sigma_e2, rng);
    return obs;
}

ProbingObservation probe_round(const ChannelRealization& ch, const Beamformers& bf,
                               const SystemConfig& config, Philox4x32& rng)
{
    ProbingObservation obs;
    const Eigen::VectorXcd up = uplink_sound(ch, bf, config, rng);
    const Eigen::VectorXcd clean =
        std::sqrt(config.p_b) * (ch.g_ra * bf.v.asDiagonal() * ch.h_br + ch.h_ba);
    obs.h_hat_a = combine_uplink(up, bf.w);
    obs.noise_a = combine_uplink(up - clean, bf.w);

    const std::complex<double> down = downlink_sound(ch, bf, config, rng);
    const std::complex<double> down_clean =
        (ch.h_br.transpose() * bf.v.asDiagonal() * ch.g_ar() + ch.h_ba.transpose()) * bf.w;
    obs.h_hat_b = down;
    obs.noise_b = down - down_clean;

    if (ch.has_eve())
        obs.eve = eve_observe(ch, bf, config, rng);
    return obs;
}

} // namespace riskg
