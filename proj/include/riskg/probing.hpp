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
#include <complex>
#include <optional>

#include "riskg/channel.hpp"

namespace riskg {

/// Transmit beamformer w (complex M-vector, units sqrt-watts) and RIS
/// reflection coefficients v (unit-modulus complex N-vector).
struct Beamformers
{
    Eigen::VectorXcd w;
    Eigen::VectorXcd v;
    std::optional<Eigen::VectorXd> theta; // phases generating v, when known

    /// Checks ||w||^2 <= p_a and |v_n| = 1 (tolerance 1e-12 each).
    void validate(double p_a) const;
};

/// Uplink sounding followed by LS estimation at Alice:
/// returns sqrt(P_B) (G_ra diag(v) h_br + h_ba) + z, z ~ CN(0, sigma_a^2 I).
/// Unit-modulus pilots cancel in the LS step and are not modeled.
Eigen::VectorXcd uplink_sound(const ChannelRealization& ch, const Beamformers& bf,
                              const SystemConfig& config, Philox4x32& rng);

/// Downlink sounding followed by LS estimation at Bob:
/// returns (h_br^T diag(v) G_ar + h_ba^T) w + z, z ~ CN(0, sigma_b^2).
std::complex<double> downlink_sound(const ChannelRealization& ch, const Beamformers& bf,
                                    const SystemConfig& config, Philox4x32& rng);

/// Alice's combined reciprocal gain w^T h_a_up; the effective noise
/// w^T z has variance ||w||^2 sigma_a^2.
std::complex<double> combine_uplink(const Eigen::VectorXcd& h_hat_a_up,
                                    const Eigen::VectorXcd& w);

struct EveObservation
{
    Eigen::VectorXcd uplink;   // K estimates of the Bob-side compound channel
    Eigen::VectorXcd downlink; // K estimates of the Alice-side compound channel
};

/// Eve's LS estimates from both sounding steps. Requires sampled Eve channels.
EveObservation eve_observe(const ChannelRealization& ch, const Beamformers& bf,
                           const SystemConfig& config, Philox4x32& rng);

struct ProbingObservation
{
    std::complex<double> h_hat_a; // Alice's combined gain
    std::complex<double> h_hat_b; // Bob's gain
    std::complex<double> noise_a; // effective combined uplink noise
    std::complex<double> noise_b; // downlink noise
    std::optional<EveObservation> eve;
};

/// One full probing round: uplink sounding, combining, downlink sounding,
/// and (when Eve channels are present) Eve's observations.
ProbingObservation probe_round(const ChannelRealization& ch, const Beamformers& bf,
                               const SystemConfig& config, Philox4x32& rng);

} // namespace riskg
