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

#include "riskg/kgr.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "riskg/parallel.hpp"

namespace riskg {

namespace {

constexpr int kBootstrapResamples = 200;
constexpr std::uint64_t kBootstrapStreamBase = 1ull << 40;

struct GainPair
{
    std::complex<double> a;
    std::complex<double> b;
};

Covariances sample_covariances(const std::vector<GainPair>& pairs,
                               const std::vector<std::size_t>* index = nullptr)
{
    const std::size_t count = index ? index->size() : pairs.size();
    if (count < 2)
        throw std::invalid_argument("sample covariance needs at least two samples");

    std::complex<double> mean_a{0.0};
    std::complex<double> mean_b{0.0};
    for (std::size_t i = 0; i < count; ++i)
    {
        const GainPair& p = pairs[index ? (*index)[i] : i];
        mean_a += p.a;
        mean_b += p.b;
    }
    mean_a /= static_cast<double>(count);
    mean_b /= static_cast<double>(count);

    double aa = 0.0;
    double bb = 0.0;
    std::complex<double> ab{0.0};
    for (std::size_t i = 0; i < count; ++i)
    {
        const GainPair& p = pairs[index ? (*index)[i] : i];
        const std::complex<double> da = p.a - mean_a;
        const std::complex<double> db = p.b - mean_b;
        aa += std::norm(da);
        bb += std::norm(db);
        ab += da * std::conj(db);
    }
    const double denom = static_cast<double>(count - 1);
    return {aa / denom, bb / denom, ab / denom};
}

} // namespace

double transmit_gain(const CorrelationMatrix& r_s, const Eigen::VectorXcd& w)
{
    if (w.size() != r_s.dim())
        throw std::invalid_argument("transmit beamformer dimension mismatch");
    const std::complex<double> q = w.transpose() * r_s.entries() * w.conjugate();
    return q.real();
}

double reflection_gain(const CorrelationMatrix& r_i, const Eigen::VectorXcd& v)
{
    if (v.size() != r_i.dim())
        throw std::invalid_argument("reflection vector dimension mismatch");
    const Eigen::MatrixXd r_tilde = hadamard_self(r_i);
    const std::complex<double> t = v.adjoint() * r_tilde * v;
    return t.real();
}

double lemma1_x(const CorrelationMatrix& r_s, const CorrelationMatrix& r_i,
                const Beamformers& bf, const PathLossSet& pl)
{
    const double q = transmit_gain(r_s, bf.w);
    const double t = reflection_gain(r_i, bf.v);
    return q * (pl.beta_r * t + pl.beta_ba);
}

Covariances covariances(const CorrelationMatrix& r_s, const CorrelationMatrix& r_i,
                        const Beamformers& bf, const PathLossSet& pl,
                        const SystemConfig& config)
{
    const double q = transmit_gain(r_s, bf.w);
    const double t = reflection_gain(r_i, bf.v);
    const double x = q * (pl.beta_r * t + pl.beta_ba);
    const double w_norm2 = bf.w.squaredNorm();

    Covariances cov;
    cov.r_aa = config.p_b * x + w_norm2 * config.noise_a();
    cov.r_bb = x + config.noise_b();
    cov.r_ab = std::sqrt(config.p_b) * x;
    return cov;
}

double kgr_general(double r_aa, double r_bb, std::complex<double> r_ab)
{
    if (!(r_aa > 0.0) || !(r_bb > 0.0))
        throw std::domain_error("kgr_general: variances must be positive");
    const double det = r_aa * r_bb - std::norm(r_ab);
    if (!(det > 0.0))
        throw std::domain_error("kgr_general: covariance determinant must be positive");
    const double rate = std::log2(r_aa * r_bb / det);
    return std::max(rate, 0.0);
}

double kgr_from_x(double x, double w_norm2, double p_b, double sigma2)
{
    if (!(sigma2 > 0.0))
        throw std::domain_error("kgr_from_x: noise variance must be positive");
    if (x < 0.0)
        throw std::domain_error("kgr_from_x: x must be non-negative");
    const double wn = w_norm2 * sigma2;
    const double num = (p_b * x + wn) * (x + sigma2);
    const double den = (w_norm2 + p_b) * sigma2 * x + wn * sigma2;
    return std::max(std::log2(num / den), 0.0);
}

KgrReport kgr_closed_form(const CorrelationMatrix& r_s, const CorrelationMatrix& r_i,
                          const Beamformers& bf, const PathLossSet& pl,
                          const SystemConfig& config)
{
    if (!(config.noise_a() > 0.0) || !(config.noise_b() > 0.0))
        throw std::domain_error("kgr_closed_form: noise variances must be positive");

    KgrReport report;
    report.q = transmit_gain(r_s, bf.w);
    report.t = reflection_gain(r_i, bf.v);
    report.x = report.q * (pl.beta_r * report.t + pl.beta_ba);

    const double w_norm2 = bf.w.squaredNorm();
    report.r_aa = config.p_b * report.x + w_norm2 * config.noise_a();
    report.r_bb = report.x + config.noise_b();
    report.r_ab = std::sqrt(config.p_b) * report.x;

    if (config.noise_a() == config.noise_b())
        report.kgr_bits = kgr_from_x(report.x, w_norm2, config.p_b, config.noise_a());
    else
        report.kgr_bits = kgr_general(report.r_aa, report.r_bb, report.r_ab);
    return report;
}

McEstimate kgr_monte_carlo(const SystemConfig& config, const CorrelationMatrix& r_s,
                           const CorrelationMatrix& r_i, const Beamformers& bf,
                           const PathLossSet& pl, std::size_t trials, std::uint64_t seed,
                           unsigned threads)
{
    if (trials < 10000)
        throw std::invalid_argument("kgr_monte_carlo: at least 10^4 trials required");

    const ChannelSampler sampler(config, r_s, r_i, pl);
    std::vector<GainPair> pairs(trials);

    // One substream per trial: results do not depend on the thread count.
    parallel_for(trials, threads, [&](std::size_t trial) {
        Philox4x32 rng = substream(seed, trial);
        const ChannelRealization ch = sampler.sample(rng);
        const Eigen::VectorXcd up = uplink_sound(ch, bf, config, rng);
        pairs[trial].a = combine_uplink(up, bf.w);
        pairs[trial].b = downlink_sound(ch, bf, config, rng);
    });

    const Covariances cov = sample_covariances(pairs);
    if (!(cov.r_aa > 0.0) || !(cov.r_bb > 0.0) ||
        !(cov.r_aa * cov.r_bb - std::norm(cov.r_ab) > 0.0))
        throw std::domain_error("kgr_monte_carlo: degenerate sample covariance");

    McEstimate estimate;
    estimate.kgr_bits = kgr_general(cov.r_aa, cov.r_bb, cov.r_ab);
    estimate.trials = trials;

    // Bootstrap standard error over resampled trial indices.
    std::vector<double> resampled(kBootstrapResamples);
    parallel_for(kBootstrapResamples, threads, [&](std::size_t b) {
        Philox4x32 rng = substream(seed, kBootstrapStreamBase + b);
        std::vector<std::size_t> index(trials);
        for (std::size_t i = 0; i < trials; ++i)
            index[i] = static_cast<std::size_t>(rng.next_u64() % trials);
        const Covariances c = sample_covariances(pairs, &index);
        resampled[b] = kgr_general(c.r_aa, c.r_bb, c.r_ab);
    });

    double mean = 0.0;
    for (double value : resampled)
        mean += value;
    mean /= kBootstrapResamples;
    double var = 0.0;
    for (double value : resampled)
        var += (value - mean) * (value - mean);
    estimate.stderr_bits = std::sqrt(var / (kBootstrapResamples - 1));
    return estimate;
}

McEstimate kgr_monte_carlo(const SystemConfig& config, const CorrelationMatrix& r_s,
                           const CorrelationMatrix& r_i, const Beamformers& bf,
                           std::size_t trials, std::uint64_t seed, unsigned threads)
{
    return kgr_monte_carlo(config, r_s, r_i, bf,
                           path_losses(config.geometry, config.pathloss_convention), trials,
                           seed, threads);
}

} // namespace riskg
