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

#include <doctest.h>

#include <cmath>

#include "riskg/beamforming.hpp"
#include "riskg/kgr.hpp"

using namespace riskg;

namespace {

SystemConfig grid_config(int bs_h, int bs_v, int ris_h, int ris_v, double spacing_wl = 0.25)
{
    SystemConfig cfg;
    cfg.bs_grid = {bs_h, bs_v};
    cfg.ris_layout = {{ris_h, ris_v}, spacing_wl * 0.1, 0.1};
    return cfg;
}

} // namespace

TEST_CASE("covariances: scalar sanity and the no-signal limit")
{
    SystemConfig cfg = grid_config(1, 1, 1, 1);
    cfg.p_a = 0.5;
    cfg.p_b = 2.0;
    cfg.sigma2 = 0.25;
    const CorrelationMatrix r_s = CorrelationMatrix::identity(1);
    const CorrelationMatrix r_i = CorrelationMatrix::identity(1);
    Beamformers bf;
    bf.w = Eigen::VectorXcd::Constant(1, std::sqrt(cfg.p_a));
    bf.v = Eigen::VectorXcd::Constant(1, 1.0);

    // q = P_A, t = 1; all moments close by hand.
    const PathLossSet pl{0.2, 1.0, 0.3, 0.3};
    const Covariances cov = covariances(r_s, r_i, bf, pl, cfg);
    const double x = cfg.p_a * (0.3 * 1.0 + 0.2);
    CHECK(cov.r_aa == doctest::Approx(cfg.p_b * x + cfg.p_a * cfg.sigma2).epsilon(1e-14));
    CHECK(cov.r_bb == doctest::Approx(x + cfg.sigma2).epsilon(1e-14));
    CHECK(cov.r_ab.real() == doctest::Approx(std::sqrt(cfg.p_b) * x).epsilon(1e-14));
    CHECK(cov.r_ab.imag() == 0.0);

    // Without any propagation path only noise remains and the gains decouple.
    const Covariances silent = covariances(r_s, r_i, bf, PathLossSet{0.0, 0.0, 0.0, 0.0}, cfg);
    CHECK(silent.r_aa == doctest::Approx(bf.w.squaredNorm() * cfg.sigma2).epsilon(1e-14));
    CHECK(silent.r_bb == doctest::Approx(cfg.sigma2).epsilon(1e-14));
    CHECK(std::abs(silent.r_ab) == 0.0);
    CHECK(lemma1_x(r_s, r_i, bf, PathLossSet{0.0, 0.0, 0.0, 0.0}) == 0.0);
}

TEST_CASE("covariances match Monte Carlo sample moments")
{
    SystemConfig cfg = grid_config(2, 1, 2, 1);
    cfg.p_a = 1.0;
    cfg.p_b = 2.0;
    cfg.sigma2 = 0.5;
    const CorrelationMatrix r_s = ula_correlation(2, 0.4);
    const CorrelationMatrix r_i = ris_sinc_correlation(cfg.ris_layout);
    const PathLossSet pl{0.6, 0.9, 0.8, 0.72};
    Beamformers bf;
    bf.w = optimal_transmit(r_s, cfg.p_a);
    bf.v = optimal_reflection(2);

    const ChannelSampler sampler(cfg, r_s, r_i, pl);
    const int trials = 200000;
    double aa = 0.0;
    double bb = 0.0;
    std::complex<double> ab{0.0};
    for (int trial = 0; trial < trials; ++trial)
    {
        Philox4x32 rng(404, trial);
        const ChannelRealization ch = sampler.sample(rng);
        const std::complex<double> a = combine_uplink(uplink_sound(ch, bf, cfg, rng), bf.w);
        const std::complex<double> b = downlink_sound(ch, bf, cfg, rng);
        aa += std::norm(a);
        bb += std::norm(b);
        ab += a * std::conj(b);
    }
    const Covariances cov = covariances(r_s, r_i, bf, pl, cfg);
    CHECK(aa / trials == doctest::Approx(cov.r_aa).epsilon(0.02));
    CHECK(bb / trials == doctest::Approx(cov.r_bb).epsilon(0.02));
    CHECK(std::abs(ab / static_cast<double>(trials) - cov.r_ab) <= 0.02 * std::abs(cov.r_ab));
}

TEST_CASE("kgr_general: closed values and guards")
{
    CHECK(kgr_general(2.0, 2.0, 0.0) == 0.0);
    CHECK(kgr_general(2.0, 2.0, 1.0) == doctest::Approx(std::log2(4.0 / 3.0)).epsilon(1e-12));
    CHECK_THROWS_AS(kgr_general(1.0, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(kgr_general(0.0, 1.0, 0.0), std::domain_error);
}

TEST_CASE("closed form equals the general determinant form on random configurations")
{
    Philox4x32 rng(505, 0);
    for (int it = 0; it < 100; ++it)
    {
        const int bs_h = 1 + static_cast<int>(rng.next_u64() % 3);
        const int bs_v = 1 + static_cast<int>(rng.next_u64() % 3);
        const int ris_h = 1 + static_cast<int>(rng.next_u64() % 4);
        const int ris_v = 1 + static_cast<int>(rng.next_u64() % 4);
        const double spacing = 0.125 + 0.375 * rng.uniform();
        SystemConfig cfg = grid_config(bs_h, bs_v, ris_h, ris_v, spacing);
        cfg.set_power_dbm(30.0 * rng.uniform());
        cfg.rho = 0.9 * rng.uniform();

        const CorrelationMatrix r_s = upa_correlation(cfg.bs_grid, cfg.rho);
        const CorrelationMatrix r_i = ris_sinc_correlation(cfg.ris_layout);
        const PathLossSet pl = path_losses(cfg.geometry);

        Beamformers bf;
        bf.w = random_transmit(cfg.bs_antennas(), cfg.p_a, rng);
        bf.v = random_reflection(cfg.ris_elements(), rng);

        const KgrReport report = kgr_closed_form(r_s, r_i, bf, pl, cfg);
        const Covariances cov = covariances(r_s, r_i, bf, pl, cfg);
        const double general = kgr_general(cov.r_aa, cov.r_bb, cov.r_ab);
        CHECK(report.kgr_bits == doctest::Approx(general).epsilon(1e-9));
        CHECK(report.kgr_bits >= 0.0);
        CHECK(report.x >= 0.0);
        CHECK(std::norm(report.r_ab) <= report.r_aa * report.r_bb);
    }
}

TEST_CASE("kgr is zero exactly at x = 0 and increases with power")
{
    SystemConfig cfg = grid_config(2, 2, 2, 2);
    const CorrelationMatrix r_s = upa_correlation(cfg.bs_grid, cfg.rho);
    const CorrelationMatrix r_i = ris_sinc_correlation(cfg.ris_layout);
    Beamformers bf;
    bf.w = optimal_transmit(r_s, cfg.p_a);
    bf.v = optimal_reflection(cfg.ris_elements());

    const KgrReport silent =
        kgr_closed_form(r_s, r_i, bf, PathLossSet{0.0, 0.0, 0.0, 0.0}, cfg);
    CHECK(silent.x == 0.0);
    CHECK(silent.kgr_bits == 0.0);

    // Monotone in transmit power (10 -> 20 -> 30 dBm).
    const PathLossSet pl = path_losses(cfg.geometry);
    double previous = -1.0;
    for (double p_dbm : {10.0, 20.0, 30.0})
    {
        SystemConfig swept = cfg;
        swept.set_power_dbm(p_dbm);
        Beamformers scaled;
        scaled.w = optimal_transmit(r_s, swept.p_a);
        scaled.v = bf.v;
        const double bits = kgr_closed_form(r_s, r_i, scaled, pl, swept).kgr_bits;
        CHECK(bits > previous);
        previous = bits;
    }
}

TEST_CASE("kgr_from_x is nondecreasing over a log-spaced grid")
{
    const double w_norm2 = 0.1;
    const double p_b = 0.1;
    const double sigma2 = 1e-11;
    double previous = -1.0;
    for (int k = 0; k <= 280; ++k)
    {
        const double x = std::pow(10.0, -16.0 + 14.0 * k / 280.0);
        const double bits = kgr_from_x(x, w_norm2, p_b, sigma2);
        CHECK(bits >= previous - 1e-12 * std::max(1.0, std::abs(previous)));
        previous = bits;
    }
    CHECK(previous > 0.0);
    CHECK_THROWS_AS(kgr_from_x(1.0, 1.0, 1.0, 0.0), std::domain_error);
}

TEST_CASE("lemma1_x is linear in the transmit quadratic form")
{
    const CorrelationMatrix r_s = CorrelationMatrix::identity(2);
    const CorrelationMatrix r_i = CorrelationMatrix::identity(2);
    Beamformers bf;
    bf.w = Eigen::VectorXcd::Constant(2, std::sqrt(0.5));
    bf.v = Eigen::VectorXcd::Constant(2, 1.0);

    // beta_r = 0, beta_ba = 1, unit-power w, R_S = I -> x = 1.
    CHECK(lemma1_x(r_s, r_i, bf, PathLossSet{1.0, 0.0, 0.0, 0.0}) ==
          doctest::Approx(1.0).epsilon(1e-14));

    // Doubling q doubles x.
    Beamformers twice;
    twice.w = std::sqrt(2.0) * bf.w;
    twice.v = bf.v;
    const PathLossSet pl{0.4, 0.5, 0.6, 0.3};
    CHECK(lemma1_x(r_s, r_i, twice, pl) ==
          doctest::Approx(2.0 * lemma1_x(r_s, r_i, bf, pl)).epsilon(1e-12));
}

TEST_CASE("unequal per-side noise falls back to the determinant form")
{
    SystemConfig cfg = grid_config(2, 1, 2, 1);
    cfg.sigma_a2 = 2e-11;
    cfg.sigma_b2 = 0.5e-11;
    const CorrelationMatrix r_s = ula_correlation(2, 0.3);
    const CorrelationMatrix r_i = ris_sinc_correlation(cfg.ris_layout);
    const PathLossSet pl = path_losses(cfg.geometry);
    Beamformers bf;
    bf.w = optimal_transmit(r_s, cfg.p_a);
    bf.v = optimal_reflection(2);

    const KgrReport report = kgr_closed_form(r_s, r_i, bf, pl, cfg);
    const Covariances cov = covariances(r_s, r_i, bf, pl, cfg);
    CHECK(report.kgr_bits ==
          doctest::Approx(kgr_general(cov.r_aa, cov.r_bb, cov.r_ab)).epsilon(1e-12));
    CHECK(report.r_aa == doctest::Approx(cov.r_aa).epsilon(1e-14));
}

TEST_CASE("Monte Carlo oracle agrees with the closed form")
{
    SystemConfig cfg = grid_config(2, 2, 2, 2, 0.25);
    const CorrelationMatrix r_s = upa_correlation(cfg.bs_grid, cfg.rho);
    const CorrelationMatrix r_i = ris_sinc_correlation(cfg.ris_layout);
    const PathLossSet pl = path_losses(cfg.geometry);
    Beamformers bf;
    bf.w = optimal_transmit(r_s, cfg.p_a);
    bf.v = optimal_reflection(cfg.ris_elements());

    const KgrReport closed = kgr_closed_form(r_s, r_i, bf, pl, cfg);
    const McEstimate mc = kgr_monte_carlo(cfg, r_s, r_i, bf, pl, 200000, 9001, 4);
    const double tolerance = std::max(0.02 * closed.kgr_bits, 3.0 * mc.stderr_bits);
    CHECK(std::abs(mc.kgr_bits - closed.kgr_bits) <= tolerance);
    CHECK(mc.stderr_bits > 0.0);
    CHECK(mc.trials == 200000);
}

TEST_CASE("Monte Carlo estimate is zero without signal and deterministic across threads")
{
    SystemConfig cfg = grid_config(2, 1, 2, 1);
    const CorrelationMatrix r_s = ula_correlation(2, 0.3);
    const CorrelationMatrix r_i = ris_sinc_correlation(cfg.ris_layout);
    Beamformers bf;
    bf.w = optimal_transmit(r_s, cfg.p_a);
    bf.v = optimal_reflection(2);

    const PathLossSet silent{0.0, 0.0, 0.0, 0.0};
    const McEstimate mc = kgr_monte_carlo(cfg, r_s, r_i, bf, silent, 20000, 31337, 2);
    CHECK(std::abs(mc.kgr_bits) <= 3.0 * mc.stderr_bits);

    const PathLossSet pl = path_losses(cfg.geometry);
    const McEstimate serial = kgr_monte_carlo(cfg, r_s, r_i, bf, pl, 20000, 2024, 1);
    const McEstimate parallel = kgr_monte_carlo(cfg, r_s, r_i, bf, pl, 20000, 2024, 8);
    CHECK(serial.kgr_bits == parallel.kgr_bits);
    CHECK(serial.stderr_bits == parallel.stderr_bits);

    CHECK_THROWS_AS(kgr_monte_carlo(cfg, r_s, r_i, bf, pl, 5000, 1, 1),
                    std::invalid_argument);
}
