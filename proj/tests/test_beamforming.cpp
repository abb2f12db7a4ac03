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

using namespace riskg;

TEST_CASE("optimal_transmit attains P_A lambda_max")
{
    // Uncorrelated antennas: every feasible direction achieves exactly P_A.
    const CorrelationMatrix identity = CorrelationMatrix::identity(4);
    const Eigen::VectorXcd w_id = optimal_transmit(identity, 0.2);
    CHECK(w_id.squaredNorm() == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(transmit_gain(identity, w_id) == doctest::Approx(0.2).epsilon(1e-12));

    const CorrelationMatrix r2 = ula_correlation(2, 0.3);
    const Eigen::VectorXcd w2 = optimal_transmit(r2, 1.0);
    CHECK(transmit_gain(r2, w2) == doctest::Approx(1.3).epsilon(1e-12));

    // A complex Hermitian correlation still yields the eigenvalue bound.
    Eigen::MatrixXcd herm(2, 2);
    herm << 1.0, std::complex<double>(0.4, 0.3), std::complex<double>(0.4, -0.3), 1.0;
    const CorrelationMatrix custom = CorrelationMatrix::custom(herm);
    const double lam = dominant_eigenpair(custom).value;
    const Eigen::VectorXcd wc = optimal_transmit(custom, 0.7);
    CHECK(transmit_gain(custom, wc) == doctest::Approx(0.7 * lam).epsilon(1e-12));
}

TEST_CASE("random feasible transmit vectors never beat the optimum")
{
    const CorrelationMatrix r_s = upa_correlation({3, 3}, 0.6);
    const double p_a = 2.0;
    const double best = p_a * dominant_eigenpair(r_s).value;
    Philox4x32 rng(811, 0);
    double max_seen = 0.0;
    for (int draw = 0; draw < 10000; ++draw)
    {
        const Eigen::VectorXcd w = random_transmit(9, p_a, rng);
        max_seen = std::max(max_seen, transmit_gain(r_s, w));
    }
    CHECK(max_seen <= best + 1e-9);
    CHECK(max_seen > 0.0);
}

TEST_CASE("random_transmit draws have exact power and mean gain P_A")
{
    const CorrelationMatrix r_s = upa_correlation({2, 2}, 0.7);
    const double p_a = 0.5;
    Philox4x32 rng(812, 0);
    double gain_sum = 0.0;
    const int draws = 100000;
    for (int draw = 0; draw < draws; ++draw)
    {
        const Eigen::VectorXcd w = random_transmit(4, p_a, rng);
        CHECK(w.squaredNorm() == doctest::Approx(p_a).epsilon(1e-12));
        gain_sum += transmit_gain(r_s, w);
    }
    // Independent of correlation and antenna count.
    CHECK(gain_sum / draws == doctest::Approx(p_a).epsilon(0.02));
}

TEST_CASE("equal-phase reflection attains the squared Frobenius norm")
{
    const CorrelationMatrix identity = CorrelationMatrix::identity(6);
    CHECK(reflection_gain(identity, optimal_reflection(6)) ==
          doctest::Approx(6.0).epsilon(1e-12));

    const CorrelationMatrix sinc_corr = ris_sinc_correlation({{8, 8}, 0.025, 0.1});
    const double frob2 = sinc_corr.entries().squaredNorm();
    const Eigen::VectorXcd ones = optimal_reflection(64);
    CHECK(reflection_gain(sinc_corr, ones) == doctest::Approx(frob2).epsilon(1e-12));
    CHECK(frob2 > 64.0);

    // The common phase is free: any rotation attains the same value.
    for (double theta : {0.4, 1.9, 5.5})
    {
        const Eigen::VectorXcd rotated = optimal_reflection(64, theta);
        CHECK(std::abs(std::abs(rotated(0)) - 1.0) <= 1e-12);
        CHECK(reflection_gain(sinc_corr, rotated) == doctest::Approx(frob2).epsilon(1e-12));
    }
}

TEST_CASE("exhaustive three-element phase grid peaks at equal phases")
{
    const CorrelationMatrix corr = ris_sinc_correlation({{3, 1}, 0.0125, 0.1});
    const double target = corr.entries().squaredNorm();

    double best = 0.0;
    for (int a = 0; a < 16; ++a)
        for (int b = 0; b < 16; ++b)
            for (int c = 0; c < 16; ++c)
            {
                Eigen::VectorXcd v(3);
                v(0) = std::polar(1.0, 2.0 * M_PI * a / 16.0);
                v(1) = std::polar(1.0, 2.0 * M_PI * b / 16.0);
                v(2) = std::polar(1.0, 2.0 * M_PI * c / 16.0);
                best = std::max(best, reflection_gain(corr, v));
            }
    CHECK(best <= target + 1e-9);
    CHECK(best == doctest::Approx(target).epsilon(1e-9)); // grid contains equal phases
}

TEST_CASE("random reflections average to N and never beat equal phases")
{
    const CorrelationMatrix sinc_corr = ris_sinc_correlation({{4, 4}, 0.025, 0.1});
    const double target = sinc_corr.entries().squaredNorm();
    Philox4x32 rng(813, 0);
    double sum = 0.0;
    double max_seen = 0.0;
    const int draws = 100000;
    for (int draw = 0; draw < draws; ++draw)
    {
        const Eigen::VectorXcd v = random_reflection(16, rng);
        const double t = reflection_gain(sinc_corr, v);
        sum += t;
        max_seen = std::max(max_seen, t);
    }
    CHECK(sum / draws == doctest::Approx(16.0).epsilon(0.02));
    CHECK(max_seen <= target + 1e-9);

    // With an identity RIS correlation every unit-modulus draw gives exactly N.
    const CorrelationMatrix identity = CorrelationMatrix::identity(5);
    for (int draw = 0; draw < 10; ++draw)
        CHECK(reflection_gain(identity, random_reflection(5, rng)) ==
              doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("RIS correlation energy exceeds N for two-dimensional grids")
{
    for (double spacing_wl : {0.5, 0.25, 0.125})
    {
        const CorrelationMatrix grid =
            ris_sinc_correlation({{4, 4}, spacing_wl * 0.1, 0.1});
        CHECK(grid.entries().squaredNorm() > 16.0);
    }
    // A single row at half-wavelength spacing is exactly uncorrelated.
    const CorrelationMatrix row = ris_sinc_correlation({{4, 1}, 0.05, 0.1});
    CHECK(row.entries().squaredNorm() == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("lemma2_bounds sandwiches the achieved gain")
{
    // rho = 0: all three coincide with P_A.
    const BoundsReport at_zero = lemma2_bounds({4, 4}, 0.0, 0.3);
    CHECK(at_zero.f_lower == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(at_zero.f_upper == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(at_zero.f_upper_printed == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(at_zero.achieved == doctest::Approx(0.3).epsilon(1e-12));

    for (const GridShape shape : {GridShape{2, 2}, GridShape{4, 4}, GridShape{8, 8}, GridShape{3, 5}})
    {
        for (int k = 1; k <= 9; ++k)
        {
            const double rho = 0.1 * k;
            const BoundsReport b = lemma2_bounds(shape, rho, 1.0);
            CHECK(b.f_lower <= b.achieved + 1e-9);
            CHECK(b.achieved <= b.f_upper + 1e-9);
            // The exact circulant row sum dominates the truncated form.
            CHECK(b.f_upper_printed <= b.f_upper + 1e-12);
            // Cross-check achieved against the materialized planar matrix.
            const double dense = dominant_eigenpair(upa_correlation(shape, rho)).value;
            CHECK(b.achieved == doctest::Approx(dense).epsilon(1e-9));
        }
    }
}

TEST_CASE("lemma2 bounds grow with correlation and grid size, and converge")
{
    double previous_lower = 0.0;
    double previous_upper = 0.0;
    for (int k = 0; k <= 9; ++k)
    {
        const BoundsReport b = lemma2_bounds({4, 4}, 0.099 * k, 1.0);
        CHECK(b.f_lower >= previous_lower - 1e-12);
        CHECK(b.f_upper >= previous_upper - 1e-12);
        previous_lower = b.f_lower;
        previous_upper = b.f_upper;
    }

    previous_lower = 0.0;
    previous_upper = 0.0;
    for (int n = 1; n <= 12; ++n)
    {
        const BoundsReport b = lemma2_bounds({n, 3}, 0.5, 1.0);
        CHECK(b.f_lower >= previous_lower - 1e-12);
        CHECK(b.f_upper >= previous_upper - 1e-12);
        previous_lower = b.f_lower;
        previous_upper = b.f_upper;
    }

    // Large-array limit: both bounds approach P_A ((1+rho)/(1-rho))^2.
    const double limit = std::pow(1.3 / 0.7, 2.0);
    const BoundsReport big = lemma2_bounds({256, 256}, 0.3, 1.0);
    CHECK(std::abs(big.f_lower - limit) / limit <= 0.01);
    CHECK(std::abs(big.f_upper - limit) / limit <= 0.01);
    CHECK(big.achieved <= big.f_upper + 1e-9);
    CHECK(big.f_lower <= big.achieved + 1e-9);
}

TEST_CASE("single-row and single-column grids degrade gracefully")
{
    const BoundsReport line = lemma2_bounds({1, 6}, 0.4, 1.0);
    CHECK(line.f_lower <= line.achieved + 1e-9);
    CHECK(line.achieved <= line.f_upper + 1e-9);

    const BoundsReport dot = lemma2_bounds({1, 1}, 0.8, 2.5);
    CHECK(dot.f_lower == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(dot.f_upper == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(dot.achieved == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("joint_optimize dominates random beamformer pairs")
{
    SystemConfig cfg;
    cfg.bs_grid = {2, 2};
    cfg.ris_layout = {{3, 3}, 0.025, 0.1};
    const CorrelationMatrix r_s = upa_correlation(cfg.bs_grid, cfg.rho);
    const CorrelationMatrix r_i = ris_sinc_correlation(cfg.ris_layout);
    const PathLossSet pl = path_losses(cfg.geometry);

    const auto [bf, report] = joint_optimize(r_s, r_i, pl, cfg);
    CHECK_NOTHROW(bf.validate(cfg.p_a));
    CHECK(report.kgr_bits > 0.0);

    Philox4x32 rng(814, 0);
    for (int draw = 0; draw < 10000; ++draw)
    {
        Beamformers trial;
        trial.w = random_transmit(cfg.bs_antennas(), cfg.p_a, rng);
        trial.v = random_reflection(cfg.ris_elements(), rng);
        const double bits = kgr_closed_form(r_s, r_i, trial, pl, cfg).kgr_bits;
        CHECK(bits <= report.kgr_bits + 1e-9);
    }
}

TEST_CASE("without the RIS path the optimum ignores the reflection vector")
{
    SystemConfig cfg;
    cfg.bs_grid = {2, 2};
    cfg.ris_layout = {{3, 3}, 0.05, 0.1};
    const CorrelationMatrix r_s = upa_correlation(cfg.bs_grid, cfg.rho);
    const CorrelationMatrix r_i = ris_sinc_correlation(cfg.ris_layout);
    const PathLossSet no_ris = path_losses(cfg.geometry).without_ris();

    const auto [bf, report] = joint_optimize(r_s, r_i, no_ris, cfg);
    Philox4x32 rng(815, 0);
    for (int draw = 0; draw < 20; ++draw)
    {
        Beamformers same_w;
        same_w.w = bf.w;
        same_w.v = random_reflection(cfg.ris_elements(), rng);
        CHECK(kgr_closed_form(r_s, r_i, same_w, no_ris, cfg).kgr_bits ==
              doctest::Approx(report.kgr_bits).epsilon(1e-12));
    }
}
