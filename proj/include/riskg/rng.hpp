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

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace riskg {

/// Counter-based PRNG (Philox-4x32, 10 rounds).
///
/// The generator is a keyed bijection of a 128-bit counter, so a stream is
/// fully determined by (key, stream) and every stream is an independent,
/// random-access sequence. Trials, bootstrap resamples and beamformer draws
/// each get their own stream index; results are therefore identical no matter
/// how work is distributed across threads.
class Philox4x32
{
public:
    Philox4x32() : Philox4x32(0, 0) {}

    /// `key` is the master seed, `stream` selects a disjoint substream.
    /// The stream index occupies the high 64 bits of the counter; the low
    /// 64 bits enumerate blocks within the stream.
    Philox4x32(std::uint64_t key, std::uint64_t stream)
        : counter_{0u, 0u, static_cast<std::uint32_t>(stream),
                   static_cast<std::uint32_t>(stream >> 32)},
          key_{static_cast<std::uint32_t>(key),
               static_cast<std::uint32_t>(key >> 32)}
    {
    }

    std::uint32_t next_u32()
    {
        if (pos_ >= 4)
        {
            block_ = encrypt(counter_, key_);
            // advance the low 64 bits of the counter
            if (++counter_[0] == 0u)
                ++counter_[1];
            pos_ = 0;
        }
        return block_[pos_++];
    }

    std::uint64_t next_u64()
    {
        std::uint64_t lo = next_u32();
        std::uint64_t hi = next_u32();
        return (hi << 32) | lo;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform()
    {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in (0, 1]; safe as a logarithm argument.
    double uniform_pos() { return 1.0 - uniform(); }

    /// Circularly symmetric complex Gaussian CN(0,1):
    /// real and imaginary parts are i.i.d. N(0, 1/2).
    /// Marsaglia's polar method; the rejection loop accepts with
    /// probability pi/4 and needs no trigonometric calls.
    std::complex<double> complex_normal()
    {
        for (;;)
        {
            const double x = 2.0 * uniform() - 1.0;
            const double y = 2.0 * uniform() - 1.0;
            const double s = x * x + y * y;
            if (s >= 1.0 || s == 0.0)
                continue;
            const double factor = std::sqrt(-std::log(s) / s);
            return {x * factor, y * factor};
        }
    }

    /// Standard real Gaussian N(0,1).
    double normal()
    {
        const std::complex<double> z = complex_normal();
        return z.real() * 1.4142135623730951;
    }

    /// One block of the underlying bijection; exposed for known-answer tests.
    static std::array<std::uint32_t, 4> encrypt(std::array<std::uint32_t, 4> ctr,
                                                std::array<std::uint32_t, 2> key)
    {
        round_once(ctr, key);
        for (int i = 1; i < 10; ++i)
        {
            key[0] += 0x9E3779B9u;
            key[1] += 0xBB67AE85u;
            round_once(ctr, key);
        }
        return ctr;
    }

private:
    static double two_pi() { return 6.283185307179586476925286766559; }

    static void round_once(std::array<std::uint32_t, 4>& ctr,
                           const std::array<std::uint32_t, 2>& key)
    {
        const std::uint64_t p0 = 0xD2511F53ull * ctr[0];
        const std::uint64_t p1 = 0xCD9E8D57ull * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }

    std::array<std::uint32_t, 4> counter_;
    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> block_{};
    int pos_ = 4;
};

/// SplitMix64 mixing step; used to derive statistically independent seeds.
inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Derive a per-purpose seed from a base seed and a salt. Different salts
/// give unrelated generators even when the base seed is shared.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt)
{
    return splitmix64(base ^ splitmix64(salt));
}

/// Substream `stream` of the generator keyed by `seed`.
inline Philox4x32 substream(std::uint64_t seed, std::uint64_t stream)
{
    return Philox4x32(seed, stream);
}

} // namespace riskg
