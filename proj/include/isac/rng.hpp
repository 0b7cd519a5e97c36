// SPDX-License-Identifier: Apache-2.0
//
// isacsim - coupled ISAC channel simulation and analysis
// Copyright (C) 2026 The isacsim Authors
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

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

#include "isac/geometry.hpp"

namespace isac
{
    /// splitmix64 finalizer; used to derive independent sub-stream seeds.
    constexpr std::uint64_t mix64(std::uint64_t x)
    {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    /// FNV-1a hash of a stream name, stable across platforms (unlike std::hash).
    constexpr std::uint64_t stream_tag(std::string_view name)
    {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (const char c : name)
        {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    /// Seed of the named sub-stream `(seed, name, index...)`.
    constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view name,
                                        std::uint64_t a = 0, std::uint64_t b = 0)
    {
        return mix64(mix64(mix64(seed ^ stream_tag(name)) + a) + b);
    }

    /// Seeded random stream. The engine output is fixed by the standard; the
    /// transforms below are written out so that draws are identical on every
    /// standard library.
    class Rng
    {
    public:
        explicit Rng(std::uint64_t seed) : engine_(seed) {}

        Rng(std::uint64_t seed, std::string_view name, std::uint64_t a = 0, std::uint64_t b = 0)
            : engine_(derive_seed(seed, name, a, b)) {}

        /// Uniform on [0, 1) with 53 random bits.
        double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

        double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

        /// Standard normal via Box-Muller; the second variate is cached.
        double normal()
        {
            if (has_spare_)
            {
                has_spare_ = false;
                return spare_;
            }
            double u1 = uniform();
            while (u1 <= 0.0)
                u1 = uniform();
            const double u2 = uniform();
            const double r = std::sqrt(-2.0 * std::log(u1));
            spare_ = r * std::sin(2.0 * pi * u2);
            has_spare_ = true;
            return r * std::cos(2.0 * pi * u2);
        }

        double normal(double mean, double stddev) { return mean + stddev * normal(); }

        /// Exponential with the given mean (mean 0 returns 0).
        double exponential(double mean)
        {
            if (mean <= 0.0)
                return 0.0;
            return -mean * std::log1p(-uniform());
        }

        /// Uniform phase on [0, 2*pi).
        double phase() { return 2.0 * pi * uniform(); }

    private:
        std::mt19937_64 engine_;
        double spare_ = 0.0;
        bool has_spare_ = false;
    };
}
