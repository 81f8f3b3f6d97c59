// SPDX-License-Identifier: Apache-2.0
//
// lcsim - LiDAR-driven vehicular channel simulation library
// Copyright (C) 2026 The lcsim authors
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

#ifndef LCSIM_RNG_HPP
#define LCSIM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <vector>

// Deterministic random utilities. Everything here is explicit (no
// implementation-defined std distributions), so identical seeds give
// identical streams no matter which standard library is in use.

namespace lcsim
{

inline uint64_t splitmix64(uint64_t &state)
{
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stateless mixing of several keys into one 64-bit hash
inline uint64_t hash_mix(uint64_t a)
{
    uint64_t s = a;
    return splitmix64(s);
}

inline uint64_t hash_mix(uint64_t a, uint64_t b)
{
    uint64_t s = a ^ (0x9e3779b97f4a7c15ULL + (b << 6) + (b >> 2));
    uint64_t h = splitmix64(s);
    s = h ^ b;
    return splitmix64(s);
}

template <typename... Rest>
inline uint64_t hash_mix(uint64_t a, uint64_t b, uint64_t c, Rest... rest)
{
    return hash_mix(hash_mix(a, b), c, rest...);
}

// Small deterministic generator (xorshift-multiply flavour)
class Rng
{
  public:
    explicit Rng(uint64_t seed) : state_(seed ^ 0x2545f4914f6cdd1dULL)
    {
        // warm up so nearby seeds decorrelate
        next();
        next();
    }

    uint64_t next() { return splitmix64(state_); }

    // Uniform in [0, 1) with 53-bit resolution
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n); n must be > 0
    uint64_t below(uint64_t n) { return next() % n; }

    // Standard normal via Box-Muller
    double gaussian()
    {
        if (have_spare_)
        {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 1e-300)
            u1 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// In-place Fisher-Yates shuffle driven by an explicit Rng
template <typename T>
inline void shuffle(std::vector<T> &v, Rng &rng)
{
    for (size_t i = v.size(); i > 1; --i)
    {
        size_t j = static_cast<size_t>(rng.below(i));
        std::swap(v[i - 1], v[j]);
    }
}

// Uniform [0, 2*pi) phase derived from a stable identity key
inline double phase_from_key(uint64_t key)
{
    uint64_t s = key;
    uint64_t h = splitmix64(s);
    return static_cast<double>(h >> 11) * 0x1.0p-53 * 6.283185307179586;
}

} // namespace lcsim

#endif
