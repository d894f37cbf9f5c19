// SPDX-License-Identifier: Apache-2.0
//
// cellfree: link-level simulator for user-centric cell-free wireless networks
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

#ifndef CELLFREE_RNG_HPP
#define CELLFREE_RNG_HPP

#include "cellfree/types.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace cellfree {

/// Hierarchical stream addressing: every consumer of randomness derives its own
/// substream from (master seed, kind, index a, index b), so results do not
/// depend on evaluation order or thread scheduling.
enum class StreamKind : std::uint64_t {
    Layout = 1,      // node placement, one stream per layout
    Shadowing = 2,   // LOS states and shadow fading, per layout
    Association = 3, // UE processing order in cluster formation, per layout
    Fading = 4,      // small-scale channel draws, per (layout, draw)
    PilotNoise = 5,  // pilot-field noise, per (layout, draw)
    Aux = 6,         // test / oracle streams
};

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, StreamKind kind, std::uint64_t a = 0,
                                 std::uint64_t b = 0) {
    std::uint64_t h = mix64(master + 0x9e3779b97f4a7c15ULL);
    h = mix64(h ^ (static_cast<std::uint64_t>(kind) + 0x9e3779b97f4a7c15ULL));
    h = mix64(h ^ (a + 0x632be59bd9b4e019ULL));
    h = mix64(h ^ (b + 0xd1342543de82ef95ULL));
    return h;
}

/// mt19937_64 with hand-rolled Box-Muller normals. <random> distributions are
/// implementation-defined, which would break bit-identical reruns across
/// standard libraries; the generators below are fully pinned.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform() { return double(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n) by rejection (no modulo bias).
    std::uint64_t uniform_index(std::uint64_t n) {
        const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % n;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % n;
    }

    /// Standard normal N(0, 1).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const auto [z0, z1] = normal_pair();
        spare_ = z1;
        have_spare_ = true;
        return z0;
    }

    /// Circularly-symmetric complex normal CN(0, 1).
    Complex cnormal() {
        const auto [z0, z1] = normal_pair();
        return {z0 * 0.7071067811865475244, z1 * 0.7071067811865475244};
    }

  private:
    std::pair<double, double> normal_pair() {
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return {r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2)};
    }

    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

inline RngStream substream(std::uint64_t master, StreamKind kind, std::uint64_t a = 0,
                           std::uint64_t b = 0) {
    return RngStream(derive_seed(master, kind, a, b));
}

} // namespace cellfree

#endif
