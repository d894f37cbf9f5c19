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

#include "cellfree/types.hpp"

#include <stdexcept>

namespace cellfree {

std::string Scheme::name() const {
    if (centralized) {
        std::string s = combiner == CombinerKind::Gzf ? "gzf" : "lmmse";
        return s + (central_power == CentralPowerKind::Duality ? "-duality" : "-epa");
    }
    std::string s = local_precoder == LocalPrecoderKind::Lpzf ? "lpzf" : "lzf";
    return s + (local_power == LocalPowerKind::Epa ? "-epa" : "-ppa");
}

Scheme Scheme::parse(const std::string& name) {
    for (const Scheme& s : Scheme::all()) {
        if (s.name() == name) {
            return s;
        }
    }
    throw std::invalid_argument("unknown scheme '" + name + "'");
}

std::vector<Scheme> Scheme::all() {
    std::vector<Scheme> out;
    for (CombinerKind c : {CombinerKind::Gzf, CombinerKind::Lmmse}) {
        for (CentralPowerKind p : {CentralPowerKind::Duality, CentralPowerKind::Epa}) {
            Scheme s;
            s.centralized = true;
            s.combiner = c;
            s.central_power = p;
            out.push_back(s);
        }
    }
    for (LocalPrecoderKind c : {LocalPrecoderKind::Lpzf, LocalPrecoderKind::Lzf}) {
        for (LocalPowerKind p : {LocalPowerKind::Epa, LocalPowerKind::Ppa}) {
            Scheme s;
            s.centralized = false;
            s.local_precoder = c;
            s.local_power = p;
            out.push_back(s);
        }
    }
    return out;
}

namespace {
void require(bool ok, const char* msg) {
    if (!ok) {
        throw std::invalid_argument(msg);
    }
}
} // namespace

void SimConfig::validate() const {
    require(num_rrh >= 1, "config key 'rrhs' must be >= 1");
    require(ant_per_rrh >= 1, "config key 'antennas' must be >= 1");
    require(num_ue >= 1, "config key 'ues' must be >= 1");
    require(pilot_dim >= 1, "config key 'pilot_dim' must be >= 1");
    require(block_symbols >= 1, "config key 'block_symbols' must be >= 1");
    require(pilot_dim < block_symbols, "config key 'pilot_dim' must be < 'block_symbols'");
    require(side_m > 0.0, "config key 'side_m' must be > 0");
    require(angular_spread_rad > 0.0 && angular_spread_rad <= 2.0 * kPi,
            "config key 'angular_spread_rad' must be in (0, 2*pi]");
    require(max_cluster_size >= 1, "config key 'max_cluster_size' must be >= 1");
    require(snr_threshold > 0.0, "config key 'snr_threshold' must be > 0");
    require(n_layouts >= 1, "config key 'layouts' must be >= 1");
    require(n_fading >= 1, "config key 'fading_draws' must be >= 1");
    require(carrier_ghz > 0.0, "config key 'carrier_ghz' must be > 0");
    require(snr_override >= 0.0, "config key 'snr_override' must be >= 0");
    require(threads >= 0, "config key 'threads' must be >= 0");
    require(!schemes.empty(), "config key 'schemes' must name at least one scheme");
}

} // namespace cellfree
