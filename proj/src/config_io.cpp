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

#include "cellfree/config_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cellfree {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) {
        return "";
    }
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
    throw std::invalid_argument("config key '" + key + "': cannot parse value '" + value + "'");
}

int parse_int(const std::string& key, const std::string& value) {
    int out = 0;
    const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || p != value.data() + value.size()) {
        bad_value(key, value);
    }
    return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::uint64_t out = 0;
    const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || p != value.data() + value.size()) {
        bad_value(key, value);
    }
    return out;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        const double out = std::stod(value, &pos);
        if (pos != value.size()) {
            bad_value(key, value);
        }
        return out;
    } catch (const std::logic_error&) {
        bad_value(key, value);
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") {
        return true;
    }
    if (value == "false" || value == "0" || value == "no" || value == "off") {
        return false;
    }
    bad_value(key, value);
}

} // namespace

void apply_config_key(SimConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "rrhs") {
        cfg.num_rrh = parse_int(key, value);
    } else if (key == "antennas") {
        cfg.ant_per_rrh = parse_int(key, value);
    } else if (key == "ues") {
        cfg.num_ue = parse_int(key, value);
    } else if (key == "pilot_dim") {
        cfg.pilot_dim = parse_int(key, value);
    } else if (key == "block_symbols") {
        cfg.block_symbols = parse_int(key, value);
    } else if (key == "side_m") {
        cfg.side_m = parse_double(key, value);
    } else if (key == "angular_spread_rad") {
        cfg.angular_spread_rad = parse_double(key, value);
    } else if (key == "max_cluster_size") {
        cfg.max_cluster_size = parse_int(key, value);
    } else if (key == "snr_threshold") {
        cfg.snr_threshold = parse_double(key, value);
    } else if (key == "noise_dbm") {
        cfg.noise_dbm = parse_double(key, value);
    } else if (key == "carrier_ghz") {
        cfg.carrier_ghz = parse_double(key, value);
    } else if (key == "bs_height_m") {
        cfg.bs_height_m = parse_double(key, value);
    } else if (key == "ut_height_m") {
        cfg.ut_height_m = parse_double(key, value);
    } else if (key == "shadow_sigma_los_db") {
        cfg.shadow_sigma_los_db = parse_double(key, value);
    } else if (key == "shadow_sigma_nlos_db") {
        cfg.shadow_sigma_nlos_db = parse_double(key, value);
    } else if (key == "snr_override") {
        cfg.snr_override = parse_double(key, value);
    } else if (key == "layouts") {
        cfg.n_layouts = parse_int(key, value);
    } else if (key == "fading_draws") {
        cfg.n_fading = parse_int(key, value);
    } else if (key == "seed") {
        cfg.seed = parse_u64(key, value);
    } else if (key == "csi") {
        if (value == "ideal") {
            cfg.csi = CsiMode::Ideal;
        } else if (value == "estimated") {
            cfg.csi = CsiMode::Estimated;
        } else {
            bad_value(key, value);
        }
    } else if (key == "schemes") {
        std::vector<Scheme> parsed;
        for (const std::string& name : split_csv(value)) {
            parsed.push_back(Scheme::parse(name)); // throws naming the scheme
        }
        if (parsed.empty()) {
            bad_value(key, value);
        }
        cfg.schemes = std::move(parsed);
    } else if (key == "rate_unit") {
        if (value == "bits") {
            cfg.rates_in_bits = true;
        } else if (value == "nats") {
            cfg.rates_in_bits = false;
        } else {
            bad_value(key, value);
        }
    } else if (key == "theta_exact_norms") {
        cfg.theta_exact_norms = parse_bool(key, value);
    } else if (key == "threads") {
        cfg.threads = parse_int(key, value);
    } else if (key == "dump_realization") {
        cfg.dump_realization = parse_bool(key, value);
    } else if (key == "dump_power") {
        cfg.dump_power = parse_bool(key, value);
    } else if (key == "dump_association") {
        cfg.dump_association = parse_bool(key, value);
    } else {
        throw std::invalid_argument("unknown config key '" + key + "'");
    }
}

ParsedConfig parse_config_text(const std::string& text) {
    ParsedConfig out;
    std::istringstream is(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": malformed section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section == "sweep") {
            SweepAxis axis;
            axis.key = key;
            axis.values = split_csv(value);
            if (axis.values.empty()) {
                throw std::invalid_argument("config key 'sweep." + key + "': empty value list");
            }
            // validate now so errors carry the key name rather than a cell index
            for (const std::string& v : axis.values) {
                SimConfig probe = out.base;
                apply_config_key(probe, key, v);
            }
            out.sweeps.push_back(std::move(axis));
        } else {
            apply_config_key(out.base, key, value);
        }
    }
    return out;
}

ParsedConfig parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        throw std::invalid_argument("cannot open config file '" + path + "'");
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

} // namespace cellfree
