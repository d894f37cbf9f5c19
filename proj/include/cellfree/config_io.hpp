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

#ifndef CELLFREE_CONFIG_IO_HPP
#define CELLFREE_CONFIG_IO_HPP

#include "cellfree/types.hpp"

#include <map>
#include <string>
#include <vector>

namespace cellfree {

/// One sweep axis: a scalar config key with the values it takes.
struct SweepAxis {
    std::string key;
    std::vector<std::string> values;
};

struct ParsedConfig {
    SimConfig base;
    std::vector<SweepAxis> sweeps; // cells = cross product over axes
};

/// Applies `key = value` to a config. Throws std::invalid_argument naming the
/// key on unknown keys or unparseable values.
void apply_config_key(SimConfig& cfg, const std::string& key, const std::string& value);

/// Parses the sectioned key/value config format ('#' or ';' comments).
/// Sections group keys for readability; keys are globally unique. The
/// [sweep] section lists comma-separated values per key.
ParsedConfig parse_config_text(const std::string& text);
ParsedConfig parse_config_file(const std::string& path);

} // namespace cellfree

#endif
