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

#ifndef CELLFREE_EXPERIMENT_HPP
#define CELLFREE_EXPERIMENT_HPP

#include "cellfree/config_io.hpp"
#include "cellfree/eval.hpp"

#include <iosfwd>

namespace cellfree {

/// One independently runnable scenario cell.
struct ExperimentCell {
    SimConfig cfg;
    std::string id;   // cell_<config hash>
    std::string desc; // swept key=value assignments
};

struct ExperimentPlan {
    std::vector<ExperimentCell> cells;
    std::string out_dir;
};

/// Expands the sweep cross product into cells. Throws on duplicate cell ids.
ExperimentPlan build_plan(const ParsedConfig& parsed, const std::string& out_dir);

/// Runs every cell and writes per-cell rates.csv / cdf.csv / summary.json
/// plus a top-level manifest.json. Returns 0, or 1 if any cell failed
/// (remaining cells still run).
int run_experiment(const ExperimentPlan& plan, std::ostream& log);

struct SchemeRanking {
    std::string scheme;
    double mean_sum_se_dl = 0.0;
    int cells = 0;
};

/// Ranks schemes by DL sum spectral efficiency averaged over the summary
/// files found under `paths` (files or directories); ties keep name order.
std::vector<SchemeRanking> compare_schemes(const std::vector<std::string>& paths);

std::string ranking_table(const std::vector<SchemeRanking>& ranking);

} // namespace cellfree

#endif
