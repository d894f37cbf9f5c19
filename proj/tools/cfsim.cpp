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
//
// cfsim run     — run an experiment plan from a config file
// cfsim compare — rank schemes by DL sum spectral efficiency across results
//
// Exit codes: 0 success, 1 cell/runtime failure, 2 usage or config error.

#include "cellfree/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"cell-free network link-level simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "results";
    std::string schemes_filter;
    std::uint64_t seed_override = 0;
    bool has_seed = false;
    int jobs = 0;
    bool dry_run = false;

    CLI::App* run = app.add_subcommand("run", "run the experiment described by a config file");
    run->add_option("-c,--config", config_path, "config file path")->required();
    run->add_option("-o,--out", out_dir, "output directory (default: results)");
    run->add_option("--seed", seed_override, "override the master seed")
        ->each([&](const std::string&) { has_seed = true; });
    run->add_option("-j,--jobs", jobs, "worker threads (0 = hardware)");
    run->add_option("--schemes", schemes_filter, "comma-separated scheme filter");
    run->add_flag("--dry-run", dry_run, "print the plan and exit");

    std::vector<std::string> compare_paths;
    CLI::App* cmp = app.add_subcommand("compare", "rank schemes from result directories");
    cmp->add_option("paths", compare_paths, "result directories or summary.json files")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            cellfree::ParsedConfig parsed = cellfree::parse_config_file(config_path);
            if (has_seed) {
                parsed.base.seed = seed_override;
            }
            if (jobs > 0 || parsed.base.threads == 0) {
                parsed.base.threads = jobs;
            }
            if (!schemes_filter.empty()) {
                cellfree::apply_config_key(parsed.base, "schemes", schemes_filter);
            }
            const cellfree::ExperimentPlan plan = cellfree::build_plan(parsed, out_dir);
            if (dry_run) {
                std::cout << plan.cells.size() << " cell(s) -> " << plan.out_dir << "\n";
                for (const auto& cell : plan.cells) {
                    std::cout << "  " << cell.id << "  "
                              << (cell.desc.empty() ? "(base)" : cell.desc) << "\n";
                }
                return 0;
            }
            return cellfree::run_experiment(plan, std::cout);
        }
        const auto ranking = cellfree::compare_schemes(compare_paths);
        std::cout << cellfree::ranking_table(ranking);
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
}
