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

#include "cellfree/experiment.hpp"

#include "cellfree/npy.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

namespace fs = std::filesystem;

namespace cellfree {

namespace {

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    f << content;
}

/// Debug dumps for the first layout / first draw of a cell.
void dump_debug_artifacts(const SimConfig& cfg, const fs::path& dir) {
    const LayoutContext ctx = make_layout_context(cfg, 0);
    if (cfg.dump_association) {
        write_file(dir / "association_layout0.json", graph_to_json(ctx.graph));
    }
    if (!cfg.dump_realization && !cfg.dump_power) {
        return;
    }
    RngStream fading = substream(cfg.seed, StreamKind::Fading, 0, 0);
    RngStream pilot = substream(cfg.seed, StreamKind::PilotNoise, 0, 0);
    const ChannelSet channels = draw_channels(ctx.lsfc, ctx.supports, fading);
    const EstimateSet estimates =
        make_estimates(channels, ctx.graph, ctx.supports, ctx.lsfc, cfg, pilot);
    if (cfg.dump_realization) {
        write_npy_complex(dir / "channels_layout0_draw0.npy", channels.by_rrh);
        write_npy_complex(dir / "estimates_layout0_draw0.npy", estimates.by_rrh);
    }
    if (cfg.dump_power) {
        const CombinerSet comb = cfg.schemes.front().combiner == CombinerKind::Lmmse
                                     ? lmmse_combiners(estimates, ctx.graph, ctx.lsfc, ctx.lsfc.snr)
                                     : gzf_combiners(estimates, ctx.graph);
        const ThetaMatrix theta =
            theta_matrix(estimates, ctx.graph, ctx.lsfc, comb, cfg.theta_exact_norms);
        const RVector gamma = nominal_ul_sinr(theta, ctx.lsfc.snr);
        const DualityResult duality = duality_power_allocation(theta, gamma, ctx.lsfc.snr);
        nlohmann::json j;
        j["snr"] = ctx.lsfc.snr;
        j["theta"] = nlohmann::json::array();
        for (int r = 0; r < theta.m.rows(); ++r) {
            std::vector<double> row(size_t(theta.m.cols()));
            for (int c = 0; c < theta.m.cols(); ++c) {
                row[size_t(c)] = theta.m(r, c);
            }
            j["theta"].push_back(row);
        }
        j["gamma"] = std::vector<double>(gamma.data(), gamma.data() + gamma.size());
        j["q"] = std::vector<double>(duality.q.data(), duality.q.data() + duality.q.size());
        j["feasible"] = duality.feasible;
        j["power_sum"] = duality.power_sum;
        write_file(dir / "power_layout0_draw0.json", j.dump(2));
    }
}

} // namespace

ExperimentPlan build_plan(const ParsedConfig& parsed, const std::string& out_dir) {
    ExperimentPlan plan;
    plan.out_dir = out_dir;

    std::vector<ExperimentCell> cells;
    cells.push_back({parsed.base, "", ""});
    for (const SweepAxis& axis : parsed.sweeps) {
        std::vector<ExperimentCell> expanded;
        for (const ExperimentCell& cell : cells) {
            for (const std::string& value : axis.values) {
                ExperimentCell next = cell;
                apply_config_key(next.cfg, axis.key, value);
                next.desc += (next.desc.empty() ? "" : " ") + axis.key + "=" + value;
                expanded.push_back(std::move(next));
            }
        }
        cells = std::move(expanded);
    }

    std::set<std::string> seen;
    for (ExperimentCell& cell : cells) {
        cell.cfg.validate();
        cell.id = "cell_" + config_hash(cell.cfg);
        if (!seen.insert(cell.id).second) {
            throw std::invalid_argument("duplicate cell '" + cell.id +
                                        "' (sweep values collide): " + cell.desc);
        }
        plan.cells.push_back(std::move(cell));
    }
    return plan;
}

int run_experiment(const ExperimentPlan& plan, std::ostream& log) {
    fs::create_directories(plan.out_dir);

    nlohmann::json manifest;
    manifest["version"] = "1.0";
    manifest["cells"] = nlohmann::json::array();
    int failures = 0;

    for (const ExperimentCell& cell : plan.cells) {
        const fs::path dir = fs::path(plan.out_dir) / cell.id;
        nlohmann::json entry;
        entry["id"] = cell.id;
        entry["desc"] = cell.desc;
        entry["config"] = config_canonical_text(cell.cfg);
        entry["seed"] = cell.cfg.seed;
        try {
            fs::create_directories(dir);
            log << "[" << cell.id << "] " << (cell.desc.empty() ? "(base)" : cell.desc)
                << " ..." << std::endl;
            const RateReport report = ergodic_rates(cell.cfg);
            write_file(dir / "rates.csv", report_to_csv(report));
            write_file(dir / "cdf.csv", report_cdf_csv(report));
            write_file(dir / "summary.json", report_summary_json(report));
            dump_debug_artifacts(cell.cfg, dir);
            entry["status"] = "ok";
            for (size_t si = 0; si < report.schemes.size(); ++si) {
                entry["mean_sum_se_dl"][report.schemes[si].name] =
                    report.mean_sum_se_dl(int(si));
            }
        } catch (const std::exception& e) {
            log << "[" << cell.id << "] FAILED: " << e.what() << std::endl;
            entry["status"] = std::string("failed: ") + e.what();
            ++failures;
        }
        manifest["cells"].push_back(std::move(entry));
    }
    write_file(fs::path(plan.out_dir) / "manifest.json", manifest.dump(2));
    log << plan.cells.size() << " cell(s), " << failures << " failure(s)" << std::endl;
    return failures == 0 ? 0 : 1;
}

std::vector<SchemeRanking> compare_schemes(const std::vector<std::string>& paths) {
    std::vector<fs::path> files;
    for (const std::string& p : paths) {
        if (fs::is_directory(p)) {
            for (const auto& e : fs::recursive_directory_iterator(p)) {
                if (e.is_regular_file() && e.path().filename() == "summary.json") {
                    files.push_back(e.path());
                }
            }
        } else if (fs::exists(p)) {
            files.push_back(p);
        } else {
            throw std::invalid_argument("no such file or directory: '" + p + "'");
        }
    }
    std::sort(files.begin(), files.end());

    std::map<std::string, SchemeRanking> agg;
    for (const fs::path& f : files) {
        std::ifstream in(f);
        nlohmann::json j;
        in >> j;
        for (const auto& [name, s] : j.at("schemes").items()) {
            SchemeRanking& r = agg[name];
            r.scheme = name;
            r.mean_sum_se_dl += s.at("mean_sum_se_dl").get<double>();
            r.cells += 1;
        }
    }
    std::vector<SchemeRanking> out;
    for (auto& [name, r] : agg) {
        if (r.cells > 0) {
            r.mean_sum_se_dl /= r.cells;
        }
        out.push_back(r);
    }
    std::stable_sort(out.begin(), out.end(), [](const SchemeRanking& a, const SchemeRanking& b) {
        if (a.mean_sum_se_dl != b.mean_sum_se_dl) {
            return a.mean_sum_se_dl > b.mean_sum_se_dl;
        }
        return a.scheme < b.scheme;
    });
    return out;
}

std::string ranking_table(const std::vector<SchemeRanking>& ranking) {
    std::ostringstream os;
    os << "rank  scheme          mean_sum_se_dl  cells\n";
    int rank = 1;
    for (const SchemeRanking& r : ranking) {
        os << std::left << std::setw(6) << rank++ << std::setw(16) << r.scheme << std::setw(16)
           << std::setprecision(6) << r.mean_sum_se_dl << r.cells << '\n';
    }
    return os.str();
}

} // namespace cellfree
