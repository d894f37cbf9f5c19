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

#include "cellfree/association.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <numeric>

namespace cellfree {

int AssociationGraph::num_served() const {
    int n = 0;
    for (const auto& c : clusters) {
        n += c.empty() ? 0 : 1;
    }
    return n;
}

int AssociationGraph::num_edges() const {
    int n = 0;
    for (const auto& c : clusters) {
        n += int(c.size());
    }
    return n;
}

namespace {

/// Least-globally-used pilot among those unused at RRH l; ties to lowest index.
int pick_pilot(const std::vector<int>& global_use, const std::vector<std::uint8_t>& used_here) {
    int best = -1;
    for (int t = 0; t < int(global_use.size()); ++t) {
        if (used_here[t]) {
            continue;
        }
        if (best < 0 || global_use[t] < global_use[best]) {
            best = t;
        }
    }
    return best;
}

} // namespace

AssociationGraph form_clusters(const Lsfc& lsfc, const SimConfig& cfg, RngStream& rng) {
    const int num_ue = int(lsfc.beta.rows());
    const int num_rrh = int(lsfc.beta.cols());

    AssociationGraph g;
    g.num_rrh = num_rrh;
    g.num_ue = num_ue;
    g.pilot_dim = cfg.pilot_dim;
    g.clusters.assign(num_ue, {});
    g.users.assign(num_rrh, {});
    g.pilot.assign(num_ue, -1);
    g.edge_bits.assign(size_t(num_ue) * num_rrh, 0);

    // pilots used at each RRH, and global adoption counts for the tie rule
    std::vector<std::vector<std::uint8_t>> pilot_used(num_rrh,
                                                      std::vector<std::uint8_t>(cfg.pilot_dim, 0));
    std::vector<int> global_use(cfg.pilot_dim, 0);

    // random UE processing order (Fisher-Yates)
    std::vector<int> order(num_ue);
    std::iota(order.begin(), order.end(), 0);
    for (int i = num_ue - 1; i > 0; --i) {
        std::swap(order[i], order[size_t(rng.uniform_index(std::uint64_t(i) + 1))]);
    }

    const double beta_min = cfg.snr_threshold / (cfg.ant_per_rrh * lsfc.snr);

    for (int k : order) {
        std::vector<int> eligible;
        for (int l = 0; l < num_rrh; ++l) {
            if (lsfc.beta(k, l) >= beta_min) {
                eligible.push_back(l);
            }
        }
        std::sort(eligible.begin(), eligible.end(), [&](int a, int b) {
            if (lsfc.beta(k, a) != lsfc.beta(k, b)) {
                return lsfc.beta(k, a) > lsfc.beta(k, b);
            }
            return a < b;
        });

        for (int l : eligible) {
            if (int(g.clusters[k].size()) >= cfg.max_cluster_size) {
                break;
            }
            if (int(g.users[l].size()) >= cfg.pilot_dim) {
                continue;
            }
            if (g.pilot[k] >= 0) {
                if (pilot_used[l][g.pilot[k]]) {
                    continue;
                }
            } else {
                const int t = pick_pilot(global_use, pilot_used[l]);
                // a free pilot always exists here since |U_l| < pilot_dim
                g.pilot[k] = t;
                ++global_use[t];
            }
            pilot_used[l][g.pilot[k]] = 1;
            g.clusters[k].push_back(l);
            g.users[l].push_back(k);
            g.edge_bits[size_t(k) * num_rrh + l] = 1;
        }
    }

    // Unserved UEs still transmit a pilot; give them the least-used one.
    for (int k = 0; k < num_ue; ++k) {
        if (g.pilot[k] < 0) {
            int best = 0;
            for (int t = 1; t < cfg.pilot_dim; ++t) {
                if (global_use[t] < global_use[best]) {
                    best = t;
                }
            }
            g.pilot[k] = best;
            ++global_use[best];
        }
    }

    for (auto& c : g.clusters) {
        std::sort(c.begin(), c.end());
    }
    for (auto& u : g.users) {
        std::sort(u.begin(), u.end());
    }
    return g;
}

std::vector<int> ues_served_by_cluster(const AssociationGraph& graph, int ue) {
    std::vector<std::uint8_t> in(graph.num_ue, 0);
    for (int l : graph.clusters[ue]) {
        for (int j : graph.users[l]) {
            in[j] = 1;
        }
    }
    std::vector<int> out;
    for (int j = 0; j < graph.num_ue; ++j) {
        if (in[j]) {
            out.push_back(j);
        }
    }
    return out;
}

std::string graph_to_json(const AssociationGraph& graph) {
    nlohmann::json j;
    j["num_rrh"] = graph.num_rrh;
    j["num_ue"] = graph.num_ue;
    j["pilot_dim"] = graph.pilot_dim;
    j["pilot"] = graph.pilot;
    auto& edges = j["edges"] = nlohmann::json::array();
    for (int k = 0; k < graph.num_ue; ++k) {
        for (int l : graph.clusters[k]) {
            edges.push_back({l, k});
        }
    }
    return j.dump(2);
}

} // namespace cellfree
