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

#ifndef CELLFREE_ASSOCIATION_HPP
#define CELLFREE_ASSOCIATION_HPP

#include "cellfree/netgeom.hpp"

#include <string>

namespace cellfree {

/// Bipartite UE-RRH association. clusters[k] and users[l] are the two views of
/// the same edge set and are kept consistent; both are sorted ascending.
/// Every UE carries a pilot in [0, pilot_dim) (unserved UEs still transmit
/// pilots and contaminate, they just have no serving cluster).
struct AssociationGraph {
    int num_rrh = 0;
    int num_ue = 0;
    int pilot_dim = 0;
    std::vector<std::vector<int>> clusters; // per UE: serving RRHs C_k, |C_k| <= Q
    std::vector<std::vector<int>> users;    // per RRH: served UEs U_l, |U_l| <= tau_p
    std::vector<int> pilot;                 // per UE
    std::vector<std::uint8_t> edge_bits;    // row-major [k * num_rrh + l]

    bool has_edge(int rrh, int ue) const { return edge_bits[size_t(ue) * num_rrh + rrh] != 0; }
    bool served(int ue) const { return !clusters[ue].empty(); }
    int num_served() const;
    int num_edges() const;
};

/// Greedy user-centric cluster formation under the SNR threshold, the cluster
/// size cap and the per-RRH pilot budget. UEs are processed in random order;
/// each UE requests its eligible RRHs in decreasing beta order. An RRH grants
/// iff it has pilot room and the UE's pilot (or, for a pilotless UE, some
/// pilot, chosen least-globally-used) is unused among its current users.
AssociationGraph form_clusters(const Lsfc& lsfc, const SimConfig& cfg, RngStream& rng);

/// Union of U_l over the serving cluster of `ue` (empty if unserved).
std::vector<int> ues_served_by_cluster(const AssociationGraph& graph, int ue);

/// JSON document with edges and pilots, for run reproducibility.
std::string graph_to_json(const AssociationGraph& graph);

} // namespace cellfree

#endif
