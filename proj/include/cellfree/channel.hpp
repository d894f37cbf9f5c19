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

#ifndef CELLFREE_CHANNEL_HPP
#define CELLFREE_CHANNEL_HPP

#include "cellfree/association.hpp"

namespace cellfree {

/// Per-link DFT angle index sets, indexed [rrh][ue].
struct SupportSet {
    int num_ant = 0;
    std::vector<std::vector<std::vector<int>>> sets;
    const std::vector<int>& of(int rrh, int ue) const { return sets[rrh][ue]; }
};

SupportSet compute_supports(const Layout& layout, const SimConfig& cfg);

/// Columns S of the M x M unitary DFT matrix F(m, n) = exp(-j*2*pi*m*n/M)/sqrt(M).
CMatrix dft_submatrix(int num_ant, const std::vector<int>& support);

/// True small-scale channels, one M x K block column set per RRH:
/// by_rrh[l].col(k) is the channel from UE k to RRH l.
struct ChannelSet {
    std::vector<CMatrix> by_rrh;
};

/// Channel estimates; columns outside the association edge set are zero.
struct EstimateSet {
    std::vector<CMatrix> by_rrh;
};

/// Single-ring subspace model: h = sqrt(beta*M/|S|) * F(:,S) * nu with nu
/// i.i.d. CN(0,1), independent across links. E||h||^2 = beta*M.
ChannelSet draw_channels(const Lsfc& lsfc, const SupportSet& supports, RngStream& rng);

/// Received UL pilot field, one M x tau_p matrix per RRH. The pilot codebook
/// is sqrt(tau_p*snr) times the identity columns; noise is i.i.d. CN(0,1).
std::vector<CMatrix> received_pilot_matrix(const ChannelSet& channels,
                                           const AssociationGraph& graph, const Lsfc& lsfc,
                                           RngStream& rng);

/// Despread-and-project estimator: for each edge, despread the pilot field
/// with the UE's pilot and project onto the link's DFT subspace. Equals the
/// true channel plus same-pilot contamination plus projected noise.
EstimateSet estimate_channels(const std::vector<CMatrix>& pilot_rx,
                              const AssociationGraph& graph, const SupportSet& supports,
                              double snr);

/// Ideal partial CSI: true channels restricted to the edge set.
EstimateSet ideal_estimates(const ChannelSet& channels, const AssociationGraph& graph);

/// Estimates through the configured CSI mode (ideal restriction, or pilots + estimation).
EstimateSet make_estimates(const ChannelSet& channels, const AssociationGraph& graph,
                           const SupportSet& supports, const Lsfc& lsfc, const SimConfig& cfg,
                           RngStream& pilot_rng);

} // namespace cellfree

#endif
