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

#ifndef CELLFREE_BEAMFORMING_HPP
#define CELLFREE_BEAMFORMING_HPP

#include "cellfree/channel.hpp"

namespace cellfree {

/// LM-dimensional vector with nonzero M-blocks only on a UE's serving cluster.
/// `rrhs` is the cluster in ascending order; `blocks` is aligned with it.
struct BlockVector {
    std::vector<int> rrhs;
    std::vector<CVector> blocks;

    double squared_norm() const;
    void scale(double s);
    /// Inner product v^H h_j against the channel column of UE `ue` (all blocks).
    Complex dot_channel(const std::vector<CMatrix>& by_rrh, int ue) const;
};

/// Per-UE stacked combiners (or centralized precoders); unit norm when `ok`.
struct CombinerSet {
    std::vector<BlockVector> vec;
    std::vector<std::uint8_t> ok; // false: unserved or degenerate (zero vector)
};

/// Cluster-wise global zero-forcing: project the UE's stacked known channel
/// onto the orthogonal complement of the co-served UEs' known channel columns
/// (SVD basis, singular values below eps_rank*sigma_max dropped) and
/// normalize. If the projection collapses below eps_zf (zero-forcing outage,
/// e.g. co-linear channels under small supports), the most co-linear columns
/// are excluded one at a time until it does not; `excluded` reports them.
BlockVector gzf_combiner(const EstimateSet& estimates, const AssociationGraph& graph, int ue,
                         double eps_rank = kEpsRank, double eps_zf = kEpsZf,
                         std::vector<int>* excluded = nullptr);

CombinerSet gzf_combiners(const EstimateSet& estimates, const AssociationGraph& graph);

/// Local LMMSE receive vector at one RRH. The out-of-cell interference plus
/// noise is treated as white with per-antenna variance
/// sigma^2 = 1 + snr * sum of beta over UEs not served by this RRH.
CVector lmmse_local_combiner(const EstimateSet& estimates, const AssociationGraph& graph,
                             const Lsfc& lsfc, int rrh, int ue, double snr);

/// Max-SINR combining weights across a UE's serving RRHs, treating per-RRH
/// observations as independent branches: w_l = a_l / Gamma_l with a_l the
/// nominal signal amplitude and Gamma_l the nominal interference-plus-noise
/// power through v_{l,k}. Returns the assembled unit-norm stacked vector.
BlockVector global_combining_weights(const EstimateSet& estimates, const AssociationGraph& graph,
                                     const Lsfc& lsfc, int ue,
                                     const std::vector<CVector>& local_vectors, double snr,
                                     std::vector<Complex>* weights_out = nullptr);

CombinerSet lmmse_combiners(const EstimateSet& estimates, const AssociationGraph& graph,
                            const Lsfc& lsfc, double snr);

enum class BlockRole : std::uint8_t { Zf, Mrt, Outage };

/// Per-RRH local precoders; u[l][i] and role[l][i] are aligned with users[l].
/// Blocks are individually unit-norm except Outage blocks, which are zero.
struct LocalPrecoders {
    std::vector<std::vector<CVector>> u;
    std::vector<std::vector<BlockRole>> role;
};

/// Local partial zero-forcing: ZF via the pseudoinverse for a greedily chosen
/// subset with the largest channel gains whose channels stay numerically
/// independent (at most M), normalized MRT for the rest. When every user
/// passes the rank test this is plain local ZF over all of U_l.
LocalPrecoders lpzf_precoders(const EstimateSet& estimates, const AssociationGraph& graph,
                              double eps_rank = kEpsRank);

/// Local ZF benchmark: subset selection by largest LSFC; UEs not selected are
/// declared in outage by this RRH (zero block) instead of MRT.
LocalPrecoders lzf_precoders(const EstimateSet& estimates, const AssociationGraph& graph,
                             const Lsfc& lsfc, double eps_rank = kEpsRank);

/// Centralized DL precoders are the UL combiners (checked unit-norm copies).
CombinerSet centralized_precoders_from_combiners(const CombinerSet& combiners);

} // namespace cellfree

#endif
