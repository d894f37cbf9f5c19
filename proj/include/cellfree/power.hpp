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

#ifndef CELLFREE_POWER_HPP
#define CELLFREE_POWER_HPP

#include "cellfree/beamforming.hpp"

namespace cellfree {

/// Nominal interference coefficients computed from the partial CSI available
/// at a central processor. Entry (j, k): row j is the transmitting (UL) /
/// victim (DL) UE, column k the owner of the beamformer. The UL nominal SINR
/// of UE k reads column k, the DL nominal SINR reads row k; one matrix serves
/// both because the precoders are the combiners. Rows and columns of unserved
/// UEs are zero: the nominal power-allocation problem runs on the served set.
struct ThetaMatrix {
    RMatrix m; // num_ue x num_ue, nonnegative
};

/// theta(j, k) = |sum over shared RRHs of hhat_{l,j}^H u_{l,k}|^2
///             + (1/|C_k|) * sum of beta_{l,j} over RRHs of C_k unknown to j
/// (the second term uses exact block norms instead of 1/|C_k| when
/// exact_norms is set). Diagonal: |v_k^H hhat_k|^2 over C_k.
ThetaMatrix theta_matrix(const EstimateSet& estimates, const AssociationGraph& graph,
                         const Lsfc& lsfc, const CombinerSet& precoders,
                         bool exact_norms = false);

/// Conditional mean of |v_k^H h_j|^2 given the CSI known to cluster C_k, with
/// the true subspace covariance of the unknown channels (no isotropic
/// substitution). Validation oracle for the isotropic theta entries.
double theta_exact_conditional_oracle(const EstimateSet& estimates, const SupportSet& supports,
                                      const AssociationGraph& graph, const Lsfc& lsfc,
                                      const CombinerSet& combiners, int owner_k, int tx_j);

/// Nominal UL SINR per UE: theta_kk / (1/snr + off-diagonal column sum).
RVector nominal_ul_sinr(const ThetaMatrix& theta, double snr);

/// Nominal DL SINR per UE at powers q: theta_kk q_k / (1/snr + row_k . q off-diag).
RVector nominal_dl_sinr(const ThetaMatrix& theta, const RVector& q, double snr);

struct DualityResult {
    RVector q;             // DL powers, zero for unserved UEs
    bool feasible = false; // solve succeeded with q >= 0
    double residual = 0.0; // relative linear-system residual
    double power_sum = 0.0;
};

/// DL powers equalizing the nominal DL SINRs to the targets gamma: solve
/// (I - diag(mu) Theta) q = mu / snr with mu_k = gamma_k / ((1+gamma_k) theta_kk).
/// When the targets are the nominal UL SINRs, q is nonnegative and its sum
/// equals the number of served UEs (uniform unit UL powers carry over).
DualityResult duality_power_allocation(const ThetaMatrix& theta, const RVector& gamma,
                                       double snr);

/// Equal power allocation: q_k = 1 for served UEs, 0 otherwise.
RVector epa_central(const AssociationGraph& graph);

/// Per-edge DL powers, aligned with users[l] like LocalPrecoders.
struct DistributedPower {
    std::vector<std::vector<double>> q;
};

/// Equal split of the per-RRH budget over the RRH's active (non-outage) UEs.
DistributedPower epa_local(const AssociationGraph& graph, double power_per_rrh,
                           const LocalPrecoders* active_from = nullptr);

/// LSFC-proportional split of the per-RRH budget over the active UEs.
DistributedPower ppa_local(const AssociationGraph& graph, const Lsfc& lsfc, double power_per_rrh,
                           const LocalPrecoders* active_from = nullptr);

} // namespace cellfree

#endif
