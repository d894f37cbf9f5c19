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

#ifndef CELLFREE_EVAL_HPP
#define CELLFREE_EVAL_HPP

#include "cellfree/power.hpp"

namespace cellfree {

// --- actual (optimistic) SINRs against true channels --------------------

/// UL SINR of UE `ue` through unit-norm combiner v: the useful and
/// interference terms use the true channels of all UEs.
double ul_sinr_actual(const ChannelSet& channels, const BlockVector& v, double snr, int ue);

RVector ul_sinr_actual_all(const ChannelSet& channels, const CombinerSet& combiners, double snr);

/// DL SINR with centralized precoders (columns of the combiner reuse) and powers q.
double dl_sinr_actual(const ChannelSet& channels, const CombinerSet& precoders, const RVector& q,
                      double snr, int ue);

RVector dl_sinr_actual_all(const ChannelSet& channels, const CombinerSet& precoders,
                           const RVector& q, double snr);

/// DL SINR with per-RRH precoders and powers; per-RRH signal powers add
/// noncoherently in both the useful and the interference terms.
double dl_sinr_distributed(const ChannelSet& channels, const AssociationGraph& graph,
                           const LocalPrecoders& precoders, const DistributedPower& power,
                           double snr, int ue);

RVector dl_sinr_distributed_all(const ChannelSet& channels, const AssociationGraph& graph,
                                const LocalPrecoders& precoders, const DistributedPower& power,
                                double snr);

/// Total transmitted DL power (trace of the transmit covariance).
double dl_total_power(const CombinerSet& precoders, const RVector& q);
double dl_total_power(const LocalPrecoders& precoders, const DistributedPower& power);

// --- Monte Carlo rates ---------------------------------------------------

double rate_from_sinr(double sinr, bool bits);

/// Pre-log factor (1 - tau_p/T) applied to an ergodic rate.
double spectral_efficiency(double rate, const SimConfig& cfg);

/// Empirical CDF: sorted sample values with cumulative probabilities (i+1)/n.
struct EmpiricalCdf {
    RVector values;
    RVector prob;
    bool empty() const { return values.size() == 0; }
};

EmpiricalCdf aggregate_cdf(std::vector<double> samples);

/// Immutable per-layout state: placement, LSFCs, clusters and angle supports.
/// Fading draws condition on this.
struct LayoutContext {
    Layout layout;
    Lsfc lsfc;
    AssociationGraph graph;
    SupportSet supports;
};

LayoutContext make_layout_context(const SimConfig& cfg, int layout_index);

/// Per-draw SINR vectors (one entry per configured scheme; UL only exists for
/// centralized schemes and has size zero otherwise).
struct DrawEval {
    std::vector<RVector> ul_sinr;
    std::vector<RVector> dl_sinr;
    std::vector<std::uint8_t> duality_infeasible;
};

DrawEval evaluate_draw(const SimConfig& cfg, const LayoutContext& ctx, int layout_index,
                       int draw_index);

struct SchemeRates {
    std::string name;
    bool centralized = false;
    RMatrix ul_rate;        // n_layouts x num_ue, zero rows for local schemes
    RMatrix dl_rate;        // n_layouts x num_ue
    RMatrix ul_rate_stderr; // Monte Carlo standard error of the mean
    RMatrix dl_rate_stderr;
    long infeasible_draws = 0; // duality fallbacks to EPA
};

struct RateReport {
    SimConfig cfg;
    std::vector<SchemeRates> schemes;
    std::vector<std::vector<std::uint8_t>> served; // [layout][ue]
    long total_draws = 0;
    long unserved_ue_layouts = 0; // (layout, ue) pairs without a serving cluster

    /// Layout-averaged sum spectral efficiency for one scheme.
    double mean_sum_se_dl(int scheme) const;
    double mean_sum_se_ul(int scheme) const;
    /// Pooled per-UE DL (or UL) spectral efficiencies across layouts.
    std::vector<double> pooled_se(int scheme, bool dl) const;
};

/// Full Monte Carlo evaluation: layouts, fading draws, all configured
/// schemes. Deterministic for a fixed config and seed regardless of the
/// thread count (fixed reduction order by draw index).
RateReport ergodic_rates(const SimConfig& cfg);

// --- result serialization -------------------------------------------------

std::string report_to_csv(const RateReport& report);
std::string report_summary_json(const RateReport& report);
std::string report_cdf_csv(const RateReport& report);

/// Stable 64-bit FNV-1a hash of the canonical config text (cell identity).
std::string config_hash(const SimConfig& cfg);
std::string config_canonical_text(const SimConfig& cfg);

} // namespace cellfree

#endif
