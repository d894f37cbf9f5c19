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

#include "cellfree/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace cellfree {

SupportSet compute_supports(const Layout& layout, const SimConfig& cfg) {
    const int num_rrh = int(layout.rrh_pos.cols());
    const int num_ue = int(layout.ue_pos.cols());
    SupportSet out;
    out.num_ant = cfg.ant_per_rrh;
    out.sets.resize(num_rrh);
    for (int l = 0; l < num_rrh; ++l) {
        out.sets[l].resize(num_ue);
        for (int k = 0; k < num_ue; ++k) {
            out.sets[l][k] = angular_support(layout, l, k, cfg);
        }
    }
    return out;
}

CMatrix dft_submatrix(int num_ant, const std::vector<int>& support) {
    if (support.empty()) {
        throw std::invalid_argument("dft_submatrix: empty support set");
    }
    CMatrix f(num_ant, support.size());
    const double scale = 1.0 / std::sqrt(double(num_ant));
    for (size_t c = 0; c < support.size(); ++c) {
        const int n = support[c];
        for (int m = 0; m < num_ant; ++m) {
            const double arg = -2.0 * kPi * m * n / num_ant;
            f(m, int(c)) = scale * Complex(std::cos(arg), std::sin(arg));
        }
    }
    return f;
}

ChannelSet draw_channels(const Lsfc& lsfc, const SupportSet& supports, RngStream& rng) {
    const int num_ue = int(lsfc.beta.rows());
    const int num_rrh = int(lsfc.beta.cols());
    const int num_ant = supports.num_ant;
    ChannelSet out;
    out.by_rrh.resize(num_rrh);
    for (int l = 0; l < num_rrh; ++l) {
        CMatrix& h = out.by_rrh[l];
        h.resize(num_ant, num_ue);
        for (int k = 0; k < num_ue; ++k) {
            const auto& s = supports.of(l, k);
            const CMatrix f = dft_submatrix(num_ant, s);
            CVector nu(int(s.size()));
            for (int i = 0; i < nu.size(); ++i) {
                nu[i] = rng.cnormal();
            }
            const double scale = std::sqrt(lsfc.beta(k, l) * num_ant / double(s.size()));
            h.col(k) = scale * (f * nu);
        }
    }
    return out;
}

std::vector<CMatrix> received_pilot_matrix(const ChannelSet& channels,
                                           const AssociationGraph& graph, const Lsfc& lsfc,
                                           RngStream& rng) {
    const int num_rrh = int(channels.by_rrh.size());
    const int num_ue = graph.num_ue;
    const int tau_p = graph.pilot_dim;
    const double amp = std::sqrt(double(tau_p) * lsfc.snr);
    std::vector<CMatrix> out(num_rrh);
    for (int l = 0; l < num_rrh; ++l) {
        const CMatrix& h = channels.by_rrh[l];
        CMatrix y = CMatrix::Zero(h.rows(), tau_p);
        for (int i = 0; i < num_ue; ++i) {
            y.col(graph.pilot[i]) += amp * h.col(i);
        }
        for (int t = 0; t < tau_p; ++t) {
            for (int m = 0; m < h.rows(); ++m) {
                y(m, t) += rng.cnormal();
            }
        }
        out[l] = std::move(y);
    }
    return out;
}

EstimateSet estimate_channels(const std::vector<CMatrix>& pilot_rx,
                              const AssociationGraph& graph, const SupportSet& supports,
                              double snr) {
    const int num_rrh = int(pilot_rx.size());
    const double inv_amp = 1.0 / std::sqrt(double(graph.pilot_dim) * snr);
    EstimateSet out;
    out.by_rrh.resize(num_rrh);
    for (int l = 0; l < num_rrh; ++l) {
        const CMatrix& y = pilot_rx[l];
        CMatrix est = CMatrix::Zero(y.rows(), graph.num_ue);
        for (int k : graph.users[l]) {
            const CMatrix f = dft_submatrix(int(y.rows()), supports.of(l, k));
            const CVector despread = inv_amp * y.col(graph.pilot[k]);
            est.col(k) = f * (f.adjoint() * despread);
        }
        out.by_rrh[l] = std::move(est);
    }
    return out;
}

EstimateSet ideal_estimates(const ChannelSet& channels, const AssociationGraph& graph) {
    EstimateSet out;
    out.by_rrh.resize(channels.by_rrh.size());
    for (int l = 0; l < int(channels.by_rrh.size()); ++l) {
        const CMatrix& h = channels.by_rrh[l];
        CMatrix est = CMatrix::Zero(h.rows(), h.cols());
        for (int k : graph.users[l]) {
            est.col(k) = h.col(k);
        }
        out.by_rrh[l] = std::move(est);
    }
    return out;
}

EstimateSet make_estimates(const ChannelSet& channels, const AssociationGraph& graph,
                           const SupportSet& supports, const Lsfc& lsfc, const SimConfig& cfg,
                           RngStream& pilot_rng) {
    if (cfg.csi == CsiMode::Ideal) {
        return ideal_estimates(channels, graph);
    }
    const auto pilot_rx = received_pilot_matrix(channels, graph, lsfc, pilot_rng);
    return estimate_channels(pilot_rx, graph, supports, lsfc.snr);
}

} // namespace cellfree
