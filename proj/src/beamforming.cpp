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

#include "cellfree/beamforming.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cellfree {

double BlockVector::squared_norm() const {
    double s = 0.0;
    for (const auto& b : blocks) {
        s += b.squaredNorm();
    }
    return s;
}

void BlockVector::scale(double s) {
    for (auto& b : blocks) {
        b *= s;
    }
}

Complex BlockVector::dot_channel(const std::vector<CMatrix>& by_rrh, int ue) const {
    Complex acc(0.0, 0.0);
    for (size_t i = 0; i < rrhs.size(); ++i) {
        acc += blocks[i].dot(by_rrh[rrhs[i]].col(ue)); // Eigen: conjugate-linear in *this
    }
    return acc;
}

namespace {

BlockVector zero_block_vector(const std::vector<int>& cluster, int num_ant) {
    BlockVector v;
    v.rrhs = cluster;
    v.blocks.assign(cluster.size(), CVector::Zero(num_ant));
    return v;
}

/// Splits a stacked cluster vector back into M-blocks.
BlockVector split_blocks(const std::vector<int>& cluster, const CVector& stacked, int num_ant) {
    BlockVector v;
    v.rrhs = cluster;
    v.blocks.resize(cluster.size());
    for (size_t i = 0; i < cluster.size(); ++i) {
        v.blocks[i] = stacked.segment(int(i) * num_ant, num_ant);
    }
    return v;
}

} // namespace

BlockVector gzf_combiner(const EstimateSet& estimates, const AssociationGraph& graph, int ue,
                         double eps_rank, double eps_zf, std::vector<int>* excluded) {
    if (!graph.served(ue)) {
        throw std::invalid_argument("gzf_combiner: UE has no serving cluster");
    }
    const auto& cluster = graph.clusters[ue];
    const int num_ant = int(estimates.by_rrh[cluster[0]].rows());
    const int rows = int(cluster.size()) * num_ant;

    CVector h_bar(rows);
    for (size_t i = 0; i < cluster.size(); ++i) {
        h_bar.segment(int(i) * num_ant, num_ant) = estimates.by_rrh[cluster[i]].col(ue);
    }
    const double h_norm = h_bar.norm();
    if (excluded) {
        excluded->clear();
    }
    if (h_norm == 0.0) {
        return zero_block_vector(cluster, num_ant); // degenerate estimate
    }

    // known channel columns of the co-served UEs, stacked on the cluster rows
    std::vector<int> cols = ues_served_by_cluster(graph, ue);
    cols.erase(std::remove(cols.begin(), cols.end(), ue), cols.end());
    CMatrix h_mat(rows, int(cols.size()));
    for (size_t c = 0; c < cols.size(); ++c) {
        for (size_t i = 0; i < cluster.size(); ++i) {
            const int l = cluster[i];
            h_mat.col(int(c)).segment(int(i) * num_ant, num_ant) =
                graph.has_edge(l, cols[c]) ? CVector(estimates.by_rrh[l].col(cols[c]))
                                           : CVector(CVector::Zero(num_ant));
        }
    }

    std::vector<int> active(cols.size());
    for (size_t i = 0; i < active.size(); ++i) {
        active[i] = int(i);
    }

    while (true) {
        CVector w = h_bar;
        if (!active.empty()) {
            CMatrix hi(rows, int(active.size()));
            for (size_t c = 0; c < active.size(); ++c) {
                hi.col(int(c)) = h_mat.col(active[c]);
            }
            Eigen::BDCSVD<CMatrix> svd(hi, Eigen::ComputeThinU);
            const auto& sv = svd.singularValues();
            int rank = 0;
            while (rank < sv.size() && sv[rank] > eps_rank * sv[0]) {
                ++rank;
            }
            const auto basis = svd.matrixU().leftCols(rank);
            w -= basis * (basis.adjoint() * h_bar);
        }
        const double w_norm = w.norm();
        if (w_norm > eps_zf * h_norm || active.empty()) {
            return split_blocks(cluster, w / w_norm, num_ant);
        }
        // zero-forcing outage: drop the co-served column most co-linear with h_bar
        size_t worst = 0;
        double worst_cos = -1.0;
        for (size_t c = 0; c < active.size(); ++c) {
            const double cn = h_mat.col(active[c]).norm();
            const double cosv =
                cn > 0.0 ? std::abs(h_mat.col(active[c]).dot(h_bar)) / (cn * h_norm) : -1.0;
            if (cosv > worst_cos) {
                worst_cos = cosv;
                worst = c;
            }
        }
        if (excluded) {
            excluded->push_back(cols[active[worst]]);
        }
        active.erase(active.begin() + long(worst));
    }
}

CombinerSet gzf_combiners(const EstimateSet& estimates, const AssociationGraph& graph) {
    CombinerSet out;
    out.vec.resize(graph.num_ue);
    out.ok.assign(graph.num_ue, 0);
    for (int k = 0; k < graph.num_ue; ++k) {
        if (!graph.served(k)) {
            continue;
        }
        out.vec[k] = gzf_combiner(estimates, graph, k);
        out.ok[k] = out.vec[k].squared_norm() > 0.0;
    }
    return out;
}

namespace {

/// 1 + snr * total beta of UEs unknown to this RRH (white-interference proxy).
double lmmse_sigma_sq(const AssociationGraph& graph, const Lsfc& lsfc, int rrh, double snr) {
    double sum = 0.0;
    for (int j = 0; j < graph.num_ue; ++j) {
        if (!graph.has_edge(rrh, j)) {
            sum += lsfc.beta(j, rrh);
        }
    }
    return 1.0 + snr * sum;
}

} // namespace

CVector lmmse_local_combiner(const EstimateSet& estimates, const AssociationGraph& graph,
                             const Lsfc& lsfc, int rrh, int ue, double snr) {
    if (!graph.has_edge(rrh, ue)) {
        throw std::invalid_argument("lmmse_local_combiner: UE not served by this RRH");
    }
    const CMatrix& est = estimates.by_rrh[rrh];
    const int num_ant = int(est.rows());
    CMatrix a = lmmse_sigma_sq(graph, lsfc, rrh, snr) * CMatrix::Identity(num_ant, num_ant);
    for (int j : graph.users[rrh]) {
        a.noalias() += snr * est.col(j) * est.col(j).adjoint();
    }
    return a.ldlt().solve(est.col(ue));
}

BlockVector global_combining_weights(const EstimateSet& estimates, const AssociationGraph& graph,
                                     const Lsfc& lsfc, int ue,
                                     const std::vector<CVector>& local_vectors, double snr,
                                     std::vector<Complex>* weights_out) {
    const auto& cluster = graph.clusters[ue];
    if (cluster.empty() || local_vectors.size() != cluster.size()) {
        throw std::invalid_argument("global_combining_weights: bad cluster/local vector sizes");
    }
    const int num_ant = int(local_vectors[0].size());

    BlockVector v;
    v.rrhs = cluster;
    v.blocks.resize(cluster.size());
    std::vector<Complex> w(cluster.size());
    for (size_t i = 0; i < cluster.size(); ++i) {
        const int l = cluster[i];
        const CVector& vl = local_vectors[i];
        const Complex a = vl.dot(estimates.by_rrh[l].col(ue));
        double gamma = lmmse_sigma_sq(graph, lsfc, l, snr) * vl.squaredNorm();
        for (int j : graph.users[l]) {
            if (j != ue) {
                gamma += snr * std::norm(vl.dot(estimates.by_rrh[l].col(j)));
            }
        }
        w[i] = gamma > 0.0 ? a / gamma : Complex(0.0, 0.0);
        v.blocks[i] = w[i] * vl;
    }
    const double norm = std::sqrt(v.squared_norm());
    if (norm == 0.0) {
        throw std::invalid_argument("global_combining_weights: all local vectors are zero");
    }
    v.scale(1.0 / norm);
    if (weights_out) {
        *weights_out = std::move(w);
    }
    (void)num_ant;
    return v;
}

CombinerSet lmmse_combiners(const EstimateSet& estimates, const AssociationGraph& graph,
                            const Lsfc& lsfc, double snr) {
    CombinerSet out;
    out.vec.resize(graph.num_ue);
    out.ok.assign(graph.num_ue, 0);
    for (int k = 0; k < graph.num_ue; ++k) {
        if (!graph.served(k)) {
            continue;
        }
        std::vector<CVector> local(graph.clusters[k].size());
        for (size_t i = 0; i < local.size(); ++i) {
            local[i] = lmmse_local_combiner(estimates, graph, lsfc, graph.clusters[k][i], k, snr);
        }
        double total = 0.0;
        for (const auto& vl : local) {
            total += vl.squaredNorm();
        }
        if (total == 0.0) {
            out.vec[k] = zero_block_vector(graph.clusters[k],
                                           int(estimates.by_rrh[graph.clusters[k][0]].rows()));
            continue;
        }
        out.vec[k] = global_combining_weights(estimates, graph, lsfc, k, local, snr);
        out.ok[k] = 1;
    }
    return out;
}

namespace {

/// Greedy subset selection: walk `order`, keep a UE when its column stays
/// numerically independent of the kept ones (modified Gram-Schmidt residual
/// above eps_rank times the column norm), up to `cap` members.
std::vector<int> greedy_independent_subset(const CMatrix& h, const std::vector<int>& order,
                                           double eps_rank, int cap) {
    std::vector<int> selected;
    CMatrix basis(h.rows(), std::min<int>(cap, int(h.cols())));
    int nb = 0;
    for (int idx : order) {
        if (int(selected.size()) >= cap) {
            break;
        }
        CVector r = h.col(idx);
        const double cn = r.norm();
        if (cn == 0.0) {
            continue;
        }
        r -= basis.leftCols(nb) * (basis.leftCols(nb).adjoint() * r);
        if (r.norm() > eps_rank * cn) {
            selected.push_back(idx);
            basis.col(nb++) = r / r.norm();
        }
    }
    std::sort(selected.begin(), selected.end());
    return selected;
}

/// ZF columns u_i = normalized columns of H (H^H H)^{-1} for the selected set.
CMatrix zf_columns(const CMatrix& h_sel) {
    const CMatrix gram = h_sel.adjoint() * h_sel;
    CMatrix pinv_t = h_sel * gram.ldlt().solve(CMatrix::Identity(gram.rows(), gram.cols()));
    for (int c = 0; c < pinv_t.cols(); ++c) {
        pinv_t.col(c).normalize();
    }
    return pinv_t;
}

LocalPrecoders local_precoders_impl(const EstimateSet& estimates, const AssociationGraph& graph,
                                    const Lsfc* lsfc_for_order, double eps_rank,
                                    BlockRole leftover_role) {
    LocalPrecoders out;
    out.u.resize(graph.num_rrh);
    out.role.resize(graph.num_rrh);
    for (int l = 0; l < graph.num_rrh; ++l) {
        const auto& ues = graph.users[l];
        const int n = int(ues.size());
        if (n == 0) {
            continue;
        }
        const CMatrix& est = estimates.by_rrh[l];
        const int num_ant = int(est.rows());
        CMatrix h(num_ant, n);
        for (int i = 0; i < n; ++i) {
            h.col(i) = est.col(ues[i]);
        }

        // candidate order: decreasing channel gain (LPZF) or decreasing LSFC (LZF)
        std::vector<int> order(n);
        for (int i = 0; i < n; ++i) {
            order[i] = i;
        }
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            const double ga = lsfc_for_order ? lsfc_for_order->beta(ues[a], l) : h.col(a).squaredNorm();
            const double gb = lsfc_for_order ? lsfc_for_order->beta(ues[b], l) : h.col(b).squaredNorm();
            if (ga != gb) {
                return ga > gb;
            }
            return ues[a] < ues[b];
        });

        const std::vector<int> sel = greedy_independent_subset(h, order, eps_rank, num_ant);

        out.u[l].assign(n, CVector::Zero(num_ant));
        out.role[l].assign(n, leftover_role);
        if (!sel.empty()) {
            CMatrix h_sel(num_ant, int(sel.size()));
            for (size_t i = 0; i < sel.size(); ++i) {
                h_sel.col(int(i)) = h.col(sel[i]);
            }
            const CMatrix u_sel = zf_columns(h_sel);
            for (size_t i = 0; i < sel.size(); ++i) {
                out.u[l][sel[i]] = u_sel.col(int(i));
                out.role[l][sel[i]] = BlockRole::Zf;
            }
        }
        if (leftover_role == BlockRole::Mrt) {
            for (int i = 0; i < n; ++i) {
                if (out.role[l][i] != BlockRole::Mrt) {
                    continue;
                }
                const double cn = h.col(i).norm();
                if (cn > 0.0) {
                    out.u[l][i] = h.col(i) / cn;
                } else {
                    out.role[l][i] = BlockRole::Outage; // zero channel estimate
                }
            }
        }
    }
    return out;
}

} // namespace

LocalPrecoders lpzf_precoders(const EstimateSet& estimates, const AssociationGraph& graph,
                              double eps_rank) {
    return local_precoders_impl(estimates, graph, nullptr, eps_rank, BlockRole::Mrt);
}

LocalPrecoders lzf_precoders(const EstimateSet& estimates, const AssociationGraph& graph,
                             const Lsfc& lsfc, double eps_rank) {
    return local_precoders_impl(estimates, graph, &lsfc, eps_rank, BlockRole::Outage);
}

CombinerSet centralized_precoders_from_combiners(const CombinerSet& combiners) {
    CombinerSet out = combiners;
    for (size_t k = 0; k < out.vec.size(); ++k) {
        if (out.ok[k] && std::abs(out.vec[k].squared_norm() - 1.0) > 1e-9) {
            throw std::invalid_argument("centralized precoders: combiner is not unit norm");
        }
    }
    return out;
}

} // namespace cellfree
