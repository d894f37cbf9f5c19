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

#include "cellfree/power.hpp"

#include <Eigen/LU>

#include <cmath>
#include <stdexcept>

namespace cellfree {

ThetaMatrix theta_matrix(const EstimateSet& estimates, const AssociationGraph& graph,
                         const Lsfc& lsfc, const CombinerSet& precoders, bool exact_norms) {
    const int num_ue = graph.num_ue;
    ThetaMatrix theta;
    theta.m = RMatrix::Zero(num_ue, num_ue);

    std::vector<Complex> acc(num_ue);
    for (int c = 0; c < num_ue; ++c) {
        if (!graph.served(c) || !precoders.ok[c]) {
            continue;
        }
        const BlockVector& u = precoders.vec[c];
        std::fill(acc.begin(), acc.end(), Complex(0.0, 0.0));
        // known-CSI inner products, accumulated per shared RRH
        for (size_t i = 0; i < u.rrhs.size(); ++i) {
            const int l = u.rrhs[i];
            const CMatrix& est = estimates.by_rrh[l];
            for (int j : graph.users[l]) {
                acc[j] += est.col(j).dot(u.blocks[i]); // hhat_{l,j}^H u_{l,c}
            }
        }
        theta.m(c, c) = std::norm(acc[c]);
        for (int j = 0; j < num_ue; ++j) {
            if (j != c && graph.served(j)) {
                theta.m(j, c) = std::norm(acc[j]);
            }
        }
        // isotropic contribution of the channels unknown to the victim's cluster
        const double cluster_inv = 1.0 / double(u.rrhs.size());
        for (size_t i = 0; i < u.rrhs.size(); ++i) {
            const int l = u.rrhs[i];
            const double w = exact_norms ? u.blocks[i].squaredNorm() : cluster_inv;
            for (int j = 0; j < num_ue; ++j) {
                if (j != c && graph.served(j) && !graph.has_edge(l, j)) {
                    theta.m(j, c) += w * lsfc.beta(j, l);
                }
            }
        }
    }
    return theta;
}

double theta_exact_conditional_oracle(const EstimateSet& estimates, const SupportSet& supports,
                                      const AssociationGraph& graph, const Lsfc& lsfc,
                                      const CombinerSet& combiners, int owner_k, int tx_j) {
    if (!graph.served(owner_k)) {
        return 0.0;
    }
    const BlockVector& v = combiners.vec[owner_k];
    Complex known(0.0, 0.0);
    double unknown = 0.0;
    for (size_t i = 0; i < v.rrhs.size(); ++i) {
        const int l = v.rrhs[i];
        if (graph.has_edge(l, tx_j)) {
            known += v.blocks[i].dot(estimates.by_rrh[l].col(tx_j));
        } else {
            const auto& s = supports.of(l, tx_j);
            const CMatrix f = dft_submatrix(supports.num_ant, s);
            const double scale = lsfc.beta(tx_j, l) * supports.num_ant / double(s.size());
            unknown += scale * (f.adjoint() * v.blocks[i]).squaredNorm();
        }
    }
    return std::norm(known) + unknown;
}

RVector nominal_ul_sinr(const ThetaMatrix& theta, double snr) {
    const int n = int(theta.m.rows());
    RVector out(n);
    const RVector col_sums = theta.m.colwise().sum();
    for (int k = 0; k < n; ++k) {
        const double diag = theta.m(k, k);
        out[k] = diag > 0.0 ? diag / (1.0 / snr + col_sums[k] - diag) : 0.0;
    }
    return out;
}

RVector nominal_dl_sinr(const ThetaMatrix& theta, const RVector& q, double snr) {
    const int n = int(theta.m.rows());
    RVector out(n);
    const RVector row_dot = theta.m * q;
    for (int k = 0; k < n; ++k) {
        const double sig = theta.m(k, k) * q[k];
        out[k] = sig > 0.0 ? sig / (1.0 / snr + row_dot[k] - sig) : 0.0;
    }
    return out;
}

DualityResult duality_power_allocation(const ThetaMatrix& theta, const RVector& gamma,
                                       double snr) {
    const int n = int(theta.m.rows());
    if (gamma.size() != n) {
        throw std::invalid_argument("duality_power_allocation: gamma size mismatch");
    }
    RVector mu = RVector::Zero(n);
    for (int k = 0; k < n; ++k) {
        if (gamma[k] > 0.0 && theta.m(k, k) > 0.0) {
            mu[k] = gamma[k] / ((1.0 + gamma[k]) * theta.m(k, k));
        }
    }
    const RMatrix a = RMatrix::Identity(n, n) - mu.asDiagonal() * theta.m;
    const RVector b = mu / snr;

    DualityResult res;
    res.q = a.partialPivLu().solve(b);
    const double b_norm = b.norm();
    res.residual = b_norm > 0.0 ? (a * res.q - b).norm() / b_norm : 0.0;
    res.feasible = res.residual <= 1e-8 && (res.q.array() >= -1e-9).all();
    if (res.feasible) {
        res.q = res.q.cwiseMax(0.0); // forget roundoff-negative entries
    }
    res.power_sum = res.q.sum();
    return res;
}

RVector epa_central(const AssociationGraph& graph) {
    RVector q = RVector::Zero(graph.num_ue);
    for (int k = 0; k < graph.num_ue; ++k) {
        if (graph.served(k)) {
            q[k] = 1.0;
        }
    }
    return q;
}

namespace {

bool is_active(const LocalPrecoders* p, int l, int i) {
    return p == nullptr || p->role[l][i] != BlockRole::Outage;
}

} // namespace

DistributedPower epa_local(const AssociationGraph& graph, double power_per_rrh,
                           const LocalPrecoders* active_from) {
    DistributedPower out;
    out.q.resize(graph.num_rrh);
    for (int l = 0; l < graph.num_rrh; ++l) {
        const int n = int(graph.users[l].size());
        out.q[l].assign(n, 0.0);
        int active = 0;
        for (int i = 0; i < n; ++i) {
            active += is_active(active_from, l, i) ? 1 : 0;
        }
        if (active == 0) {
            continue;
        }
        for (int i = 0; i < n; ++i) {
            if (is_active(active_from, l, i)) {
                out.q[l][i] = power_per_rrh / active;
            }
        }
    }
    return out;
}

DistributedPower ppa_local(const AssociationGraph& graph, const Lsfc& lsfc, double power_per_rrh,
                           const LocalPrecoders* active_from) {
    DistributedPower out;
    out.q.resize(graph.num_rrh);
    for (int l = 0; l < graph.num_rrh; ++l) {
        const auto& ues = graph.users[l];
        const int n = int(ues.size());
        out.q[l].assign(n, 0.0);
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            if (is_active(active_from, l, i)) {
                total += lsfc.beta(ues[i], l);
            }
        }
        if (total <= 0.0) {
            continue;
        }
        for (int i = 0; i < n; ++i) {
            if (is_active(active_from, l, i)) {
                out.q[l][i] = power_per_rrh * lsfc.beta(ues[i], l) / total;
            }
        }
    }
    return out;
}

} // namespace cellfree
