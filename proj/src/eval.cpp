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

#include "cellfree/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

namespace cellfree {

namespace {

/// Cross matrix G(c, j) = v_c^H h_j for all owners c and transmitters j.
CMatrix cross_products(const ChannelSet& channels, const CombinerSet& set) {
    const int num_ue = int(set.vec.size());
    const int k_cols = int(channels.by_rrh.empty() ? 0 : channels.by_rrh[0].cols());
    CMatrix g = CMatrix::Zero(num_ue, k_cols);
    for (int c = 0; c < num_ue; ++c) {
        if (!set.ok[c]) {
            continue;
        }
        const BlockVector& v = set.vec[c];
        for (size_t i = 0; i < v.rrhs.size(); ++i) {
            g.row(c) += v.blocks[i].adjoint() * channels.by_rrh[v.rrhs[i]];
        }
    }
    return g;
}

RVector ul_sinr_from_cross(const CMatrix& g, const CombinerSet& set, double snr) {
    const int num_ue = int(g.rows());
    RVector out = RVector::Zero(num_ue);
    for (int k = 0; k < num_ue; ++k) {
        if (!set.ok[k]) {
            continue;
        }
        double interference = 0.0;
        for (int j = 0; j < int(g.cols()); ++j) {
            if (j != k) {
                interference += std::norm(g(k, j));
            }
        }
        out[k] = std::norm(g(k, k)) / (1.0 / snr + interference);
    }
    return out;
}

RVector dl_sinr_from_cross(const CMatrix& g, const CombinerSet& set, const RVector& q,
                           double snr) {
    const int num_ue = int(g.cols());
    RVector out = RVector::Zero(num_ue);
    for (int k = 0; k < num_ue; ++k) {
        if (!set.ok[k] || q[k] <= 0.0) {
            continue;
        }
        double interference = 0.0;
        for (int c = 0; c < int(g.rows()); ++c) {
            if (c != k) {
                interference += std::norm(g(c, k)) * q[c];
            }
        }
        out[k] = std::norm(g(k, k)) * q[k] / (1.0 / snr + interference);
    }
    return out;
}

} // namespace

double ul_sinr_actual(const ChannelSet& channels, const BlockVector& v, double snr, int ue) {
    const int num_ue = int(channels.by_rrh[0].cols());
    double interference = 0.0;
    double signal = 0.0;
    for (int j = 0; j < num_ue; ++j) {
        const double p = std::norm(v.dot_channel(channels.by_rrh, j));
        if (j == ue) {
            signal = p;
        } else {
            interference += p;
        }
    }
    return signal / (1.0 / snr + interference);
}

RVector ul_sinr_actual_all(const ChannelSet& channels, const CombinerSet& combiners, double snr) {
    return ul_sinr_from_cross(cross_products(channels, combiners), combiners, snr);
}

double dl_sinr_actual(const ChannelSet& channels, const CombinerSet& precoders, const RVector& q,
                      double snr, int ue) {
    return dl_sinr_actual_all(channels, precoders, q, snr)[ue];
}

RVector dl_sinr_actual_all(const ChannelSet& channels, const CombinerSet& precoders,
                           const RVector& q, double snr) {
    return dl_sinr_from_cross(cross_products(channels, precoders), precoders, q, snr);
}

RVector dl_sinr_distributed_all(const ChannelSet& channels, const AssociationGraph& graph,
                                const LocalPrecoders& precoders, const DistributedPower& power,
                                double snr) {
    const int num_ue = graph.num_ue;
    RVector signal = RVector::Zero(num_ue);
    RMatrix interf = RMatrix::Zero(num_ue, num_ue); // (victim, owner)
    for (int l = 0; l < graph.num_rrh; ++l) {
        const auto& ues = graph.users[l];
        for (size_t i = 0; i < ues.size(); ++i) {
            const double q_li = power.q[l][i];
            if (q_li <= 0.0) {
                continue;
            }
            const CVector& u = precoders.u[l][i];
            const CVector prods = channels.by_rrh[l].adjoint() * u; // h_{l,k}^H u_{l,j}
            for (int k = 0; k < num_ue; ++k) {
                const double p = std::norm(prods[k]) * q_li;
                if (k == ues[i]) {
                    signal[k] += p;
                } else {
                    interf(k, ues[i]) += p;
                }
            }
        }
    }
    RVector out = RVector::Zero(num_ue);
    for (int k = 0; k < num_ue; ++k) {
        if (signal[k] <= 0.0) {
            continue;
        }
        out[k] = signal[k] / (1.0 / snr + interf.row(k).sum());
    }
    return out;
}

double dl_sinr_distributed(const ChannelSet& channels, const AssociationGraph& graph,
                           const LocalPrecoders& precoders, const DistributedPower& power,
                           double snr, int ue) {
    return dl_sinr_distributed_all(channels, graph, precoders, power, snr)[ue];
}

double dl_total_power(const CombinerSet& precoders, const RVector& q) {
    double total = 0.0;
    for (int k = 0; k < int(precoders.vec.size()); ++k) {
        if (precoders.ok[k]) {
            total += q[k] * precoders.vec[k].squared_norm();
        }
    }
    return total;
}

double dl_total_power(const LocalPrecoders& precoders, const DistributedPower& power) {
    double total = 0.0;
    for (size_t l = 0; l < precoders.u.size(); ++l) {
        for (size_t i = 0; i < precoders.u[l].size(); ++i) {
            total += power.q[l][i] * precoders.u[l][i].squaredNorm();
        }
    }
    return total;
}

double rate_from_sinr(double sinr, bool bits) {
    const double nats = std::log1p(sinr);
    return bits ? nats / 0.6931471805599453094 : nats;
}

double spectral_efficiency(double rate, const SimConfig& cfg) {
    return cfg.se_prelog() * rate;
}

EmpiricalCdf aggregate_cdf(std::vector<double> samples) {
    std::sort(samples.begin(), samples.end());
    EmpiricalCdf cdf;
    cdf.values.resize(long(samples.size()));
    cdf.prob.resize(long(samples.size()));
    for (size_t i = 0; i < samples.size(); ++i) {
        cdf.values[long(i)] = samples[i];
        cdf.prob[long(i)] = double(i + 1) / double(samples.size());
    }
    return cdf;
}

LayoutContext make_layout_context(const SimConfig& cfg, int layout_index) {
    LayoutContext ctx;
    RngStream pos = substream(cfg.seed, StreamKind::Layout, std::uint64_t(layout_index));
    ctx.layout = generate_layout(cfg, pos);
    RngStream shadow = substream(cfg.seed, StreamKind::Shadowing, std::uint64_t(layout_index));
    ctx.lsfc = lsfc_from_layout(ctx.layout, cfg, shadow);
    RngStream assoc = substream(cfg.seed, StreamKind::Association, std::uint64_t(layout_index));
    ctx.graph = form_clusters(ctx.lsfc, cfg, assoc);
    ctx.supports = compute_supports(ctx.layout, cfg);
    return ctx;
}

DrawEval evaluate_draw(const SimConfig& cfg, const LayoutContext& ctx, int layout_index,
                       int draw_index) {
    RngStream fading = substream(cfg.seed, StreamKind::Fading, std::uint64_t(layout_index),
                                 std::uint64_t(draw_index));
    RngStream pilot = substream(cfg.seed, StreamKind::PilotNoise, std::uint64_t(layout_index),
                                std::uint64_t(draw_index));
    const ChannelSet channels = draw_channels(ctx.lsfc, ctx.supports, fading);
    const EstimateSet estimates =
        make_estimates(channels, ctx.graph, ctx.supports, ctx.lsfc, cfg, pilot);
    const double snr = ctx.lsfc.snr;

    // combiners / theta / duality are shared across schemes of the same kind
    bool need[2] = {false, false};
    for (const Scheme& s : cfg.schemes) {
        if (s.centralized) {
            need[s.combiner == CombinerKind::Gzf ? 0 : 1] = true;
        }
    }
    CombinerSet combiners[2];
    CMatrix cross[2];
    RVector gamma[2];
    DualityResult duality[2];
    bool have_duality[2] = {false, false};
    ThetaMatrix theta[2];
    for (int c = 0; c < 2; ++c) {
        if (!need[c]) {
            continue;
        }
        combiners[c] = c == 0 ? gzf_combiners(estimates, ctx.graph)
                              : lmmse_combiners(estimates, ctx.graph, ctx.lsfc, snr);
        cross[c] = cross_products(channels, combiners[c]);
        for (const Scheme& s : cfg.schemes) {
            if (s.centralized && (s.combiner == CombinerKind::Gzf) == (c == 0) &&
                s.central_power == CentralPowerKind::Duality && !have_duality[c]) {
                theta[c] = theta_matrix(estimates, ctx.graph, ctx.lsfc, combiners[c],
                                        cfg.theta_exact_norms);
                gamma[c] = nominal_ul_sinr(theta[c], snr);
                duality[c] = duality_power_allocation(theta[c], gamma[c], snr);
                have_duality[c] = true;
            }
        }
    }

    LocalPrecoders lpzf, lzf;
    bool have_lpzf = false, have_lzf = false;

    DrawEval out;
    out.ul_sinr.resize(cfg.schemes.size());
    out.dl_sinr.resize(cfg.schemes.size());
    out.duality_infeasible.assign(cfg.schemes.size(), 0);
    for (size_t si = 0; si < cfg.schemes.size(); ++si) {
        const Scheme& s = cfg.schemes[si];
        if (s.centralized) {
            const int c = s.combiner == CombinerKind::Gzf ? 0 : 1;
            out.ul_sinr[si] = ul_sinr_from_cross(cross[c], combiners[c], snr);
            RVector q;
            if (s.central_power == CentralPowerKind::Duality && duality[c].feasible) {
                q = duality[c].q;
            } else {
                q = epa_central(ctx.graph);
                if (s.central_power == CentralPowerKind::Duality) {
                    out.duality_infeasible[si] = 1; // logged fallback
                }
            }
            out.dl_sinr[si] = dl_sinr_from_cross(cross[c], combiners[c], q, snr);
        } else {
            const bool use_lpzf = s.local_precoder == LocalPrecoderKind::Lpzf;
            if (use_lpzf && !have_lpzf) {
                lpzf = lpzf_precoders(estimates, ctx.graph);
                have_lpzf = true;
            }
            if (!use_lpzf && !have_lzf) {
                lzf = lzf_precoders(estimates, ctx.graph, ctx.lsfc);
                have_lzf = true;
            }
            const LocalPrecoders& prec = use_lpzf ? lpzf : lzf;
            const double budget = cfg.dl_power_per_rrh();
            const DistributedPower power =
                s.local_power == LocalPowerKind::Epa
                    ? epa_local(ctx.graph, budget, &prec)
                    : ppa_local(ctx.graph, ctx.lsfc, budget, &prec);
            out.dl_sinr[si] = dl_sinr_distributed_all(channels, ctx.graph, prec, power, snr);
        }
    }
    return out;
}

namespace {

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    if (threads <= 0) {
        threads = int(std::thread::hardware_concurrency());
    }
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(size_t(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&]() {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                fn(i);
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
}

} // namespace

RateReport ergodic_rates(const SimConfig& cfg) {
    cfg.validate();
    const int num_ue = cfg.num_ue;
    const int n_schemes = int(cfg.schemes.size());

    RateReport report;
    report.cfg = cfg;
    report.schemes.resize(size_t(n_schemes));
    for (int si = 0; si < n_schemes; ++si) {
        SchemeRates& sr = report.schemes[size_t(si)];
        sr.name = cfg.schemes[size_t(si)].name();
        sr.centralized = cfg.schemes[size_t(si)].centralized;
        sr.ul_rate = RMatrix::Zero(cfg.n_layouts, num_ue);
        sr.dl_rate = RMatrix::Zero(cfg.n_layouts, num_ue);
        sr.ul_rate_stderr = RMatrix::Zero(cfg.n_layouts, num_ue);
        sr.dl_rate_stderr = RMatrix::Zero(cfg.n_layouts, num_ue);
    }
    report.served.assign(size_t(cfg.n_layouts), std::vector<std::uint8_t>(size_t(num_ue), 0));

    for (int li = 0; li < cfg.n_layouts; ++li) {
        const LayoutContext ctx = make_layout_context(cfg, li);
        for (int k = 0; k < num_ue; ++k) {
            report.served[size_t(li)][size_t(k)] = ctx.graph.served(k) ? 1 : 0;
            if (!ctx.graph.served(k)) {
                ++report.unserved_ue_layouts;
            }
        }
        std::vector<DrawEval> draws(size_t(cfg.n_fading));
        parallel_for(cfg.n_fading, cfg.threads,
                     [&](int d) { draws[size_t(d)] = evaluate_draw(cfg, ctx, li, d); });

        // fixed-order reduction: mean and standard error of log(1+SINR)
        for (int si = 0; si < n_schemes; ++si) {
            SchemeRates& sr = report.schemes[size_t(si)];
            RVector ul_sum = RVector::Zero(num_ue), ul_sq = RVector::Zero(num_ue);
            RVector dl_sum = RVector::Zero(num_ue), dl_sq = RVector::Zero(num_ue);
            for (int d = 0; d < cfg.n_fading; ++d) {
                const DrawEval& de = draws[size_t(d)];
                sr.infeasible_draws += de.duality_infeasible[size_t(si)];
                for (int k = 0; k < num_ue; ++k) {
                    if (de.ul_sinr[size_t(si)].size() > 0) {
                        const double r =
                            rate_from_sinr(de.ul_sinr[size_t(si)][k], cfg.rates_in_bits);
                        ul_sum[k] += r;
                        ul_sq[k] += r * r;
                    }
                    const double r = rate_from_sinr(de.dl_sinr[size_t(si)][k], cfg.rates_in_bits);
                    dl_sum[k] += r;
                    dl_sq[k] += r * r;
                }
            }
            const double n = double(cfg.n_fading);
            for (int k = 0; k < num_ue; ++k) {
                sr.ul_rate(li, k) = ul_sum[k] / n;
                sr.dl_rate(li, k) = dl_sum[k] / n;
                const double ul_var = std::max(0.0, ul_sq[k] / n - sr.ul_rate(li, k) * sr.ul_rate(li, k));
                const double dl_var = std::max(0.0, dl_sq[k] / n - sr.dl_rate(li, k) * sr.dl_rate(li, k));
                sr.ul_rate_stderr(li, k) = std::sqrt(ul_var / n);
                sr.dl_rate_stderr(li, k) = std::sqrt(dl_var / n);
            }
        }
        report.total_draws += cfg.n_fading;
    }
    return report;
}

double RateReport::mean_sum_se_dl(int scheme) const {
    const SchemeRates& sr = schemes[size_t(scheme)];
    return cfg.se_prelog() * sr.dl_rate.rowwise().sum().mean();
}

double RateReport::mean_sum_se_ul(int scheme) const {
    const SchemeRates& sr = schemes[size_t(scheme)];
    return cfg.se_prelog() * sr.ul_rate.rowwise().sum().mean();
}

std::vector<double> RateReport::pooled_se(int scheme, bool dl) const {
    const SchemeRates& sr = schemes[size_t(scheme)];
    const RMatrix& r = dl ? sr.dl_rate : sr.ul_rate;
    std::vector<double> out;
    out.reserve(size_t(r.size()));
    for (int li = 0; li < r.rows(); ++li) {
        for (int k = 0; k < r.cols(); ++k) {
            out.push_back(cfg.se_prelog() * r(li, k));
        }
    }
    return out;
}

} // namespace cellfree
