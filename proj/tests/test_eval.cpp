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

#include <doctest.h>

#include <cmath>

using namespace cellfree;

TEST_SUITE_BEGIN("eval");

namespace {

ChannelSet one_rrh_channels(const CMatrix& cols) {
    ChannelSet ch;
    ch.by_rrh = {cols};
    return ch;
}

CombinerSet single_combiner(const CVector& v, int num_ue, int ue) {
    CombinerSet set;
    set.vec.resize(size_t(num_ue));
    set.ok.assign(size_t(num_ue), 0);
    set.vec[size_t(ue)].rrhs = {0};
    set.vec[size_t(ue)].blocks = {v};
    set.ok[size_t(ue)] = 1;
    return set;
}

SimConfig desk_cfg(std::uint64_t seed) {
    SimConfig cfg;
    cfg.num_rrh = 4;
    cfg.ant_per_rrh = 8;
    cfg.num_ue = 12;
    cfg.pilot_dim = 6;
    cfg.n_layouts = 1;
    cfg.n_fading = 4;
    cfg.seed = seed;
    cfg.threads = 1;
    return cfg;
}

} // namespace

TEST_CASE("ul sinr with a matched filter and no interferer") {
    CMatrix h(3, 1);
    h.col(0) << Complex(1.0, 1.0), Complex(0.0, -2.0), Complex(0.5, 0.0);
    const double snr = 1.7;
    const CVector v = h.col(0) / h.col(0).norm();
    const ChannelSet ch = one_rrh_channels(h);
    const CombinerSet set = single_combiner(v, 1, 0);
    const double got = ul_sinr_actual(ch, set.vec[0], snr, 0);
    CHECK(got == doctest::Approx(h.col(0).squaredNorm() * snr).epsilon(1e-12));
    CHECK(ul_sinr_actual_all(ch, set, snr)[0] == doctest::Approx(got).epsilon(1e-12));
}

TEST_CASE("ul sinr vanishes for an orthogonal combiner") {
    CMatrix h(2, 1);
    h.col(0) << Complex(1.0, 0.0), Complex(0.0, 0.0);
    CVector v(2);
    v << Complex(0.0, 0.0), Complex(1.0, 0.0);
    const ChannelSet ch = one_rrh_channels(h);
    const CombinerSet set = single_combiner(v, 1, 0);
    CHECK(ul_sinr_actual(ch, set.vec[0], 2.0, 0) == 0.0);
}

TEST_CASE("ul and dl sinr match a direct reimplementation on random instances") {
    RngStream rng(71);
    const int num_ue = 2, num_ant = 3;
    CMatrix h(num_ant, num_ue);
    for (int k = 0; k < num_ue; ++k) {
        for (int m = 0; m < num_ant; ++m) {
            h(m, k) = rng.cnormal();
        }
    }
    CombinerSet set;
    set.vec.resize(num_ue);
    set.ok.assign(num_ue, 1);
    for (int k = 0; k < num_ue; ++k) {
        CVector v(num_ant);
        for (int m = 0; m < num_ant; ++m) {
            v[m] = rng.cnormal();
        }
        v.normalize();
        set.vec[size_t(k)].rrhs = {0};
        set.vec[size_t(k)].blocks = {v};
    }
    const ChannelSet ch = one_rrh_channels(h);
    const double snr = 3.1;
    RVector q(2);
    q << 0.8, 1.2;

    // double-entry: scalar loops, no shared code with the implementation
    for (int k = 0; k < num_ue; ++k) {
        Complex sig(0, 0);
        for (int m = 0; m < num_ant; ++m) {
            sig += std::conj(set.vec[size_t(k)].blocks[0][m]) * h(m, k);
        }
        double interference = 0.0;
        for (int j = 0; j < num_ue; ++j) {
            if (j == k) {
                continue;
            }
            Complex c(0, 0);
            for (int m = 0; m < num_ant; ++m) {
                c += std::conj(set.vec[size_t(k)].blocks[0][m]) * h(m, j);
            }
            interference += std::norm(c);
        }
        const double expect_ul = std::norm(sig) / (1.0 / snr + interference);
        CHECK(ul_sinr_actual(ch, set.vec[size_t(k)], snr, k) ==
              doctest::Approx(expect_ul).epsilon(1e-12));

        Complex own(0, 0);
        double dl_int = 0.0;
        for (int m = 0; m < num_ant; ++m) {
            own += std::conj(h(m, k)) * set.vec[size_t(k)].blocks[0][m];
        }
        for (int j = 0; j < num_ue; ++j) {
            if (j == k) {
                continue;
            }
            Complex c(0, 0);
            for (int m = 0; m < num_ant; ++m) {
                c += std::conj(h(m, k)) * set.vec[size_t(j)].blocks[0][m];
            }
            dl_int += std::norm(c) * q[j];
        }
        const double expect_dl = std::norm(own) * q[k] / (1.0 / snr + dl_int);
        CHECK(dl_sinr_actual(ch, set, q, snr, k) == doctest::Approx(expect_dl).epsilon(1e-12));
    }
}

TEST_CASE("distributed dl sinr closed forms") {
    AssociationGraph g;
    g.num_rrh = 2;
    g.num_ue = 1;
    g.pilot_dim = 1;
    g.clusters = {{0, 1}};
    g.users = {{0}, {0}};
    g.pilot = {0};
    g.edge_bits = {1, 1};

    CMatrix h0(2, 1), h1(2, 1);
    h0.col(0) << Complex(1.0, 0.0), Complex(0.0, 1.0);
    h1.col(0) = h0.col(0); // equal channels at both RRHs
    ChannelSet ch;
    ch.by_rrh = {h0, h1};
    LocalPrecoders prec;
    prec.u = {{h0.col(0) / h0.col(0).norm()}, {h1.col(0) / h1.col(0).norm()}};
    prec.role = {{BlockRole::Zf}, {BlockRole::Zf}};
    DistributedPower power;
    power.q = {{0.7}, {0.7}};
    const double snr = 2.0;
    // two equal branches: numerator 2 * ||h||^2 * q
    const double expect = 2.0 * h0.col(0).squaredNorm() * 0.7 / (1.0 / snr);
    CHECK(dl_sinr_distributed(ch, g, prec, power, snr, 0) ==
          doctest::Approx(expect).epsilon(1e-12));

    // single RRH, single UE
    AssociationGraph g1 = g;
    g1.num_rrh = 1;
    g1.clusters = {{0}};
    g1.users = {{0}};
    g1.edge_bits = {1};
    ChannelSet ch1;
    ch1.by_rrh = {h0};
    LocalPrecoders p1;
    p1.u = {{h0.col(0) / h0.col(0).norm()}};
    p1.role = {{BlockRole::Zf}};
    DistributedPower q1;
    q1.q = {{0.5}};
    CHECK(dl_sinr_distributed(ch1, g1, p1, q1, snr, 0) ==
          doctest::Approx(h0.col(0).squaredNorm() * 0.5 * snr).epsilon(1e-12));
}

TEST_CASE("outage at the only serving rrh zeroes the distributed rate") {
    // M=1 RRH serving two UEs: the weaker-LSFC UE is in outage and no other
    // RRH serves it, so its SINR and rate are exactly zero
    AssociationGraph g;
    g.num_rrh = 1;
    g.num_ue = 2;
    g.pilot_dim = 2;
    g.clusters = {{0}, {0}};
    g.users = {{0, 1}};
    g.pilot = {0, 1};
    g.edge_bits = {1, 1};
    CMatrix h(1, 2);
    h << Complex(1.0, 0.0), Complex(0.8, 0.0);
    ChannelSet ch;
    ch.by_rrh = {h};
    EstimateSet est;
    est.by_rrh = {h};
    Lsfc lsfc;
    lsfc.beta = RMatrix::Zero(2, 1);
    lsfc.beta << 2.0, 1.0;
    lsfc.snr = 1.0;
    const LocalPrecoders prec = lzf_precoders(est, g, lsfc);
    REQUIRE(prec.role[0][1] == BlockRole::Outage);
    const DistributedPower power = epa_local(g, 2.0, &prec);
    const RVector sinr = dl_sinr_distributed_all(ch, g, prec, power, lsfc.snr);
    CHECK(sinr[1] == 0.0);
    CHECK(sinr[0] > 0.0);
    CHECK(rate_from_sinr(sinr[1], true) == 0.0);
}

TEST_CASE("rate units and spectral efficiency prelog") {
    CHECK(rate_from_sinr(1.0, true) == doctest::Approx(1.0).epsilon(1e-12));   // log2(2)
    CHECK(rate_from_sinr(std::exp(1.0) - 1.0, false) == doctest::Approx(1.0)); // ln(e)

    SimConfig cfg;
    cfg.pilot_dim = 40;
    cfg.block_symbols = 200;
    CHECK(spectral_efficiency(1.0, cfg) == doctest::Approx(0.8).epsilon(1e-12));
    cfg.pilot_dim = 0;
    CHECK(spectral_efficiency(2.5, cfg) == doctest::Approx(2.5).epsilon(1e-12));
    cfg.pilot_dim = 199;
    CHECK(spectral_efficiency(1.0, cfg) == doctest::Approx(1.0 / 200.0).epsilon(1e-12));
}

TEST_CASE("empirical cdf basics and counting reconciliation") {
    const EmpiricalCdf step = aggregate_cdf({2.0, 2.0, 2.0});
    CHECK(step.values[0] == 2.0);
    CHECK(step.prob[2] == doctest::Approx(1.0));

    const EmpiricalCdf two = aggregate_cdf({1.0, 3.0});
    CHECK(two.prob[0] == doctest::Approx(0.5));
    CHECK(two.prob[1] == doctest::Approx(1.0));

    // pooled counts at any threshold match the sum of per-layout counts
    std::vector<double> a = {0.1, 0.9, 0.5}, b = {0.3, 0.7};
    std::vector<double> pooled = a;
    pooled.insert(pooled.end(), b.begin(), b.end());
    const EmpiricalCdf cp = aggregate_cdf(pooled);
    for (double thr : {0.2, 0.45, 0.8, 1.0}) {
        int count_a = 0, count_b = 0, count_p = 0;
        for (double x : a) {
            count_a += x <= thr ? 1 : 0;
        }
        for (double x : b) {
            count_b += x <= thr ? 1 : 0;
        }
        for (long i = 0; i < cp.values.size(); ++i) {
            count_p += cp.values[i] <= thr ? 1 : 0;
        }
        CHECK(count_p == count_a + count_b);
    }
}

TEST_CASE("actual sinrs always use true channels even with estimated csi") {
    // combiner built from a deliberately wrong estimate: the SINR formula must
    // still evaluate against the true channel
    CMatrix h(2, 1);
    h.col(0) << Complex(2.0, 0.0), Complex(0.0, 0.0);
    CVector v(2);
    v << Complex(1.0, 0.0), Complex(0.0, 0.0); // matched to the true direction
    const ChannelSet ch = one_rrh_channels(h);
    const CombinerSet set = single_combiner(v, 1, 0);
    CHECK(ul_sinr_actual(ch, set.vec[0], 1.0, 0) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("dl power accounting identities per draw") {
    const SimConfig cfg = desk_cfg(5);
    const LayoutContext ctx = make_layout_context(cfg, 0);
    RngStream fading = substream(cfg.seed, StreamKind::Fading, 0, 0);
    RngStream pilot = substream(cfg.seed, StreamKind::PilotNoise, 0, 0);
    const ChannelSet channels = draw_channels(ctx.lsfc, ctx.supports, fading);
    const EstimateSet estimates =
        make_estimates(channels, ctx.graph, ctx.supports, ctx.lsfc, cfg, pilot);

    // centralized: total power equals the power vector sum over served UEs
    const CombinerSet comb = gzf_combiners(estimates, ctx.graph);
    const CombinerSet prec = centralized_precoders_from_combiners(comb);
    const RVector q = epa_central(ctx.graph);
    CHECK(std::abs(dl_total_power(prec, q) - q.sum()) <= 1e-9 * q.sum());

    const ThetaMatrix theta = theta_matrix(estimates, ctx.graph, ctx.lsfc, comb);
    const RVector gamma = nominal_ul_sinr(theta, ctx.lsfc.snr);
    const DualityResult res = duality_power_allocation(theta, gamma, ctx.lsfc.snr);
    REQUIRE(res.feasible);
    CHECK(std::abs(dl_total_power(prec, res.q) - res.q.sum()) <= 1e-9 * res.q.sum());

    // distributed: budget K/L per RRH, every RRH has at least one active UE here
    const LocalPrecoders lp = lpzf_precoders(estimates, ctx.graph);
    const DistributedPower dp = ppa_local(ctx.graph, ctx.lsfc, cfg.dl_power_per_rrh(), &lp);
    CHECK(dl_total_power(lp, dp) == doctest::Approx(double(cfg.num_ue)).epsilon(1e-9));
}

TEST_CASE("ergodic rates zero interference closed form") {
    // single UE, single RRH: rate = mean over draws of log2(1 + ||h||^2 snr)
    SimConfig cfg;
    cfg.num_rrh = 1;
    cfg.ant_per_rrh = 2;
    cfg.num_ue = 1;
    cfg.pilot_dim = 1;
    cfg.n_layouts = 1;
    cfg.n_fading = 1;
    cfg.seed = 3;
    cfg.csi = CsiMode::Ideal;
    cfg.schemes = {Scheme::parse("gzf-epa")};
    cfg.threads = 1;
    const RateReport report = ergodic_rates(cfg);
    const LayoutContext ctx = make_layout_context(cfg, 0);
    RngStream fading = substream(cfg.seed, StreamKind::Fading, 0, 0);
    const ChannelSet ch = draw_channels(ctx.lsfc, ctx.supports, fading);
    const double expect =
        std::log2(1.0 + ch.by_rrh[0].col(0).squaredNorm() * ctx.lsfc.snr);
    CHECK(report.schemes[0].ul_rate(0, 0) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(report.schemes[0].dl_rate(0, 0) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("tiny-instance monte carlo self-consistency") {
    SimConfig cfg;
    cfg.num_rrh = 2;
    cfg.ant_per_rrh = 2;
    cfg.num_ue = 2;
    cfg.pilot_dim = 2;
    cfg.n_layouts = 1;
    cfg.n_fading = 10000;
    cfg.seed = 17;
    cfg.csi = CsiMode::Ideal;
    cfg.schemes = {Scheme::parse("gzf-epa")};
    cfg.threads = 0;
    const RateReport small = ergodic_rates(cfg);
    SimConfig big = cfg;
    big.n_fading = 100000;
    const RateReport ref = ergodic_rates(big);
    for (int k = 0; k < 2; ++k) {
        const double se = small.schemes[0].dl_rate_stderr(0, k);
        CHECK(std::abs(small.schemes[0].dl_rate(0, k) - ref.schemes[0].dl_rate(0, k)) <=
              3.0 * se);
    }
}

TEST_CASE("reports are deterministic and thread-count independent") {
    SimConfig cfg = desk_cfg(9);
    cfg.schemes = Scheme::all();
    cfg.n_fading = 6;
    const RateReport a = ergodic_rates(cfg);
    const RateReport b = ergodic_rates(cfg);
    SimConfig cfg4 = cfg;
    cfg4.threads = 4;
    const RateReport c = ergodic_rates(cfg4);
    for (size_t si = 0; si < a.schemes.size(); ++si) {
        CHECK(a.schemes[si].ul_rate == b.schemes[si].ul_rate);
        CHECK(a.schemes[si].dl_rate == b.schemes[si].dl_rate);
        CHECK(a.schemes[si].ul_rate == c.schemes[si].ul_rate);
        CHECK(a.schemes[si].dl_rate == c.schemes[si].dl_rate);
    }
    CHECK(report_to_csv(a) == report_to_csv(c)); // byte-identical serialization
}

TEST_CASE("evaluate_draw covers all schemes with sane outputs") {
    SimConfig cfg = desk_cfg(13);
    cfg.schemes = Scheme::all();
    const LayoutContext ctx = make_layout_context(cfg, 0);
    const DrawEval de = evaluate_draw(cfg, ctx, 0, 0);
    REQUIRE(de.dl_sinr.size() == cfg.schemes.size());
    for (size_t si = 0; si < cfg.schemes.size(); ++si) {
        for (int k = 0; k < cfg.num_ue; ++k) {
            CHECK(de.dl_sinr[si][k] >= 0.0);
            CHECK(std::isfinite(de.dl_sinr[si][k]));
            if (!ctx.graph.served(k)) {
                CHECK(de.dl_sinr[si][k] == 0.0);
            }
            if (cfg.schemes[si].centralized) {
                CHECK(de.ul_sinr[si][k] >= 0.0);
                if (!ctx.graph.served(k)) {
                    CHECK(de.ul_sinr[si][k] == 0.0);
                }
            }
        }
    }
}

TEST_SUITE_END();
