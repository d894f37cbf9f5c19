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

#include <doctest.h>

#include <cmath>

using namespace cellfree;

TEST_SUITE_BEGIN("power");

namespace {

struct Ctx {
    SimConfig cfg;
    Layout layout;
    Lsfc lsfc;
    AssociationGraph graph;
    SupportSet supports;
    ChannelSet channels;
    EstimateSet estimates;
    CombinerSet combiners;
};

Ctx make_ctx(std::uint64_t seed, int num_rrh = 4, int num_ant = 8, int num_ue = 12,
             int pilot_dim = 6, bool lmmse = false) {
    Ctx c;
    c.cfg.num_rrh = num_rrh;
    c.cfg.ant_per_rrh = num_ant;
    c.cfg.num_ue = num_ue;
    c.cfg.pilot_dim = pilot_dim;
    RngStream pos = substream(seed, StreamKind::Layout);
    c.layout = generate_layout(c.cfg, pos);
    RngStream shadow = substream(seed, StreamKind::Shadowing);
    c.lsfc = lsfc_from_layout(c.layout, c.cfg, shadow);
    RngStream assoc = substream(seed, StreamKind::Association);
    c.graph = form_clusters(c.lsfc, c.cfg, assoc);
    c.supports = compute_supports(c.layout, c.cfg);
    RngStream fading = substream(seed, StreamKind::Fading);
    c.channels = draw_channels(c.lsfc, c.supports, fading);
    c.estimates = ideal_estimates(c.channels, c.graph);
    c.combiners = lmmse ? lmmse_combiners(c.estimates, c.graph, c.lsfc, c.lsfc.snr)
                        : gzf_combiners(c.estimates, c.graph);
    return c;
}

/// Independent route: the UL-orientation formula for theta(j, k), built from
/// the combiner blocks of owner k against the known channels of j.
double theta_ul_route(const Ctx& c, int j, int k) {
    if (!c.graph.served(k) || !c.graph.served(j)) {
        return 0.0;
    }
    const BlockVector& v = c.combiners.vec[k];
    if (j == k) {
        Complex acc(0, 0);
        for (size_t i = 0; i < v.rrhs.size(); ++i) {
            acc += v.blocks[i].dot(c.estimates.by_rrh[v.rrhs[i]].col(k));
        }
        return std::norm(acc);
    }
    Complex known(0, 0);
    double iso = 0.0;
    for (size_t i = 0; i < v.rrhs.size(); ++i) {
        const int l = v.rrhs[i];
        if (c.graph.has_edge(l, j)) {
            known += v.blocks[i].dot(c.estimates.by_rrh[l].col(j)); // v^H hhat
        } else {
            iso += c.lsfc.beta(j, l) / double(v.rrhs.size());
        }
    }
    return std::norm(known) + iso;
}

} // namespace

TEST_CASE("theta diagonal is the squared known signal inner product") {
    const Ctx c = make_ctx(1);
    const ThetaMatrix theta = theta_matrix(c.estimates, c.graph, c.lsfc, c.combiners);
    for (int k = 0; k < c.cfg.num_ue; ++k) {
        if (!c.graph.served(k)) {
            CHECK(theta.m.row(k).sum() == 0.0);
            CHECK(theta.m.col(k).sum() == 0.0);
            continue;
        }
        CHECK(theta.m(k, k) == doctest::Approx(theta_ul_route(c, k, k)).epsilon(1e-12));
    }
    CHECK(theta.m.minCoeff() >= 0.0);
}

TEST_CASE("both orientation formulas produce the identical matrix") {
    for (std::uint64_t seed : {2ULL, 5ULL}) {
        const Ctx c = make_ctx(seed, 3, 4, 8, 4, seed % 2 == 0);
        const ThetaMatrix theta = theta_matrix(c.estimates, c.graph, c.lsfc, c.combiners);
        for (int j = 0; j < c.cfg.num_ue; ++j) {
            for (int k = 0; k < c.cfg.num_ue; ++k) {
                CHECK(theta.m(j, k) ==
                      doctest::Approx(theta_ul_route(c, j, k)).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("disjoint clusters leave only the isotropic term") {
    // two single-RRH clusters with no overlap
    AssociationGraph g;
    g.num_rrh = 2;
    g.num_ue = 2;
    g.pilot_dim = 2;
    g.clusters = {{0}, {1}};
    g.users = {{0}, {1}};
    g.pilot = {0, 0};
    g.edge_bits = {1, 0, 0, 1};
    EstimateSet est;
    est.by_rrh = {CMatrix::Zero(2, 2), CMatrix::Zero(2, 2)};
    est.by_rrh[0].col(0) << Complex(1.0, 0.0), Complex(0.0, 1.0);
    est.by_rrh[1].col(1) << Complex(0.5, 0.5), Complex(-0.5, 0.0);
    Lsfc lsfc;
    lsfc.beta = RMatrix::Zero(2, 2);
    lsfc.beta << 1.0, 0.3, //
        0.4, 1.0;
    lsfc.snr = 2.0;
    CombinerSet comb;
    comb.vec.resize(2);
    comb.ok = {1, 1};
    for (int k = 0; k < 2; ++k) {
        comb.vec[k].rrhs = {k};
        comb.vec[k].blocks = {est.by_rrh[k].col(k) / est.by_rrh[k].col(k).norm()};
    }
    const ThetaMatrix theta = theta_matrix(est, g, lsfc, comb);
    // victim 0 vs owner 1: C_1 = {1}, edge (1, 0) unknown -> beta(0, 1) / 1
    CHECK(theta.m(0, 1) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(theta.m(1, 0) == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("exact conditional oracle reduces to the isotropic term on full support") {
    // full support: F F^H = I, so the oracle term is beta * ||v_block||^2;
    // with exact block norms the isotropic matrix matches it exactly
    const int num_ant = 4;
    Ctx c = make_ctx(3, 3, num_ant, 9, 4);
    c.cfg.angular_spread_rad = 2.0 * kPi;
    c.supports = compute_supports(c.layout, c.cfg);
    RngStream fading = substream(3, StreamKind::Fading, 9);
    c.channels = draw_channels(c.lsfc, c.supports, fading);
    c.estimates = ideal_estimates(c.channels, c.graph);
    c.combiners = gzf_combiners(c.estimates, c.graph);
    const ThetaMatrix exact =
        theta_matrix(c.estimates, c.graph, c.lsfc, c.combiners, /*exact_norms=*/true);
    for (int k = 0; k < c.cfg.num_ue; ++k) {
        if (!c.graph.served(k)) {
            continue;
        }
        for (int j = 0; j < c.cfg.num_ue; ++j) {
            if (j == k || !c.graph.served(j)) {
                continue;
            }
            const double oracle = theta_exact_conditional_oracle(c.estimates, c.supports,
                                                                 c.graph, c.lsfc, c.combiners, k, j);
            CHECK(oracle == doctest::Approx(exact.m(j, k)).epsilon(1e-9));
        }
    }
}

TEST_CASE("oracle equals the known term when the combiner only sees shared RRHs") {
    const Ctx c = make_ctx(4);
    const SupportSet& sup = c.supports;
    for (int k = 0; k < c.cfg.num_ue; ++k) {
        if (!c.graph.served(k)) {
            continue;
        }
        for (int j = 0; j < c.cfg.num_ue; ++j) {
            if (j == k || !c.graph.served(j)) {
                continue;
            }
            bool all_shared = true;
            for (int l : c.graph.clusters[k]) {
                all_shared = all_shared && c.graph.has_edge(l, j);
            }
            if (!all_shared) {
                continue;
            }
            const double oracle =
                theta_exact_conditional_oracle(c.estimates, sup, c.graph, c.lsfc, c.combiners, k, j);
            const double known = theta_ul_route(c, j, k); // no isotropic part here
            CHECK(oracle == doctest::Approx(known).epsilon(1e-10));
        }
    }
}

TEST_CASE("monte carlo unknown-channel mean matches the exact oracle") {
    const Ctx c = make_ctx(6, 3, 4, 9, 4);
    // find a pair with at least one unknown block
    int pk = -1, pj = -1;
    for (int k = 0; k < c.cfg.num_ue && pk < 0; ++k) {
        if (!c.graph.served(k)) {
            continue;
        }
        for (int j = 0; j < c.cfg.num_ue; ++j) {
            if (j == k || !c.graph.served(j)) {
                continue;
            }
            for (int l : c.graph.clusters[k]) {
                if (!c.graph.has_edge(l, j)) {
                    pk = k;
                    pj = j;
                    break;
                }
            }
            if (pk >= 0) {
                break;
            }
        }
    }
    REQUIRE(pk >= 0);
    const BlockVector& v = c.combiners.vec[pk];
    Complex known(0, 0);
    for (size_t i = 0; i < v.rrhs.size(); ++i) {
        if (c.graph.has_edge(v.rrhs[i], pj)) {
            known += v.blocks[i].dot(c.estimates.by_rrh[v.rrhs[i]].col(pj));
        }
    }
    RngStream rng = substream(99, StreamKind::Aux);
    const int n = 100000;
    double sum = 0.0, sumsq = 0.0;
    for (int t = 0; t < n; ++t) {
        Complex total = known;
        for (size_t i = 0; i < v.rrhs.size(); ++i) {
            const int l = v.rrhs[i];
            if (c.graph.has_edge(l, pj)) {
                continue;
            }
            const auto& s = c.supports.of(l, pj);
            const CMatrix f = dft_submatrix(c.supports.num_ant, s);
            CVector nu(int(s.size()));
            for (int z = 0; z < nu.size(); ++z) {
                nu[z] = rng.cnormal();
            }
            const double scale =
                std::sqrt(c.lsfc.beta(pj, l) * c.supports.num_ant / double(s.size()));
            total += v.blocks[i].dot((scale * (f * nu)).eval());
        }
        const double val = std::norm(total);
        sum += val;
        sumsq += val * val;
    }
    const double mean = sum / n;
    const double stderr_ = std::sqrt((sumsq / n - mean * mean) / n);
    const double oracle =
        theta_exact_conditional_oracle(c.estimates, c.supports, c.graph, c.lsfc, c.combiners, pk, pj);
    CHECK(std::abs(mean - oracle) < 3.0 * stderr_);
}

TEST_CASE("nominal ul sinr closed forms") {
    ThetaMatrix t1;
    t1.m = RMatrix::Constant(1, 1, 0.8);
    CHECK(nominal_ul_sinr(t1, 2.0)[0] == doctest::Approx(1.6).epsilon(1e-12));

    ThetaMatrix t3;
    t3.m = RMatrix::Zero(3, 3);
    t3.m.diagonal() << 1.0, 2.0, 3.0;
    const RVector g = nominal_ul_sinr(t3, 4.0);
    for (int k = 0; k < 3; ++k) {
        CHECK(g[k] == doctest::Approx(t3.m(k, k) * 4.0).epsilon(1e-12));
    }

    // crafted 2-UE instance, hand-computed ratio
    ThetaMatrix t2;
    t2.m = RMatrix::Zero(2, 2);
    t2.m << 2.0, 0.25, //
        0.5, 1.0;
    const double snr = 2.0;
    const RVector gg = nominal_ul_sinr(t2, snr);
    CHECK(gg[0] == doctest::Approx(2.0 / (0.5 + 0.5)).epsilon(1e-12));
    CHECK(gg[1] == doctest::Approx(1.0 / (0.5 + 0.25)).epsilon(1e-12));
}

TEST_CASE("duality single-user closed form") {
    ThetaMatrix t;
    t.m = RMatrix::Constant(1, 1, 0.8);
    const double snr = 2.0;
    const RVector gamma = nominal_ul_sinr(t, snr); // 1.6
    const DualityResult r = duality_power_allocation(t, gamma, snr);
    CHECK(r.feasible);
    CHECK(r.q[0] == doctest::Approx(gamma[0] / (0.8 * snr)).epsilon(1e-12));
    CHECK(r.q[0] == doctest::Approx(1.0).epsilon(1e-12)); // equals K
}

TEST_CASE("duality symmetric two-user instance gives unit powers") {
    ThetaMatrix t;
    t.m = RMatrix::Zero(2, 2);
    t.m << 3.0, 0.4, //
        0.4, 3.0;
    const double snr = 5.0;
    const RVector gamma = nominal_ul_sinr(t, snr);
    const DualityResult r = duality_power_allocation(t, gamma, snr);
    CHECK(r.feasible);
    CHECK(r.q[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.q[1] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("duality fixed point on random feasible instances") {
    RngStream rng(123);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 3;
        ThetaMatrix t;
        t.m.resize(n, n);
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < n; ++c) {
                t.m(r, c) = r == c ? rng.uniform(2.0, 4.0) : rng.uniform(0.05, 0.3);
            }
        }
        const double snr = rng.uniform(0.5, 5.0);
        const RVector gamma = nominal_ul_sinr(t, snr);
        const DualityResult res = duality_power_allocation(t, gamma, snr);
        REQUIRE(res.feasible);
        const RVector dl = nominal_dl_sinr(t, res.q, snr);
        for (int k = 0; k < n; ++k) {
            CHECK(std::abs(dl[k] - gamma[k]) <= 1e-8 * gamma[k]);
        }
        CHECK(std::abs(res.power_sum - n) <= 1e-6 * n);
    }
}

TEST_CASE("duality on the full pipeline conserves the served power budget") {
    for (std::uint64_t seed : {7ULL, 8ULL}) {
        const Ctx c = make_ctx(seed, 4, 8, 12, 6, seed % 2 == 0);
        const ThetaMatrix theta = theta_matrix(c.estimates, c.graph, c.lsfc, c.combiners);
        const RVector gamma = nominal_ul_sinr(theta, c.lsfc.snr);
        const DualityResult res = duality_power_allocation(theta, gamma, c.lsfc.snr);
        REQUIRE(res.feasible);
        const int served = c.graph.num_served();
        CHECK(std::abs(res.power_sum - served) <= 1e-6 * served);
        const RVector dl = nominal_dl_sinr(theta, res.q, c.lsfc.snr);
        for (int k = 0; k < c.cfg.num_ue; ++k) {
            if (gamma[k] > 0.0) {
                CHECK(std::abs(dl[k] - gamma[k]) <= 1e-8 * gamma[k]);
            } else {
                CHECK(res.q[k] == 0.0);
            }
        }
    }
}

TEST_CASE("unachievable targets are flagged infeasible") {
    ThetaMatrix t;
    t.m.resize(2, 2);
    t.m << 1.0, 2.0, //
        2.0, 1.0;
    RVector gamma(2);
    gamma << 50.0, 50.0; // far beyond what the interference allows
    const DualityResult res = duality_power_allocation(t, gamma, 1.0);
    CHECK(!res.feasible);
}

TEST_CASE("diagonal-only system scales linearly with the noise level") {
    ThetaMatrix t;
    t.m = RMatrix::Zero(3, 3);
    t.m.diagonal() << 1.0, 2.0, 4.0;
    RVector gamma(3);
    gamma << 0.5, 1.0, 2.0;
    const DualityResult r1 = duality_power_allocation(t, gamma, 1.0);
    const DualityResult r2 = duality_power_allocation(t, gamma, 0.25); // noise x4
    REQUIRE(r1.feasible);
    REQUIRE(r2.feasible);
    for (int k = 0; k < 3; ++k) {
        CHECK(r2.q[k] == doctest::Approx(4.0 * r1.q[k]).epsilon(1e-12));
    }
}

TEST_CASE("epa assigns unit power to served users only") {
    AssociationGraph g;
    g.num_rrh = 1;
    g.num_ue = 5;
    g.pilot_dim = 4;
    g.clusters = {{0}, {}, {0}, {0}, {0}};
    g.users = {{0, 2, 3, 4}};
    g.pilot = {0, 0, 1, 2, 3};
    g.edge_bits = {1, 0, 1, 1, 1};
    const RVector q = epa_central(g);
    CHECK(q.sum() == doctest::Approx(4.0));
    CHECK(q[1] == 0.0);
    for (int k : {0, 2, 3, 4}) {
        CHECK(q[k] == 1.0);
    }
}

TEST_CASE("local epa splits the budget equally") {
    AssociationGraph g;
    g.num_rrh = 2;
    g.num_ue = 4;
    g.pilot_dim = 4;
    g.clusters = {{0}, {0}, {0}, {0}};
    g.users = {{0, 1, 2, 3}, {}};
    g.pilot = {0, 1, 2, 3};
    g.edge_bits.assign(8, 0);
    for (int k = 0; k < 4; ++k) {
        g.edge_bits[size_t(k) * 2 + 0] = 1;
    }
    const DistributedPower p = epa_local(g, 2.0);
    REQUIRE(p.q[0].size() == 4);
    for (double v : p.q[0]) {
        CHECK(v == doctest::Approx(0.5).epsilon(1e-15));
    }
    CHECK(p.q[1].empty()); // empty user set, no entries
    double sum = 0.0;
    for (double v : p.q[0]) {
        sum += v;
    }
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("local ppa follows the lsfc proportions") {
    AssociationGraph g;
    g.num_rrh = 1;
    g.num_ue = 2;
    g.pilot_dim = 2;
    g.clusters = {{0}, {0}};
    g.users = {{0, 1}};
    g.pilot = {0, 1};
    g.edge_bits = {1, 1};
    Lsfc lsfc;
    lsfc.beta = RMatrix::Zero(2, 1);
    lsfc.beta << 1.0, 3.0;
    lsfc.snr = 1.0;
    const DistributedPower p = ppa_local(g, lsfc, 1.0);
    CHECK(p.q[0][0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(p.q[0][1] == doctest::Approx(0.75).epsilon(1e-12));

    // single UE takes the full budget
    AssociationGraph g1 = g;
    g1.num_ue = 1;
    g1.clusters = {{0}};
    g1.users = {{0}};
    g1.pilot = {0};
    g1.edge_bits = {1};
    Lsfc l1;
    l1.beta = RMatrix::Constant(1, 1, 0.2);
    l1.snr = 1.0;
    CHECK(ppa_local(g1, l1, 1.7).q[0][0] == doctest::Approx(1.7).epsilon(1e-12));
}

TEST_CASE("outage users are excluded from the local budget") {
    AssociationGraph g;
    g.num_rrh = 1;
    g.num_ue = 3;
    g.pilot_dim = 3;
    g.clusters = {{0}, {0}, {0}};
    g.users = {{0, 1, 2}};
    g.pilot = {0, 1, 2};
    g.edge_bits = {1, 1, 1};
    LocalPrecoders prec;
    prec.u = {{CVector::Ones(1), CVector::Zero(1), CVector::Ones(1)}};
    prec.role = {{BlockRole::Zf, BlockRole::Outage, BlockRole::Zf}};
    const DistributedPower p = epa_local(g, 3.0, &prec);
    CHECK(p.q[0][0] == doctest::Approx(1.5));
    CHECK(p.q[0][1] == 0.0);
    CHECK(p.q[0][2] == doctest::Approx(1.5));

    Lsfc lsfc;
    lsfc.beta = RMatrix::Zero(3, 1);
    lsfc.beta << 1.0, 5.0, 3.0;
    lsfc.snr = 1.0;
    const DistributedPower pp = ppa_local(g, lsfc, 2.0, &prec);
    CHECK(pp.q[0][0] == doctest::Approx(0.5));
    CHECK(pp.q[0][1] == 0.0);
    CHECK(pp.q[0][2] == doctest::Approx(1.5));
}

TEST_SUITE_END();
