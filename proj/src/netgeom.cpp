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

#include "cellfree/netgeom.hpp"

#include <cmath>
#include <stdexcept>

namespace cellfree {

Layout generate_layout(const SimConfig& cfg, RngStream& rng) {
    cfg.validate();
    Layout out;
    out.side = cfg.side_m;
    out.rrh_pos.resize(2, cfg.num_rrh);
    out.ue_pos.resize(2, cfg.num_ue);
    for (int l = 0; l < cfg.num_rrh; ++l) {
        out.rrh_pos(0, l) = rng.uniform(0.0, cfg.side_m);
        out.rrh_pos(1, l) = rng.uniform(0.0, cfg.side_m);
    }
    for (int k = 0; k < cfg.num_ue; ++k) {
        out.ue_pos(0, k) = rng.uniform(0.0, cfg.side_m);
        out.ue_pos(1, k) = rng.uniform(0.0, cfg.side_m);
    }
    return out;
}

Eigen::Vector2d torus_displacement(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                                   double side) {
    Eigen::Vector2d d = b - a;
    for (int i = 0; i < 2; ++i) {
        d[i] = std::remainder(d[i], side); // [-side/2, side/2]
    }
    return d;
}

double torus_distance(const Eigen::Vector2d& a, const Eigen::Vector2d& b, double side) {
    return torus_displacement(a, b, side).norm();
}

// TR 38.901 street-canyon curves (defaults; constants configurable via SimConfig)
double umi_pathloss_db(double d3d_m, const SimConfig& cfg, bool los) {
    const double f = cfg.carrier_ghz;
    const double pl_los = 32.4 + 21.0 * std::log10(d3d_m) + 20.0 * std::log10(f);
    if (los) {
        return pl_los;
    }
    const double pl_nlos = 35.3 * std::log10(d3d_m) + 22.4 + 21.3 * std::log10(f) -
                           0.3 * (cfg.ut_height_m - 1.5);
    return std::max(pl_los, pl_nlos);
}

double los_probability(double d2d_m) {
    if (d2d_m <= 0.0) {
        return 1.0;
    }
    const double e = std::exp(-d2d_m / 36.0);
    return std::min(18.0 / d2d_m, 1.0) * (1.0 - e) + e;
}

double d3d_from_d2d(double d2d_m, const SimConfig& cfg) {
    return std::hypot(d2d_m, cfg.bs_height_m - cfg.ut_height_m);
}

double expected_pathloss(double d2d_m, const SimConfig& cfg) {
    const double d3d = d3d_from_d2d(d2d_m, cfg);
    const double p = los_probability(d2d_m);
    const double g_los = std::pow(10.0, -umi_pathloss_db(d3d, cfg, true) / 10.0);
    const double g_nlos = std::pow(10.0, -umi_pathloss_db(d3d, cfg, false) / 10.0);
    return p * g_los + (1.0 - p) * g_nlos;
}

double nominal_cell_diameter(const SimConfig& cfg) {
    const double area = cfg.side_m * cfg.side_m;
    return 2.0 * std::sqrt(area / (kPi * cfg.num_rrh));
}

double calibrate_snr(const SimConfig& cfg) {
    const double beta_bar = expected_pathloss(3.0 * nominal_cell_diameter(cfg), cfg);
    return 1.0 / (beta_bar * cfg.ant_per_rrh);
}

Lsfc lsfc_from_layout(const Layout& layout, const SimConfig& cfg, RngStream& rng) {
    const int num_ue = int(layout.ue_pos.cols());
    const int num_rrh = int(layout.rrh_pos.cols());
    Lsfc out;
    out.beta.resize(num_ue, num_rrh);
    for (int k = 0; k < num_ue; ++k) {
        for (int l = 0; l < num_rrh; ++l) {
            const double d2d = torus_distance(layout.ue_pos.col(k), layout.rrh_pos.col(l),
                                              layout.side);
            const bool los = rng.uniform() < los_probability(d2d);
            const double sigma = los ? cfg.shadow_sigma_los_db : cfg.shadow_sigma_nlos_db;
            const double pl_db = umi_pathloss_db(d3d_from_d2d(d2d, cfg), cfg, los) +
                                 sigma * rng.normal();
            out.beta(k, l) = std::pow(10.0, -pl_db / 10.0);
        }
    }
    out.snr = cfg.snr_override > 0.0 ? cfg.snr_override : calibrate_snr(cfg);
    return out;
}

std::vector<int> angular_support_for_direction(int num_ant, double delta, double phi) {
    if (num_ant < 1) {
        throw std::invalid_argument("angular_support: num_ant must be >= 1");
    }
    std::vector<int> support;
    int nearest = 0;
    double nearest_dist = std::numeric_limits<double>::infinity();
    const double half = delta / 2.0;
    const double edge = half * (1.0 + 1e-12); // keep grid-aligned boundaries inclusive
    for (int m = 0; m < num_ant; ++m) {
        const double grid = 2.0 * kPi * m / num_ant;
        const double dist = std::abs(std::remainder(grid - phi, 2.0 * kPi));
        if (dist <= edge) {
            support.push_back(m);
        }
        if (dist < nearest_dist) {
            nearest_dist = dist;
            nearest = m;
        }
    }
    if (support.empty()) {
        support.push_back(nearest);
    }
    return support;
}

std::vector<int> angular_support(const Layout& layout, int rrh, int ue, const SimConfig& cfg) {
    const Eigen::Vector2d d =
        torus_displacement(layout.rrh_pos.col(rrh), layout.ue_pos.col(ue), layout.side);
    const double phi = std::atan2(d.y(), d.x());
    return angular_support_for_direction(cfg.ant_per_rrh, cfg.angular_spread_rad, phi);
}

} // namespace cellfree
