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

#ifndef CELLFREE_NETGEOM_HPP
#define CELLFREE_NETGEOM_HPP

#include "cellfree/rng.hpp"
#include "cellfree/types.hpp"

namespace cellfree {

/// RRH and UE positions on a square torus of period `side`. Points are columns.
struct Layout {
    Eigen::Matrix2Xd rrh_pos;
    Eigen::Matrix2Xd ue_pos;
    double side = 0.0;
};

/// Large-scale fading coefficients beta(k, l) (raw linear power gains, no SNR
/// factor applied) together with the calibrated system SNR.
struct Lsfc {
    RMatrix beta; // num_ue x num_rrh
    double snr = 0.0;
};

Layout generate_layout(const SimConfig& cfg, RngStream& rng);

/// Component-wise wrapped displacement from a to b, each entry in [-side/2, side/2).
Eigen::Vector2d torus_displacement(const Eigen::Vector2d& a, const Eigen::Vector2d& b, double side);

/// Shortest distance on the torus (minimum over wrap images).
double torus_distance(const Eigen::Vector2d& a, const Eigen::Vector2d& b, double side);

// --- UMi street-canyon propagation -------------------------------------
// Pathloss in dB at 3D distance d for the configured carrier and antenna
// heights; the NLOS curve is lower-bounded by the LOS one.
double umi_pathloss_db(double d3d_m, const SimConfig& cfg, bool los);
double los_probability(double d2d_m);
/// LOS-probability-weighted mean linear pathloss gain at 2D distance d (no shadowing).
double expected_pathloss(double d2d_m, const SimConfig& cfg);
double d3d_from_d2d(double d2d_m, const SimConfig& cfg);

/// Nominal cell diameter 2*sqrt(A/(pi*L)): diameter of a disk holding an
/// equal share of the coverage area.
double nominal_cell_diameter(const SimConfig& cfg);

/// UL transmit power calibration: linear SNR such that the expected channel
/// gain at three nominal cell diameters, collected over M antennas, sits at 0 dB.
double calibrate_snr(const SimConfig& cfg);

/// Draws LOS states and lognormal shadowing, fills beta from the UMi model and
/// attaches the calibrated (or overridden) SNR.
Lsfc lsfc_from_layout(const Layout& layout, const SimConfig& cfg, RngStream& rng);

/// DFT angle indices m with wrapped distance between 2*pi*m/M and phi at most
/// delta/2 (boundary inclusive); falls back to the nearest index if empty.
std::vector<int> angular_support_for_direction(int num_ant, double delta, double phi);

/// Support of the link RRH l -> UE k using the torus-minimal direction.
std::vector<int> angular_support(const Layout& layout, int rrh, int ue, const SimConfig& cfg);

} // namespace cellfree

#endif
