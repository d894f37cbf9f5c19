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

#ifndef CELLFREE_TYPES_HPP
#define CELLFREE_TYPES_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace cellfree {

using Real = double;
using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Numerical rank tolerance: singular values below eps_rank * sigma_max count as zero.
inline constexpr double kEpsRank = 1e-9;
/// Zero-forcing outage threshold on the projected channel norm.
inline constexpr double kEpsZf = 1e-6;

enum class CsiMode { Ideal, Estimated };

/// Centralized schemes reuse the UL combiner as DL precoder; local schemes
/// precode per RRH with a per-RRH power budget.
enum class CombinerKind { Gzf, Lmmse };
enum class CentralPowerKind { Duality, Epa };
enum class LocalPrecoderKind { Lpzf, Lzf };
enum class LocalPowerKind { Epa, Ppa };

struct Scheme {
    bool centralized = true;
    CombinerKind combiner = CombinerKind::Gzf;
    CentralPowerKind central_power = CentralPowerKind::Duality;
    LocalPrecoderKind local_precoder = LocalPrecoderKind::Lpzf;
    LocalPowerKind local_power = LocalPowerKind::Epa;

    std::string name() const;
    static Scheme parse(const std::string& name);
    static std::vector<Scheme> all();
};

/// All scenario constants. Defaults follow the standard evaluation setup:
/// 225 m x 225 m torus, UMi pathloss at 3.7 GHz, T = 200 symbol blocks.
struct SimConfig {
    // network dimensions
    int num_rrh = 10;        // L
    int ant_per_rrh = 64;    // M
    int num_ue = 100;        // K
    int pilot_dim = 40;      // tau_p, UL pilot symbols per block
    int block_symbols = 200; // T, coherence block size

    // geometry and propagation
    double side_m = 225.0;                       // torus period
    double angular_spread_rad = kPi / 8.0;       // support window around the link direction
    int max_cluster_size = 10;                   // Q
    double snr_threshold = 1.0;                  // eta: edge requires beta >= eta/(M*snr)
    double noise_dbm = -96.0;                    // N0 (metadata; the sim runs noise-normalized)
    double carrier_ghz = 3.7;
    double bs_height_m = 10.0;
    double ut_height_m = 1.5;
    double shadow_sigma_los_db = 4.0;
    double shadow_sigma_nlos_db = 7.82;
    double snr_override = 0.0; // > 0 skips power calibration and uses this linear SNR

    // Monte Carlo run
    int n_layouts = 50;
    int n_fading = 100;
    std::uint64_t seed = 1;
    CsiMode csi = CsiMode::Estimated;
    std::vector<Scheme> schemes = Scheme::all();
    bool rates_in_bits = true;      // false: nats
    bool theta_exact_norms = false; // use exact block norms in the isotropic theta term
    int threads = 1;                // 0 = hardware concurrency

    // debug dumps (one realization / small-K power data / association graphs)
    bool dump_realization = false;
    bool dump_power = false;
    bool dump_association = false;

    /// Throws std::invalid_argument naming the offending key.
    void validate() const;

    double total_antennas() const { return double(num_rrh) * ant_per_rrh; }
    double dl_power_per_rrh() const { return double(num_ue) / num_rrh; }
    double se_prelog() const { return 1.0 - double(pilot_dim) / block_symbols; }
};

} // namespace cellfree

#endif
