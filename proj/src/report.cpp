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

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace cellfree {

namespace {

/// Shortest round-trip decimal form, locale-independent.
std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

double quantile(std::vector<double> v, double p) {
    if (v.empty()) {
        return 0.0;
    }
    std::sort(v.begin(), v.end());
    const double idx = p * double(v.size() - 1);
    const size_t lo = size_t(idx);
    const size_t hi = std::min(lo + 1, v.size() - 1);
    const double w = idx - double(lo);
    return (1.0 - w) * v[lo] + w * v[hi];
}

} // namespace

std::string config_canonical_text(const SimConfig& cfg) {
    std::ostringstream os;
    os << "rrhs=" << cfg.num_rrh << ";antennas=" << cfg.ant_per_rrh << ";ues=" << cfg.num_ue
       << ";pilot_dim=" << cfg.pilot_dim << ";block_symbols=" << cfg.block_symbols
       << ";side_m=" << fmt(cfg.side_m) << ";angular_spread_rad=" << fmt(cfg.angular_spread_rad)
       << ";max_cluster_size=" << cfg.max_cluster_size
       << ";snr_threshold=" << fmt(cfg.snr_threshold) << ";noise_dbm=" << fmt(cfg.noise_dbm)
       << ";carrier_ghz=" << fmt(cfg.carrier_ghz) << ";bs_height_m=" << fmt(cfg.bs_height_m)
       << ";ut_height_m=" << fmt(cfg.ut_height_m)
       << ";shadow_sigma_los_db=" << fmt(cfg.shadow_sigma_los_db)
       << ";shadow_sigma_nlos_db=" << fmt(cfg.shadow_sigma_nlos_db)
       << ";snr_override=" << fmt(cfg.snr_override) << ";layouts=" << cfg.n_layouts
       << ";fading_draws=" << cfg.n_fading << ";seed=" << cfg.seed
       << ";csi=" << (cfg.csi == CsiMode::Ideal ? "ideal" : "estimated")
       << ";rate_unit=" << (cfg.rates_in_bits ? "bits" : "nats")
       << ";theta_exact_norms=" << (cfg.theta_exact_norms ? 1 : 0) << ";schemes=";
    for (size_t i = 0; i < cfg.schemes.size(); ++i) {
        os << (i ? "," : "") << cfg.schemes[i].name();
    }
    return os.str();
}

std::string config_hash(const SimConfig& cfg) {
    const std::string text = config_canonical_text(cfg);
    std::uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string report_to_csv(const RateReport& report) {
    std::ostringstream os;
    os << "layout,ue,scheme,served,ul_rate,dl_rate,ul_rate_stderr,dl_rate_stderr,ul_se,dl_se\n";
    const double prelog = report.cfg.se_prelog();
    for (const SchemeRates& sr : report.schemes) {
        for (int li = 0; li < sr.dl_rate.rows(); ++li) {
            for (int k = 0; k < sr.dl_rate.cols(); ++k) {
                os << li << ',' << k << ',' << sr.name << ','
                   << int(report.served[size_t(li)][size_t(k)]) << ',';
                if (sr.centralized) {
                    os << fmt(sr.ul_rate(li, k));
                }
                os << ',' << fmt(sr.dl_rate(li, k)) << ',';
                if (sr.centralized) {
                    os << fmt(sr.ul_rate_stderr(li, k));
                }
                os << ',' << fmt(sr.dl_rate_stderr(li, k)) << ',';
                if (sr.centralized) {
                    os << fmt(prelog * sr.ul_rate(li, k));
                }
                os << ',' << fmt(prelog * sr.dl_rate(li, k)) << '\n';
            }
        }
    }
    return os.str();
}

std::string report_summary_json(const RateReport& report) {
    nlohmann::json j;
    j["config_hash"] = config_hash(report.cfg);
    j["config"] = config_canonical_text(report.cfg);
    j["seed"] = report.cfg.seed;
    j["layouts"] = report.cfg.n_layouts;
    j["fading_draws"] = report.cfg.n_fading;
    j["total_draws"] = report.total_draws;
    j["unserved_ue_layouts"] = report.unserved_ue_layouts;
    j["rate_unit"] = report.cfg.rates_in_bits ? "bits" : "nats";
    // implied UE transmit power from the calibrated SNR, for reference
    const double snr = report.cfg.snr_override > 0.0 ? report.cfg.snr_override
                                                     : calibrate_snr(report.cfg);
    j["snr_linear"] = snr;
    j["ue_power_dbm"] = report.cfg.noise_dbm + 10.0 * std::log10(snr);

    auto& schemes = j["schemes"] = nlohmann::json::object();
    for (size_t si = 0; si < report.schemes.size(); ++si) {
        const SchemeRates& sr = report.schemes[si];
        nlohmann::json s;
        s["centralized"] = sr.centralized;
        s["mean_sum_se_dl"] = report.mean_sum_se_dl(int(si));
        s["duality_infeasible_draws"] = sr.infeasible_draws;
        auto dl = report.pooled_se(int(si), true);
        s["dl_se_q05"] = quantile(dl, 0.05);
        s["dl_se_q50"] = quantile(dl, 0.50);
        s["dl_se_q95"] = quantile(dl, 0.95);
        if (sr.centralized) {
            s["mean_sum_se_ul"] = report.mean_sum_se_ul(int(si));
            auto ul = report.pooled_se(int(si), false);
            s["ul_se_q05"] = quantile(ul, 0.05);
            s["ul_se_q50"] = quantile(ul, 0.50);
            s["ul_se_q95"] = quantile(ul, 0.95);
        }
        schemes[sr.name] = std::move(s);
    }
    return j.dump(2);
}

std::string report_cdf_csv(const RateReport& report) {
    std::ostringstream os;
    os << "scheme,link,se,prob\n";
    for (size_t si = 0; si < report.schemes.size(); ++si) {
        for (bool dl : {false, true}) {
            if (!dl && !report.schemes[si].centralized) {
                continue;
            }
            const EmpiricalCdf cdf = aggregate_cdf(report.pooled_se(int(si), dl));
            for (long i = 0; i < cdf.values.size(); ++i) {
                os << report.schemes[si].name << ',' << (dl ? "dl" : "ul") << ','
                   << fmt(cdf.values[i]) << ',' << fmt(cdf.prob[i]) << '\n';
            }
        }
    }
    return os.str();
}

} // namespace cellfree
