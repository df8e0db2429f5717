// SPDX-License-Identifier: Apache-2.0
//
// vlink - condensed-parameter system-level simulation for vehicular links
// Copyright (C) 2026 The vlink Authors
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
#pragma once

#include "vlink/channel_core.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace vlink
{
    inline constexpr double kLosOnlyKDb = 500.0; // K sentinel when no scattered path shares the LOS bin

    struct Pdp
    {
        std::vector<double> powers; // P[n], n = 0..N-1
        double t_c = 0.0;
    };

    // Doppler spectral density over a contiguous run of Doppler bins.
    struct Dsd
    {
        std::vector<double> powers;
        double bin_hz = 0.0;         // 1 / T_stat
        std::int64_t first_bin = 0;  // Doppler index p of powers[0]

        double frequency(std::size_t i) const noexcept
        {
            return static_cast<double>(first_bin + static_cast<std::int64_t>(i)) * bin_hz;
        }
    };

    struct CondensedParams
    {
        double rx_power_dbm = -std::numeric_limits<double>::infinity();
        double sigma_tau_s = 0.0;
        double f_dmax_hz = 0.0;
        double k_db = -std::numeric_limits<double>::infinity();
        double f_los_hz = 0.0;
        double sigma_nu_hz = 0.0;
    };

    struct EstimatorConfig
    {
        double epsilon_db = 40.0;          // DSD dynamic range for the Doppler bandwidth
        double power_threshold_db = 40.0;  // PDP bins below peak minus this are not integrated
        double p_tx_dbm = -5.0;
        std::size_t doppler_guard_bins = 32; // DSD window margin around the occupied band; 0 = full axis

        void validate() const;
    };

    struct DelayMoments
    {
        double mean_delay_s = 0.0;
        double sigma_tau_s = 0.0;
    };

    struct DopplerMoments
    {
        double mean_doppler_hz = 0.0;
        double sigma_nu_hz = 0.0;
    };

    // P[n] = (1/M) sum_m |h[m, n]|^2.
    Pdp pdp_brute(const SampledCir &cir);

    // Closed-form PDP of the region's paths; cost independent of M.
    Pdp pdp_fast(const StationarityRegion &region, const SamplingConfig &cfg);

    DelayMoments rms_delay_spread(const Pdp &pdp);

    // Doppler-variant impulse response on the full axis p = -M/2 .. M/2-1 (row i holds p = i - M/2).
    ComplexMatrix dvir(const StationarityRegion &region, const SamplingConfig &cfg);

    // Same kernel restricted to p = first_bin .. first_bin + n_bins - 1.
    ComplexMatrix dvir(const StationarityRegion &region, const SamplingConfig &cfg, std::int64_t first_bin,
                       std::size_t n_bins);

    // P[p] = (1/N) sum_n |s[p, n]|^2. The default first bin matches the full-axis dvir.
    Dsd dsd_estimate(const ComplexMatrix &s, double bin_hz);
    Dsd dsd_estimate(const ComplexMatrix &s, double bin_hz, std::int64_t first_bin);

    // DSD of a sampled CIR through a per-delay-bin DFT over time (unit-peak normalization).
    Dsd dsd_from_cir(const SampledCir &cir);

    DopplerMoments rms_doppler_spread(const Dsd &dsd);

    // Span max - min of the frequencies whose power exceeds max / 10^(epsilon/10).
    double doppler_bandwidth(const Dsd &dsd, double epsilon_db);

    // Largest |f| among the frequencies retained by doppler_bandwidth.
    double one_sided_doppler_extent(const Dsd &dsd, double epsilon_db);

    // LOS-to-scattered power ratio in the LOS delay bin floor(tau * B), in dB.
    double estimate_k_factor(const StationarityRegion &region, double bandwidth_hz);

    double received_power(const Pdp &pdp, const EstimatorConfig &cfg);

    CondensedParams condense(const StationarityRegion &region, const SamplingConfig &sampling,
                             const EstimatorConfig &cfg);
}
