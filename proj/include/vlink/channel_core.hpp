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

#include "vlink/matrix.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace vlink
{
    inline constexpr double kSpeedOfLight = 299792458.0; // m/s
    inline constexpr double kTwoPi = 6.283185307179586;
    inline constexpr double kPi = 3.141592653589793;

    using ComplexSample = std::complex<double>;
    using ComplexMatrix = Matrix<ComplexSample>;

    enum class PathKind
    {
        Los,
        StaticDiscrete,
        MobileDiscrete,
        Diffuse
    };

    std::string_view to_string(PathKind kind) noexcept;

    // One multipath component, frozen for the duration of a stationarity region.
    struct PropagationPath
    {
        double amplitude = 0.0;    // |eta|, linear
        double phase_cycles = 0.0; // starting phase in cycles, [0, 1); used as exp(j*2*pi*phase)
        double delay_s = 0.0;      // delay at the start of the region
        double doppler_hz = 0.0;   // positive for a shrinking path length
        PathKind kind = PathKind::Diffuse;

        bool operator==(const PropagationPath &) const = default;
    };

    struct SamplingConfig
    {
        double t_s = 0.0;                // time sample spacing
        double t_c = 0.0;                // delay bin spacing, 1 / bandwidth
        std::size_t n_delay_bins = 0;    // N
        std::size_t m_samples = 0;       // M = t_stat / t_s
        double t_stat = 0.0;             // stationarity region duration
        double rolloff = 0.9;            // raised-cosine roll-off
        double carrier_hz = 5.9e9;
        double bandwidth_hz = 10e6;
        std::size_t filter_half_width = 8; // h_RC support in delay bins on each side of a path

        // Derives t_c = 1/B and M = round(t_stat / t_s); validates the result.
        static SamplingConfig make(double carrier_hz, double bandwidth_hz, double t_stat, double t_s,
                                   double rolloff, std::size_t n_delay_bins);

        // Throws std::invalid_argument if the configuration is inconsistent.
        void validate() const;

        // Largest Doppler magnitude representable without aliasing, 1 / (2 t_s).
        double nyquist_doppler_hz() const noexcept { return 0.5 / t_s; }

        // Throws std::invalid_argument unless t_s < 1 / (2 B_D).
        void check_doppler_bound(double doppler_bound_hz) const;

        double delay_window_s() const noexcept { return static_cast<double>(n_delay_bins) * t_c; }
    };

    struct SampledCir
    {
        ComplexMatrix data; // M x N, h[m, n]
        SamplingConfig config;
        int region_index = 0;
    };

    struct StationarityRegion
    {
        int index = 0;
        std::vector<PropagationPath> paths;
        double duration_s = 0.0;
        double t_start_s = 0.0;
    };

    // Raised-cosine impulse response with unit peak. The removable singularity at
    // |2*beta*tau/t_c| = 1 is evaluated by its limit.
    double raised_cosine(double tau, double t_c, double rolloff);

    // Filter weight of delay bin n for a path at the given delay; zero outside the
    // truncated support of +-filter_half_width bins.
    double rc_tap_weight(std::size_t n, double delay_s, const SamplingConfig &cfg);

    // Half-open range [first, last) of delay bins inside a path's filter support,
    // clipped to the delay window.
    struct BinRange
    {
        std::size_t first = 0;
        std::size_t last = 0;
    };
    BinRange rc_support(double delay_s, const SamplingConfig &cfg) noexcept;

    // tau[m] = tau - (f / f_C) * m * t_s (constant radial velocity within the region).
    double path_delay_at(const PropagationPath &path, std::size_t m, const SamplingConfig &cfg);

    // Throws std::out_of_range when a path delay falls outside [0, N*t_c), and
    // std::invalid_argument for malformed paths or Dopplers beyond the Nyquist bound.
    void check_region(const StationarityRegion &region, const SamplingConfig &cfg);

    // h[m, n] = sum_l |eta_l| exp(j*2*pi*(phi_l - nu_l*m)) h_RC(n*t_c - tau_l), nu_l = f_l * t_s.
    SampledCir sample_cir(const StationarityRegion &region, const SamplingConfig &cfg);
}
