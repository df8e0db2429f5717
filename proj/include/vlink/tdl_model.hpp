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
#include <vector>

namespace vlink
{
    // Exponentially decaying power delay profile on N_taps equally spaced taps.
    struct ExpPdpConfig
    {
        double tau0_s = 100e-9;
        double dt_s = 100e-9;
        std::size_t n_taps = 8;

        void validate() const;
    };

    enum class SpectrumSide
    {
        Double, // beta ~ U(-pi, pi)
        Right,  // beta ~ U(-pi/2, pi/2)
        Left    // beta ~ U(pi/2, 3pi/2)
    };

    struct TdlConfig
    {
        ExpPdpConfig pdp;
        double k_linear = 0.0; // 0 means NLOS
        double f_dmax_hz = 0.0;
        double f_los_hz = 0.0;
        std::size_t paths_per_tap = 40; // L'
        SpectrumSide spectrum_side = SpectrumSide::Double;
        std::uint64_t seed = 0;

        void validate() const;
    };

    // Normalized tap powers e^{-n dt / tau0} / sum_k e^{-k dt / tau0}, n = 1..N_taps.
    std::vector<double> exp_pdp(const ExpPdpConfig &cfg);

    // Delay of tap w (zero based); the first tap sits at zero delay.
    inline double tdl_tap_delay(const ExpPdpConfig &cfg, std::size_t w) noexcept
    {
        return static_cast<double>(w) * cfg.dt_s;
    }

    // Sum-of-sinusoids realization of the TDL model. Tap 1 holds a LOS component
    // (when k_linear > 0) plus L'-1 scattered components; with k_linear = 0 every tap
    // holds L' scattered components. Deterministic in (seed, region_index).
    StationarityRegion draw_tdl_paths(const TdlConfig &cfg, int region_index);

    SampledCir generate_tdl_cir(const TdlConfig &cfg, const SamplingConfig &sampling, int region_index = 0);
}
