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

#include "vlink/tdl_model.hpp"

#include <span>
#include <vector>

namespace vlink
{
    struct DopplerEnv
    {
        double f_dmax_hz = 0.0;
        double f_los_hz = 0.0;
        double k_linear = 0.0;
        std::vector<double> tap_powers{1.0}; // |alpha[i]|^2, sums to 1

        void validate() const;
    };

    // Continuous density at f plus the LOS point mass located at f_LOS.
    struct DsdPdfValue
    {
        double density = 0.0;  // 1/Hz
        double los_mass = 0.0; // probability
        double los_hz = 0.0;
    };

    struct ResolutionReport
    {
        double target_sigma_tau_s = 0.0;
        double tau0_s = 0.0;
        std::size_t n_taps_used = 0;
        std::vector<double> surviving_tap_powers; // normalized powers of the retained taps
        double achieved_sigma_tau_s = 0.0;
        double abs_error_s = 0.0;
        double dynamic_range_db = 0.0;
    };

    // f_Dmax / sqrt(2).
    double clarke_rms_doppler(double f_dmax_hz);

    // Throws std::domain_error for |f| >= f_Dmax.
    DsdPdfValue dsd_pdf(double f_hz, const DopplerEnv &env);

    double analytic_mean_doppler(const DopplerEnv &env);
    double analytic_rms_doppler(const DopplerEnv &env);

    // Normalized first moment and centered second-moment root of a discrete profile
    // with sample spacing `spacing` starting at zero.
    struct Moments
    {
        double mean = 0.0;
        double spread = 0.0;
    };
    Moments discrete_moments(std::span<const double> powers, double spacing);

    double closed_form_exp_delay_spread(const ExpPdpConfig &cfg);
    double closed_form_exp_mean_delay(const ExpPdpConfig &cfg);

    // Largest RMS delay spread an exponential PDP can reach: the discrete-uniform limit.
    double uniform_limit_delay_spread(double dt_s, std::size_t n_taps);

    // Throws std::range_error when the target is not in (0, uniform limit).
    double solve_tau0_for_target(double target_sigma_tau_s, double dt_s, std::size_t n_taps);

    ResolutionReport resolution_analysis(double target_sigma_tau_s, double dynamic_range_db, double dt_s,
                                         std::size_t n_taps);
}
