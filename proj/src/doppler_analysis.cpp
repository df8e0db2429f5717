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
#include "vlink/doppler_analysis.hpp"

#include "vlink/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace vlink
{
    namespace
    {
        // Below this 1 - q the closed forms lose more than ~1e-12 to cancellation.
        constexpr double kDirectSumBelow = 0.1;

        // K/(1+K) and 1/(1+K), exact for K = infinity.
        double los_fraction(double k) { return std::isinf(k) ? 1.0 : k / (1.0 + k); }
        double scatter_fraction(double k) { return std::isinf(k) ? 0.0 : 1.0 / (1.0 + k); }

        Moments direct_exp_moments(const ExpPdpConfig &cfg)
        {
            std::vector<double> p(cfg.n_taps);
            for (std::size_t k = 0; k < cfg.n_taps; ++k)
                p[k] = std::exp(-static_cast<double>(k) * cfg.dt_s / cfg.tau0_s);
            return discrete_moments(p, cfg.dt_s);
        }
    }

    void DopplerEnv::validate() const
    {
        if (!std::isfinite(f_dmax_hz) || f_dmax_hz < 0.0)
            throw std::invalid_argument("DopplerEnv: f_Dmax must be finite and non-negative.");
        if (!std::isfinite(f_los_hz) || std::abs(f_los_hz) > f_dmax_hz)
            throw std::invalid_argument("DopplerEnv: |f_LOS| must not exceed f_Dmax.");
        if (std::isnan(k_linear) || k_linear < 0.0)
            throw std::invalid_argument("DopplerEnv: K must be non-negative.");
        if (tap_powers.empty())
            throw std::invalid_argument("DopplerEnv: at least one tap power is required.");
        double sum = 0.0;
        for (double p : tap_powers)
        {
            if (!std::isfinite(p) || p < 0.0)
                throw std::invalid_argument("DopplerEnv: tap powers must be finite and non-negative.");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw std::invalid_argument("DopplerEnv: tap powers must sum to 1.");
    }

    double clarke_rms_doppler(double f_dmax_hz)
    {
        if (!(f_dmax_hz >= 0.0))
            throw std::invalid_argument("clarke_rms_doppler: f_Dmax must be non-negative.");
        return f_dmax_hz / std::sqrt(2.0);
    }

    DsdPdfValue dsd_pdf(double f_hz, const DopplerEnv &env)
    {
        env.validate();
        if (!(std::abs(f_hz) < env.f_dmax_hz))
            throw std::domain_error("dsd_pdf: the continuous part is defined only for |f| < f_Dmax.");

        const double a1 = env.tap_powers.front();
        const double rest = 1.0 - a1;
        const double clarke = 1.0 / (kPi * std::sqrt(env.f_dmax_hz * env.f_dmax_hz - f_hz * f_hz));

        DsdPdfValue v;
        v.density = (a1 * scatter_fraction(env.k_linear) + rest) * clarke;
        v.los_mass = a1 * los_fraction(env.k_linear);
        v.los_hz = env.f_los_hz;
        return v;
    }

    double analytic_mean_doppler(const DopplerEnv &env)
    {
        env.validate();
        return env.tap_powers.front() * los_fraction(env.k_linear) * env.f_los_hz;
    }

    double analytic_rms_doppler(const DopplerEnv &env)
    {
        env.validate();
        const double a1 = env.tap_powers.front();
        const double rest = 1.0 - a1;
        const double kf = los_fraction(env.k_linear);
        const double sf = scatter_fraction(env.k_linear);
        const double fd2 = env.f_dmax_hz * env.f_dmax_hz;
        const double fl2 = env.f_los_hz * env.f_los_hz;

        const double first = a1 * (fl2 * kf + 0.5 * fd2 * sf - a1 * fl2 * kf * kf);
        const double var = first + 0.5 * fd2 * rest;

        const double scale = fd2 + fl2;
        if (var < 0.0)
        {
            if (var < -1e-12 * scale)
                throw ConsistencyError("analytic_rms_doppler: negative variance " + std::to_string(var));
            return 0.0;
        }
        return std::sqrt(var);
    }

    Moments discrete_moments(std::span<const double> powers, double spacing)
    {
        double s0 = 0.0, s1 = 0.0;
        for (std::size_t k = 0; k < powers.size(); ++k)
        {
            s0 += powers[k];
            s1 += powers[k] * static_cast<double>(k);
        }
        if (!(s0 > 0.0))
            throw std::domain_error("discrete_moments: total power must be positive.");
        const double mean = s1 / s0;
        double s2 = 0.0;
        for (std::size_t k = 0; k < powers.size(); ++k)
        {
            const double d = static_cast<double>(k) - mean;
            s2 += powers[k] * d * d;
        }
        return {mean * spacing, std::sqrt(s2 / s0) * spacing};
    }

    double closed_form_exp_mean_delay(const ExpPdpConfig &cfg)
    {
        cfg.validate();
        const double q = std::exp(-cfg.dt_s / cfg.tau0_s);
        if (1.0 - q < kDirectSumBelow)
            return direct_exp_moments(cfg).mean;
        const double N = static_cast<double>(cfg.n_taps);
        const double qN = std::pow(q, N);
        return cfg.dt_s * (qN * q * (N - 1.0) - N * qN + q) / ((1.0 - q) * (1.0 - qN));
    }

    double closed_form_exp_delay_spread(const ExpPdpConfig &cfg)
    {
        cfg.validate();
        if (cfg.n_taps == 1)
            return 0.0;
        const double q = std::exp(-cfg.dt_s / cfg.tau0_s);
        if (q == 1.0)
            return uniform_limit_delay_spread(cfg.dt_s, cfg.n_taps);
        if (1.0 - q < kDirectSumBelow)
            return direct_exp_moments(cfg).spread;

        const double N = static_cast<double>(cfg.n_taps);
        const double qN = std::pow(q, N);
        const double omq = 1.0 - q;
        const double A = q - N * N * qN * omq * omq - 2.0 * qN * q + qN * qN * q;
        return cfg.dt_s / (omq * (1.0 - qN)) * std::sqrt(std::max(A, 0.0));
    }

    double uniform_limit_delay_spread(double dt_s, std::size_t n_taps)
    {
        const double N = static_cast<double>(n_taps);
        return dt_s * std::sqrt((N * N - 1.0) / 12.0);
    }

    double solve_tau0_for_target(double target_sigma_tau_s, double dt_s, std::size_t n_taps)
    {
        if (!(dt_s > 0.0) || n_taps == 0)
            throw std::invalid_argument("solve_tau0_for_target: invalid tap grid.");
        const double limit = uniform_limit_delay_spread(dt_s, n_taps);
        if (!(target_sigma_tau_s > 0.0) || !(target_sigma_tau_s < limit))
            throw std::range_error("solve_tau0_for_target: target " + std::to_string(target_sigma_tau_s) +
                                   " s outside (0, " + std::to_string(limit) + ") s.");

        auto sigma = [&](double tau0)
        { return closed_form_exp_delay_spread({tau0, dt_s, n_taps}); };

        double lo = dt_s * 1e-3;
        double hi = dt_s;
        while (sigma(hi) < target_sigma_tau_s)
        {
            lo = hi;
            hi *= 2.0;
            if (!std::isfinite(hi) || hi > dt_s * 1e12)
                throw std::range_error("solve_tau0_for_target: target not reachable.");
        }
        for (int it = 0; it < 200; ++it)
        {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi)
                break;
            (sigma(mid) < target_sigma_tau_s ? lo : hi) = mid;
        }
        const double a = sigma(lo), b = sigma(hi);
        return std::abs(a - target_sigma_tau_s) <= std::abs(b - target_sigma_tau_s) ? lo : hi;
    }

    ResolutionReport resolution_analysis(double target_sigma_tau_s, double dynamic_range_db, double dt_s,
                                         std::size_t n_taps)
    {
        if (!(dynamic_range_db > 0.0))
            throw std::invalid_argument("resolution_analysis: dynamic range must be positive.");

        ResolutionReport r;
        r.target_sigma_tau_s = target_sigma_tau_s;
        r.dynamic_range_db = dynamic_range_db;
        r.tau0_s = solve_tau0_for_target(target_sigma_tau_s, dt_s, n_taps);

        auto powers = exp_pdp({r.tau0_s, dt_s, n_taps});
        const double peak = *std::max_element(powers.begin(), powers.end());
        const double floor = peak * std::pow(10.0, -dynamic_range_db / 10.0);
        for (double &p : powers)
            if (p < floor)
                p = 0.0;

        for (double p : powers)
            if (p > 0.0)
            {
                ++r.n_taps_used;
                r.surviving_tap_powers.push_back(p);
            }
        const double kept = std::accumulate(r.surviving_tap_powers.begin(), r.surviving_tap_powers.end(), 0.0);
        for (double &p : r.surviving_tap_powers)
            p /= kept;

        r.achieved_sigma_tau_s = discrete_moments(powers, dt_s).spread;
        r.abs_error_s = std::abs(r.achieved_sigma_tau_s - target_sigma_tau_s);
        return r;
    }
}
