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
#include "vlink/channel_core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace vlink
{
    std::string_view to_string(PathKind kind) noexcept
    {
        switch (kind)
        {
        case PathKind::Los:
            return "los";
        case PathKind::StaticDiscrete:
            return "static";
        case PathKind::MobileDiscrete:
            return "mobile";
        case PathKind::Diffuse:
            return "diffuse";
        }
        return "unknown";
    }

    SamplingConfig SamplingConfig::make(double carrier_hz, double bandwidth_hz, double t_stat, double t_s,
                                        double rolloff, std::size_t n_delay_bins)
    {
        if (!(bandwidth_hz > 0.0) || !std::isfinite(bandwidth_hz))
            throw std::invalid_argument("SamplingConfig: bandwidth must be positive and finite.");
        if (!(t_s > 0.0) || !(t_stat > 0.0) || !std::isfinite(t_s) || !std::isfinite(t_stat))
            throw std::invalid_argument("SamplingConfig: t_s and t_stat must be positive and finite.");

        SamplingConfig cfg;
        cfg.carrier_hz = carrier_hz;
        cfg.bandwidth_hz = bandwidth_hz;
        cfg.t_c = 1.0 / bandwidth_hz;
        cfg.t_s = t_s;
        cfg.t_stat = t_stat;
        cfg.rolloff = rolloff;
        cfg.n_delay_bins = n_delay_bins;
        cfg.m_samples = static_cast<std::size_t>(std::llround(t_stat / t_s));
        cfg.validate();
        return cfg;
    }

    void SamplingConfig::validate() const
    {
        auto positive = [](double v)
        { return std::isfinite(v) && v > 0.0; };

        if (!positive(t_s))
            throw std::invalid_argument("SamplingConfig: t_s must be positive and finite.");
        if (!positive(t_c))
            throw std::invalid_argument("SamplingConfig: t_c must be positive and finite.");
        if (!positive(t_stat))
            throw std::invalid_argument("SamplingConfig: t_stat must be positive and finite.");
        if (!positive(carrier_hz))
            throw std::invalid_argument("SamplingConfig: carrier frequency must be positive and finite.");
        if (!positive(bandwidth_hz))
            throw std::invalid_argument("SamplingConfig: bandwidth must be positive and finite.");
        if (std::abs(t_c * bandwidth_hz - 1.0) > 1e-9)
            throw std::invalid_argument("SamplingConfig: t_c must equal 1 / bandwidth.");
        if (!(rolloff >= 0.0 && rolloff <= 1.0))
            throw std::invalid_argument("SamplingConfig: rolloff must lie in [0, 1].");
        if (n_delay_bins == 0)
            throw std::invalid_argument("SamplingConfig: n_delay_bins must be at least 1.");
        if (m_samples == 0)
            throw std::invalid_argument("SamplingConfig: m_samples must be at least 1.");
        if (std::abs(static_cast<double>(m_samples) * t_s - t_stat) > t_s * (1.0 + 1e-9))
            throw std::invalid_argument("SamplingConfig: m_samples * t_s must equal t_stat within one sample.");
    }

    void SamplingConfig::check_doppler_bound(double doppler_bound_hz) const
    {
        if (!std::isfinite(doppler_bound_hz) || doppler_bound_hz < 0.0)
            throw std::invalid_argument("SamplingConfig: Doppler bound must be finite and non-negative.");
        if (!(t_s * 2.0 * doppler_bound_hz < 1.0))
            throw std::invalid_argument("SamplingConfig: t_s = " + std::to_string(t_s) +
                                        " s violates t_s < 1/(2 B_D) for B_D = " +
                                        std::to_string(doppler_bound_hz) + " Hz.");
    }

    double raised_cosine(double tau, double t_c, double rolloff)
    {
        if (!std::isfinite(tau) || !std::isfinite(t_c) || !std::isfinite(rolloff))
            throw std::invalid_argument("raised_cosine: non-finite input.");
        if (!(t_c > 0.0))
            throw std::invalid_argument("raised_cosine: t_c must be positive.");
        if (!(rolloff >= 0.0 && rolloff <= 1.0))
            throw std::invalid_argument("raised_cosine: rolloff must lie in [0, 1].");

        const double x = tau / t_c;
        if (x == 0.0)
            return 1.0;

        double sinc = 0.0;
        if (x != std::nearbyint(x))
            sinc = std::sin(kPi * x) / (kPi * x);
        else
            return 0.0;

        const double bx = 2.0 * rolloff * x;
        const double denom = 1.0 - bx * bx;
        if (std::abs(denom) < 1e-8)
        {
            // Limit of cos(pi*beta*x) / (1 - (2*beta*x)^2) as |2*beta*x| -> 1.
            const double x0 = 1.0 / (2.0 * rolloff);
            return (std::sin(kPi * x0) / (kPi * x0)) * (kPi / 4.0);
        }
        return sinc * std::cos(kPi * rolloff * x) / denom;
    }

    BinRange rc_support(double delay_s, const SamplingConfig &cfg) noexcept
    {
        const double x = delay_s / cfg.t_c;
        const double w = static_cast<double>(cfg.filter_half_width);
        const double lo = std::ceil(x - w);
        const double hi = std::floor(x + w) + 1.0;
        const double n = static_cast<double>(cfg.n_delay_bins);

        BinRange r;
        r.first = static_cast<std::size_t>(std::clamp(lo, 0.0, n));
        r.last = static_cast<std::size_t>(std::clamp(hi, 0.0, n));
        if (r.last < r.first)
            r.last = r.first;
        return r;
    }

    double rc_tap_weight(std::size_t n, double delay_s, const SamplingConfig &cfg)
    {
        const auto r = rc_support(delay_s, cfg);
        if (n < r.first || n >= r.last)
            return 0.0;
        return raised_cosine(static_cast<double>(n) * cfg.t_c - delay_s, cfg.t_c, cfg.rolloff);
    }

    double path_delay_at(const PropagationPath &path, std::size_t m, const SamplingConfig &cfg)
    {
        if (m >= cfg.m_samples)
            throw std::out_of_range("path_delay_at: sample index outside the region.");
        return path.delay_s - (path.doppler_hz / cfg.carrier_hz) * static_cast<double>(m) * cfg.t_s;
    }

    void check_region(const StationarityRegion &region, const SamplingConfig &cfg)
    {
        const double window = cfg.delay_window_s();
        const double nyquist = cfg.nyquist_doppler_hz();
        for (std::size_t i = 0; i < region.paths.size(); ++i)
        {
            const auto &p = region.paths[i];
            if (!std::isfinite(p.amplitude) || p.amplitude < 0.0)
                throw std::invalid_argument("Path " + std::to_string(i) + ": amplitude must be finite and >= 0.");
            if (!std::isfinite(p.phase_cycles))
                throw std::invalid_argument("Path " + std::to_string(i) + ": phase must be finite.");
            if (!std::isfinite(p.doppler_hz) || !(std::abs(p.doppler_hz) < nyquist))
                throw std::invalid_argument("Path " + std::to_string(i) + ": Doppler " +
                                            std::to_string(p.doppler_hz) + " Hz exceeds the sampling bound.");
            if (!std::isfinite(p.delay_s) || p.delay_s < 0.0 || !(p.delay_s < window))
                throw std::out_of_range("Path " + std::to_string(i) + ": delay " + std::to_string(p.delay_s) +
                                        " s outside the delay window [0, " + std::to_string(window) + ") s.");
        }
    }

    SampledCir sample_cir(const StationarityRegion &region, const SamplingConfig &cfg)
    {
        cfg.validate();
        check_region(region, cfg);

        const std::size_t M = cfg.m_samples;
        SampledCir out{ComplexMatrix(M, cfg.n_delay_bins), cfg, region.index};

        std::vector<double> weights;
        for (const auto &p : region.paths)
        {
            if (p.amplitude == 0.0)
                continue;
            const auto support = rc_support(p.delay_s, cfg);
            weights.resize(support.last - support.first);
            for (std::size_t n = support.first; n < support.last; ++n)
                weights[n - support.first] = raised_cosine(static_cast<double>(n) * cfg.t_c - p.delay_s, cfg.t_c, cfg.rolloff);

            const double nu = p.doppler_hz * cfg.t_s;
            for (std::size_t m = 0; m < M; ++m)
            {
                const ComplexSample phasor = std::polar(p.amplitude, kTwoPi * (p.phase_cycles - nu * static_cast<double>(m)));
                auto row = out.data.row(m);
                for (std::size_t n = support.first; n < support.last; ++n)
                    row[n] += phasor * weights[n - support.first];
            }
        }
        return out;
    }
}
