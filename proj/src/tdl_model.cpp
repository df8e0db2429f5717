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
#include "vlink/tdl_model.hpp"

#include "vlink/random.hpp"

#include <cmath>
#include <stdexcept>

namespace vlink
{
    namespace
    {
        enum class Draw : std::uint64_t
        {
            Angle = 1,
            Phase = 2
        };

        double draw(const TdlConfig &cfg, int region, std::size_t tap, std::size_t path, Draw what)
        {
            KeyedStream s(mix_key({cfg.seed, static_cast<std::uint64_t>(region), tap, path,
                                   static_cast<std::uint64_t>(what)}));
            return s.uniform();
        }

        double arrival_angle(SpectrumSide side, double u)
        {
            switch (side)
            {
            case SpectrumSide::Double:
                return -kPi + kTwoPi * u;
            case SpectrumSide::Right:
                return -0.5 * kPi + kPi * u;
            case SpectrumSide::Left:
                return 0.5 * kPi + kPi * u;
            }
            return 0.0;
        }
    }

    void ExpPdpConfig::validate() const
    {
        if (!(tau0_s > 0.0) || !std::isfinite(tau0_s))
            throw std::invalid_argument("ExpPdpConfig: tau0 must be positive and finite.");
        if (!(dt_s > 0.0) || !std::isfinite(dt_s))
            throw std::invalid_argument("ExpPdpConfig: tap spacing must be positive and finite.");
        if (n_taps == 0)
            throw std::invalid_argument("ExpPdpConfig: at least one tap is required.");
    }

    void TdlConfig::validate() const
    {
        pdp.validate();
        if (!(k_linear >= 0.0) || std::isnan(k_linear))
            throw std::invalid_argument("TdlConfig: K must be non-negative.");
        if (!(f_dmax_hz >= 0.0) || !std::isfinite(f_dmax_hz))
            throw std::invalid_argument("TdlConfig: f_Dmax must be finite and non-negative.");
        if (!std::isfinite(f_los_hz) || std::abs(f_los_hz) > f_dmax_hz)
            throw std::invalid_argument("TdlConfig: |f_LOS| must not exceed f_Dmax.");
        if (paths_per_tap == 0)
            throw std::invalid_argument("TdlConfig: paths_per_tap must be at least 1.");
        if (k_linear > 0.0 && paths_per_tap < 2)
            throw std::invalid_argument("TdlConfig: paths_per_tap must be at least 2 when K > 0.");
    }

    std::vector<double> exp_pdp(const ExpPdpConfig &cfg)
    {
        cfg.validate();
        std::vector<double> p(cfg.n_taps);
        // Factor out e^{-dt/tau0} so the largest term is exactly 1.
        for (std::size_t n = 0; n < cfg.n_taps; ++n)
            p[n] = std::exp(-static_cast<double>(n) * cfg.dt_s / cfg.tau0_s);
        double sum = 0.0;
        for (double v : p)
            sum += v;
        for (double &v : p)
            v /= sum;
        return p;
    }

    StationarityRegion draw_tdl_paths(const TdlConfig &cfg, int region_index)
    {
        cfg.validate();
        const auto powers = exp_pdp(cfg.pdp);
        const std::size_t L = cfg.paths_per_tap;
        const double K = cfg.k_linear;

        StationarityRegion region;
        region.index = region_index;
        region.paths.reserve(cfg.pdp.n_taps * L);

        auto scattered = [&](std::size_t tap, std::size_t path, double amplitude)
        {
            const double beta = arrival_angle(cfg.spectrum_side, draw(cfg, region_index, tap, path, Draw::Angle));
            PropagationPath p;
            p.amplitude = amplitude;
            p.phase_cycles = draw(cfg, region_index, tap, path, Draw::Phase);
            p.delay_s = tdl_tap_delay(cfg.pdp, tap);
            p.doppler_hz = cfg.f_dmax_hz * std::cos(beta);
            p.kind = PathKind::Diffuse;
            region.paths.push_back(p);
        };

        for (std::size_t w = 0; w < cfg.pdp.n_taps; ++w)
        {
            if (w == 0 && K > 0.0)
            {
                PropagationPath los;
                los.amplitude = std::isinf(K) ? std::sqrt(powers[0]) : std::sqrt(K / (K + 1.0) * powers[0]);
                los.phase_cycles = draw(cfg, region_index, 0, 0, Draw::Phase);
                los.delay_s = 0.0;
                los.doppler_hz = cfg.f_los_hz;
                los.kind = PathKind::Los;
                region.paths.push_back(los);

                const double a = std::isinf(K) ? 0.0 : std::sqrt(powers[0] / (static_cast<double>(L - 1) * (K + 1.0)));
                for (std::size_t i = 1; i < L; ++i)
                    scattered(0, i, a);
            }
            else
            {
                const double a = std::sqrt(powers[w] / static_cast<double>(L));
                for (std::size_t i = 0; i < L; ++i)
                    scattered(w, i, a);
            }
        }
        return region;
    }

    SampledCir generate_tdl_cir(const TdlConfig &cfg, const SamplingConfig &sampling, int region_index)
    {
        sampling.check_doppler_bound(cfg.f_dmax_hz);
        auto region = draw_tdl_paths(cfg, region_index);
        region.duration_s = sampling.t_stat;
        return sample_cir(region, sampling);
    }
}
