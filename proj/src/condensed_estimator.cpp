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
#include "vlink/condensed_estimator.hpp"

#include "vlink/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

namespace vlink
{
    namespace
    {
        struct PlanDeleter
        {
            void operator()(fftw_plan_s *p) const noexcept { fftw_destroy_plan(p); }
        };
        using FftwPlan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

        struct PathTaps
        {
            BinRange support;
            std::vector<double> weights;
        };

        PathTaps path_taps(const PropagationPath &p, const SamplingConfig &cfg)
        {
            PathTaps t{rc_support(p.delay_s, cfg), {}};
            t.weights.resize(t.support.last - t.support.first);
            for (std::size_t n = t.support.first; n < t.support.last; ++n)
                t.weights[n - t.support.first] =
                    raised_cosine(static_cast<double>(n) * cfg.t_c - p.delay_s, cfg.t_c, cfg.rolloff);
            return t;
        }

        std::vector<double> retained_frequencies(const Dsd &dsd, double epsilon_db)
        {
            if (dsd.powers.empty())
                throw std::domain_error("Doppler bandwidth of an empty DSD is undefined.");
            const double peak = *std::max_element(dsd.powers.begin(), dsd.powers.end());
            if (!(peak > 0.0))
                throw std::domain_error("Doppler bandwidth of an all-zero DSD is undefined.");
            const double floor = peak / std::pow(10.0, epsilon_db / 10.0);
            std::vector<double> f;
            for (std::size_t i = 0; i < dsd.powers.size(); ++i)
                if (dsd.powers[i] > floor || dsd.powers[i] == peak)
                    f.push_back(dsd.frequency(i));
            return f;
        }

        double db10(double linear) { return 10.0 * std::log10(linear); }
    }

    void EstimatorConfig::validate() const
    {
        if (!(epsilon_db > 0.0) || !(power_threshold_db > 0.0))
            throw std::invalid_argument("EstimatorConfig: thresholds must be positive.");
        if (!std::isfinite(p_tx_dbm))
            throw std::invalid_argument("EstimatorConfig: transmit power must be finite.");
    }

    Pdp pdp_brute(const SampledCir &cir)
    {
        const auto &h = cir.data;
        Pdp pdp{std::vector<double>(h.cols(), 0.0), cir.config.t_c};
        for (std::size_t m = 0; m < h.rows(); ++m)
        {
            const auto row = h.row(m);
            for (std::size_t n = 0; n < row.size(); ++n)
                pdp.powers[n] += std::norm(row[n]);
        }
        if (h.rows() > 0)
            for (double &p : pdp.powers)
                p /= static_cast<double>(h.rows());
        return pdp;
    }

    Pdp pdp_fast(const StationarityRegion &region, const SamplingConfig &cfg)
    {
        cfg.validate();
        check_region(region, cfg);

        const std::size_t L = region.paths.size();
        const double M = static_cast<double>(cfg.m_samples);
        Pdp pdp{std::vector<double>(cfg.n_delay_bins, 0.0), cfg.t_c};

        std::vector<PathTaps> taps;
        taps.reserve(L);
        for (const auto &p : region.paths)
            taps.push_back(path_taps(p, cfg));

        for (std::size_t l = 0; l < L; ++l)
        {
            const double a2 = region.paths[l].amplitude * region.paths[l].amplitude;
            for (std::size_t n = taps[l].support.first; n < taps[l].support.last; ++n)
            {
                const double w = taps[l].weights[n - taps[l].support.first];
                pdp.powers[n] += a2 * w * w;
            }
        }

        // Per-path phasors: pair terms become products instead of trigonometric calls.
        struct Phasors
        {
            ComplexSample start;  // exp(j 2 pi phi)
            ComplexSample centre; // exp(j (2 pi phi - pi f t_s (M - 1)))
            ComplexSample full;   // exp(j pi f t_s M)
        };
        std::vector<Phasors> ph(L);
        for (std::size_t l = 0; l < L; ++l)
        {
            const auto &p = region.paths[l];
            const double x = kPi * p.doppler_hz * cfg.t_s;
            ph[l] = {std::polar(1.0, kTwoPi * p.phase_cycles), std::polar(1.0, kTwoPi * p.phase_cycles - x * (M - 1.0)),
                     std::polar(1.0, x * M)};
        }

        for (std::size_t l = 0; l < L; ++l)
        {
            const auto &pl = region.paths[l];
            const auto &tl = taps[l];
            if (pl.amplitude == 0.0)
                continue;
            for (std::size_t k = l + 1; k < L; ++k)
            {
                const auto &pk = region.paths[k];
                const auto &tk = taps[k];
                const std::size_t first = std::max(tl.support.first, tk.support.first);
                const std::size_t last = std::min(tl.support.last, tk.support.last);
                if (first >= last || pk.amplitude == 0.0)
                    continue;

                // Branches depend on the Doppler difference times the region duration only, not on M.
                const double theta = kTwoPi * (pk.doppler_hz - pl.doppler_hz) * cfg.t_s;
                double factor;
                if (theta == 0.0)
                    factor = 2.0 * (ph[l].start * std::conj(ph[k].start)).real();
                else if (std::abs(0.5 * theta * M) < 1e-3)
                {
                    const double dphi = kTwoPi * (pl.phase_cycles - pk.phase_cycles);
                    const double psi = 0.5 * theta * (1.0 - M) - dphi;
                    factor = 2.0 / M * std::sin(0.5 * theta * M) / std::sin(0.5 * theta) * std::cos(psi);
                }
                else
                {
                    const double num = (ph[k].full * std::conj(ph[l].full)).imag();
                    const double cos_psi = (ph[k].centre * std::conj(ph[l].centre)).real();
                    factor = 2.0 / M * num / std::sin(0.5 * theta) * cos_psi;
                }
                const double c = pl.amplitude * pk.amplitude * factor;
                const double *wl = tl.weights.data() + (first - tl.support.first);
                const double *wk = tk.weights.data() + (first - tk.support.first);
                for (std::size_t n = first; n < last; ++n)
                    pdp.powers[n] += c * *wl++ * *wk++;
            }
        }

        double peak = 0.0;
        for (double p : pdp.powers)
            peak = std::max(peak, p);
        for (std::size_t n = 0; n < pdp.powers.size(); ++n)
        {
            double &p = pdp.powers[n];
            if (p >= 0.0)
                continue;
            if (p < -1e-12 * std::max(peak, 1.0))
                throw ConsistencyError("pdp_fast: negative power " + std::to_string(p) + " in delay bin " +
                                       std::to_string(n));
            p = 0.0;
        }
        return pdp;
    }

    DelayMoments rms_delay_spread(const Pdp &pdp)
    {
        double s0 = 0.0, s1 = 0.0;
        for (std::size_t n = 0; n < pdp.powers.size(); ++n)
        {
            s0 += pdp.powers[n];
            s1 += pdp.powers[n] * static_cast<double>(n);
        }
        if (!(s0 > 0.0))
            throw std::domain_error("rms_delay_spread: the PDP has no power.");
        const double mean = s1 / s0;
        double s2 = 0.0;
        for (std::size_t n = 0; n < pdp.powers.size(); ++n)
        {
            const double d = static_cast<double>(n) - mean;
            s2 += pdp.powers[n] * d * d;
        }
        return {mean * pdp.t_c, std::sqrt(s2 / s0) * pdp.t_c};
    }

    ComplexMatrix dvir(const StationarityRegion &region, const SamplingConfig &cfg)
    {
        const auto M = static_cast<std::int64_t>(cfg.m_samples);
        return dvir(region, cfg, -(M / 2), cfg.m_samples);
    }

    ComplexMatrix dvir(const StationarityRegion &region, const SamplingConfig &cfg, std::int64_t first_bin,
                       std::size_t n_bins)
    {
        cfg.validate();
        check_region(region, cfg);

        ComplexMatrix s(n_bins, cfg.n_delay_bins);
        for (const auto &p : region.paths)
        {
            if (p.amplitude == 0.0)
                continue;
            const auto taps = path_taps(p, cfg);
            const ComplexSample eta = std::polar(p.amplitude, kTwoPi * p.phase_cycles);

            // sinc(x - p) = (-1)^p sin(pi x) / (pi (x - p)) with x = f * T_stat.
            const double x = p.doppler_hz * cfg.t_stat;
            const double sx = std::sin(kPi * x);
            for (std::size_t i = 0; i < n_bins; ++i)
            {
                const std::int64_t bin = first_bin + static_cast<std::int64_t>(i);
                const double d = x - static_cast<double>(bin);
                double kernel;
                if (d == 0.0)
                    kernel = 1.0;
                else
                    kernel = ((bin % 2 == 0) ? sx : -sx) / (kPi * d);
                if (kernel == 0.0)
                    continue;
                const ComplexSample c = eta * kernel;
                auto row = s.row(i);
                for (std::size_t n = taps.support.first; n < taps.support.last; ++n)
                    row[n] += c * taps.weights[n - taps.support.first];
            }
        }
        return s;
    }

    Dsd dsd_estimate(const ComplexMatrix &s, double bin_hz)
    {
        return dsd_estimate(s, bin_hz, -static_cast<std::int64_t>(s.rows() / 2));
    }

    Dsd dsd_estimate(const ComplexMatrix &s, double bin_hz, std::int64_t first_bin)
    {
        Dsd dsd{std::vector<double>(s.rows(), 0.0), bin_hz, first_bin};
        if (s.cols() == 0)
            return dsd;
        const double inv_n = 1.0 / static_cast<double>(s.cols());
        for (std::size_t p = 0; p < s.rows(); ++p)
        {
            double acc = 0.0;
            for (const auto &v : s.row(p))
                acc += std::norm(v);
            dsd.powers[p] = acc * inv_n;
        }
        return dsd;
    }

    Dsd dsd_from_cir(const SampledCir &cir)
    {
        const std::size_t M = cir.data.rows();
        const std::size_t N = cir.data.cols();
        if (M == 0 || N == 0)
            throw std::invalid_argument("dsd_from_cir: empty CIR.");

        std::vector<ComplexSample> buf(cir.data.values().begin(), cir.data.values().end());
        auto *io = reinterpret_cast<fftw_complex *>(buf.data());
        const int n = static_cast<int>(M);
        FftwPlan plan(fftw_plan_many_dft(1, &n, static_cast<int>(N), io, nullptr, static_cast<int>(N), 1, io,
                                         nullptr, static_cast<int>(N), 1, FFTW_BACKWARD, FFTW_ESTIMATE));
        if (!plan)
            throw std::runtime_error("dsd_from_cir: FFTW planning failed.");
        fftw_execute(plan.get());

        const auto first = -static_cast<std::int64_t>(M / 2);
        Dsd dsd{std::vector<double>(M, 0.0), 1.0 / (static_cast<double>(M) * cir.config.t_s), first};
        const double scale = 1.0 / (static_cast<double>(M) * static_cast<double>(M) * static_cast<double>(N));
        for (std::size_t i = 0; i < M; ++i)
        {
            const auto p = first + static_cast<std::int64_t>(i);
            const auto row = static_cast<std::size_t>((p + static_cast<std::int64_t>(M)) % static_cast<std::int64_t>(M));
            double acc = 0.0;
            for (std::size_t c = 0; c < N; ++c)
                acc += std::norm(buf[row * N + c]);
            dsd.powers[i] = acc * scale;
        }
        return dsd;
    }

    DopplerMoments rms_doppler_spread(const Dsd &dsd)
    {
        double s0 = 0.0, s1 = 0.0;
        for (std::size_t i = 0; i < dsd.powers.size(); ++i)
        {
            s0 += dsd.powers[i];
            s1 += dsd.powers[i] * dsd.frequency(i);
        }
        if (!(s0 > 0.0))
            throw std::domain_error("rms_doppler_spread: the DSD has no power.");
        const double mean = s1 / s0;
        double s2 = 0.0;
        for (std::size_t i = 0; i < dsd.powers.size(); ++i)
        {
            const double d = dsd.frequency(i) - mean;
            s2 += dsd.powers[i] * d * d;
        }
        return {mean, std::sqrt(s2 / s0)};
    }

    double doppler_bandwidth(const Dsd &dsd, double epsilon_db)
    {
        const auto f = retained_frequencies(dsd, epsilon_db);
        const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
        return *hi - *lo;
    }

    double one_sided_doppler_extent(const Dsd &dsd, double epsilon_db)
    {
        const auto f = retained_frequencies(dsd, epsilon_db);
        const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
        return std::max(std::abs(*lo), std::abs(*hi));
    }

    double estimate_k_factor(const StationarityRegion &region, double bandwidth_hz)
    {
        if (!(bandwidth_hz > 0.0))
            throw std::invalid_argument("estimate_k_factor: bandwidth must be positive.");

        const PropagationPath *los = nullptr;
        for (const auto &p : region.paths)
            if (p.kind == PathKind::Los)
            {
                if (los)
                    throw std::invalid_argument("estimate_k_factor: more than one LOS path in the region.");
                los = &p;
            }
        if (!los || los->amplitude == 0.0)
            return -std::numeric_limits<double>::infinity();

        auto bin_of = [&](double tau)
        { return static_cast<std::int64_t>(std::floor(tau * bandwidth_hz + 1e-9)); };
        const auto los_bin = bin_of(los->delay_s);

        ComplexSample scattered{0.0, 0.0};
        double magnitude_sum = 0.0;
        for (const auto &p : region.paths)
            if (&p != los && bin_of(p.delay_s) == los_bin)
            {
                scattered += std::polar(p.amplitude, kTwoPi * p.phase_cycles);
                magnitude_sum += p.amplitude;
            }
        // A sum at rounding level of its terms counts as a full cancellation.
        const double resolution = 8.0 * std::numeric_limits<double>::epsilon() * magnitude_sum;
        const double denom = std::norm(scattered);
        if (denom <= resolution * resolution)
            return kLosOnlyKDb;
        return std::min(db10(los->amplitude * los->amplitude / denom), kLosOnlyKDb);
    }

    double received_power(const Pdp &pdp, const EstimatorConfig &cfg)
    {
        if (pdp.powers.empty())
            throw std::domain_error("received_power: empty PDP.");
        const double peak = *std::max_element(pdp.powers.begin(), pdp.powers.end());
        if (!(peak > 0.0))
            throw std::domain_error("received_power: the PDP has no power.");
        const double floor = peak / std::pow(10.0, cfg.power_threshold_db / 10.0);
        double gain = 0.0;
        for (double p : pdp.powers)
            if (p >= floor)
                gain += p;
        return cfg.p_tx_dbm + db10(gain);
    }

    CondensedParams condense(const StationarityRegion &region, const SamplingConfig &sampling,
                             const EstimatorConfig &cfg)
    {
        cfg.validate();
        if (region.paths.empty())
            throw std::domain_error("condense: the region has no propagation paths.");

        CondensedParams out;
        const Pdp pdp = pdp_fast(region, sampling);
        out.rx_power_dbm = received_power(pdp, cfg);
        out.sigma_tau_s = rms_delay_spread(pdp).sigma_tau_s;

        const auto M = static_cast<std::int64_t>(sampling.m_samples);
        std::int64_t first = -(M / 2);
        std::int64_t last = first + M - 1;
        if (cfg.doppler_guard_bins > 0)
        {
            double f_lo = region.paths.front().doppler_hz, f_hi = f_lo;
            for (const auto &p : region.paths)
            {
                f_lo = std::min(f_lo, p.doppler_hz);
                f_hi = std::max(f_hi, p.doppler_hz);
            }
            const auto guard = static_cast<std::int64_t>(cfg.doppler_guard_bins);
            first = std::max(first, static_cast<std::int64_t>(std::floor(f_lo * sampling.t_stat)) - guard);
            last = std::min(last, static_cast<std::int64_t>(std::ceil(f_hi * sampling.t_stat)) + guard);
        }
        const auto n_bins = static_cast<std::size_t>(last - first + 1);
        const Dsd dsd = dsd_estimate(dvir(region, sampling, first, n_bins), 1.0 / sampling.t_stat, first);
        out.sigma_nu_hz = rms_doppler_spread(dsd).sigma_nu_hz;
        out.f_dmax_hz = one_sided_doppler_extent(dsd, cfg.epsilon_db);

        out.k_db = estimate_k_factor(region, sampling.bandwidth_hz);
        out.f_los_hz = 0.0;
        for (const auto &p : region.paths)
            if (p.kind == PathKind::Los && p.amplitude > 0.0)
                out.f_los_hz = p.doppler_hz;
        return out;
    }
}
