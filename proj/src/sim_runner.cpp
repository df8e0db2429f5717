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
#include "vlink/sim_runner.hpp"

#include "vlink/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <stdexcept>

namespace vlink
{
    namespace
    {
        struct Cell
        {
            CondensedParams psi;
            double fer = 1.0;
            double wall_s = 0.0;
            bool no_coverage = false;
        };

        // Results of one realization: regions x links.
        using RealizationResult = std::vector<std::vector<Cell>>;

        bool has_power(const StationarityRegion &region)
        {
            for (const auto &p : region.paths)
                if (p.amplitude > 0.0)
                    return true;
            return false;
        }

        RealizationResult run_realization(const Scenario &scenario, const FerTable &table, const RunOptions &opt,
                                          const std::vector<RegionSpan> &regions, std::uint64_t realization)
        {
            using clock = std::chrono::steady_clock;
            EstimatorConfig est = opt.estimator;
            est.p_tx_dbm = scenario.p_tx_dbm;

            RealizationResult out(regions.size(), std::vector<Cell>(scenario.links.size()));
            for (std::size_t r = 0; r < regions.size(); ++r)
                for (std::size_t l = 0; l < scenario.links.size(); ++l)
                {
                    Cell &c = out[r][l];
                    const auto t0 = clock::now();
                    auto region = compute_paths(scenario, l, regions[r].index, realization);
                    if (!has_power(region))
                        c.no_coverage = true;
                    else
                    {
                        const auto sampling = fit_delay_window(region, scenario.radio);
                        try
                        {
                            c.psi = condense(region, sampling, est);
                            c.fer = query(table, c.psi);
                        }
                        catch (const std::domain_error &)
                        {
                            c.no_coverage = true;
                        }
                    }
                    if (c.no_coverage)
                    {
                        c.psi = CondensedParams{};
                        c.fer = 1.0;
                    }
                    c.wall_s = std::chrono::duration<double>(clock::now() - t0).count();
                }
            return out;
        }

        std::string fmt(double v)
        {
            if (std::isinf(v))
                return v < 0 ? "-inf" : "inf";
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.9g", v);
            return buf;
        }

        void write_text(const std::filesystem::path &path, const std::string &text)
        {
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            if (!out)
                throw std::runtime_error("Cannot write '" + path.string() + "'.");
            out << text;
        }
    }

    SamplingConfig fit_delay_window(StationarityRegion &region, const SamplingConfig &radio)
    {
        SamplingConfig cfg = radio;
        if (region.paths.empty())
        {
            cfg.n_delay_bins = std::max<std::size_t>(cfg.n_delay_bins, 1);
            return cfg;
        }
        double t_min = std::numeric_limits<double>::infinity(), t_max = -t_min;
        for (const auto &p : region.paths)
        {
            t_min = std::min(t_min, p.delay_s);
            t_max = std::max(t_max, p.delay_s);
        }
        const auto w = static_cast<std::int64_t>(cfg.filter_half_width);
        const std::int64_t shift = static_cast<std::int64_t>(std::floor(t_min / cfg.t_c)) - w;
        const double offset = static_cast<double>(shift) * cfg.t_c;
        for (auto &p : region.paths)
            p.delay_s -= offset;
        const auto needed = static_cast<std::size_t>(std::ceil((t_max - offset) / cfg.t_c)) + cfg.filter_half_width + 1;
        cfg.n_delay_bins = std::max(cfg.n_delay_bins, needed);
        return cfg;
    }

    FerTrace run_simulation(const Scenario &scenario, const FerTable &table, const RunOptions &options)
    {
        if (options.realizations == 0)
            throw std::invalid_argument("run_simulation: at least one realization is required.");
        scenario.validate();
        table.validate();

        Scenario sc = scenario;
        sc.seed = options.seed;
        const auto regions = segment_regions(sc);

        std::vector<RealizationResult> results(options.realizations);
        const std::size_t threads = std::max<std::size_t>(options.threads, 1);
        for (std::size_t begin = 0; begin < options.realizations; begin += threads)
        {
            const std::size_t end = std::min(options.realizations, begin + threads);
            if (threads == 1)
            {
                results[begin] = run_realization(sc, table, options, regions, options.first_realization + begin);
                continue;
            }
            std::vector<std::future<RealizationResult>> jobs;
            for (std::size_t q = begin; q < end; ++q)
                jobs.push_back(std::async(std::launch::async, run_realization, std::cref(sc), std::cref(table),
                                          std::cref(options), std::cref(regions), options.first_realization + q));
            for (std::size_t q = begin; q < end; ++q)
                results[q] = jobs[q - begin].get();
        }

        FerTrace trace;
        trace.t_stat_s = sc.t_stat_s;
        trace.region_wall_times_s.assign(regions.size(), 0.0);
        const double Q = static_cast<double>(options.realizations);
        for (std::size_t r = 0; r < regions.size(); ++r)
        {
            for (std::size_t q = 0; q < results.size(); ++q)
            {
                double sum = 0.0;
                for (const auto &c : results[q][r])
                    sum += c.wall_s;
                trace.region_wall_times_s[r] = std::max(trace.region_wall_times_s[r], sum);
            }
            for (std::size_t l = 0; l < sc.links.size(); ++l)
            {
                TraceRow row;
                row.region = regions[r].index;
                row.t_start_s = regions[r].t_start_s;
                row.link = sc.links[l].id;
                double sum = 0.0, mx = 0.0, wall = 0.0;
                for (const auto &res : results)
                {
                    sum += res[r][l].fer;
                    mx = std::max(mx, res[r][l].fer);
                    wall = std::max(wall, res[r][l].wall_s);
                }
                row.fer_mean = sum / Q;
                row.fer_max = mx;
                row.psi = results.front()[r][l].psi;
                row.no_coverage = results.front()[r][l].no_coverage;
                row.wall_s = options.record_wall_time ? wall : 0.0;
                trace.rows.push_back(row);
            }
        }
        for (std::size_t q = 0; q < results.size(); ++q)
            for (std::size_t r = 0; r < regions.size(); ++r)
                for (std::size_t l = 0; l < sc.links.size(); ++l)
                {
                    const auto &c = results[q][r][l];
                    trace.params.push_back({options.first_realization + q, regions[r].index, sc.links[l].id, c.psi,
                                            c.fer, c.no_coverage});
                }
        return trace;
    }

    FerTrace run_simulation(const RunConfig &cfg)
    {
        const auto scenario = load_scenario(cfg.scenario_path);
        const auto table = load_table(cfg.table_path);
        RunOptions opt;
        opt.realizations = cfg.realizations;
        opt.seed = cfg.seed;
        opt.threads = cfg.threads;
        opt.record_wall_time = cfg.realtime_check;
        auto trace = run_simulation(scenario, table, opt);
        if (!cfg.out_path.empty())
        {
            write_text(cfg.out_path, trace_csv(trace));
            if (cfg.emit_params_trace)
            {
                auto p = cfg.out_path;
                p += ".params.csv";
                write_text(p, params_csv(trace));
            }
        }
        return trace;
    }

    RealtimeReport realtime_report(const FerTrace &trace)
    {
        RealtimeReport rep;
        rep.t_stat_s = trace.t_stat_s;
        rep.per_region_wall_times = trace.region_wall_times_s;
        for (std::size_t r = 0; r < rep.per_region_wall_times.size(); ++r)
        {
            const double w = rep.per_region_wall_times[r];
            rep.max_wall_time_s = std::max(rep.max_wall_time_s, w);
            if (w > rep.t_stat_s)
                rep.over_budget_regions.push_back(static_cast<int>(r));
        }
        rep.budget_met = rep.max_wall_time_s <= rep.t_stat_s;
        return rep;
    }

    double snr(double p_dbm, double p_noise_dbm)
    {
        if (!std::isfinite(p_dbm) || !std::isfinite(p_noise_dbm))
            throw std::invalid_argument("snr: powers must be finite.");
        return p_dbm - p_noise_dbm;
    }

    std::string trace_csv(const FerTrace &trace)
    {
        std::string out =
            "region,t_start_s,link,fer_mean,fer_max,rx_power_dbm,sigma_tau_ns,f_dmax_hz,k_db,f_los_hz,sigma_nu_hz,wall_ms\n";
        for (const auto &r : trace.rows)
            out += std::to_string(r.region) + ',' + fmt(r.t_start_s) + ',' + r.link + ',' + fmt(r.fer_mean) + ',' +
                   fmt(r.fer_max) + ',' + fmt(r.psi.rx_power_dbm) + ',' + fmt(r.psi.sigma_tau_s * 1e9) + ',' +
                   fmt(r.psi.f_dmax_hz) + ',' + fmt(r.psi.k_db) + ',' + fmt(r.psi.f_los_hz) + ',' +
                   fmt(r.psi.sigma_nu_hz) + ',' + fmt(r.wall_s * 1e3) + '\n';
        return out;
    }

    std::string params_csv(const FerTrace &trace)
    {
        std::string out = "realization,region,link,fer,no_coverage,rx_power_dbm,sigma_tau_ns,f_dmax_hz,k_db,f_los_hz,sigma_nu_hz\n";
        for (const auto &p : trace.params)
            out += std::to_string(p.realization) + ',' + std::to_string(p.region) + ',' + p.link + ',' + fmt(p.fer) +
                   ',' + (p.no_coverage ? "1" : "0") + ',' + fmt(p.psi.rx_power_dbm) + ',' +
                   fmt(p.psi.sigma_tau_s * 1e9) + ',' + fmt(p.psi.f_dmax_hz) + ',' + fmt(p.psi.k_db) + ',' +
                   fmt(p.psi.f_los_hz) + ',' + fmt(p.psi.sigma_nu_hz) + '\n';
        return out;
    }
}
