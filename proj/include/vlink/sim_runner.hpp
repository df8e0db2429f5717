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

#include "vlink/condensed_estimator.hpp"
#include "vlink/fer_table.hpp"
#include "vlink/gscm.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace vlink
{
    struct RunConfig
    {
        std::filesystem::path scenario_path;
        std::filesystem::path table_path;
        std::filesystem::path out_path;
        std::size_t realizations = 1; // Q
        std::uint64_t seed = 0;
        bool emit_params_trace = false; // also write <out>.params.csv with one row per realization
        bool realtime_check = false;    // record wall times in the trace
        std::size_t threads = 1;
    };

    struct RunOptions
    {
        std::size_t realizations = 1;
        std::uint64_t seed = 0;
        std::uint64_t first_realization = 0;
        std::size_t threads = 1;
        bool record_wall_time = false;
        EstimatorConfig estimator; // p_tx_dbm is taken from the scenario
    };

    struct TraceRow
    {
        int region = 0;
        double t_start_s = 0.0;
        std::string link;
        double fer_mean = 0.0;
        double fer_max = 0.0;
        CondensedParams psi; // first realization of the run
        double wall_s = 0.0; // as recorded in the trace; 0 unless wall times are recorded
        bool no_coverage = false;
    };

    struct ParamsRow
    {
        std::uint64_t realization = 0;
        int region = 0;
        std::string link;
        CondensedParams psi;
        double fer = 0.0;
        bool no_coverage = false;
    };

    struct FerTrace
    {
        double t_stat_s = 0.0;
        std::vector<TraceRow> rows;              // region-major, then link order
        std::vector<ParamsRow> params;           // per realization, region, link
        std::vector<double> region_wall_times_s; // max over realizations of the per-region sum over links
    };

    struct RealtimeReport
    {
        double t_stat_s = 0.0;
        std::vector<double> per_region_wall_times;
        double max_wall_time_s = 0.0;
        bool budget_met = true;
        std::vector<int> over_budget_regions;
    };

    // Shifts all delays by a whole number of bins so the earliest path sits filter_half_width bins
    // into the window, and sizes the delay window to cover the latest path plus its filter support.
    SamplingConfig fit_delay_window(StationarityRegion &region, const SamplingConfig &radio);

    FerTrace run_simulation(const Scenario &scenario, const FerTable &table, const RunOptions &options);

    // Loads inputs, runs, writes the trace (and optional params trace).
    FerTrace run_simulation(const RunConfig &cfg);

    RealtimeReport realtime_report(const FerTrace &trace);

    double snr(double p_dbm, double p_noise_dbm);

    std::string trace_csv(const FerTrace &trace);
    std::string params_csv(const FerTrace &trace);
}
