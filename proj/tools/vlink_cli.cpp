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
#include "vlink/doppler_analysis.hpp"
#include "vlink/errors.hpp"
#include "vlink/fer_table.hpp"
#include "vlink/random.hpp"
#include "vlink/sim_runner.hpp"
#include "vlink/tdl_model.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

using namespace vlink;

namespace
{
    constexpr int kExitOk = 0;
    constexpr int kExitValidation = 1;
    constexpr int kExitConfig = 2;

    struct Range
    {
        double from = 0.0;
        double to = 0.0;
    };

    Range parse_range(const std::string &text, const std::string &option)
    {
        const auto colon = text.find(':');
        if (colon == std::string::npos)
            throw ConfigError(option + ": expected FROM:TO, got '" + text + "'.");
        try
        {
            Range r{std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
            if (!(r.to >= r.from))
                throw ConfigError(option + ": the range end lies below its start.");
            return r;
        }
        catch (const std::logic_error &)
        {
            throw ConfigError(option + ": cannot parse '" + text + "'.");
        }
    }

    std::vector<double> parse_list(const std::string &text, const std::string &option)
    {
        std::vector<double> out;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ','))
        {
            if (item == "-inf")
            {
                out.push_back(-std::numeric_limits<double>::infinity());
                continue;
            }
            try
            {
                out.push_back(std::stod(item));
            }
            catch (const std::logic_error &)
            {
                throw ConfigError(option + ": cannot parse '" + item + "'.");
            }
        }
        if (out.empty())
            throw ConfigError(option + ": empty list.");
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

    void write_output(const std::string &path, const std::string &text)
    {
        if (path.empty() || path == "-")
        {
            std::cout << text;
            return;
        }
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw ConfigError("Cannot write '" + path + "'.");
        out << text;
    }

    // ---------------------------------------------------------------------------------------------

    struct RunArgs
    {
        RunConfig cfg;
        std::string scenario, table, out;
    };

    int cmd_run(RunArgs &a)
    {
        a.cfg.scenario_path = a.scenario;
        a.cfg.table_path = a.table;
        a.cfg.out_path = a.out;
        const auto trace = run_simulation(a.cfg);
        std::cout << "regions: " << trace.region_wall_times_s.size() << ", rows: " << trace.rows.size() << '\n';
        if (!a.cfg.realtime_check)
            return kExitOk;
        const auto rep = realtime_report(trace);
        std::cout << "max region wall time " << fmt(rep.max_wall_time_s * 1e3) << " ms, budget "
                  << fmt(rep.t_stat_s * 1e3) << " ms: " << (rep.budget_met ? "met" : "exceeded") << '\n';
        for (int r : rep.over_budget_regions)
            std::cout << "  over budget: region " << r << " (" << fmt(rep.per_region_wall_times[static_cast<std::size_t>(r)] * 1e3)
                      << " ms)\n";
        return rep.budget_met ? kExitOk : kExitValidation;
    }

    struct GenTableArgs
    {
        std::string grid, oracle = "synthetic", out, checkpoint;
        double kappa = 2e-5, iota = 0.01;
        std::uint64_t seed = 0;
        bool no_collapse = false;
    };

    int cmd_gen_table(const GenTableArgs &a)
    {
        if (a.oracle != "synthetic")
            throw ConfigError("--oracle: unknown oracle '" + a.oracle + "' (available: synthetic).");
        const FerGrid grid = a.grid.empty() ? FerGrid::reference() : load_grid(a.grid);
        FrameBudget budget;
        try
        {
            budget = FrameBudget::make(a.kappa, a.iota);
        }
        catch (const std::invalid_argument &e)
        {
            throw ConfigError(std::string("--kappa/--iota: ") + e.what());
        }
        BuildOptions opt;
        opt.nlos_collapse = !a.no_collapse;
        if (!a.checkpoint.empty())
            opt.checkpoint = a.checkpoint;
        const FerOracle oracle = [](const CondensedParams &p, std::uint64_t f, std::uint64_t s)
        { return synthetic_fer(p, f, s); };
        const auto table = build_table(grid, oracle, a.oracle, budget, a.seed, opt);
        save_table(table, a.out);
        std::cout << "points: " << enumerate_grid(grid, opt.nlos_collapse).size() << ", cells: " << grid.cell_count()
                  << ", frames per point: " << budget.frames << '\n';
        return kExitOk;
    }

    struct DopplerArgs
    {
        std::string tau0_range = "34e-9:150e-9", flos = "0,250", k_db = "0,10,15,20", out;
        std::size_t steps = 25, taps = 8, runs = 0, paths_per_tap = 40;
        double dt = 100e-9, fdmax = 500.0, t_stat = 0.5, t_s = 5e-4;
        std::uint64_t seed = 0;
    };

    int cmd_analyze_doppler(const DopplerArgs &a)
    {
        const auto range = parse_range(a.tau0_range, "--tau0-range");
        const auto flos = parse_list(a.flos, "--flos");
        const auto kdb = parse_list(a.k_db, "--k-db");
        if (a.steps < 1 || (a.steps == 1 && range.to != range.from))
            throw ConfigError("--steps: at least two steps are needed for a range.");

        SamplingConfig sampling;
        if (a.runs > 0)
            sampling = SamplingConfig::make(5.9e9, 1.0 / a.dt, a.t_stat, a.t_s, 0.9,
                                            a.taps + 2 * SamplingConfig{}.filter_half_width + 1);
        std::string csv = "tau0_ns,sigma_tau_ns,k_db,f_los_hz,f_dmax_hz,sigma_nu_analytic_hz,sigma_nu_empirical_hz\n";
        for (double k : kdb)
            for (double f : flos)
                for (std::size_t i = 0; i < a.steps; ++i)
                {
                    const double tau0 =
                        a.steps == 1 ? range.from
                                     : range.from + (range.to - range.from) * static_cast<double>(i) /
                                                        static_cast<double>(a.steps - 1);
                    const ExpPdpConfig pdp{tau0, a.dt, a.taps};
                    DopplerEnv env;
                    env.f_dmax_hz = a.fdmax;
                    env.f_los_hz = f;
                    env.k_linear = std::isinf(k) ? 0.0 : std::pow(10.0, k / 10.0);
                    env.tap_powers = exp_pdp(pdp);
                    std::string empirical;
                    if (a.runs > 0)
                    {
                        TdlConfig tdl;
                        tdl.pdp = pdp;
                        tdl.k_linear = env.k_linear;
                        tdl.f_dmax_hz = a.fdmax;
                        tdl.f_los_hz = f;
                        tdl.paths_per_tap = a.paths_per_tap;
                        double sum = 0.0;
                        for (std::size_t r = 0; r < a.runs; ++r)
                        {
                            tdl.seed = mix_key({a.seed, r});
                            const auto region = draw_tdl_paths(tdl, static_cast<int>(r));
                            sum += condense(region, sampling, EstimatorConfig{}).sigma_nu_hz;
                        }
                        empirical = fmt(sum / static_cast<double>(a.runs));
                    }
                    csv += fmt(tau0 * 1e9) + ',' + fmt(closed_form_exp_delay_spread(pdp) * 1e9) + ',' + fmt(k) + ',' +
                           fmt(f) + ',' + fmt(a.fdmax) + ',' + fmt(analytic_rms_doppler(env)) + ',' + empirical + '\n';
                }
        write_output(a.out, csv);
        return kExitOk;
    }

    struct ResolutionArgs
    {
        std::string targets = "20e-9:100e-9", out;
        double step = 10e-9, dynamic_range_db = 41.0, dt = 100e-9;
        std::size_t taps = 8;
    };

    int cmd_analyze_resolution(const ResolutionArgs &a)
    {
        const auto range = parse_range(a.targets, "--targets");
        if (!(a.step > 0.0))
            throw ConfigError("--step: must be positive.");
        std::string csv = "target_ns,tau0_ns,n_taps_used,achieved_ns,abs_error_ns,dynamic_range_db\n";
        const auto n = static_cast<std::size_t>(std::floor((range.to - range.from) / a.step + 1e-9));
        for (std::size_t i = 0; i <= n; ++i)
        {
            const double target = range.from + static_cast<double>(i) * a.step;
            const auto rep = resolution_analysis(target, a.dynamic_range_db, a.dt, a.taps);
            csv += fmt(target * 1e9) + ',' + fmt(rep.tau0_s * 1e9) + ',' + std::to_string(rep.n_taps_used) + ',' +
                   fmt(rep.achieved_sigma_tau_s * 1e9) + ',' + fmt(rep.abs_error_s * 1e9) + ',' +
                   fmt(rep.dynamic_range_db) + '\n';
        }
        write_output(a.out, csv);
        return kExitOk;
    }

    struct ValidateArgs
    {
        std::size_t cases = 100, max_paths = 20, max_m = 256;
        std::uint64_t seed = 0;
        double tolerance = 1e-10;
    };

    int cmd_validate_pdp_fast(const ValidateArgs &a)
    {
        if (a.max_paths < 1 || a.max_m < 1)
            throw ConfigError("--max-paths and --max-m must be positive.");
        double worst = 0.0;
        for (std::size_t c = 0; c < a.cases; ++c)
        {
            KeyedStream rng(mix_key({a.seed, 0x9DF0U, c}));
            const auto M = 1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(a.max_m));
            const auto L = 1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(a.max_paths));
            const double t_s = rng.uniform(1e-4, 1e-3);
            const auto cfg = SamplingConfig::make(5.9e9, 10e6, static_cast<double>(M) * t_s, t_s, 0.9, 32);
            StationarityRegion region;
            for (std::size_t l = 0; l < L; ++l)
                region.paths.push_back({rng.uniform(0.05, 1.0), rng.uniform(), rng.uniform(0.0, 0.999 * cfg.delay_window_s()),
                                        rng.uniform(-0.45, 0.45) / t_s, PathKind::Diffuse});
            const auto fast = pdp_fast(region, cfg);
            const auto brute = pdp_brute(sample_cir(region, cfg));
            double peak = 0.0;
            for (double p : brute.powers)
                peak = std::max(peak, p);
            for (std::size_t n = 0; n < brute.powers.size(); ++n)
            {
                const double floor = std::max(std::abs(brute.powers[n]), 1e-13 * peak);
                worst = std::max(worst, std::abs(fast.powers[n] - brute.powers[n]) / floor);
            }
        }
        const bool ok = worst <= a.tolerance;
        std::cout << "cases: " << a.cases << ", worst relative deviation: " << fmt(worst) << " (tolerance "
                  << fmt(a.tolerance) << "): " << (ok ? "PASS" : "FAIL") << '\n';
        return ok ? kExitOk : kExitValidation;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"vlink: condensed-parameter system-level simulation for vehicular links"};
    app.require_subcommand(1);

    RunArgs run;
    auto *run_cmd = app.add_subcommand("run", "Run the GSCM, condense every region and look up the FER");
    run_cmd->add_option("--scenario", run.scenario, "Scenario file (JSON)")->required();
    run_cmd->add_option("--table", run.table, "FER table (CSV with .meta.json sidecar)")->required();
    run_cmd->add_option("--realizations", run.cfg.realizations, "Number of GSCM realizations")->check(CLI::PositiveNumber);
    run_cmd->add_option("--seed", run.cfg.seed, "Master seed");
    run_cmd->add_option("--out", run.out, "Trace CSV")->required();
    run_cmd->add_flag("--realtime-check", run.cfg.realtime_check, "Record wall times and check the per-region budget");
    run_cmd->add_flag("--params-trace", run.cfg.emit_params_trace, "Also write <out>.params.csv");
    run_cmd->add_option("--threads", run.cfg.threads, "Worker threads")->check(CLI::PositiveNumber);

    GenTableArgs gen;
    auto *gen_cmd = app.add_subcommand("gen-table", "Build an FER lookup table");
    gen_cmd->add_option("--grid", gen.grid, "Grid file (JSON); the reference grid when omitted");
    gen_cmd->add_option("--oracle", gen.oracle, "FER oracle");
    gen_cmd->add_option("--kappa", gen.kappa, "Smallest resolvable FER");
    gen_cmd->add_option("--iota", gen.iota, "Estimator variance factor");
    gen_cmd->add_option("--seed", gen.seed, "Master seed");
    gen_cmd->add_option("--out", gen.out, "Table CSV")->required();
    gen_cmd->add_option("--checkpoint", gen.checkpoint, "Progress file; resumed when present");
    gen_cmd->add_flag("--no-nlos-collapse", gen.no_collapse, "Evaluate every f_LOS fraction for NLOS points");

    auto *analyze = app.add_subcommand("analyze", "Analytic Doppler and resolution studies");
    analyze->require_subcommand(1);
    DopplerArgs dop;
    auto *dop_cmd = analyze->add_subcommand("doppler", "RMS Doppler spread versus the PDP decay");
    dop_cmd->add_option("--tau0-range", dop.tau0_range, "FROM:TO in seconds");
    dop_cmd->add_option("--steps", dop.steps, "Grid points across the range");
    dop_cmd->add_option("--taps", dop.taps, "Number of delay taps");
    dop_cmd->add_option("--dt", dop.dt, "Tap spacing in seconds");
    dop_cmd->add_option("--fdmax", dop.fdmax, "Maximum Doppler shift in Hz");
    dop_cmd->add_option("--flos", dop.flos, "Comma-separated LOS Doppler shifts in Hz");
    dop_cmd->add_option("--k-db", dop.k_db, "Comma-separated K-factors in dB (-inf for NLOS)");
    dop_cmd->add_option("--runs", dop.runs, "TDL realizations per point for the empirical column");
    dop_cmd->add_option("--paths-per-tap", dop.paths_per_tap, "Scattered components per tap");
    dop_cmd->add_option("--t-stat", dop.t_stat, "Region duration of the empirical runs");
    dop_cmd->add_option("--t-s", dop.t_s, "Time sample spacing of the empirical runs");
    dop_cmd->add_option("--seed", dop.seed, "Seed of the empirical runs");
    dop_cmd->add_option("--out", dop.out, "Output CSV ('-' for stdout)");

    ResolutionArgs res;
    auto *res_cmd = analyze->add_subcommand("resolution", "Delay-spread error under a dynamic-range limit");
    res_cmd->add_option("--targets", res.targets, "FROM:TO target RMS delay spreads in seconds");
    res_cmd->add_option("--step", res.step, "Target spacing in seconds");
    res_cmd->add_option("--dynamic-range-db", res.dynamic_range_db, "Emulator dynamic range in dB");
    res_cmd->add_option("--taps", res.taps, "Number of delay taps");
    res_cmd->add_option("--dt", res.dt, "Tap spacing in seconds");
    res_cmd->add_option("--out", res.out, "Output CSV ('-' for stdout)");

    auto *validate = app.add_subcommand("validate", "Self-checks");
    validate->require_subcommand(1);
    ValidateArgs val;
    auto *val_cmd = validate->add_subcommand("pdp-fast", "Compare the fast PDP against the sampled CIR");
    val_cmd->add_option("--cases", val.cases, "Random regions");
    val_cmd->add_option("--seed", val.seed, "Seed");
    val_cmd->add_option("--max-paths", val.max_paths, "Largest path count");
    val_cmd->add_option("--max-m", val.max_m, "Largest number of time samples");
    val_cmd->add_option("--tolerance", val.tolerance, "Largest accepted per-bin relative deviation");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return kExitConfig;
    }

    try
    {
        if (run_cmd->parsed())
            return cmd_run(run);
        if (gen_cmd->parsed())
            return cmd_gen_table(gen);
        if (dop_cmd->parsed())
            return cmd_analyze_doppler(dop);
        if (res_cmd->parsed())
            return cmd_analyze_resolution(res);
        if (val_cmd->parsed())
            return cmd_validate_pdp_fast(val);
    }
    catch (const ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kExitConfig;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return kExitOk;
}
