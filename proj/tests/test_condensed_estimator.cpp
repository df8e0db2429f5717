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
#include "oracles.hpp"

#include "vlink/condensed_estimator.hpp"
#include "vlink/doppler_analysis.hpp"
#include "vlink/tdl_model.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <numeric>

using namespace vlink;
using Catch::Approx;

namespace
{
    SamplingConfig config(std::size_t M, std::size_t N, double t_s = 1e-3)
    {
        SamplingConfig c;
        c.t_s = t_s;
        c.t_c = 100e-9;
        c.bandwidth_hz = 10e6;
        c.n_delay_bins = N;
        c.m_samples = M;
        c.t_stat = static_cast<double>(M) * t_s;
        c.rolloff = 0.9;
        c.carrier_hz = 5.9e9;
        return c;
    }

    // Truncated filter weight at an offset of x delay bins.
    double rc(double x)
    {
        return std::abs(x) <= 8.0 ? static_cast<double>(oracle::raised_cosine(x * 100e-9, 100e-9, 0.9)) : 0.0;
    }

    // Largest per-bin deviation relative to max(|reference bin|, 1e-13 * reference peak).
    double max_rel_dev(const Pdp &fast, const Pdp &brute)
    {
        const double peak = *std::max_element(brute.powers.begin(), brute.powers.end());
        double worst = 0.0;
        for (std::size_t n = 0; n < brute.powers.size(); ++n)
        {
            const double floor = std::max(std::abs(brute.powers[n]), 1e-13 * peak);
            worst = std::max(worst, std::abs(fast.powers[n] - brute.powers[n]) / floor);
        }
        return worst;
    }

    Dsd tones(std::vector<std::pair<std::int64_t, double>> bins, double bin_hz, std::int64_t first, std::size_t n)
    {
        Dsd d{std::vector<double>(n, 0.0), bin_hz, first};
        for (auto [b, p] : bins)
            d.powers[static_cast<std::size_t>(b - first)] = p;
        return d;
    }
}

TEST_CASE("pdp_brute: single static path and zero CIR", "[estimator]")
{
    const auto cfg = config(16, 12);
    StationarityRegion r;
    r.paths = {{0.8, 0.3, 2.4e-7, 0.0, PathKind::Los}};
    const auto pdp = pdp_brute(sample_cir(r, cfg));
    for (std::size_t n = 0; n < 12; ++n)
        CHECK(pdp.powers[n] == Approx(0.64 * rc(n - 2.4) * rc(n - 2.4)).margin(1e-15));

    SampledCir zero{ComplexMatrix(4, 6), cfg, 0};
    for (double p : pdp_brute(zero).powers)
        CHECK(p == 0.0);
}

TEST_CASE("pdp_fast: single path has no cross terms", "[estimator]")
{
    const auto cfg = config(64, 12);
    StationarityRegion r;
    r.paths = {{0.8, 0.3, 2.4e-7, 120.0, PathKind::Los}};
    const auto pdp = pdp_fast(r, cfg);
    for (std::size_t n = 0; n < 12; ++n)
        CHECK(pdp.powers[n] == Approx(0.64 * rc(n - 2.4) * rc(n - 2.4)).margin(1e-15));
}

TEST_CASE("pdp_fast: equal Dopplers in quadrature add incoherently", "[estimator]")
{
    const auto cfg = config(64, 12);
    StationarityRegion r;
    r.paths = {{1.0, 0.0, 3.3e-7, 50.0, PathKind::Diffuse}, {0.5, 0.25, 3.6e-7, 50.0, PathKind::Diffuse}};
    const auto pdp = pdp_fast(r, cfg);
    for (std::size_t n = 0; n < 12; ++n)
    {
        const double expect = rc(n - 3.3) * rc(n - 3.3) + 0.25 * rc(n - 3.6) * rc(n - 3.6);
        CHECK(pdp.powers[n] == Approx(expect).margin(1e-15));
    }
    // Same Dopplers in phase: coherent sum with the full factor M / M.
    r.paths[1].phase_cycles = 0.0;
    const auto coherent = pdp_fast(r, cfg);
    for (std::size_t n = 0; n < 12; ++n)
    {
        const double a = rc(n - 3.3) + 0.5 * rc(n - 3.6);
        CHECK(coherent.powers[n] == Approx(a * a).margin(1e-15));
    }
}

TEST_CASE("pdp_fast: equals the brute-force PDP of the sampled CIR", "[estimator]")
{
    const auto cfg = config(128, 24);
    const auto r = oracle::random_region(5, 5, cfg);
    CHECK(max_rel_dev(pdp_fast(r, cfg), pdp_brute(sample_cir(r, cfg))) <= 1e-10);
}

TEST_CASE("pdp_fast: 100 random regions", "[estimator][property]")
{
    KeyedStream rng(77);
    for (std::uint64_t i = 0; i < 100; ++i)
    {
        const auto M = static_cast<std::size_t>(rng.uniform(1.0, 257.0));
        const auto L = static_cast<std::size_t>(rng.uniform(1.0, 21.0));
        const auto cfg = config(M, 32, rng.uniform(1e-4, 1e-3));
        const auto r = oracle::random_region(1000 + i, L, cfg);
        const auto fast = pdp_fast(r, cfg);
        CHECK(max_rel_dev(fast, pdp_brute(sample_cir(r, cfg))) <= 1e-10);
        for (double p : fast.powers)
            CHECK(p >= 0.0);
    }
}

TEST_CASE("pdp_fast: near-equal Dopplers use the coincident limit smoothly", "[estimator]")
{
    const auto cfg = config(256, 16);
    StationarityRegion r;
    r.paths = {{1.0, 0.1, 5e-7, 40.0, PathKind::Diffuse}, {0.7, 0.6, 5.2e-7, 40.0, PathKind::Diffuse}};
    const auto exact = pdp_fast(r, cfg);
    for (double df : {1e-12, 1e-10, 1e-8, 1e-6})
    {
        r.paths[1].doppler_hz = 40.0 + df;
        const auto near = pdp_fast(r, cfg);
        const auto brute = pdp_brute(sample_cir(r, cfg));
        CHECK(max_rel_dev(near, brute) <= 1e-10);
        CHECK(max_rel_dev(near, exact) <= 1e-6);
    }
}

TEST_CASE("rms_delay_spread", "[estimator]")
{
    CHECK(rms_delay_spread({{0, 0, 3, 0}, 100e-9}).sigma_tau_s == 0.0);
    const auto two = rms_delay_spread({{1, 1}, 100e-9});
    CHECK(two.mean_delay_s == Approx(50e-9));
    CHECK(two.sigma_tau_s == Approx(50e-9));

    const auto p = exp_pdp({100e-9, 100e-9, 8});
    CHECK(rms_delay_spread({p, 100e-9}).sigma_tau_s ==
          Approx(closed_form_exp_delay_spread({100e-9, 100e-9, 8})).epsilon(1e-10));
    CHECK_THROWS_AS(rms_delay_spread({{0, 0}, 100e-9}), std::domain_error);

    auto scaled = p;
    for (double &v : scaled)
        v *= 37.5;
    CHECK(rms_delay_spread({scaled, 100e-9}).sigma_tau_s ==
          Approx(rms_delay_spread({p, 100e-9}).sigma_tau_s).epsilon(1e-12));
}

TEST_CASE("rms_delay_spread: shifting every path by whole bins", "[estimator][property]")
{
    const auto cfg = config(64, 80);
    auto r = oracle::random_region(9, 12, config(64, 30));
    for (auto &p : r.paths)
        p.delay_s += 10 * 100e-9; // keep the filter support clear of bin 0
    const auto base = rms_delay_spread(pdp_fast(r, cfg));
    for (int k : {1, 5, 20})
    {
        auto shifted = r;
        for (auto &p : shifted.paths)
            p.delay_s += k * cfg.t_c;
        const auto s = rms_delay_spread(pdp_fast(shifted, cfg));
        CHECK(s.sigma_tau_s == Approx(base.sigma_tau_s).epsilon(1e-12));
        CHECK(s.mean_delay_s - base.mean_delay_s == Approx(k * cfg.t_c).epsilon(1e-12));
    }
}

TEST_CASE("dvir: on-grid path occupies one Doppler bin", "[estimator]")
{
    const auto cfg = config(64, 12);
    StationarityRegion r;
    r.paths = {{0.9, 0.2, 3e-7, 5.0 / cfg.t_stat, PathKind::Los}};
    const auto s = dvir(r, cfg);
    REQUIRE(s.rows() == 64);
    const ComplexSample eta = std::polar(0.9, kTwoPi * 0.2);
    for (std::size_t i = 0; i < 64; ++i)
        for (std::size_t n = 0; n < 12; ++n)
        {
            if (i == 32 + 5)
                CHECK(std::abs(s(i, n) - eta * rc(n - 3.0)) < 1e-15);
            else
                CHECK(std::abs(s(i, n)) < 1e-15);
        }

    const auto d = dsd_estimate(s, 1.0 / cfg.t_stat);
    for (std::size_t i = 0; i < d.powers.size(); ++i)
        CHECK((d.powers[i] > 1e-30) == (i == 37));
    CHECK(d.frequency(37) == Approx(5.0 / cfg.t_stat));

    StationarityRegion empty;
    const auto zero = dvir(empty, cfg);
    for (const auto &v : zero.values())
        CHECK(v == ComplexSample(0.0, 0.0));
}

TEST_CASE("dvir: off-grid Doppler spread agrees with the windowed DFT", "[estimator]")
{
    const auto cfg = config(1024, 12);
    StationarityRegion r;
    r.paths = {{1.0, 0.4, 3e-7, 123.4, PathKind::Diffuse}};
    const double from_dvir = rms_doppler_spread(dsd_estimate(dvir(r, cfg), 1.0 / cfg.t_stat)).sigma_nu_hz;
    const double from_dft = rms_doppler_spread(dsd_from_cir(sample_cir(r, cfg))).sigma_nu_hz;
    CHECK(std::abs(from_dvir - from_dft) <= 0.02 * 123.4);
}

TEST_CASE("dvir: window restricts the full axis", "[estimator]")
{
    const auto cfg = config(128, 20);
    const auto r = oracle::random_region(31, 6, cfg);
    const auto full = dvir(r, cfg);
    const auto part = dvir(r, cfg, -10, 25);
    for (std::size_t i = 0; i < 25; ++i)
        for (std::size_t n = 0; n < 20; ++n)
            CHECK(part(i, n) == full(i + 64 - 10, n));
}

TEST_CASE("dsd_estimate: summation", "[estimator]")
{
    const auto cfg = config(64, 16);
    const auto s = dvir(oracle::random_region(3, 7, cfg), cfg);
    const auto d = dsd_estimate(s, 1.0 / cfg.t_stat);
    double direct = 0.0;
    for (const auto &v : s.values())
        direct += std::norm(v);
    CHECK(std::accumulate(d.powers.begin(), d.powers.end(), 0.0) == Approx(direct / 16.0).epsilon(1e-12));
    for (double p : dsd_estimate(ComplexMatrix(8, 4), 1.0).powers)
        CHECK(p == 0.0);
}

TEST_CASE("dsd_from_cir: matches the unit-peak kernel on the grid", "[estimator]")
{
    const auto cfg = config(64, 12);
    StationarityRegion r;
    r.paths = {{0.9, 0.2, 3e-7, 7.0 / cfg.t_stat, PathKind::Los}, {0.3, 0.7, 6e-7, -11.0 / cfg.t_stat, PathKind::Diffuse}};
    const auto a = dsd_estimate(dvir(r, cfg), 1.0 / cfg.t_stat);
    const auto b = dsd_from_cir(sample_cir(r, cfg));
    REQUIRE(a.powers.size() == b.powers.size());
    CHECK(a.first_bin == b.first_bin);
    for (std::size_t i = 0; i < a.powers.size(); ++i)
        CHECK(b.powers[i] == Approx(a.powers[i]).margin(1e-14));
}

TEST_CASE("rms_doppler_spread and doppler_bandwidth", "[estimator]")
{
    const auto one = tones({{12, 1.0}}, 2.0, -32, 64);
    CHECK(rms_doppler_spread(one).mean_doppler_hz == Approx(24.0));
    CHECK(rms_doppler_spread(one).sigma_nu_hz == 0.0);
    CHECK(doppler_bandwidth(one, 40.0) == 0.0);

    const auto two = tones({{-10, 1.0}, {10, 1.0}}, 2.0, -32, 64);
    CHECK(rms_doppler_spread(two).mean_doppler_hz == Approx(0.0).margin(1e-12));
    CHECK(rms_doppler_spread(two).sigma_nu_hz == Approx(20.0));
    CHECK(doppler_bandwidth(two, 40.0) == Approx(40.0));
    CHECK(one_sided_doppler_extent(two, 40.0) == Approx(20.0));

    const auto weak = tones({{-10, 1e-5}, {10, 1.0}}, 2.0, -32, 64);
    CHECK(doppler_bandwidth(weak, 40.0) == 0.0);
    CHECK(doppler_bandwidth(weak, 60.0) == Approx(40.0));

    auto scaled = two;
    for (double &p : scaled.powers)
        p *= 1e-7;
    CHECK(rms_doppler_spread(scaled).sigma_nu_hz == Approx(20.0).epsilon(1e-12));

    CHECK_THROWS_AS(rms_doppler_spread(tones({}, 1.0, 0, 4)), std::domain_error);
    CHECK_THROWS_AS(doppler_bandwidth(tones({}, 1.0, 0, 4), 40.0), std::domain_error);
}

TEST_CASE("rms_doppler_spread: NLOS TDL converges to the Clarke value", "[estimator][statistical]")
{
    TdlConfig tdl;
    tdl.pdp = {60e-9, 100e-9, 8};
    tdl.paths_per_tap = 40;
    tdl.f_dmax_hz = 500.0;
    const auto cfg = config(2000, 17, 5e-4);
    double mean = 0.0;
    for (int seed = 0; seed < 20; ++seed)
    {
        tdl.seed = static_cast<std::uint64_t>(seed);
        const auto r = draw_tdl_paths(tdl, seed);
        mean += rms_doppler_spread(dsd_estimate(dvir(r, cfg), 1.0 / cfg.t_stat)).sigma_nu_hz / 20.0;
    }
    CHECK(mean == Approx(clarke_rms_doppler(500.0)).epsilon(0.05));
}

TEST_CASE("estimate_k_factor", "[estimator]")
{
    StationarityRegion r;
    r.paths = {{1.0, 0.0, 1e-6, 0.0, PathKind::Los}};
    CHECK(estimate_k_factor(r, 10e6) == kLosOnlyKDb);

    r.paths.push_back({0.5, 0.3, 1.05e-6, 10.0, PathKind::Diffuse});
    CHECK(estimate_k_factor(r, 10e6) == Approx(6.0206).margin(1e-4));

    r.paths.push_back({0.5, 0.3, 1.15e-6, 10.0, PathKind::Diffuse}); // next bin, ignored
    CHECK(estimate_k_factor(r, 10e6) == Approx(6.0206).margin(1e-4));

    r.paths.push_back({0.5, 0.8, 1.09e-6, 10.0, PathKind::Diffuse}); // cancels the first scatterer
    CHECK(estimate_k_factor(r, 10e6) == kLosOnlyKDb);

    StationarityRegion nlos;
    nlos.paths = {{0.5, 0.3, 1.05e-6, 10.0, PathKind::Diffuse}};
    CHECK(estimate_k_factor(nlos, 10e6) == -std::numeric_limits<double>::infinity());

    r.paths.push_back({1.0, 0.0, 2e-6, 0.0, PathKind::Los});
    CHECK_THROWS_AS(estimate_k_factor(r, 10e6), std::invalid_argument);
}

TEST_CASE("received_power", "[estimator]")
{
    EstimatorConfig est;
    est.p_tx_dbm = -5.0;
    const auto cfg = config(16, 12);
    StationarityRegion r;
    r.paths = {{1.0, 0.0, 2e-7, 0.0, PathKind::Los}};
    CHECK(received_power(pdp_fast(r, cfg), est) == Approx(-5.0).margin(1e-12));
    CHECK(received_power({exp_pdp({80e-9, 100e-9, 8}), 100e-9}, est) == Approx(-5.0).margin(1e-12));

    Pdp two{{1.0, 0.5, 0.25, 0.0, 1e-6, 0.5e-6}, 100e-9};
    CHECK(received_power(two, est) == Approx(-5.0 + 10.0 * std::log10(1.75)).epsilon(1e-12));
    CHECK_THROWS_AS(received_power({{0.0, 0.0}, 100e-9}, est), std::domain_error);
}

TEST_CASE("condense: single static LOS path", "[estimator]")
{
    EstimatorConfig est;
    est.p_tx_dbm = -5.0;
    StationarityRegion r;
    r.paths = {{1.0, 0.0, 8e-7, 0.0, PathKind::Los}};
    const auto psi = condense(r, config(64, 24), est);
    CHECK(psi.rx_power_dbm == Approx(-5.0).margin(1e-12));
    CHECK(psi.sigma_tau_s == Approx(0.0).margin(1e-15));
    CHECK(psi.f_dmax_hz == 0.0);
    CHECK(psi.k_db == kLosOnlyKDb);
    CHECK(psi.f_los_hz == 0.0);
    CHECK(psi.sigma_nu_hz == 0.0);

    CHECK_THROWS_AS(condense(StationarityRegion{}, config(64, 24), est), std::domain_error);
}

TEST_CASE("condense: recovers the TDL configuration", "[estimator][statistical]")
{
    const double target_tau = 50e-9, f_dmax = 500.0, k_db = 10.0;
    TdlConfig tdl;
    tdl.pdp = {solve_tau0_for_target(target_tau, 100e-9, 8), 100e-9, 8};
    tdl.paths_per_tap = 40;
    tdl.f_dmax_hz = f_dmax;
    tdl.k_linear = std::pow(10.0, k_db / 10.0);
    tdl.f_los_hz = 250.0;
    const auto cfg = config(2000, 17, 5e-4);
    EstimatorConfig est;

    double tau = 0.0, fd = 0.0, inv_k = 0.0;
    for (int seed = 0; seed < 20; ++seed)
    {
        tdl.seed = static_cast<std::uint64_t>(seed);
        const auto psi = condense(draw_tdl_paths(tdl, seed), cfg, est);
        tau += psi.sigma_tau_s / 20.0;
        fd += psi.f_dmax_hz / 20.0;
        inv_k += std::pow(10.0, -psi.k_db / 10.0) / 20.0;
        CHECK(psi.f_los_hz == 250.0);
    }
    CHECK(tau == Approx(target_tau).epsilon(0.05));
    CHECK(fd == Approx(f_dmax).epsilon(0.10));
    // Ratio of the LOS power to the mean scattered power in the LOS bin.
    CHECK(-10.0 * std::log10(inv_k) == Approx(k_db).margin(1.5));
}

TEST_CASE("condense: cost does not depend on the number of time samples", "[estimator]")
{
    // Regions differ only in M; the estimate must not change beyond the Doppler grid.
    const auto base = oracle::random_region(17, 30, config(64, 40, 1e-3));
    EstimatorConfig est;
    const auto a = condense(base, config(64, 40, 1e-3), est);
    CHECK(a.sigma_tau_s > 0.0);
    for (double p : pdp_fast(base, config(4096, 40, 1e-3)).powers)
        CHECK(p >= 0.0);
}
