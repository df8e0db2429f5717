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
#include "vlink/errors.hpp"
#include "vlink/gscm.hpp"

#include <catch_amalgamated.hpp>
#include <json.hpp>

#include <cmath>
#include <future>
#include <string>
#include <vector>

using namespace vlink;
using Catch::Approx;
using nlohmann::json;

namespace
{
    // Modified Akima derivative estimates and cubic Hermite evaluation, written from the
    // textbook definition in extended precision.
    long double makima_oracle(const std::vector<long double> &x, const std::vector<long double> &y, long double t)
    {
        const std::size_t n = x.size();
        std::vector<long double> m(n + 3);
        for (std::size_t i = 0; i + 1 < n; ++i)
            m[i + 2] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
        m[1] = 2 * m[2] - m[3];
        m[0] = 2 * m[1] - m[2];
        m[n + 1] = 2 * m[n] - m[n - 1];
        m[n + 2] = 2 * m[n + 1] - m[n];
        std::vector<long double> d(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            const long double w1 = std::fabs(m[i + 3] - m[i + 2]) + std::fabs(m[i + 3] + m[i + 2]) / 2;
            const long double w2 = std::fabs(m[i + 1] - m[i]) + std::fabs(m[i + 1] + m[i]) / 2;
            d[i] = (w1 + w2 == 0) ? (m[i + 1] + m[i + 2]) / 2 : (w1 * m[i + 1] + w2 * m[i + 2]) / (w1 + w2);
        }
        std::size_t k = 0;
        while (k + 2 < n && t > x[k + 1])
            ++k;
        const long double h = x[k + 1] - x[k], s = (t - x[k]) / h;
        const long double h00 = 2 * s * s * s - 3 * s * s + 1, h10 = s * s * s - 2 * s * s + s;
        const long double h01 = -2 * s * s * s + 3 * s * s, h11 = s * s * s - s * s;
        return h00 * y[k] + h10 * h * d[k] + h01 * y[k + 1] + h11 * h * d[k + 1];
    }

    json radio(double t_stat = 0.12)
    {
        return {{"carrier_hz", 5.9e9}, {"bandwidth_hz", 10e6}, {"t_stat_s", t_stat}, {"t_s", 250e-6}};
    }

    json node(const std::string &id, double t0, double x0, double y0, double t1, double x1, double y1)
    {
        return {{"id", id}, {"waypoints", {{t0, x0, y0}, {t1, x1, y1}}}};
    }

    Scenario two_static(double d, double t_end = 1.2)
    {
        json doc{{"radio", radio()},
                 {"nodes", {node("a", 0, 0, 0, t_end, 0, 0), node("b", 0, d, 0, t_end, d, 0)}},
                 {"seed", 3}};
        return parse_scenario(doc.dump());
    }

    std::string config_error_message(const json &doc)
    {
        try
        {
            parse_scenario(doc.dump());
        }
        catch (const ConfigError &e)
        {
            return e.what();
        }
        return "no error";
    }
}

TEST_CASE("makima: linear data is reproduced exactly", "[gscm]")
{
    Trajectory traj{{{0, 1, 0}, {1, 3, -3}, {2, 5, -6}, {3, 7, -9}, {4, 9, -12}}};
    for (double t : {0.0, 0.3, 1.0, 2.71, 4.0})
    {
        const auto k = interpolate_trajectory(traj, t);
        CHECK(k.position.x == Approx(1 + 2 * t).margin(1e-12));
        CHECK(k.position.y == Approx(-3 * t).margin(1e-12));
        CHECK(k.velocity.x == Approx(2.0).margin(1e-12));
        CHECK(k.velocity.y == Approx(-3.0).margin(1e-12));
    }
    CHECK_THROWS_AS(interpolate_trajectory(traj, 4.01), std::out_of_range);
    CHECK_THROWS_AS(interpolate_trajectory(traj, -0.01), std::out_of_range);
}

TEST_CASE("makima: passes through every waypoint", "[gscm]")
{
    Trajectory traj{{{0, 0, 0}, {0.7, 5, 1}, {1.1, 4, 9}, {2.5, -3, 2}, {3, 0, 0}, {4.2, 8, 8}}};
    for (const auto &w : traj.waypoints)
    {
        const auto k = interpolate_trajectory(traj, w.t_s);
        CHECK(k.position.x == w.x_m);
        CHECK(k.position.y == w.y_m);
    }
}

TEST_CASE("makima: reference dataset", "[gscm]")
{
    const std::vector<double> x{0, 1, 2, 3, 4}, y{0, 1, 0, 2, 2};
    const MakimaSpline s(x, y);
    CHECK(s.value(1.5) == Approx(0.46666666666666673).margin(1e-12));

    const std::vector<long double> xl(x.begin(), x.end()), yl(y.begin(), y.end());
    for (int i = 0; i <= 400; ++i)
    {
        const double t = 4.0 * i / 400.0;
        CHECK(std::abs(s.value(t) - static_cast<double>(makima_oracle(xl, yl, t))) <= 1e-9);
        const double h = 1e-6;
        if (t > h && t < 4 - h && std::fmod(t, 1.0) > h && std::fmod(t, 1.0) < 1 - h)
        {
            const double fd = static_cast<double>((makima_oracle(xl, yl, t + h) - makima_oracle(xl, yl, t - h)) / (2 * h));
            CHECK(s.derivative(t) == Approx(fd).margin(1e-6));
        }
    }

    const std::vector<double> xr{0, 0.4, 1.3, 1.5, 2.9, 3.0, 4.4}, yr{2, -1, 0.5, 0.5, 7, 6.5, 1};
    const MakimaSpline r(xr, yr);
    const std::vector<long double> xrl(xr.begin(), xr.end()), yrl(yr.begin(), yr.end());
    for (int i = 0; i <= 440; ++i)
    {
        const double t = 4.4 * i / 440.0;
        CHECK(std::abs(r.value(t) - static_cast<double>(makima_oracle(xrl, yrl, t))) <= 1e-9);
    }
}

TEST_CASE("resample_trajectory: supporting points every t_stat", "[gscm]")
{
    Trajectory traj{{{0, 0, 0}, {1, 10, 0}, {2, 10, 10}, {2.5, 0, 12}}};
    const auto r = resample_trajectory(traj, 0.12);
    REQUIRE(r.waypoints.size() >= 3);
    for (std::size_t i = 0; i + 2 < r.waypoints.size(); ++i)
        CHECK(r.waypoints[i + 1].t_s - r.waypoints[i].t_s == Approx(0.12).epsilon(1e-12));
    CHECK(r.waypoints.front().t_s == 0.0);
    CHECK(r.waypoints.back().t_s == 2.5);
    CHECK(r.waypoints.back().x_m == Approx(0.0).margin(1e-12));
}

TEST_CASE("segment_regions", "[gscm]")
{
    const auto regions = segment_regions(two_static(50.0, 12.0));
    REQUIRE(regions.size() == 100);
    for (const auto &r : regions)
    {
        CHECK(std::abs(r.t_start_s - 0.12 * r.index) <= 1e-9);
        CHECK(r.duration_s == 0.12);
    }
    CHECK(segment_regions(two_static(50.0, 0.12)).size() == 1);

    json doc{{"radio", radio()}, {"nodes", {node("a", 1.0, 0, 0, 3.0, 0, 0), node("b", 0.5, 9, 0, 2.0, 9, 0)}}};
    const auto window = segment_regions(parse_scenario(doc.dump()));
    REQUIRE(window.size() == 8);
    CHECK(window.front().t_start_s == 1.0);

    json shorter{{"radio", radio()}, {"nodes", {node("a", 0, 0, 0, 0.1, 0, 0), node("b", 0, 9, 0, 0.1, 9, 0)}}};
    CHECK_THROWS_AS(segment_regions(parse_scenario(shorter.dump())), std::invalid_argument);
}

TEST_CASE("compute_paths: static LOS", "[gscm]")
{
    const auto sc = two_static(120.0);
    const auto r = compute_paths(sc, 0, 3);
    REQUIRE(r.paths.size() == 1);
    const auto &p = r.paths[0];
    CHECK(p.kind == PathKind::Los);
    CHECK(p.delay_s == Approx(120.0 / kSpeedOfLight).epsilon(1e-15));
    CHECK(p.doppler_hz == 0.0);
    CHECK(p.amplitude == Approx(kSpeedOfLight / 5.9e9 / (4 * kPi) / 120.0).epsilon(1e-14));
    CHECK(r.t_start_s == Approx(0.36));
}

TEST_CASE("compute_paths: head-on approach at 30 km/h", "[gscm]")
{
    const double v = 8.33;
    json doc{{"radio", radio()}, {"nodes", {node("a", 0, 0, 0, 6, 6 * v, 0), node("b", 0, 400, 0, 6, 400, 0)}}};
    const auto sc = parse_scenario(doc.dump());
    const auto r = compute_paths(sc, 0, 10);
    REQUIRE(r.paths.size() == 1);
    CHECK(r.paths[0].doppler_hz == Approx(v * 5.9e9 / kSpeedOfLight).epsilon(1e-9));
    CHECK(r.paths[0].doppler_hz == Approx(163.9).margin(0.05));
    // Delay at the region start follows the position at that instant.
    CHECK(r.paths[0].delay_s == Approx((400 - v * r.t_start_s) / kSpeedOfLight).epsilon(1e-12));
}

TEST_CASE("compute_paths: single static scatterer geometry", "[gscm]")
{
    json doc{{"radio", radio()},
             {"nodes", {node("a", 0, 0, 0, 1.2, 0, 0), node("b", 0, 100, 0, 1.2, 100, 0)}},
             {"scatterers", {{{"kind", "static"}, {"position", {37.5, 21.25}}, {"gain_db", -6.0}}}},
             {"gain_sigma_db", 0.0}};
    const auto sc = parse_scenario(doc.dump());
    const auto r = compute_paths(sc, 0, 0);
    REQUIRE(r.paths.size() == 2);
    const auto &p = r.paths[1];
    const long double d1 = std::hypot(37.5L, 21.25L), d2 = std::hypot(62.5L, 21.25L);
    CHECK(p.kind == PathKind::StaticDiscrete);
    CHECK(std::abs(p.delay_s - static_cast<double>((d1 + d2) / 299792458.0L)) <= 1e-12);
    CHECK(std::abs(p.doppler_hz) < 1e-9);
    const double a0 = kSpeedOfLight / 5.9e9 / (4 * kPi);
    CHECK(p.amplitude == Approx(a0 / static_cast<double>(d1 * d2) * std::pow(10.0, -6.0 / 20.0)).epsilon(1e-13));
}

TEST_CASE("compute_paths: LOS blockage follows the segment test", "[gscm]")
{
    auto doc = json{{"radio", radio()},
                    {"nodes", {node("a", 0, 0, 0, 2.4, 0, 40), node("b", 0, 100, 0, 2.4, 100, 40)}},
                    {"buildings", {{{50, 10}, {50, 30}}}}};
    const auto sc = parse_scenario(doc.dump());
    for (const auto &span : segment_regions(sc))
    {
        const auto a = interpolate_trajectory(sc.nodes[0].trajectory, span.t_mid()).position;
        const auto b = interpolate_trajectory(sc.nodes[1].trajectory, span.t_mid()).position;
        const bool blocked = a.y >= 10.0 && a.y <= 30.0;
        CHECK(los_blocked(a, b, sc.buildings) == blocked);
        const auto r = compute_paths(sc, 0, span.index);
        CHECK((r.paths.size() == 1) != blocked);
    }

    const std::vector<Polyline> wall{{{0, 0}, {0, 10}}};
    CHECK(los_blocked({-5, 10}, {5, 10}, wall)); // touches the end point
    CHECK(los_blocked({0, -5}, {0, 3}, wall));   // collinear overlap
    CHECK_FALSE(los_blocked({0, -5}, {0, -1}, wall));
    CHECK_FALSE(los_blocked({-5, 11}, {5, 10.5}, wall));
    CHECK(los_blocked({-1, 5}, {1, 5}, wall));
}

TEST_CASE("compute_paths: doubling distances scales amplitudes by the distance law", "[gscm][property]")
{
    auto make = [](double s)
    {
        json doc{{"radio", radio()},
                 {"nodes", {node("a", 0, 0, 0, 1.2, 0, 0), node("b", 0, 80 * s, 0, 1.2, 80 * s, 0)}},
                 {"scatterers",
                  {{{"kind", "static"}, {"position", {20 * s, 30 * s}}, {"gain_db", 2.0}},
                   {{"kind", "static"}, {"position", {60 * s, -15 * s}}},
                   {{"kind", "diffuse"}, {"position", {-10 * s, 5 * s}}, {"gain_db", -10.0}}}},
                 {"pathloss_exponent", 2.0},
                 {"seed", 11}};
        return parse_scenario(doc.dump());
    };
    const auto near = compute_paths(make(1.0), 0, 2, 4);
    const auto far = compute_paths(make(2.0), 0, 2, 4);
    REQUIRE(near.paths.size() == far.paths.size());
    CHECK(far.paths[0].amplitude == Approx(near.paths[0].amplitude / 2.0).epsilon(1e-13));
    for (std::size_t i = 1; i < near.paths.size(); ++i)
        CHECK(far.paths[i].amplitude == Approx(near.paths[i].amplitude / 4.0).epsilon(1e-13));
}

TEST_CASE("compute_paths: deterministic across runs and threads", "[gscm][property]")
{
    json doc{{"radio", radio()},
             {"nodes", {node("a", 0, 0, 0, 3, 25, 0), node("b", 0, 60, -20, 3, 60, 20)}},
             {"scatterers",
              {{{"kind", "static"}, {"position", {30, 12}}},
               {{"kind", "mobile"}, {"waypoints", {{0, 10, -5}, {3, 40, -5}}}}}},
             {"buildings", {{{5, 10}, {55, 10}}}},
             {"diffuse", {{"density_per_m", 0.5}, {"jitter_m", 1.0}, {"gain_db", -12}}},
             {"seed", 99}};
    const auto sc = parse_scenario(doc.dump());
    const auto R = static_cast<int>(segment_regions(sc).size());
    std::vector<StationarityRegion> serial;
    for (int r = 0; r < R; ++r)
        serial.push_back(compute_paths(sc, 0, r, 7));
    std::vector<std::future<StationarityRegion>> jobs;
    for (int r = R - 1; r >= 0; --r)
        jobs.push_back(std::async(std::launch::async, [&sc, r] { return compute_paths(sc, 0, r, 7); }));
    for (int r = R - 1, j = 0; r >= 0; --r, ++j)
        CHECK(jobs[static_cast<std::size_t>(j)].get().paths == serial[static_cast<std::size_t>(r)].paths);
    CHECK(parse_scenario(doc.dump()).scatterers.size() == sc.scatterers.size());
    CHECK(compute_paths(parse_scenario(doc.dump()), 0, 5, 7).paths == serial[5].paths);
    CHECK(compute_paths(sc, 0, 5, 8).paths != serial[5].paths);
}

TEST_CASE("compute_paths: LOS delay is continuous across region boundaries", "[gscm][property]")
{
    json doc{{"radio", radio()},
             {"nodes",
              {{{"id", "a"}, {"waypoints", {{0, 0, 0}, {2, 20, 2}, {4, 45, 10}, {6, 60, 30}}}},
               node("b", 0, 120, -30, 6, 40, 60)}}};
    const auto sc = parse_scenario(doc.dump());
    const auto spans = segment_regions(sc);
    double v_max = 0.0;
    for (const auto &s : spans)
        for (double t : {s.t_start_s, s.t_mid(), s.t_start_s + s.duration_s})
        {
            const auto a = interpolate_trajectory(sc.nodes[0].trajectory, t).velocity;
            const auto b = interpolate_trajectory(sc.nodes[1].trajectory, t).velocity;
            v_max = std::max(v_max, norm(a) + norm(b));
        }
    for (std::size_t r = 0; r + 1 < spans.size(); ++r)
    {
        const auto cur = compute_paths(sc, 0, static_cast<int>(r)).paths.at(0);
        const auto next = compute_paths(sc, 0, static_cast<int>(r) + 1).paths.at(0);
        const double end = cur.delay_s - cur.doppler_hz / 5.9e9 * 0.12;
        CHECK(std::abs(end - next.delay_s) <= v_max * 0.12 / kSpeedOfLight);
    }
}

TEST_CASE("diffuse scatterers along building polylines", "[gscm]")
{
    const std::vector<Polyline> buildings{{{0, 0}, {10, 0}, {10, 5}}, {{-4, -4}, {-4, 4}}};
    const auto pts = place_diffuse_scatterers(buildings, {2.0, -9.0, 0.0}, 5, 100);
    // Spacing 0.5 m starting 0.25 m in: 30 points on the 15 m wall, 16 on the 8 m wall.
    REQUIRE(pts.size() == 46);
    CHECK(pts[0].position.x == Approx(0.25));
    CHECK(pts[20].position.x == Approx(10.0));
    CHECK(pts[20].position.y == Approx(0.25));
    CHECK(pts[30].position.y == Approx(-3.75));
    CHECK(pts[0].seed_tag == 100);
    CHECK(pts[45].seed_tag == 145);
    for (const auto &p : pts)
    {
        CHECK(p.kind == ScattererKind::Diffuse);
        CHECK(p.gain_db == -9.0);
    }
    const auto jittered = place_diffuse_scatterers(buildings, {2.0, -9.0, 0.3}, 5, 100);
    for (std::size_t i = 0; i < pts.size(); ++i)
    {
        CHECK(std::abs(jittered[i].position.x - pts[i].position.x) <= 0.3);
        CHECK(std::abs(jittered[i].position.y - pts[i].position.y) <= 0.3);
    }
}

TEST_CASE("frequency_response", "[gscm]")
{
    SamplingConfig cfg = SamplingConfig::make(5.9e9, 10e6, 0.01, 1e-3, 0.9, 16);

    StationarityRegion los;
    los.paths = {{1.0, 0.0, 0.0, 0.0, PathKind::Los}};
    const auto h = frequency_response(los, 156.25e3, cfg);
    CHECK(h.k_count == 64);
    CHECK(h.k_first == -32);
    for (const auto &v : h.data.values())
        CHECK(std::abs(v - ComplexSample(1.0, 0.0)) < 1e-15);

    StationarityRegion one;
    one.paths = {{0.3, 0.2, 7.3e-7, 80.0, PathKind::StaticDiscrete}};
    const auto h1 = frequency_response(one, 1e6, cfg);
    for (const auto &v : h1.data.values())
        CHECK(std::abs(v) == Approx(0.3).epsilon(1e-14));
    CHECK(frequency_response(one, 3e6, cfg).k_count == 2);

    StationarityRegion two;
    two.paths = {{0.8, 0.1, 3.1e-7, 0.0, PathKind::StaticDiscrete}, {0.5, 0.7, 9.4e-7, 0.0, PathKind::Diffuse}};
    const auto h2 = frequency_response(two, 100e3, cfg);
    for (std::int64_t k : {-50, -17, 0, 23, 49})
    {
        const long double f = 5.9e9L + static_cast<long double>(k) * 100e3L;
        auto cyc = [&](double phase, double tau) { return static_cast<long double>(phase) - f * tau; };
        const long double dphi = 2 * 3.141592653589793238L * (cyc(0.1, 3.1e-7) - cyc(0.7, 9.4e-7));
        const double expect = 0.64 + 0.25 + 2 * 0.8 * 0.5 * static_cast<double>(std::cos(dphi));
        const auto v = h2.data(0, static_cast<std::size_t>(k - h2.k_first));
        CHECK(std::norm(v) == Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("parse_scenario: schema errors name the offending path", "[gscm]")
{
    json good{{"radio", radio()}, {"nodes", {node("a", 0, 0, 0, 1, 0, 0), node("b", 0, 5, 0, 1, 5, 0)}}};
    CHECK_NOTHROW(parse_scenario(good.dump()));

    auto doc = good;
    doc.erase("radio");
    CHECK(config_error_message(doc).find("$.radio") != std::string::npos);

    doc = good;
    doc["radio"]["t_s"] = "fast";
    CHECK(config_error_message(doc).find("$.radio.t_s") != std::string::npos);

    doc = good;
    doc["nodes"][1]["waypoints"] = {{0, 5, 0}, {1, 5, 0}, {0.5, 2, 2}};
    CHECK(config_error_message(doc).find("$.nodes[1].waypoints") != std::string::npos);

    doc = good;
    doc["nodes"][0]["waypoints"][1] = {1, 2};
    CHECK(config_error_message(doc).find("$.nodes[0].waypoints[1]") != std::string::npos);

    doc = good;
    doc["scatterers"] = {{{"kind", "static"}}};
    CHECK(config_error_message(doc).find("$.scatterers[0].position") != std::string::npos);

    doc = good;
    doc["scatterers"] = {{{"kind", "bouncy"}, {"position", {1, 1}}}};
    CHECK(config_error_message(doc).find("$.scatterers[0].kind") != std::string::npos);

    doc = good;
    doc["scatterers"] = {{{"kind", "mobile"}, {"position", {1, 1}}}};
    CHECK(config_error_message(doc).find("$.scatterers[0].waypoints") != std::string::npos);

    doc = good;
    doc["buildings"] = {{{0, 0}, {1, "x"}}};
    CHECK(config_error_message(doc).find("$.buildings[0][1][1]") != std::string::npos);

    doc = good;
    doc["links"] = json::array({json::array({"a", "c"})});
    INFO(config_error_message(doc));
    CHECK(config_error_message(doc).find("$.links[0][1]") != std::string::npos);

    CHECK(config_error_message(json::parse("[1,2]")).find("$") != std::string::npos);
    CHECK_THROWS_AS(parse_scenario("{not json"), ConfigError);
    CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), ConfigError);
}
