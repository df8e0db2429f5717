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

#include "vlink/channel_core.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vlink
{
    struct Vec2
    {
        double x = 0.0;
        double y = 0.0;

        friend Vec2 operator+(Vec2 a, Vec2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
        friend Vec2 operator-(Vec2 a, Vec2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
        friend Vec2 operator*(double s, Vec2 a) noexcept { return {s * a.x, s * a.y}; }
        friend double dot(Vec2 a, Vec2 b) noexcept { return a.x * b.x + a.y * b.y; }
        friend double cross(Vec2 a, Vec2 b) noexcept { return a.x * b.y - a.y * b.x; }
        bool operator==(const Vec2 &) const = default;
    };

    double norm(Vec2 v) noexcept;

    struct Waypoint
    {
        double t_s = 0.0;
        double x_m = 0.0;
        double y_m = 0.0;
    };

    struct Trajectory
    {
        std::vector<Waypoint> waypoints;

        // Throws std::invalid_argument unless there are >= 2 waypoints with strictly increasing times.
        void validate() const;
        double t_first() const { return waypoints.front().t_s; }
        double t_last() const { return waypoints.back().t_s; }
        bool covers(double t) const { return t >= t_first() && t <= t_last(); }
    };

    struct Kinematics
    {
        Vec2 position;
        Vec2 velocity;
    };

    // Modified Akima piecewise cubic through (x[i], y[i]).
    class MakimaSpline
    {
    public:
        MakimaSpline() = default;
        MakimaSpline(std::span<const double> x, std::span<const double> y);

        double value(double t) const;
        double derivative(double t) const;

    private:
        std::size_t segment(double t) const;

        std::vector<double> x_, y_, slope_;
    };

    class TrajectoryInterpolant
    {
    public:
        explicit TrajectoryInterpolant(const Trajectory &traj);

        // Throws std::out_of_range outside [t_first, t_last].
        Kinematics at(double t) const;
        double t_first() const noexcept { return t_first_; }
        double t_last() const noexcept { return t_last_; }
        bool covers(double t) const noexcept { return t >= t_first_ && t <= t_last_; }

    private:
        MakimaSpline x_, y_;
        double t_first_ = 0.0, t_last_ = 0.0;
    };

    Kinematics interpolate_trajectory(const Trajectory &traj, double t);

    // Supporting points every `spacing` seconds from t_first, plus t_last.
    Trajectory resample_trajectory(const Trajectory &traj, double spacing);

    enum class ScattererKind
    {
        StaticDiscrete,
        MobileDiscrete,
        Diffuse
    };

    struct Scatterer
    {
        ScattererKind kind = ScattererKind::StaticDiscrete;
        Vec2 position;                       // static and diffuse scatterers
        std::optional<Trajectory> trajectory; // mobile scatterers
        double gain_db = 0.0;
        std::uint64_t seed_tag = 0;
    };

    using Polyline = std::vector<Vec2>;

    struct DiffuseConfig
    {
        double density_per_m = 0.0;
        double gain_db = 0.0;
        double jitter_m = 0.0;
    };

    struct Node
    {
        std::string id;
        Trajectory trajectory;
    };

    struct Link
    {
        std::size_t tx = 0;
        std::size_t rx = 1;
        std::string id;
    };

    struct Scenario
    {
        std::vector<Node> nodes;
        std::vector<Link> links;
        std::vector<Scatterer> scatterers; // includes the generated diffuse points
        std::vector<Polyline> buildings;
        DiffuseConfig diffuse;
        SamplingConfig radio; // n_delay_bins = 0 lets the pipeline size the delay window
        double p_tx_dbm = -5.0;
        double pathloss_exponent = 2.0;
        double t_stat_s = 0.12;
        double gain_sigma_db = 3.0;
        std::uint64_t seed = 0;

        void validate() const;
    };

    // Parses the scenario document. Schema violations throw ConfigError naming the JSON path.
    Scenario parse_scenario(const std::string &json_text);
    Scenario load_scenario(const std::filesystem::path &path);

    // Diffuse points along the building polylines with seeded jitter.
    std::vector<Scatterer> place_diffuse_scatterers(const std::vector<Polyline> &buildings,
                                                    const DiffuseConfig &cfg, std::uint64_t seed,
                                                    std::uint64_t first_tag);

    struct RegionSpan
    {
        int index = 0;
        double t_start_s = 0.0;
        double duration_s = 0.0;
        double t_mid() const noexcept { return t_start_s + 0.5 * duration_s; }
    };

    // Simulation window = intersection of the supports of all linked nodes; R = floor(window / T_stat).
    std::vector<RegionSpan> segment_regions(const Scenario &scenario);

    // True if the segment a-b intersects any building segment (touching counts).
    bool los_blocked(Vec2 a, Vec2 b, const std::vector<Polyline> &buildings);

    // Propagation paths of one link in one region; kinematics frozen at the region midpoint.
    StationarityRegion compute_paths(const Scenario &scenario, std::size_t link_index, int region_index,
                                     std::uint64_t realization = 0);

    struct GscmFrequencyResponse
    {
        ComplexMatrix data; // M x N_k
        double delta_f_hz = 0.0;
        std::int64_t k_first = 0;
        std::int64_t k_count = 0;
    };

    GscmFrequencyResponse frequency_response(const StationarityRegion &region, double delta_f_hz,
                                             const SamplingConfig &cfg);
}
