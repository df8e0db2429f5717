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
#include "vlink/gscm.hpp"

#include "vlink/errors.hpp"
#include "vlink/random.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace vlink
{
    using nlohmann::json;

    double norm(Vec2 v) noexcept { return std::hypot(v.x, v.y); }

    // ---------------------------------------------------------------------------------------------
    // Trajectories

    void Trajectory::validate() const
    {
        if (waypoints.size() < 2)
            throw std::invalid_argument("Trajectory: at least two waypoints are required.");
        for (std::size_t i = 0; i < waypoints.size(); ++i)
        {
            const auto &w = waypoints[i];
            if (!std::isfinite(w.t_s) || !std::isfinite(w.x_m) || !std::isfinite(w.y_m))
                throw std::invalid_argument("Trajectory: waypoint " + std::to_string(i) + " is not finite.");
            if (i > 0 && !(w.t_s > waypoints[i - 1].t_s))
                throw std::invalid_argument("Trajectory: waypoint times must be strictly increasing.");
        }
    }

    MakimaSpline::MakimaSpline(std::span<const double> x, std::span<const double> y)
        : x_(x.begin(), x.end()), y_(y.begin(), y.end()), slope_(x.size(), 0.0)
    {
        const std::size_t n = x_.size();
        if (n < 2 || y_.size() != n)
            throw std::invalid_argument("MakimaSpline: need at least two points and matching sizes.");
        for (std::size_t i = 1; i < n; ++i)
            if (!(x_[i] > x_[i - 1]))
                throw std::invalid_argument("MakimaSpline: abscissae must be strictly increasing.");

        if (n == 2)
        {
            const double d = (y_[1] - y_[0]) / (x_[1] - x_[0]);
            slope_ = {d, d};
            return;
        }

        // m[i + 2] holds the secant slope of interval i; two extrapolated slopes on each side.
        std::vector<double> m(n + 3);
        for (std::size_t i = 0; i + 1 < n; ++i)
            m[i + 2] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
        m[1] = 2.0 * m[2] - m[3];
        m[0] = 2.0 * m[1] - m[2];
        m[n + 1] = 2.0 * m[n] - m[n - 1];
        m[n + 2] = 2.0 * m[n + 1] - m[n];

        std::vector<double> f1(n), f2(n);
        double f12_max = 0.0;
        for (std::size_t i = 0; i < n; ++i)
        {
            f1[i] = std::abs(m[i + 3] - m[i + 2]) + 0.5 * std::abs(m[i + 3] + m[i + 2]);
            f2[i] = std::abs(m[i + 1] - m[i]) + 0.5 * std::abs(m[i + 1] + m[i]);
            f12_max = std::max(f12_max, f1[i] + f2[i]);
        }
        for (std::size_t i = 0; i < n; ++i)
        {
            const double f12 = f1[i] + f2[i];
            if (f12 > 1e-9 * f12_max)
                slope_[i] = (f1[i] * m[i + 1] + f2[i] * m[i + 2]) / f12;
            else
                slope_[i] = 0.5 * (m[i + 3] + m[i]);
        }
    }

    std::size_t MakimaSpline::segment(double t) const
    {
        if (x_.empty() || !(t >= x_.front() && t <= x_.back()))
            throw std::out_of_range("MakimaSpline: query outside the support.");
        auto it = std::upper_bound(x_.begin(), x_.end(), t);
        std::size_t i = static_cast<std::size_t>(it - x_.begin());
        return std::min(i == 0 ? 0 : i - 1, x_.size() - 2);
    }

    // Cubic in powers of (t - x_i): y_i + d_i u + c2 u^2 + c3 u^3.
    double MakimaSpline::value(double t) const
    {
        const std::size_t i = segment(t);
        if (t == x_[i + 1])
            return y_[i + 1];
        const double h = x_[i + 1] - x_[i];
        const double m = (y_[i + 1] - y_[i]) / h;
        const double c2 = (3.0 * m - 2.0 * slope_[i] - slope_[i + 1]) / h;
        const double c3 = (slope_[i] + slope_[i + 1] - 2.0 * m) / (h * h);
        const double u = t - x_[i];
        return y_[i] + u * (slope_[i] + u * (c2 + u * c3));
    }

    double MakimaSpline::derivative(double t) const
    {
        const std::size_t i = segment(t);
        const double h = x_[i + 1] - x_[i];
        const double m = (y_[i + 1] - y_[i]) / h;
        const double c2 = (3.0 * m - 2.0 * slope_[i] - slope_[i + 1]) / h;
        const double c3 = (slope_[i] + slope_[i + 1] - 2.0 * m) / (h * h);
        const double u = t - x_[i];
        return slope_[i] + u * (2.0 * c2 + 3.0 * u * c3);
    }

    TrajectoryInterpolant::TrajectoryInterpolant(const Trajectory &traj)
    {
        traj.validate();
        std::vector<double> t, x, y;
        for (const auto &w : traj.waypoints)
        {
            t.push_back(w.t_s);
            x.push_back(w.x_m);
            y.push_back(w.y_m);
        }
        x_ = MakimaSpline(t, x);
        y_ = MakimaSpline(t, y);
        t_first_ = t.front();
        t_last_ = t.back();
    }

    Kinematics TrajectoryInterpolant::at(double t) const
    {
        if (!covers(t))
            throw std::out_of_range("Trajectory query at t = " + std::to_string(t) + " s outside [" +
                                    std::to_string(t_first_) + ", " + std::to_string(t_last_) + "] s.");
        return {{x_.value(t), y_.value(t)}, {x_.derivative(t), y_.derivative(t)}};
    }

    Kinematics interpolate_trajectory(const Trajectory &traj, double t)
    {
        return TrajectoryInterpolant(traj).at(t);
    }

    Trajectory resample_trajectory(const Trajectory &traj, double spacing)
    {
        if (!(spacing > 0.0))
            throw std::invalid_argument("resample_trajectory: spacing must be positive.");
        const TrajectoryInterpolant f(traj);
        Trajectory out;
        const double t0 = f.t_first();
        const double span = f.t_last() - t0;
        const auto steps = static_cast<std::size_t>(std::floor(span / spacing + 1e-9));
        for (std::size_t k = 0; k <= steps; ++k)
        {
            const double t = std::min(t0 + static_cast<double>(k) * spacing, f.t_last());
            const auto p = f.at(t).position;
            out.waypoints.push_back({t, p.x, p.y});
        }
        if (out.waypoints.back().t_s < f.t_last() - 1e-9 * std::max(1.0, std::abs(f.t_last())))
        {
            const auto p = f.at(f.t_last()).position;
            out.waypoints.push_back({f.t_last(), p.x, p.y});
        }
        else
            out.waypoints.back().t_s = f.t_last();
        if (out.waypoints.size() < 2)
            return traj;
        return out;
    }

    // ---------------------------------------------------------------------------------------------
    // Scenario

    void Scenario::validate() const
    {
        if (nodes.size() < 2)
            throw ConfigError("$.nodes: at least two nodes are required.");
        if (links.empty())
            throw ConfigError("$.links: at least one link is required.");
        for (const auto &l : links)
            if (l.tx >= nodes.size() || l.rx >= nodes.size() || l.tx == l.rx)
                throw ConfigError("$.links: link '" + l.id + "' references invalid nodes.");
        if (!(t_stat_s > 0.0))
            throw ConfigError("$.radio.t_stat_s: must be positive.");
        if (!(pathloss_exponent > 0.0) || !std::isfinite(pathloss_exponent))
            throw ConfigError("$.pathloss_exponent: must be positive.");
        if (!(gain_sigma_db >= 0.0))
            throw ConfigError("$.gain_sigma_db: must be non-negative.");
    }

    namespace
    {
        std::string child(const std::string &path, const std::string &key) { return path + "." + key; }
        std::string child(const std::string &path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

        const json &require(const json &obj, const std::string &key, const std::string &path)
        {
            if (!obj.is_object())
                throw ConfigError(path + ": expected an object.");
            auto it = obj.find(key);
            if (it == obj.end())
                throw ConfigError(child(path, key) + ": missing required field.");
            return *it;
        }

        double number(const json &v, const std::string &path)
        {
            if (!v.is_number())
                throw ConfigError(path + ": expected a number.");
            const double d = v.get<double>();
            if (!std::isfinite(d))
                throw ConfigError(path + ": expected a finite number.");
            return d;
        }

        double number_field(const json &obj, const std::string &key, const std::string &path)
        {
            return number(require(obj, key, path), child(path, key));
        }

        double optional_number(const json &obj, const std::string &key, const std::string &path, double fallback)
        {
            if (!obj.contains(key))
                return fallback;
            return number(obj.at(key), child(path, key));
        }

        const json &array(const json &v, const std::string &path)
        {
            if (!v.is_array())
                throw ConfigError(path + ": expected an array.");
            return v;
        }

        Vec2 point(const json &v, const std::string &path)
        {
            if (!v.is_array() || v.size() != 2)
                throw ConfigError(path + ": expected [x, y].");
            return {number(v[0], child(path, 0)), number(v[1], child(path, 1))};
        }

        Trajectory trajectory(const json &v, const std::string &path)
        {
            Trajectory t;
            const auto &arr = array(v, path);
            for (std::size_t i = 0; i < arr.size(); ++i)
            {
                const auto p = child(path, i);
                if (!arr[i].is_array() || arr[i].size() != 3)
                    throw ConfigError(p + ": expected [t, x, y].");
                t.waypoints.push_back(
                    {number(arr[i][0], child(p, 0)), number(arr[i][1], child(p, 1)), number(arr[i][2], child(p, 2))});
            }
            try
            {
                t.validate();
            }
            catch (const std::invalid_argument &e)
            {
                throw ConfigError(path + ": " + e.what());
            }
            return t;
        }

        ScattererKind scatterer_kind(const json &v, const std::string &path)
        {
            if (!v.is_string())
                throw ConfigError(path + ": expected a string.");
            const auto s = v.get<std::string>();
            if (s == "static")
                return ScattererKind::StaticDiscrete;
            if (s == "mobile")
                return ScattererKind::MobileDiscrete;
            if (s == "diffuse")
                return ScattererKind::Diffuse;
            throw ConfigError(path + ": unknown scatterer kind '" + s + "' (static, mobile, diffuse).");
        }

        std::uint64_t seed_value(const json &v, const std::string &path)
        {
            if (!v.is_number_integer())
                throw ConfigError(path + ": expected an integer seed.");
            if (v.is_number_unsigned())
                return v.get<std::uint64_t>();
            const auto s = v.get<std::int64_t>();
            if (s < 0)
                throw ConfigError(path + ": seed must be non-negative.");
            return static_cast<std::uint64_t>(s);
        }
    }

    std::vector<Scatterer> place_diffuse_scatterers(const std::vector<Polyline> &buildings,
                                                    const DiffuseConfig &cfg, std::uint64_t seed,
                                                    std::uint64_t first_tag)
    {
        std::vector<Scatterer> out;
        if (!(cfg.density_per_m > 0.0))
            return out;
        const double spacing = 1.0 / cfg.density_per_m;
        std::uint64_t tag = first_tag;
        for (std::size_t b = 0; b < buildings.size(); ++b)
        {
            const auto &poly = buildings[b];
            double carry = 0.5 * spacing; // first point half a spacing into the polyline
            std::uint64_t k = 0;
            for (std::size_t s = 0; s + 1 < poly.size(); ++s)
            {
                const Vec2 a = poly[s], d = poly[s + 1] - poly[s];
                const double len = norm(d);
                if (len == 0.0)
                    continue;
                double u = carry;
                for (; u <= len; u += spacing)
                {
                    KeyedStream rng(mix_key({seed, 0xD1FFU, b, k++}));
                    const Vec2 base = a + (u / len) * d;
                    const Vec2 jitter{cfg.jitter_m * (2.0 * rng.uniform() - 1.0), cfg.jitter_m * (2.0 * rng.uniform() - 1.0)};
                    Scatterer sc;
                    sc.kind = ScattererKind::Diffuse;
                    sc.position = base + jitter;
                    sc.gain_db = cfg.gain_db;
                    sc.seed_tag = tag++;
                    out.push_back(sc);
                }
                carry = u - len;
            }
        }
        return out;
    }

    Scenario parse_scenario(const std::string &json_text)
    {
        json doc;
        try
        {
            doc = json::parse(json_text);
        }
        catch (const json::parse_error &e)
        {
            throw ConfigError(std::string("$: invalid JSON: ") + e.what());
        }
        const std::string root = "$";
        if (!doc.is_object())
            throw ConfigError("$: expected an object.");

        Scenario sc;

        const auto &radio = require(doc, "radio", root);
        const std::string rp = "$.radio";
        const double carrier = number_field(radio, "carrier_hz", rp);
        const double bandwidth = number_field(radio, "bandwidth_hz", rp);
        const double t_stat = number_field(radio, "t_stat_s", rp);
        const double t_s = number_field(radio, "t_s", rp);
        const double rolloff = optional_number(radio, "rolloff", rp, 0.9);
        sc.p_tx_dbm = optional_number(radio, "p_tx_dbm", rp, -5.0);
        const double n_bins = optional_number(radio, "n_delay_bins", rp, 0.0);
        if (n_bins < 0.0 || n_bins != std::floor(n_bins))
            throw ConfigError("$.radio.n_delay_bins: expected a non-negative integer.");
        try
        {
            sc.radio = SamplingConfig::make(carrier, bandwidth, t_stat, t_s, rolloff,
                                            n_bins > 0.0 ? static_cast<std::size_t>(n_bins) : 1);
            sc.radio.n_delay_bins = static_cast<std::size_t>(n_bins);
        }
        catch (const std::invalid_argument &e)
        {
            throw ConfigError(rp + ": " + e.what());
        }
        sc.t_stat_s = t_stat;

        const auto &nodes = array(require(doc, "nodes", root), "$.nodes");
        for (std::size_t i = 0; i < nodes.size(); ++i)
        {
            const auto p = child("$.nodes", i);
            const auto &id = require(nodes[i], "id", p);
            if (!id.is_string())
                throw ConfigError(child(p, "id") + ": expected a string.");
            Node n{id.get<std::string>(), trajectory(require(nodes[i], "waypoints", p), child(p, "waypoints"))};
            for (const auto &other : sc.nodes)
                if (other.id == n.id)
                    throw ConfigError(child(p, "id") + ": duplicate node id '" + n.id + "'.");
            n.trajectory = resample_trajectory(n.trajectory, t_stat);
            sc.nodes.push_back(std::move(n));
        }

        auto node_index = [&](const json &v, const std::string &path) -> std::size_t
        {
            if (!v.is_string())
                throw ConfigError(path + ": expected a node id.");
            const auto s = v.get<std::string>();
            for (std::size_t i = 0; i < sc.nodes.size(); ++i)
                if (sc.nodes[i].id == s)
                    return i;
            throw ConfigError(path + ": unknown node id '" + s + "'.");
        };

        if (doc.contains("links"))
        {
            const auto &links = array(doc.at("links"), "$.links");
            for (std::size_t i = 0; i < links.size(); ++i)
            {
                const auto p = child("$.links", i);
                if (!links[i].is_array() || links[i].size() != 2)
                    throw ConfigError(p + ": expected [tx_id, rx_id].");
                Link l{node_index(links[i][0], child(p, 0)), node_index(links[i][1], child(p, 1)), {}};
                l.id = sc.nodes[l.tx].id + "-" + sc.nodes[l.rx].id;
                sc.links.push_back(l);
            }
        }
        else
        {
            for (std::size_t i = 0; i < sc.nodes.size(); ++i)
                for (std::size_t j = i + 1; j < sc.nodes.size(); ++j)
                    sc.links.push_back({i, j, sc.nodes[i].id + "-" + sc.nodes[j].id});
        }

        if (doc.contains("scatterers"))
        {
            const auto &arr = array(doc.at("scatterers"), "$.scatterers");
            for (std::size_t i = 0; i < arr.size(); ++i)
            {
                const auto p = child("$.scatterers", i);
                Scatterer s;
                s.kind = scatterer_kind(require(arr[i], "kind", p), child(p, "kind"));
                s.gain_db = optional_number(arr[i], "gain_db", p, 0.0);
                s.seed_tag = arr[i].contains("seed_tag") ? seed_value(arr[i].at("seed_tag"), child(p, "seed_tag")) : i;
                if (s.kind == ScattererKind::MobileDiscrete)
                    s.trajectory = resample_trajectory(
                        trajectory(require(arr[i], "waypoints", p), child(p, "waypoints")), t_stat);
                else
                    s.position = point(require(arr[i], "position", p), child(p, "position"));
                sc.scatterers.push_back(std::move(s));
            }
        }

        if (doc.contains("buildings"))
        {
            const auto &arr = array(doc.at("buildings"), "$.buildings");
            for (std::size_t i = 0; i < arr.size(); ++i)
            {
                const auto p = child("$.buildings", i);
                const auto &poly = array(arr[i], p);
                if (poly.size() < 2)
                    throw ConfigError(p + ": a polyline needs at least two points.");
                Polyline line;
                for (std::size_t k = 0; k < poly.size(); ++k)
                    line.push_back(point(poly[k], child(p, k)));
                sc.buildings.push_back(std::move(line));
            }
        }

        sc.pathloss_exponent = optional_number(doc, "pathloss_exponent", root, 2.0);
        sc.gain_sigma_db = optional_number(doc, "gain_sigma_db", root, 3.0);
        sc.seed = doc.contains("seed") ? seed_value(doc.at("seed"), "$.seed") : 0;

        if (doc.contains("diffuse"))
        {
            const auto &d = doc.at("diffuse");
            const std::string p = "$.diffuse";
            sc.diffuse.density_per_m = number_field(d, "density_per_m", p);
            sc.diffuse.gain_db = optional_number(d, "gain_db", p, 0.0);
            sc.diffuse.jitter_m = optional_number(d, "jitter_m", p, 0.0);
            if (sc.diffuse.density_per_m < 0.0 || sc.diffuse.jitter_m < 0.0)
                throw ConfigError(p + ": density and jitter must be non-negative.");
            const std::uint64_t first_tag = 1u << 20;
            auto diffuse = place_diffuse_scatterers(sc.buildings, sc.diffuse, sc.seed, first_tag);
            sc.scatterers.insert(sc.scatterers.end(), diffuse.begin(), diffuse.end());
        }

        sc.validate();
        return sc;
    }

    Scenario load_scenario(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("Cannot open scenario file '" + path.string() + "'.");
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse_scenario(ss.str());
    }

    // ---------------------------------------------------------------------------------------------
    // Regions and paths

    std::vector<RegionSpan> segment_regions(const Scenario &scenario)
    {
        double t0 = -std::numeric_limits<double>::infinity();
        double t1 = std::numeric_limits<double>::infinity();
        for (const auto &l : scenario.links)
            for (std::size_t n : {l.tx, l.rx})
            {
                t0 = std::max(t0, scenario.nodes.at(n).trajectory.t_first());
                t1 = std::min(t1, scenario.nodes.at(n).trajectory.t_last());
            }
        const double window = t1 - t0;
        if (!(window >= scenario.t_stat_s * (1.0 - 1e-9)))
            throw std::invalid_argument("segment_regions: the simulation window is shorter than one region.");
        const auto R = static_cast<std::size_t>(std::floor(window / scenario.t_stat_s + 1e-9));
        std::vector<RegionSpan> out(R);
        for (std::size_t r = 0; r < R; ++r)
            out[r] = {static_cast<int>(r), t0 + static_cast<double>(r) * scenario.t_stat_s, scenario.t_stat_s};
        return out;
    }

    bool los_blocked(Vec2 a, Vec2 b, const std::vector<Polyline> &buildings)
    {
        auto orient = [](Vec2 p, Vec2 q, Vec2 r)
        {
            const double v = cross(q - p, r - p);
            return (v > 0.0) - (v < 0.0);
        };
        auto on_segment = [](Vec2 p, Vec2 q, Vec2 r)
        {
            return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) && std::min(p.y, q.y) <= r.y &&
                   r.y <= std::max(p.y, q.y);
        };
        for (const auto &poly : buildings)
            for (std::size_t i = 0; i + 1 < poly.size(); ++i)
            {
                const Vec2 c = poly[i], d = poly[i + 1];
                const int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
                if (o1 != o2 && o3 != o4)
                    return true;
                if ((o1 == 0 && on_segment(a, b, c)) || (o2 == 0 && on_segment(a, b, d)) ||
                    (o3 == 0 && on_segment(c, d, a)) || (o4 == 0 && on_segment(c, d, b)))
                    return true;
            }
        return false;
    }

    StationarityRegion compute_paths(const Scenario &scenario, std::size_t link_index, int region_index,
                                     std::uint64_t realization)
    {
        const auto regions = segment_regions(scenario);
        if (region_index < 0 || static_cast<std::size_t>(region_index) >= regions.size())
            throw std::out_of_range("compute_paths: region index " + std::to_string(region_index) + " out of range.");
        const auto &link = scenario.links.at(link_index);
        const auto span = regions[static_cast<std::size_t>(region_index)];
        const double t = span.t_mid();

        const auto tx = TrajectoryInterpolant(scenario.nodes[link.tx].trajectory).at(t);
        const auto rx = TrajectoryInterpolant(scenario.nodes[link.rx].trajectory).at(t);

        const double fc = scenario.radio.carrier_hz;
        const double lambda = kSpeedOfLight / fc;
        const double a0 = lambda / (4.0 * kPi);
        const double half_n = 0.5 * scenario.pathloss_exponent;
        const double half_region = 0.5 * span.duration_s;

        StationarityRegion region;
        region.index = region_index;
        region.duration_s = span.duration_s;
        region.t_start_s = span.t_start_s;

        auto phase = [&](std::uint64_t tag)
        {
            KeyedStream rng(mix_key({scenario.seed, realization, 0x9A5EU, link_index, tag,
                                     static_cast<std::uint64_t>(region_index)}));
            return rng.uniform();
        };
        // Delay at the region start, consistent with the Doppler frozen at the midpoint.
        auto make_path = [&](double length, double length_rate, double amplitude, std::uint64_t tag, PathKind kind)
        {
            PropagationPath p;
            p.doppler_hz = -fc / kSpeedOfLight * length_rate;
            p.delay_s = length / kSpeedOfLight + (p.doppler_hz / fc) * half_region;
            p.amplitude = amplitude;
            p.phase_cycles = phase(tag);
            p.kind = kind;
            return p;
        };

        const Vec2 d = tx.position - rx.position;
        const double dist = norm(d);
        if (!(dist > 1e-9))
            throw std::domain_error("compute_paths: transmitter and receiver coincide.");
        if (!los_blocked(tx.position, rx.position, scenario.buildings))
        {
            const double rate = dot(d, tx.velocity - rx.velocity) / dist;
            region.paths.push_back(make_path(dist, rate, a0 * std::pow(dist, -half_n), ~0ULL, PathKind::Los));
        }

        for (const auto &s : scenario.scatterers)
        {
            Kinematics sk{s.position, {0.0, 0.0}};
            if (s.kind == ScattererKind::MobileDiscrete)
            {
                if (!s.trajectory || !s.trajectory->covers(t))
                    continue;
                sk = TrajectoryInterpolant(*s.trajectory).at(t);
            }
            const Vec2 d1 = tx.position - sk.position;
            const Vec2 d2 = rx.position - sk.position;
            const double l1 = norm(d1), l2 = norm(d2);
            if (!(l1 > 1e-9) || !(l2 > 1e-9))
                throw std::domain_error("compute_paths: a scatterer coincides with a node.");
            const double rate = dot(d1, tx.velocity - sk.velocity) / l1 + dot(d2, rx.velocity - sk.velocity) / l2;

            KeyedStream gain_rng(mix_key({scenario.seed, realization, 0x6A1EU, s.seed_tag}));
            const double gain_db = s.gain_db + scenario.gain_sigma_db * gain_rng.normal();
            const double amplitude = a0 * std::pow(l1 * l2, -half_n) * std::pow(10.0, gain_db / 20.0);

            PathKind kind = PathKind::Diffuse;
            if (s.kind == ScattererKind::StaticDiscrete)
                kind = PathKind::StaticDiscrete;
            else if (s.kind == ScattererKind::MobileDiscrete)
                kind = PathKind::MobileDiscrete;
            region.paths.push_back(make_path(l1 + l2, rate, amplitude, s.seed_tag, kind));
        }
        return region;
    }

    GscmFrequencyResponse frequency_response(const StationarityRegion &region, double delta_f_hz,
                                             const SamplingConfig &cfg)
    {
        if (!(delta_f_hz > 0.0))
            throw std::invalid_argument("frequency_response: delta_f must be positive.");
        const auto half = static_cast<std::int64_t>(std::floor(cfg.bandwidth_hz / (2.0 * delta_f_hz)));
        GscmFrequencyResponse out;
        out.delta_f_hz = delta_f_hz;
        out.k_first = -half;
        out.k_count = 2 * half;
        out.data = ComplexMatrix(cfg.m_samples, static_cast<std::size_t>(out.k_count));

        std::vector<ComplexSample> spectral(static_cast<std::size_t>(out.k_count));
        for (const auto &p : region.paths)
        {
            const double carrier = p.kind == PathKind::Los ? 0.0 : cfg.carrier_hz;
            for (std::int64_t k = 0; k < out.k_count; ++k)
            {
                const double f = static_cast<double>(out.k_first + k) * delta_f_hz;
                // Carrier and subcarrier phases reduced separately to keep the cycle count small.
                const double cycles = std::fmod(carrier * p.delay_s, 1.0) + f * p.delay_s;
                spectral[static_cast<std::size_t>(k)] = std::polar(1.0, -kTwoPi * cycles);
            }
            const double nu = p.doppler_hz * cfg.t_s;
            for (std::size_t m = 0; m < cfg.m_samples; ++m)
            {
                const ComplexSample a = std::polar(p.amplitude, kTwoPi * (p.phase_cycles - nu * static_cast<double>(m)));
                auto row = out.data.row(m);
                for (std::size_t k = 0; k < row.size(); ++k)
                    row[k] += a * spectral[k];
            }
        }
        return out;
    }
}
