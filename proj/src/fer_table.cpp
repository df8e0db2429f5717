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
#include "vlink/fer_table.hpp"

#include "vlink/doppler_analysis.hpp"
#include "vlink/errors.hpp"
#include "vlink/random.hpp"

#include <boost/math/distributions/binomial.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace vlink
{
    using nlohmann::json;

    namespace
    {
        constexpr double kNegInf = -std::numeric_limits<double>::infinity();

        std::string fmt9(double v)
        {
            if (std::isinf(v))
                return v < 0 ? "-inf" : "inf";
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.9g", v);
            return buf;
        }

        double parse_number(const std::string &s, const std::string &what)
        {
            if (s == "-inf")
                return kNegInf;
            std::size_t pos = 0;
            double v = 0.0;
            try
            {
                v = std::stod(s, &pos);
            }
            catch (const std::exception &)
            {
                throw ConfigError(what + ": cannot parse '" + s + "' as a number.");
            }
            if (pos != s.size())
                throw ConfigError(what + ": trailing characters in '" + s + "'.");
            return v;
        }

        void check_axis(const std::vector<double> &axis, const std::string &name, bool allow_neg_inf)
        {
            if (axis.empty())
                throw std::invalid_argument("FerGrid: axis " + name + " is empty.");
            for (std::size_t i = 0; i < axis.size(); ++i)
            {
                const double v = axis[i];
                const bool ok = std::isfinite(v) || (allow_neg_inf && i == 0 && v == kNegInf);
                if (!ok)
                    throw std::invalid_argument("FerGrid: axis " + name + " holds a non-finite value.");
                if (i > 0 && !(v > axis[i - 1]))
                    throw std::invalid_argument("FerGrid: axis " + name + " must be strictly increasing.");
            }
        }

        std::size_t nearest(const std::vector<double> &axis, double v)
        {
            if (std::isnan(v))
                return 0;
            if (v == kNegInf)
                return 0;
            std::size_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < axis.size(); ++i)
            {
                const double d = std::abs(v - axis[i]);
                if (d < best_d)
                {
                    best_d = d;
                    best = i;
                }
            }
            return best;
        }

        double linear_k(double k_db) { return k_db == kNegInf ? 0.0 : std::pow(10.0, k_db / 10.0); }

        // Tap powers of the exponential PDP that realizes sigma_tau on the surface's tap grid.
        std::vector<double> surface_taps(double sigma_tau_s, const SyntheticSurface &s)
        {
            if (!(sigma_tau_s > 0.0))
                return {1.0};
            const double limit = uniform_limit_delay_spread(s.tap_spacing_s, s.n_taps);
            if (!(sigma_tau_s < limit))
                return std::vector<double>(s.n_taps, 1.0 / static_cast<double>(s.n_taps));
            const double tau0 = solve_tau0_for_target(sigma_tau_s, s.tap_spacing_s, s.n_taps);
            return exp_pdp({tau0, s.tap_spacing_s, s.n_taps});
        }

        std::string checkpoint_header(const FerGrid &grid, const std::string &oracle_id, std::uint64_t frames,
                                      std::uint64_t seed, bool collapse)
        {
            std::ostringstream os;
            os << "# vlink-checkpoint oracle=" << oracle_id << " seed=" << seed << " frames=" << frames
               << " cells=" << grid.cell_count() << " collapse=" << collapse << " grid=" << json::parse(grid_json(grid)).dump();
            return os.str();
        }

        void write_file_atomic(const std::filesystem::path &path, const std::string &content)
        {
            auto tmp = path;
            tmp += ".tmp";
            {
                std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
                if (!out)
                    throw std::runtime_error("Cannot write '" + tmp.string() + "'.");
                out << content;
                if (!out)
                    throw std::runtime_error("Write to '" + tmp.string() + "' failed.");
            }
            std::filesystem::rename(tmp, path);
        }

        std::string read_file(const std::filesystem::path &path)
        {
            std::ifstream in(path, std::ios::binary);
            if (!in)
                throw ConfigError("Cannot open '" + path.string() + "'.");
            std::ostringstream ss;
            ss << in.rdbuf();
            return ss.str();
        }

        std::vector<std::string> split(const std::string &line, char sep)
        {
            std::vector<std::string> out;
            std::string cur;
            std::istringstream is(line);
            while (std::getline(is, cur, sep))
                out.push_back(cur);
            if (!line.empty() && line.back() == sep)
                out.emplace_back();
            return out;
        }

        std::vector<double> axis_from_json(const json &doc, const std::string &key, bool allow_neg_inf)
        {
            const std::string path = "$." + key;
            if (!doc.contains(key))
                throw ConfigError(path + ": missing required field.");
            const auto &v = doc.at(key);
            std::vector<double> out;
            if (v.is_object())
            {
                for (const char *k : {"from", "to", "step"})
                    if (!v.contains(k) || !v.at(k).is_number())
                        throw ConfigError(path + "." + k + ": expected a number.");
                const double from = v.at("from").get<double>(), to = v.at("to").get<double>(), step = v.at("step").get<double>();
                if (!(step > 0.0) || !(to >= from))
                    throw ConfigError(path + ": expected from <= to and step > 0.");
                const auto n = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9));
                for (std::size_t i = 0; i <= n; ++i)
                    out.push_back(std::round((from + static_cast<double>(i) * step) * 1e9) / 1e9);
                return out;
            }
            if (!v.is_array())
                throw ConfigError(path + ": expected an array or {from, to, step}.");
            for (std::size_t i = 0; i < v.size(); ++i)
            {
                const auto p = path + "[" + std::to_string(i) + "]";
                if (v[i].is_number())
                    out.push_back(v[i].get<double>());
                else if (allow_neg_inf && v[i].is_string() && v[i].get<std::string>() == "-inf")
                    out.push_back(kNegInf);
                else
                    throw ConfigError(p + (allow_neg_inf ? ": expected a number or \"-inf\"." : ": expected a number."));
            }
            return out;
        }
    }

    // ---------------------------------------------------------------------------------------------
    // Grid

    void FerGrid::validate() const
    {
        check_axis(sigma_tau_s, "sigma_tau", false);
        check_axis(f_dmax_hz, "f_dmax", false);
        check_axis(k_db, "k", true);
        check_axis(f_los_frac, "f_los_frac", false);
        check_axis(rx_power_dbm, "rx_power", false);
        for (double v : sigma_tau_s)
            if (v < 0.0)
                throw std::invalid_argument("FerGrid: delay spreads must be non-negative.");
        for (double v : f_dmax_hz)
            if (v < 0.0)
                throw std::invalid_argument("FerGrid: Doppler bandwidths must be non-negative.");
        for (double v : f_los_frac)
            if (v < 0.0 || v > 1.0)
                throw std::invalid_argument("FerGrid: f_LOS fractions must lie in [0, 1].");
    }

    std::array<std::size_t, 5> FerGrid::shape() const noexcept
    {
        return {sigma_tau_s.size(), f_dmax_hz.size(), k_db.size(), f_los_frac.size(), rx_power_dbm.size()};
    }

    std::size_t FerGrid::cell_count() const noexcept
    {
        std::size_t n = 1;
        for (auto s : shape())
            n *= s;
        return n;
    }

    FerGrid FerGrid::reference()
    {
        FerGrid g;
        g.sigma_tau_s = {25e-9, 50e-9, 82e-9};
        g.f_dmax_hz = {10.0, 50.0, 100.0, 500.0, 1000.0};
        g.k_db = {kNegInf, 10.0, 15.0, 20.0};
        g.f_los_frac = {0.0, 0.5, 1.0};
        for (int i = 0; i < 9; ++i)
            g.rx_power_dbm.push_back(std::round((-94.9 + 2.0 * i) * 10.0) / 10.0);
        return g;
    }

    std::size_t flat_index(const FerGrid &grid, const GridIndex &idx) noexcept
    {
        const auto s = grid.shape();
        std::size_t f = 0;
        for (std::size_t a = 0; a < 5; ++a)
            f = f * s[a] + idx[a];
        return f;
    }

    GridIndex unflatten(const FerGrid &grid, std::size_t flat) noexcept
    {
        const auto s = grid.shape();
        GridIndex idx{};
        for (std::size_t a = 5; a-- > 0;)
        {
            idx[a] = flat % s[a];
            flat /= s[a];
        }
        return idx;
    }

    CondensedParams grid_params(const FerGrid &grid, const GridIndex &idx)
    {
        CondensedParams p;
        p.sigma_tau_s = grid.sigma_tau_s.at(idx[0]);
        p.f_dmax_hz = grid.f_dmax_hz.at(idx[1]);
        p.k_db = grid.k_db.at(idx[2]);
        p.f_los_hz = p.k_db == kNegInf ? 0.0 : grid.f_los_frac.at(idx[3]) * p.f_dmax_hz;
        p.rx_power_dbm = grid.rx_power_dbm.at(idx[4]);
        return p;
    }

    std::vector<GridPoint> enumerate_grid(const FerGrid &grid, bool nlos_collapse)
    {
        grid.validate();
        std::vector<GridPoint> out;
        const std::size_t n = grid.cell_count();
        out.reserve(n);
        for (std::size_t f = 0; f < n; ++f)
        {
            const auto idx = unflatten(grid, f);
            if (nlos_collapse && grid.k_db[idx[2]] == kNegInf && idx[3] != 0)
                continue;
            out.push_back({idx, grid_params(grid, idx)});
        }
        return out;
    }

    // ---------------------------------------------------------------------------------------------
    // Budget and synthetic oracle

    std::uint64_t required_frames(double kappa, double iota)
    {
        if (!(kappa > 0.0) || !(iota > 0.0) || !std::isfinite(kappa) || !std::isfinite(iota))
            throw std::invalid_argument("required_frames: kappa and iota must be positive.");
        const double f = std::round(1.0 / (kappa * iota));
        if (!(f >= 1.0) || f > 1e15)
            throw std::invalid_argument("required_frames: frame count out of range.");
        return static_cast<std::uint64_t>(f);
    }

    FrameBudget FrameBudget::make(double kappa, double iota)
    {
        return {kappa, iota, required_frames(kappa, iota)};
    }

    double synthetic_error_probability(const CondensedParams &psi, const SyntheticSurface &s)
    {
        const double K = linear_k(psi.k_db);
        const double inv = std::isinf(K) ? 0.0 : 1.0 / (1.0 + K);

        DopplerEnv env;
        env.f_dmax_hz = std::abs(psi.f_dmax_hz);
        env.f_los_hz = std::clamp(psi.f_los_hz, -env.f_dmax_hz, env.f_dmax_hz);
        env.k_linear = K;
        env.tap_powers = surface_taps(psi.sigma_tau_s, s);
        const double sigma_nu = analytic_rms_doppler(env);

        const double zeta = psi.rx_power_dbm - s.noise_dbm;
        const double diversity = s.diversity_gain_db * (1.0 - std::exp(-std::max(psi.sigma_tau_s, 0.0) / s.diversity_scale_s));
        const double zeta50 = s.zeta50_db + (s.nlos_penalty_db - diversity) * inv;
        const double logistic = 1.0 / (1.0 + std::exp((zeta - zeta50) / s.slope_db));
        const double x = sigma_nu / 1000.0;
        const double floor = std::min(1.0, s.floor_coeff * x * x * inv);
        return std::clamp(floor + (1.0 - floor) * logistic, 0.0, 1.0);
    }

    double synthetic_fer(const CondensedParams &psi, std::uint64_t frames, std::uint64_t seed,
                         const SyntheticSurface &surface)
    {
        if (frames == 0)
            throw std::invalid_argument("synthetic_fer: at least one frame is required.");
        const double p = synthetic_error_probability(psi, surface);
        if (p <= 0.0)
            return 0.0;
        if (p >= 1.0)
            return 1.0;
        KeyedStream rng(mix_key({seed, 0xFE5U}));
        const double u = rng.uniform();
        const boost::math::binomial_distribution<double> dist(static_cast<double>(frames), p);
        const double errors = std::floor(boost::math::quantile(dist, u) + 0.5);
        return std::clamp(errors / static_cast<double>(frames), 0.0, 1.0);
    }

    // ---------------------------------------------------------------------------------------------
    // Table build

    void FerTable::validate() const
    {
        grid.validate();
        if (values.size() != grid.cell_count())
            throw std::invalid_argument("FerTable: value count does not match the grid.");
        for (double v : values)
            if (!(v >= 0.0 && v <= 1.0))
                throw std::invalid_argument("FerTable: FER values must lie in [0, 1].");
    }

    FerTable build_table(const FerGrid &grid, const FerOracle &oracle, const std::string &oracle_id,
                         const FrameBudget &budget, std::uint64_t seed, const BuildOptions &options)
    {
        grid.validate();
        if (!oracle)
            throw std::invalid_argument("build_table: no oracle supplied.");
        if (budget.frames == 0)
            throw std::invalid_argument("build_table: the frame budget must be positive.");

        FerTable table;
        table.grid = grid;
        table.frames_per_point = budget.frames;
        table.meta = {oracle_id, seed, budget.kappa, budget.iota, options.nlos_collapse};
        table.values.assign(grid.cell_count(), std::numeric_limits<double>::quiet_NaN());

        const auto points = enumerate_grid(grid, options.nlos_collapse);
        const std::uint64_t point_seed = mix_key({seed, 0x7AB1EU});
        const std::string header = checkpoint_header(grid, oracle_id, budget.frames, seed, options.nlos_collapse);

        std::map<std::size_t, double> done;
        if (options.checkpoint && std::filesystem::exists(*options.checkpoint))
        {
            std::istringstream in(read_file(*options.checkpoint));
            std::string line;
            std::getline(in, line);
            if (line != header)
                throw ConfigError("Checkpoint '" + options.checkpoint->string() +
                                  "' belongs to a different build configuration.");
            while (std::getline(in, line))
            {
                if (line.empty())
                    continue;
                const auto cols = split(line, ',');
                if (cols.size() != 2)
                    throw ConfigError("Checkpoint '" + options.checkpoint->string() + "': malformed row.");
                const auto idx = static_cast<std::size_t>(std::stoull(cols[0]));
                std::uint64_t bits = std::stoull(cols[1], nullptr, 16);
                double v;
                std::memcpy(&v, &bits, sizeof v);
                done[idx] = v;
            }
        }

        auto write_checkpoint = [&]()
        {
            std::ostringstream os;
            os << header << '\n';
            for (const auto &[idx, v] : done)
            {
                std::uint64_t bits;
                std::memcpy(&bits, &v, sizeof bits);
                char buf[24];
                std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(bits));
                os << idx << ',' << buf << '\n';
            }
            write_file_atomic(*options.checkpoint, os.str());
        };

        std::size_t since_checkpoint = 0;
        for (const auto &pt : points)
        {
            const std::size_t f = flat_index(grid, pt.index);
            if (auto it = done.find(f); it != done.end())
            {
                table.values[f] = it->second;
                continue;
            }
            double v;
            try
            {
                v = oracle(pt.psi, budget.frames, point_seed);
            }
            catch (const std::exception &e)
            {
                std::ostringstream os;
                os << "Oracle '" << oracle_id << "' failed at sigma_tau=" << pt.psi.sigma_tau_s * 1e9
                   << " ns, f_dmax=" << pt.psi.f_dmax_hz << " Hz, k=" << fmt9(pt.psi.k_db) << " dB, f_los="
                   << pt.psi.f_los_hz << " Hz, rx_power=" << pt.psi.rx_power_dbm << " dBm: " << e.what();
                throw std::runtime_error(os.str());
            }
            if (!(v >= 0.0 && v <= 1.0))
                throw std::runtime_error("Oracle '" + oracle_id + "' returned FER " + std::to_string(v) +
                                         " outside [0, 1].");
            table.values[f] = v;
            if (options.checkpoint)
            {
                done[f] = v;
                if (++since_checkpoint >= std::max<std::size_t>(options.checkpoint_every, 1))
                {
                    write_checkpoint();
                    since_checkpoint = 0;
                }
            }
        }
        if (options.checkpoint && since_checkpoint > 0)
            write_checkpoint();

        // Collapsed NLOS cells share the f_LOS = 0 value.
        for (std::size_t f = 0; f < table.values.size(); ++f)
            if (std::isnan(table.values[f]))
            {
                auto idx = unflatten(grid, f);
                idx[3] = 0;
                table.values[f] = table.values[flat_index(grid, idx)];
            }
        table.validate();
        return table;
    }

    // ---------------------------------------------------------------------------------------------
    // Query

    GridIndex snap(const FerGrid &grid, const CondensedParams &psi)
    {
        GridIndex idx{};
        idx[0] = nearest(grid.sigma_tau_s, psi.sigma_tau_s);
        idx[1] = nearest(grid.f_dmax_hz, psi.f_dmax_hz);
        if (psi.k_db == kNegInf)
            idx[2] = 0;
        else
        {
            std::vector<double> finite;
            std::size_t offset = 0;
            for (double k : grid.k_db)
                if (std::isfinite(k))
                    finite.push_back(k);
                else
                    ++offset;
            idx[2] = finite.empty() ? 0 : offset + nearest(finite, psi.k_db);
        }
        const double frac = psi.f_dmax_hz > 0.0 ? std::abs(psi.f_los_hz) / psi.f_dmax_hz : 0.0;
        idx[3] = nearest(grid.f_los_frac, frac);
        idx[4] = nearest(grid.rx_power_dbm, psi.rx_power_dbm);
        return idx;
    }

    double query(const FerTable &table, const CondensedParams &psi)
    {
        return table.values[flat_index(table.grid, snap(table.grid, psi))];
    }

    // ---------------------------------------------------------------------------------------------
    // Persistence

    std::string table_csv(const FerTable &table)
    {
        std::string out = "sigma_tau_ns,f_dmax_hz,k_db,f_los_frac,rx_power_dbm,fer,frames\n";
        const auto &g = table.grid;
        for (std::size_t f = 0; f < table.values.size(); ++f)
        {
            const auto idx = unflatten(g, f);
            out += fmt9(g.sigma_tau_s[idx[0]] * 1e9) + ',' + fmt9(g.f_dmax_hz[idx[1]]) + ',' + fmt9(g.k_db[idx[2]]) +
                   ',' + fmt9(g.f_los_frac[idx[3]]) + ',' + fmt9(g.rx_power_dbm[idx[4]]) + ',' +
                   fmt9(table.values[f]) + ',' + std::to_string(table.frames_per_point) + '\n';
        }
        return out;
    }

    std::string table_meta_json(const FerTable &table)
    {
        json j;
        j["format"] = "vlink-fer-table/1";
        j["oracle"] = table.meta.oracle_id;
        j["seed"] = table.meta.seed;
        j["kappa"] = table.meta.kappa;
        j["iota"] = table.meta.iota;
        j["frames"] = table.frames_per_point;
        j["nlos_collapse"] = table.meta.nlos_collapse;
        return j.dump(2) + "\n";
    }

    void save_table(const FerTable &table, const std::filesystem::path &path)
    {
        table.validate();
        write_file_atomic(path, table_csv(table));
        auto meta = path;
        meta += ".meta.json";
        write_file_atomic(meta, table_meta_json(table));
    }

    FerTable parse_table(const std::string &csv, const std::string &meta_json)
    {
        std::istringstream in(csv);
        std::string line;
        if (!std::getline(in, line) || line != "sigma_tau_ns,f_dmax_hz,k_db,f_los_frac,rx_power_dbm,fer,frames")
            throw ConfigError("FER table: unexpected CSV header.");

        struct Row
        {
            std::array<double, 5> coord;
            double fer;
            std::uint64_t frames;
        };
        std::vector<Row> rows;
        std::array<std::vector<double>, 5> axes;
        std::size_t lineno = 1;
        while (std::getline(in, line))
        {
            ++lineno;
            if (line.empty())
                continue;
            const auto cols = split(line, ',');
            const std::string where = "FER table line " + std::to_string(lineno);
            if (cols.size() != 7)
                throw ConfigError(where + ": expected 7 columns.");
            Row r{};
            for (std::size_t a = 0; a < 5; ++a)
            {
                r.coord[a] = parse_number(cols[a], where);
                if (std::find(axes[a].begin(), axes[a].end(), r.coord[a]) == axes[a].end())
                    axes[a].push_back(r.coord[a]);
            }
            r.fer = parse_number(cols[5], where);
            r.frames = static_cast<std::uint64_t>(parse_number(cols[6], where));
            rows.push_back(r);
        }

        FerTable t;
        for (auto &a : axes)
            std::sort(a.begin(), a.end());
        t.grid.sigma_tau_s = axes[0];
        for (double &v : t.grid.sigma_tau_s)
            v /= 1e9;
        t.grid.f_dmax_hz = axes[1];
        t.grid.k_db = axes[2];
        t.grid.f_los_frac = axes[3];
        t.grid.rx_power_dbm = axes[4];
        try
        {
            t.grid.validate();
        }
        catch (const std::invalid_argument &e)
        {
            throw ConfigError(std::string("FER table: ") + e.what());
        }
        if (rows.size() != t.grid.cell_count())
            throw ConfigError("FER table: row count does not match the grid (missing or duplicate rows).");

        t.values.assign(rows.size(), std::numeric_limits<double>::quiet_NaN());
        for (std::size_t i = 0; i < rows.size(); ++i)
        {
            GridIndex idx{};
            for (std::size_t a = 0; a < 5; ++a)
                idx[a] = static_cast<std::size_t>(std::lower_bound(axes[a].begin(), axes[a].end(), rows[i].coord[a]) -
                                                  axes[a].begin());
            const auto f = flat_index(t.grid, idx);
            if (f != i)
                throw ConfigError("FER table: rows are not in grid order.");
            t.values[f] = rows[i].fer;
            t.frames_per_point = rows[i].frames;
        }

        json meta;
        try
        {
            meta = json::parse(meta_json);
            t.meta.oracle_id = meta.at("oracle").get<std::string>();
            t.meta.seed = meta.at("seed").get<std::uint64_t>();
            t.meta.kappa = meta.at("kappa").get<double>();
            t.meta.iota = meta.at("iota").get<double>();
            t.meta.nlos_collapse = meta.value("nlos_collapse", true);
            if (meta.at("frames").get<std::uint64_t>() != t.frames_per_point)
                throw ConfigError("FER table: frame count differs between table and metadata.");
        }
        catch (const json::exception &e)
        {
            throw ConfigError(std::string("FER table metadata: ") + e.what());
        }
        try
        {
            t.validate();
        }
        catch (const std::invalid_argument &e)
        {
            throw ConfigError(std::string("FER table: ") + e.what());
        }
        return t;
    }

    FerTable load_table(const std::filesystem::path &path)
    {
        auto meta = path;
        meta += ".meta.json";
        return parse_table(read_file(path), read_file(meta));
    }

    FerGrid parse_grid(const std::string &json_text)
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
        if (!doc.is_object())
            throw ConfigError("$: expected an object.");
        FerGrid g;
        g.sigma_tau_s = axis_from_json(doc, "sigma_tau_ns", false);
        for (double &v : g.sigma_tau_s)
            v /= 1e9;
        g.f_dmax_hz = axis_from_json(doc, "f_dmax_hz", false);
        g.k_db = axis_from_json(doc, "k_db", true);
        g.f_los_frac = axis_from_json(doc, "f_los_frac", false);
        g.rx_power_dbm = axis_from_json(doc, "rx_power_dbm", false);
        try
        {
            g.validate();
        }
        catch (const std::invalid_argument &e)
        {
            throw ConfigError(std::string("$: ") + e.what());
        }
        return g;
    }

    FerGrid load_grid(const std::filesystem::path &path) { return parse_grid(read_file(path)); }

    std::string grid_json(const FerGrid &grid)
    {
        json j;
        auto ns = json::array();
        for (double v : grid.sigma_tau_s)
            ns.push_back(std::round(v * 1e15) / 1e6);
        j["sigma_tau_ns"] = ns;
        j["f_dmax_hz"] = grid.f_dmax_hz;
        auto k = json::array();
        for (double v : grid.k_db)
            if (v == kNegInf)
                k.push_back("-inf");
            else
                k.push_back(v);
        j["k_db"] = k;
        j["f_los_frac"] = grid.f_los_frac;
        j["rx_power_dbm"] = grid.rx_power_dbm;
        return j.dump(2) + "\n";
    }
}
