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

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace vlink
{
    inline constexpr double kNoisePowerDbm = -102.0;

    // Discretization of the condensed parameter space. Every axis is strictly increasing;
    // K may start with -infinity (NLOS).
    struct FerGrid
    {
        std::vector<double> sigma_tau_s;
        std::vector<double> f_dmax_hz;
        std::vector<double> k_db;
        std::vector<double> f_los_frac; // fractions of f_Dmax
        std::vector<double> rx_power_dbm;

        void validate() const;
        std::array<std::size_t, 5> shape() const noexcept;
        std::size_t cell_count() const noexcept;

        // The discretization used for the reference lookup table.
        static FerGrid reference();

        bool operator==(const FerGrid &) const = default;
    };

    // Index order: sigma_tau, f_dmax, k, f_los_frac, rx_power (rx power varies fastest).
    using GridIndex = std::array<std::size_t, 5>;

    std::size_t flat_index(const FerGrid &grid, const GridIndex &idx) noexcept;
    GridIndex unflatten(const FerGrid &grid, std::size_t flat) noexcept;
    CondensedParams grid_params(const FerGrid &grid, const GridIndex &idx);

    struct GridPoint
    {
        GridIndex index;
        CondensedParams psi;
    };

    // Cartesian product. With nlos_collapse, K = -inf keeps only the f_LOS fraction 0.
    std::vector<GridPoint> enumerate_grid(const FerGrid &grid, bool nlos_collapse = true);

    struct FrameBudget
    {
        double kappa = 2e-5;
        double iota = 0.01;
        std::uint64_t frames = 5'000'000;

        static FrameBudget make(double kappa, double iota);
    };

    // round(1 / (kappa * iota)).
    std::uint64_t required_frames(double kappa, double iota);

    // (psi at a grid point, frames F, seed) -> FER in [0, 1]. Must be deterministic in its arguments.
    using FerOracle = std::function<double(const CondensedParams &, std::uint64_t, std::uint64_t)>;

    // Parametric frame-error surface standing in for measured modem behaviour.
    struct SyntheticSurface
    {
        double noise_dbm = kNoisePowerDbm;
        double zeta50_db = 4.0;           // 50% point at high K
        double nlos_penalty_db = 8.0;     // added to the 50% point at K = 0 without delay diversity
        double diversity_gain_db = 4.0;   // largest NLOS delay-diversity gain
        double diversity_scale_s = 50e-9; // delay spread at which the diversity gain reaches 63%
        double slope_db = 1.2;            // logistic width
        double floor_coeff = 0.05;        // error floor per (sigma_nu / 1 kHz)^2 at K = 0
        double tap_spacing_s = 100e-9;
        std::size_t n_taps = 8;
    };

    // Frame error probability of the synthetic surface at psi.
    double synthetic_error_probability(const CondensedParams &psi, const SyntheticSurface &surface = {});

    // Binomial(F, p) frame-error count drawn by quantile coupling with one uniform keyed by seed, divided by F.
    double synthetic_fer(const CondensedParams &psi, std::uint64_t frames, std::uint64_t seed,
                         const SyntheticSurface &surface = {});

    struct TableMeta
    {
        std::string oracle_id;
        std::uint64_t seed = 0;
        double kappa = 0.0;
        double iota = 0.0;
        bool nlos_collapse = true;
    };

    struct FerTable
    {
        FerGrid grid;
        std::vector<double> values; // dense, flat_index order
        std::uint64_t frames_per_point = 0;
        TableMeta meta;

        double at(const GridIndex &idx) const { return values.at(flat_index(grid, idx)); }
        void validate() const;
    };

    struct BuildOptions
    {
        bool nlos_collapse = true;
        std::optional<std::filesystem::path> checkpoint; // progress file; resumed when present
        std::size_t checkpoint_every = 64;
    };

    // Evaluates every grid point. All points share the seed derived from the master seed.
    FerTable build_table(const FerGrid &grid, const FerOracle &oracle, const std::string &oracle_id,
                         const FrameBudget &budget, std::uint64_t seed, const BuildOptions &options = {});

    GridIndex snap(const FerGrid &grid, const CondensedParams &psi);
    double query(const FerTable &table, const CondensedParams &psi);

    std::string table_csv(const FerTable &table);
    std::string table_meta_json(const FerTable &table);

    // Writes <path> and <path>.meta.json.
    void save_table(const FerTable &table, const std::filesystem::path &path);
    FerTable load_table(const std::filesystem::path &path);
    FerTable parse_table(const std::string &csv, const std::string &meta_json);

    FerGrid parse_grid(const std::string &json_text);
    FerGrid load_grid(const std::filesystem::path &path);
    std::string grid_json(const FerGrid &grid);
}
