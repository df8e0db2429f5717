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

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace vlink
{
    // Dense row-major matrix. Rows index time/Doppler, columns index delay/frequency.
    template <typename T>
    class Matrix
    {
    public:
        Matrix() = default;
        Matrix(std::size_t rows, std::size_t cols, T fill = T{})
            : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

        std::size_t rows() const noexcept { return rows_; }
        std::size_t cols() const noexcept { return cols_; }
        std::size_t size() const noexcept { return data_.size(); }

        T &operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
        const T &operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

        T &at(std::size_t r, std::size_t c)
        {
            if (r >= rows_ || c >= cols_)
                throw std::out_of_range("Matrix index out of range.");
            return data_[r * cols_ + c];
        }
        const T &at(std::size_t r, std::size_t c) const
        {
            if (r >= rows_ || c >= cols_)
                throw std::out_of_range("Matrix index out of range.");
            return data_[r * cols_ + c];
        }

        std::span<T> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
        std::span<const T> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

        std::span<T> values() noexcept { return data_; }
        std::span<const T> values() const noexcept { return data_; }

        bool operator==(const Matrix &) const = default;

    private:
        std::size_t rows_ = 0;
        std::size_t cols_ = 0;
        std::vector<T> data_;
    };
}
