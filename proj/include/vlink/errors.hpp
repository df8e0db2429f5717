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

#include <stdexcept>
#include <string>

namespace vlink
{
    // Malformed scenario, grid, table or CLI configuration. Maps to exit code 2.
    class ConfigError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // An invariant that valid inputs can never violate was violated anyway.
    class ConsistencyError : public std::logic_error
    {
    public:
        using std::logic_error::logic_error;
    };
}
