// SPDX-License-Identifier: Apache-2.0
//
// isacsim - coupled ISAC channel simulation and analysis
// Copyright (C) 2026 The isacsim Authors
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

namespace isac
{
    /// Base class of every error raised by the library. `code()` is a stable
    /// identifier that the CLI maps onto exit codes.
    class Error : public std::runtime_error
    {
    public:
        Error(std::string code, const std::string &what)
            : std::runtime_error(what), code_(std::move(code)) {}

        const std::string &code() const noexcept { return code_; }

    private:
        std::string code_;
    };

    /// Invalid configuration or parameter values.
    class ConfigError : public Error
    {
    public:
        explicit ConfigError(const std::string &what, std::string code = "E_CONFIG")
            : Error(std::move(code), what) {}
    };

    class GeometryError : public Error
    {
    public:
        explicit GeometryError(const std::string &what) : Error("E_GEOMETRY", what) {}
    };

    /// A path fell outside a grid axis under the strict policy.
    class RangeError : public Error
    {
    public:
        explicit RangeError(const std::string &what) : Error("E_RANGE", what) {}
    };

    class DimensionError : public Error
    {
    public:
        explicit DimensionError(const std::string &what) : Error("E_DIMENSION", what) {}
    };

    /// Realizations that cannot be combined (antenna, timestamp or target mismatch).
    class CompositionError : public Error
    {
    public:
        explicit CompositionError(const std::string &what) : Error("E_COMPOSITION", what) {}
    };

    /// Too few samples or an all-zero distribution.
    class DataError : public Error
    {
    public:
        explicit DataError(const std::string &what) : Error("E_DATA", what) {}
    };

    /// Adaptive quadrature did not reach the requested tolerance.
    class ConvergenceError : public Error
    {
    public:
        ConvergenceError(const std::string &what, double estimate, double achieved_rel_change)
            : Error("E_CONVERGENCE", what), estimate_(estimate), achieved_(achieved_rel_change) {}

        double estimate() const noexcept { return estimate_; }
        double achieved_relative_change() const noexcept { return achieved_; }

    private:
        double estimate_;
        double achieved_;
    };

    class IoError : public Error
    {
    public:
        explicit IoError(const std::string &what) : Error("E_IO", what) {}
    };
}
