// SPDX-License-Identifier: Apache-2.0
//
// diffpos: diffraction-aided NLoS positioning simulator
// Copyright (C) 2026 The diffpos authors
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

#ifndef DIFFPOS_ERROR_HPP
#define DIFFPOS_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace diffpos
{
    // Precondition violations are reported as std::invalid_argument. The types below cover
    // failures that depend on the data rather than on the caller.

    // Rank-deficient normal equations, collinear/coplanar anchors, receiver on an edge.
    class singular_geometry_error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Iterative solver produced a non-finite iterate.
    class numerical_error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Empty power delay profile.
    class no_detection_error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Malformed input file; carries the 1-based line number.
    class parse_error : public std::runtime_error
    {
    public:
        parse_error(std::size_t line, const std::string &what)
            : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

        std::size_t line() const noexcept { return line_; }

    private:
        std::size_t line_;
    };
}

#endif
