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

#ifndef DIFFPOS_CONSTANTS_HPP
#define DIFFPOS_CONSTANTS_HPP

namespace diffpos
{
    constexpr double speed_of_light = 299792458.0;     // m/s, exact
    constexpr double vacuum_permittivity = 8.8541878128e-12; // F/m
    constexpr double vacuum_permeability = 1.25663706212e-6; // H/m
    constexpr double boltzmann = 1.380649e-23;         // J/K, exact
    constexpr double pi = 3.14159265358979323846;
}

#endif
