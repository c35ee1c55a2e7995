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

#include "oracles.hpp"

#include "diffpos/constants.hpp"
#include "diffpos/materials.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

using namespace diffpos;
using Catch::Approx;

TEST_CASE("ITU power-law parameters", "[materials]")
{
    const Material c = concrete();
    for (double f : {0.7e9, 3.5e9, 28e9})
        CHECK(permittivity(c, f) == 5.31);
    CHECK(permittivity({"vac", 1.0, 0.0, 0.0, 0.0}, 5e9) == 1.0);
    CHECK(permittivity({"lin", 2.0, 1.0, 0.0, 0.0}, 3e9) == Approx(6.0).epsilon(1e-15));

    CHECK(conductivity(c, 3.5e9) == Approx(oracle::concrete_sigma_3p5GHz).epsilon(1e-14));
    CHECK(conductivity({"x", 1.0, 0.0, 0.0, 0.9}, 17e9) == 0.0);
    CHECK(conductivity({"x", 1.0, 0.0, 0.4, 0.0}, 17e9) == 0.4);
    double prev = 0.0;
    for (double f = 1e9; f <= 40e9; f += 1e9)
    {
        const double s = conductivity(c, f);
        CHECK(s > prev);
        prev = s;
    }

    CHECK_THROWS_AS(permittivity(c, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((Material{"bad", -1.0, 0.0, 0.0, 0.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((Material{"bad", 1.0, 0.0, -0.1, 0.0}.validate()), std::invalid_argument);
}

TEST_CASE("slab transmission loss", "[materials]")
{
    CHECK(transmission_loss_db(concrete_slab(0.30), 3.5e9) == Approx(oracle::concrete_30cm_3p5GHz_dB).epsilon(1e-12));
    CHECK(transmission_loss_db(plasterboard(), 0.013, 28e9) == Approx(oracle::plasterboard_13mm_28GHz_dB).epsilon(1e-12));

    const Material lossless{"glass-ish", 6.0, 0.0, 0.0, 0.0};
    CHECK(transmission_loss_db(lossless, 0.1, 10e9) == 0.0);
    CHECK(transmission_loss_db(air(), 0.089, 10e9) == 0.0);

    SECTION("drywall is the sum of its layers")
    {
        const double f = 15e9;
        CHECK(transmission_loss_db(drywall_slab(), f) == Approx(2.0 * transmission_loss_db(plasterboard(), 0.013, f)).epsilon(1e-14));
    }

    SECTION("matches an extended-precision evaluation")
    {
        for (const Material &m : {concrete(), plasterboard()})
            for (double t : {0.013, 0.1, 0.3})
                for (double f = 0.4e9; f <= 60e9; f *= 1.37)
                    CHECK(transmission_loss_db(m, t, f) == Approx(oracle::slab_loss_db(m.a, m.b, m.c, m.d, t, f)).epsilon(1e-12));
    }

    SECTION("monotone in thickness and frequency")
    {
        for (const Material &m : {concrete(), plasterboard()})
        {
            double prev = -1.0;
            for (double f = 1e9; f <= 40e9; f += 0.25e9)
            {
                const double l = transmission_loss_db(m, 0.3, f);
                CHECK(l > prev);
                CHECK(std::isfinite(l));
                prev = l;
            }
            prev = -1.0;
            for (double t = 0.01; t <= 0.5; t += 0.01)
            {
                const double l = transmission_loss_db(m, t, 5e9);
                CHECK(l > prev);
                prev = l;
            }
        }
    }

    SECTION("opaque slabs block")
    {
        SlabSpec s = concrete_slab();
        s.opaque = true;
        CHECK(transmission_loss_db(s, 3e9) == std::numeric_limits<double>::infinity());
    }

    CHECK_THROWS_AS((SlabSpec{"bad", {{concrete(), 0.0}}, false}.validate()), std::invalid_argument);
}

TEST_CASE("free-space loss", "[materials]")
{
    const double f = 3.5e9;
    CHECK(free_space_path_loss_db(speed_of_light / (4.0 * pi * f), f) == Approx(0.0).margin(1e-12));
    CHECK(free_space_path_loss_db(40.0, f) - free_space_path_loss_db(20.0, f) == Approx(20.0 * std::log10(2.0)).epsilon(1e-13));
    CHECK(free_space_path_loss_db(100.0, f) == Approx(oracle::fspl_100m_3p5GHz_dB).epsilon(1e-13));
    CHECK_THROWS_AS(free_space_path_loss_db(0.0, f), std::invalid_argument);
    CHECK_THROWS_AS(free_space_path_loss_db(-1.0, f), std::invalid_argument);
}

TEST_CASE("Fresnel reflection", "[materials]")
{
    const Material c = concrete();
    const double f = 3.5e9;

    CHECK(fresnel_reflection_magnitude(c, f, 0.0, Polarization::te) == Approx(oracle::concrete_gamma_normal_3p5GHz).epsilon(1e-9));
    CHECK(fresnel_reflection_magnitude(c, f, 0.0, Polarization::tm) == Approx(oracle::concrete_gamma_normal_3p5GHz).epsilon(1e-9));

    for (double th = 0.0; th < 1.5; th += 0.1)
        for (auto pol : {Polarization::te, Polarization::tm})
            CHECK(fresnel_reflection_magnitude(c, 28e9, th, pol) ==
                  Approx(oracle::fresnel_magnitude(permittivity(c, 28e9), conductivity(c, 28e9), 28e9, th, pol == Polarization::te)).epsilon(1e-10));

    SECTION("grazing limit and monotonicity")
    {
        const double near_grazing = pi / 2.0 - 1e-7;
        CHECK(reflection_loss_db(concrete_slab(), f, near_grazing, Polarization::te) == Approx(0.0).margin(1e-4));
        double prev = std::numeric_limits<double>::infinity();
        for (double th = 0.0; th < pi / 2.0; th += 0.01)
        {
            const double l = reflection_loss_db(concrete_slab(), f, th, Polarization::te);
            CHECK(l >= 0.0);
            CHECK(l <= prev + 1e-12);
            prev = l;
        }
    }

    SECTION("index-matched layer has no reflection")
    {
        const SlabSpec vac{"vac", {{{"vac", 1.0, 0.0, 0.0, 0.0}, 0.1}}, false};
        CHECK(reflection_loss_db(vac, f, 0.3, Polarization::te) == std::numeric_limits<double>::infinity());
    }

    CHECK_THROWS_AS(fresnel_reflection_magnitude(c, f, pi / 2.0, Polarization::te), std::invalid_argument);
    CHECK_THROWS_AS(fresnel_reflection_magnitude(c, f, -0.1, Polarization::te), std::invalid_argument);
}

TEST_CASE("scalar diffraction loss", "[materials]")
{
    CHECK(diffraction_loss_db({0.0, 0.0, 1e9}, 7e9) == 0.0);
    for (double f : {0.5e9, 3e9, 40e9})
        CHECK(diffraction_loss_db({6.0, 0.0, 1e9}, f) == 6.0);
    CHECK(diffraction_loss_db({4.0, 1.0, 2e9}, 20e9) == Approx(14.0).epsilon(1e-14));
}

TEST_CASE("outputs stay finite across the band", "[materials]")
{
    for (double f = 0.4e9; f <= 60e9; f *= 1.1)
    {
        CHECK(std::isfinite(transmission_loss_db(concrete_slab(), f)));
        CHECK(std::isfinite(transmission_loss_db(drywall_slab(), f)));
        CHECK(std::isfinite(reflection_loss_db(drywall_slab(), f, 0.7, Polarization::tm)));
        CHECK(std::isfinite(free_space_path_loss_db(10.0, f)));
    }
}
