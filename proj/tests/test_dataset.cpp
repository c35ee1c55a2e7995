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

#include "diffpos/dataset.hpp"
#include "diffpos/error.hpp"
#include "diffpos/tracer.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <sstream>

using namespace diffpos;
using Catch::Approx;

namespace
{
    const Band fr1 = BandPlan::defaults().band_for(3.5e9);

    const char *three_records = R"({"format":"diffpos-mpc","version":1}
{"anchor_id":0,"rx_id":4,"rx_xyz":[1.0,2.0,7.4],"interactions":"Tx-T-T-Rx","path_length_m":30.0,"rx_power_dbm":-70.0}
{"anchor_id":0,"rx_id":4,"rx_xyz":[1.0,2.0,7.4],"interactions":"Tx-D-T-Rx","path_length_m":25.5,"rx_power_dbm":-80.0,"edge_id":3}
{"anchor_id":1,"rx_id":4,"rx_xyz":[1.0,2.0,7.4],"interactions":"Tx-R-D-Rx","path_length_m":41.0,"rx_power_dbm":-95.0,"group":"MPC4"}
)";
}

TEST_CASE("ingest three records", "[dataset]")
{
    std::istringstream in(three_records);
    const IngestResult r = ingest_dataset(in, fr1);
    CHECK(r.rejected.empty());
    REQUIRE(r.records.size() == 3);
    REQUIRE(r.profiles.size() == 2);

    const Pdp &p = r.profiles.at({0, 4});
    REQUIRE(p.mpcs.size() == 2);
    CHECK(p.mpcs[0].path_length == 25.5); // ToF order
    CHECK(p.mpcs[0].group == MpcGroup::mpc3);
    CHECK(p.mpcs[0].edge_id == 3);
    CHECK(p.mpcs[1].group == MpcGroup::mpc1);
    CHECK(p.mpcs[1].tof == Approx(30.0 / 299792458.0).epsilon(1e-15));
    CHECK(p.mpcs[1].snr == Approx(-70.0 - noise_floor_dbm(400e6)).epsilon(1e-14));
    CHECK(r.profiles.at({1, 4}).mpcs[0].group == MpcGroup::mpc4);
    CHECK(p.receiver == Point3(1.0, 2.0, 7.4));
}

TEST_CASE("ingest rejects invalid records", "[dataset]")
{
    std::istringstream in(R"({"anchor_id":0,"rx_id":0,"rx_xyz":[0,0,0],"interactions":"Tx-T-Rx","path_length_m":-3.0,"rx_power_dbm":-70.0}
{"anchor_id":0,"rx_id":0,"rx_xyz":[0,0,0],"interactions":"Tx-Q-Rx","path_length_m":3.0,"rx_power_dbm":-70.0}
{"anchor_id":0,"rx_id":0,"rx_xyz":[0,0,0],"interactions":"Tx-D-Rx","path_length_m":3.0,"rx_power_dbm":-70.0,"group":"MPC1"}
{"anchor_id":0,"rx_id":0,"rx_xyz":[0,0,0],"interactions":"Tx-D-Rx","path_length_m":3.0,"rx_power_dbm":-70.0,"tof_s":1.0}

{"anchor_id":0,"rx_id":0,"rx_xyz":[0,0,0],"interactions":"Tx-Rx","path_length_m":3.0,"rx_power_dbm":-70.0}
)");
    const IngestResult r = ingest_dataset(in, fr1);
    CHECK(r.records.size() == 1);
    REQUIRE(r.rejected.size() == 4);
    CHECK(r.rejected[0].line == 1);
    CHECK(r.rejected[1].line == 2);
    CHECK(r.rejected[2].line == 3);
    CHECK(r.rejected[3].line == 4);
}

TEST_CASE("ingest syntax errors carry the line", "[dataset]")
{
    std::istringstream broken(std::string(three_records) + "{\"anchor_id\": 0, \n");
    try
    {
        ingest_dataset(broken, fr1);
        FAIL("expected a parse error");
    }
    catch (const parse_error &e)
    {
        CHECK(e.line() == 5);
    }

    std::istringstream missing(R"({"anchor_id":0,"rx_xyz":[0,0,0],"interactions":"Tx-Rx","path_length_m":3.0,"rx_power_dbm":-70.0})");
    CHECK_THROWS_AS(ingest_dataset(missing, fr1), parse_error);
    std::istringstream wrong_type(R"({"anchor_id":"a","rx_id":0,"rx_xyz":[0,0,0],"interactions":"Tx-Rx","path_length_m":3.0,"rx_power_dbm":-70.0})");
    CHECK_THROWS_AS(ingest_dataset(wrong_type, fr1), parse_error);
    std::istringstream short_xyz(R"({"anchor_id":0,"rx_id":0,"rx_xyz":[0,0],"interactions":"Tx-Rx","path_length_m":3.0,"rx_power_dbm":-70.0})");
    CHECK_THROWS_AS(ingest_dataset(short_xyz, fr1), parse_error);
    std::istringstream version(R"({"format":"diffpos-mpc","version":9})");
    CHECK_THROWS_AS(ingest_dataset(version, fr1), parse_error);
}

TEST_CASE("export and ingest round trip", "[dataset]")
{
    const SceneConfig s = build_default_scene();
    std::vector<DatasetRecord> records;
    for (std::size_t r = 0; r < 40; ++r)
        for (std::size_t a = 0; a < s.anchors.size(); ++a)
        {
            const auto part = records_from_pdp(enumerate_mpcs(s, a, s.receivers[r * 7], fr1), r * 7);
            records.insert(records.end(), part.begin(), part.end());
        }
    REQUIRE(records.size() > 100);

    std::stringstream buf;
    export_dataset(buf, records);
    const IngestResult back = ingest_dataset(buf, fr1);
    CHECK(back.rejected.empty());
    REQUIRE(back.records.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i)
    {
        const auto &x = records[i], &y = back.records[i];
        CHECK(x.rx_id == y.rx_id);
        CHECK(x.rx == y.rx);
        CHECK(x.mpc.anchor_id == y.mpc.anchor_id);
        CHECK(x.mpc.interactions == y.mpc.interactions);
        CHECK(x.mpc.path_length == y.mpc.path_length);
        CHECK(x.mpc.tof == y.mpc.tof);
        CHECK(x.mpc.rx_power == y.mpc.rx_power);
        CHECK(x.mpc.snr == y.mpc.snr);
        CHECK(x.mpc.group == y.mpc.group);
        CHECK(x.mpc.edge_id == y.mpc.edge_id);
    }
}
