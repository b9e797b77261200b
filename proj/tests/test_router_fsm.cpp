// SPDX-License-Identifier: Apache-2.0
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

#include "fsm_fuzz.hpp"
#include "oracles.hpp"
#include "smartap/errors.hpp"
#include "smartap/router_fsm.hpp"

#include <doctest.h>

#include <array>

using namespace smartap;

namespace
{
    Position at_bearing(double azimuth_deg, double range_m)
    {
        const double a = azimuth_deg * oracle::pi / 180.0;
        return {range_m * std::sin(a), range_m * std::cos(a)};
    }

    SnapshotMatrix snapshot_at(const RouterConfig &cfg, double azimuth_deg, std::uint64_t seed,
                               NoiseModel noise = NoiseModel::UnitWhite)
    {
        const std::array<SourceSpec, 1> src{SourceSpec{azimuth_deg, 20.0, Waveform::Gaussian}};
        return synthesize_snapshots(cfg.geometry, src, 256, seed, noise);
    }

    std::size_t count(const std::vector<RouterAction> &actions, ActionKind kind)
    {
        return static_cast<std::size_t>(std::count_if(actions.begin(), actions.end(), [&](const RouterAction &a)
                                                      { return a.kind == kind; }));
    }

    // Serves `azimuths` (node ids 1..n) through tick 0 and returns the state at tick 1
    RouterState serve(const RouterConfig &cfg, const std::vector<double> &azimuths, NodePositions &positions)
    {
        std::vector<RouterEvent> events;
        for (std::size_t i = 0; i < azimuths.size(); ++i)
        {
            const auto id = static_cast<NodeId>(i + 1);
            positions[id] = at_bearing(azimuths[i], 20.0);
            events.emplace_back(JoinRequest{id, snapshot_at(cfg, azimuths[i], 100 + i, NoiseModel::None), 1.0});
        }
        return tick(RouterState{}, cfg, std::move(events), positions).state;
    }
}

TEST_CASE("idle router beacons on period boundaries only")
{
    const RouterConfig cfg;
    RouterState state;
    for (int t = 0; t < 25; ++t)
    {
        const auto out = tick(state, cfg, {}, {});
        if (t % cfg.beacon_period_ticks == 0)
        {
            REQUIRE(out.actions.size() == 1);
            CHECK(out.actions[0].kind == ActionKind::EmitBeacon);
        }
        else
            CHECK(out.actions.empty());
        CHECK(out.state.tick == t + 1);
        state = out.state;
    }
}

TEST_CASE("saturated router rejects joins and stays silent")
{
    RouterConfig cfg;
    cfg.capacity = 2;
    NodePositions pos;
    RouterState state = serve(cfg, {-30.0, 30.0}, pos);
    REQUIRE(state.served.size() == 2);
    CHECK(state.mode == RouterMode::Saturated);

    const auto join = handle_join(state, cfg, 9, snapshot_at(cfg, 0.0, 5));
    CHECK(join.action.kind == ActionKind::RejectJoin);
    CHECK(join.action.detail == "saturated");
    CHECK(join.state.served.size() == 2);

    pos[9] = at_bearing(0.0, 20.0);
    for (int t = 1; t < 60; ++t)
    {
        std::vector<RouterEvent> ev;
        if (t == 10)
            ev.emplace_back(JoinRequest{9, snapshot_at(cfg, 0.0, 6), 1.0});
        const auto out = tick(state, cfg, std::move(ev), pos);
        CHECK(count(out.actions, ActionKind::EmitBeacon) == 0);
        if (t == 10)
            CHECK(count(out.actions, ActionKind::RejectJoin) == 1);
        state = out.state;
    }
}

TEST_CASE("detach from saturation resumes beaconing at the next slot")
{
    RouterConfig cfg;
    cfg.capacity = 2;
    NodePositions pos;
    RouterState state = serve(cfg, {-30.0, 30.0}, pos);
    while (state.tick < 13)
        state = tick(state, cfg, {}, pos).state;

    auto out = tick(state, cfg, {Detach{1}}, pos);
    REQUIRE(count(out.actions, ActionKind::ReleaseBeam) == 1);
    CHECK(out.actions[0].detail == "detach");
    CHECK(out.state.mode == RouterMode::Broadcasting);
    state = out.state;
    std::int64_t beacon_tick = -1;
    while (state.tick <= 20)
    {
        const std::int64_t now = state.tick;
        out = tick(state, cfg, {}, pos);
        if (count(out.actions, ActionKind::EmitBeacon))
        {
            beacon_tick = now;
            break;
        }
        state = out.state;
    }
    CHECK(beacon_tick == 20);
}

TEST_CASE("join assigns a beam within half a degree of the true azimuth")
{
    const RouterConfig cfg;
    for (std::uint64_t seed = 1; seed <= 100; ++seed)
    {
        const auto join = handle_join(RouterState{}, cfg, 1, snapshot_at(cfg, 25.0, seed));
        REQUIRE(join.action.kind == ActionKind::AssignBeam);
        REQUIRE(join.action.theta_deg.has_value());
        CHECK(std::abs(*join.action.theta_deg - 25.0) <= 0.5);
        const auto &entry = join.state.served.at(1);
        CHECK(entry.beam.target_azimuth_deg == entry.last_doa_deg);
    }
}

TEST_CASE("join nulls toward the other served nodes")
{
    const RouterConfig cfg;
    NodePositions pos;
    const RouterState state = serve(cfg, {-40.0, 0.0, 40.0}, pos);
    const auto join = handle_join(state, cfg, 7, snapshot_at(cfg, 20.0, 3, NoiseModel::None));
    REQUIRE(join.action.kind == ActionKind::AssignBeam);
    CHECK(join.action.detail == "nulls=3");
    const auto &beam = join.state.served.at(7).beam;
    const double peak = beam_gain_at(beam, cfg.geometry, beam.target_azimuth_deg);
    for (const auto &[id, e] : state.served)
        CHECK(beam_gain_at(beam, cfg.geometry, e.last_doa_deg) <= 1e-10 * peak);
}

TEST_CASE("a neighbor inside the separation limit is excluded from the nulls")
{
    const RouterConfig cfg;
    NodePositions pos;
    const RouterState state = serve(cfg, {25.0}, pos);
    const auto join = handle_join(state, cfg, 2, snapshot_at(cfg, 25.5, 4, NoiseModel::None));
    REQUIRE(join.action.kind == ActionKind::AssignBeam);
    CHECK(join.action.detail == "nulls=0,degraded-nulling");
    CHECK(join.state.served.at(2).beam.null_azimuths_deg.empty());
}

TEST_CASE("join rejections")
{
    const RouterConfig cfg;
    NodePositions pos;
    const RouterState state = serve(cfg, {10.0}, pos);
    const auto again = handle_join(state, cfg, 1, snapshot_at(cfg, 10.0, 1));
    CHECK(again.action.kind == ActionKind::RejectJoin);
    CHECK(again.action.detail == "already-served");

    const auto wrong = synthesize_snapshots({4, 0.5}, std::array{SourceSpec{0.0, 20.0, Waveform::Gaussian}}, 16, 1);
    CHECK_THROWS_AS(handle_join(state, cfg, 2, wrong), DomainError);
}

TEST_CASE("stationary nodes never trigger beam updates")
{
    const RouterConfig cfg;
    NodePositions pos;
    RouterState state = serve(cfg, {-12.0, 33.0}, pos);
    std::size_t updates = 0;
    for (int t = 1; t < 1000; ++t)
    {
        const auto out = tick(state, cfg, {}, pos);
        updates += count(out.actions, ActionKind::UpdateBeam);
        state = out.state;
    }
    CHECK(updates == 0);
}

TEST_CASE("uniform sweep from 10 to 20 degrees follows the re-anchored threshold rule")
{
    RouterConfig cfg;
    cfg.retrack_threshold_deg = 2.0;
    cfg.track_update_ticks = 1;

    for (double step : {0.01, 0.05, 0.3, 0.7})
    {
        NodePositions pos;
        RouterState state = serve(cfg, {10.0}, pos);
        state.served.at(1).last_doa_deg = 10.0; // exact anchor, independent of the join estimate
        std::vector<double> samples;
        std::size_t updates = 0;
        const int steps = static_cast<int>(std::lround(10.0 / step));
        for (int k = 1; k <= steps; ++k)
        {
            const double theta = 10.0 + k * step;
            samples.push_back(theta);
            pos[1] = at_bearing(theta, 20.0);
            const auto out = tick(state, cfg, {}, pos);
            updates += count(out.actions, ActionKind::UpdateBeam);
            state = out.state;
        }
        const int replay = oracle::threshold_crossings(10.0, samples, 2.0);
        CHECK(static_cast<int>(updates) == replay);
        CHECK(static_cast<int>(updates) <= 4); // k updates need more than 2k degrees of travel
    }
}

TEST_CASE("leaving the service range releases the beam and reopens a saturated router")
{
    RouterConfig cfg;
    cfg.capacity = 1;
    cfg.range_m = 30.0;
    NodePositions pos;
    RouterState state = serve(cfg, {15.0}, pos);
    REQUIRE(state.mode == RouterMode::Saturated);

    std::int64_t release_tick = -1, beacon_after = -1;
    for (int t = 1; t < 200; ++t)
    {
        pos[1] = at_bearing(15.0, 20.0 + 0.1 * t);
        const std::int64_t now = state.tick;
        const auto out = tick(state, cfg, {}, pos);
        for (const auto &a : out.actions)
        {
            if (a.kind == ActionKind::ReleaseBeam)
            {
                CHECK(release_tick == -1);
                release_tick = now;
                CHECK(a.detail == "out-of-range");
            }
            if (a.kind == ActionKind::EmitBeacon)
            {
                CHECK(release_tick != -1);
                if (beacon_after == -1)
                    beacon_after = now;
            }
        }
        state = out.state;
    }
    REQUIRE(release_tick > 0);
    CHECK(beacon_after >= release_tick);
    CHECK(beacon_after - release_tick < cfg.beacon_period_ticks);
}

TEST_CASE("moving behind the array releases as out-of-sector")
{
    const RouterConfig cfg;
    NodePositions pos;
    RouterState state = serve(cfg, {60.0}, pos);
    pos[1] = {10.0, -1.0};
    while (state.tick % cfg.track_update_ticks != 0)
        state = tick(state, cfg, {}, {{1, at_bearing(60.0, 20.0)}}).state;
    const auto out = tick(state, cfg, {}, pos);
    REQUIRE(count(out.actions, ActionKind::ReleaseBeam) == 1);
    CHECK(out.actions[0].detail == "out-of-sector");
}

TEST_CASE("azimuth_of examples")
{
    const auto a = azimuth_of({0.0, 10.0});
    CHECK(a.azimuth_deg == doctest::Approx(0.0));
    CHECK(a.range_m == doctest::Approx(10.0));
    const auto b = azimuth_of({10.0, 10.0});
    CHECK(b.azimuth_deg == doctest::Approx(45.0));
    CHECK(b.range_m == doctest::Approx(14.142135623730951));
    CHECK(azimuth_of({-3.0, 4.0}).azimuth_deg == doctest::Approx(-36.86989764584402));
    CHECK_THROWS_AS(azimuth_of({5.0, -5.0}), OutOfSectorError);
    CHECK_THROWS_AS(azimuth_of({5.0, 0.0}), OutOfSectorError);
    CHECK_THROWS_AS(azimuth_of({0.0, 0.0}), DomainError);
}

TEST_CASE("detaching an unknown node is a warning, not an error")
{
    const RouterConfig cfg;
    RouterState state;
    state.tick = 3;
    const auto out = tick(state, cfg, {Detach{42}, Detach{42}}, {});
    CHECK(out.actions.empty());
    CHECK(out.warnings.size() == 2);
    CHECK(out.state.served.empty());
}

TEST_CASE("events are processed by kind then node id")
{
    RouterConfig cfg;
    cfg.capacity = 1;
    NodePositions pos{{1, at_bearing(-20.0, 10.0)}, {2, at_bearing(20.0, 10.0)}};
    // Node 2 listed first, yet node 1 takes the only slot; the detach of 1 runs before both joins
    std::vector<RouterEvent> ev;
    ev.emplace_back(JoinRequest{2, snapshot_at(cfg, 20.0, 1), 1.0});
    ev.emplace_back(JoinRequest{1, snapshot_at(cfg, -20.0, 2), 1.0});
    ev.emplace_back(Detach{1});
    const auto out = tick(RouterState{}, cfg, std::move(ev), pos);
    REQUIRE(out.actions.size() == 2);
    CHECK(out.actions[0].kind == ActionKind::AssignBeam);
    CHECK(out.actions[0].node == 1u);
    CHECK(out.actions[1].kind == ActionKind::RejectJoin);
    CHECK(out.actions[1].node == 2u);
    CHECK(out.warnings.size() == 1);
}

TEST_CASE("log line format")
{
    RouterAction a{ActionKind::AssignBeam, 7, 25.0123456789, "nulls=0", std::nullopt};
    CHECK(format_log_line(12, a) == "tick=12 action=AssignBeam node=7 theta=25.012346 detail=nulls=0");
    RouterAction b{ActionKind::EmitBeacon, std::nullopt, std::nullopt, "", std::nullopt};
    CHECK(format_log_line(0, b) == "tick=0 action=EmitBeacon node=- theta=- detail=-");
    for (auto k : {ActionKind::EmitBeacon, ActionKind::AssignBeam, ActionKind::UpdateBeam, ActionKind::ReleaseBeam,
                   ActionKind::RejectJoin})
        CHECK(parse_action_kind(to_string(k)) == k);
    CHECK_FALSE(parse_action_kind("Reboot").has_value());
}

TEST_CASE("configuration validation names the field")
{
    auto field_of = [](RouterConfig cfg)
    {
        try
        {
            cfg.validate();
        }
        catch (const ConfigError &e)
        {
            return e.field();
        }
        return std::string("none");
    };
    RouterConfig c;
    CHECK(field_of(c) == "none");
    c.capacity = 0;
    CHECK(field_of(c) == "router.capacity");
    c = {};
    c.beacon_duty = 0.0;
    CHECK(field_of(c) == "router.beacon_duty");
    c = {};
    c.retrack_threshold_deg = -1.0;
    CHECK(field_of(c) == "router.retrack_threshold_deg");
    c = {};
    c.track_update_ticks = 0;
    CHECK(field_of(c) == "router.track_update_ticks");
}

TEST_CASE("default retrack threshold is half the broadside beamwidth")
{
    RouterConfig cfg;
    const auto p = beam_pattern(conjugate_weights(cfg.geometry, 0.0), cfg.geometry, 0.01);
    CHECK(retrack_threshold(cfg) == doctest::Approx(p.beamwidth_3db_deg / 2.0).epsilon(1e-3));
    cfg.retrack_threshold_deg = 3.5;
    CHECK(retrack_threshold(cfg) == 3.5);
}

TEST_CASE("measured tracking follows the node within the estimator accuracy")
{
    RouterConfig cfg;
    cfg.tracking = TrackingMode::Measured;
    cfg.track_update_ticks = 1;
    cfg.retrack_threshold_deg = 1.0;
    NodePositions pos;
    RouterState state = serve(cfg, {0.0}, pos);
    for (int t = 1; t <= 40; ++t)
    {
        pos[1] = at_bearing(0.5 * t, 25.0);
        state = tick(state, cfg, {}, pos).state;
    }
    CHECK(std::abs(state.served.at(1).last_doa_deg - 20.0) <= 1.0 + 0.5);
}

TEST_CASE("fuzzed event streams keep capacity and beacon rules")
{
    for (std::uint64_t seed : {1u, 2u, 3u})
    {
        const auto rep = fuzz::run(seed, 3000);
        CHECK(rep.capacity_violations == 0);
        CHECK(rep.beacons_while_saturated == 0);
        CHECK(rep.liveness_violations == 0);
        CHECK(rep.saturated_ticks > 0);
        CHECK(rep.releases_from_saturation > 0);
    }
}

TEST_CASE("router runs are deterministic")
{
    const auto a = fuzz::run(99, 1500);
    const auto b = fuzz::run(99, 1500);
    CHECK(a.log == b.log);
}
