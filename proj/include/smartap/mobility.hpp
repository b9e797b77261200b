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

#ifndef SMARTAP_MOBILITY_HPP
#define SMARTAP_MOBILITY_HPP

// 2-D world: the access point sits at the origin with the array facing +y.

#include <cstdint>
#include <optional>
#include <random>
#include <variant>

namespace smartap
{
    using NodeId = std::uint32_t;

    struct Position
    {
        double x_m = 0.0;
        double y_m = 0.0;
        bool operator==(const Position &) const = default;
    };

    struct Bounds
    {
        double x_min = -50.0, x_max = 50.0;
        double y_min = 1.0, y_max = 50.0;
        bool contains(const Position &p) const;
    };

    struct Stationary
    {
    };

    struct ConstantVelocity
    {
        double vx_mps = 0.0;
        double vy_mps = 0.0;
    };

    struct RandomWaypoint
    {
        double speed_mps = 1.0;
        Bounds bounds;
    };

    using MobilityModel = std::variant<Stationary, ConstantVelocity, RandomWaypoint>;

    struct NodeSpec
    {
        NodeId node_id = 0;
        std::int64_t arrival_tick = 0;
        std::optional<std::int64_t> departure_tick; // Explicit detach, if any
        Position initial_position;
        MobilityModel model = Stationary{};
        double demand = 1.0; // Requests per tick
    };

    struct NodeState
    {
        Position position;
        std::optional<Position> waypoint; // RandomWaypoint only
    };

    // Per-node random stream for waypoint draws
    using SeedStream = std::mt19937_64;

    SeedStream make_seed_stream(std::uint64_t scenario_seed, NodeId node_id);

    // Advance one step of dt_s seconds (dt_s > 0, otherwise DomainError)
    NodeState advance(const NodeState &state, const MobilityModel &model, double dt_s, SeedStream &stream);
}

#endif
