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

#include "smartap/mobility.hpp"
#include "smartap/errors.hpp"

#include <fmt/format.h>

#include <cmath>

namespace smartap
{
    namespace
    {
        template <class... Ts>
        struct overloaded : Ts...
        {
            using Ts::operator()...;
        };
        template <class... Ts>
        overloaded(Ts...) -> overloaded<Ts...>;

        Position draw_waypoint(const Bounds &b, SeedStream &stream)
        {
            std::uniform_real_distribution<double> ux(b.x_min, b.x_max);
            std::uniform_real_distribution<double> uy(b.y_min, b.y_max);
            const double x = ux(stream);
            const double y = uy(stream);
            return {x, y};
        }
    }

    bool Bounds::contains(const Position &p) const
    {
        return p.x_m >= x_min && p.x_m <= x_max && p.y_m >= y_min && p.y_m <= y_max;
    }

    SeedStream make_seed_stream(std::uint64_t scenario_seed, NodeId node_id)
    {
        std::seed_seq seq{static_cast<std::uint32_t>(scenario_seed), static_cast<std::uint32_t>(scenario_seed >> 32),
                          static_cast<std::uint32_t>(node_id), 0x6d6f62u};
        return SeedStream(seq);
    }

    NodeState advance(const NodeState &state, const MobilityModel &model, double dt_s, SeedStream &stream)
    {
        if (!(dt_s > 0.0))
            throw DomainError(fmt::format("time step must be positive, got {}", dt_s));

        return std::visit(
            overloaded{
                [&](const Stationary &) { return state; },
                [&](const ConstantVelocity &v)
                {
                    NodeState next = state;
                    next.position.x_m += v.vx_mps * dt_s;
                    next.position.y_m += v.vy_mps * dt_s;
                    return next;
                },
                [&](const RandomWaypoint &rw)
                {
                    NodeState next = state;
                    if (!next.waypoint)
                        next.waypoint = draw_waypoint(rw.bounds, stream);

                    const double dx = next.waypoint->x_m - next.position.x_m;
                    const double dy = next.waypoint->y_m - next.position.y_m;
                    const double dist = std::hypot(dx, dy);
                    const double step = rw.speed_mps * dt_s;
                    if (dist <= step)
                    {
                        // Arrive, then pick the next target; leftover travel time is dropped
                        next.position = *next.waypoint;
                        next.waypoint = draw_waypoint(rw.bounds, stream);
                    }
                    else
                    {
                        next.position.x_m += dx / dist * step;
                        next.position.y_m += dy / dist * step;
                    }
                    return next;
                }},
            model);
    }
}
