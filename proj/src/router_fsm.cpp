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

#include "smartap/router_fsm.hpp"
#include "smartap/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>

namespace smartap
{
    void RouterConfig::validate() const
    {
        if (capacity < 1 || capacity > 65535)
            throw ConfigError("router.capacity", fmt::format("must lie in [1, 65535], got {}", capacity));
        if (!(range_m > 0.0) || !std::isfinite(range_m))
            throw ConfigError("router.range_m", fmt::format("must be positive, got {}", range_m));
        if (beacon_period_ticks < 1)
            throw ConfigError("router.beacon_period_ticks", fmt::format("must be positive, got {}", beacon_period_ticks));
        if (!(beacon_duty > 0.0 && beacon_duty <= 1.0))
            throw ConfigError("router.beacon_duty", fmt::format("must lie in (0, 1], got {}", beacon_duty));
        if (track_update_ticks < 1)
            throw ConfigError("router.track_update_ticks", fmt::format("must be positive, got {}", track_update_ticks));
        if (retrack_threshold_deg && !(*retrack_threshold_deg > 0.0))
            throw ConfigError("router.retrack_threshold_deg", fmt::format("must be positive, got {}", *retrack_threshold_deg));
        if (!(doa_options.grid_step_deg > 0.0 && doa_options.grid_step_deg < 90.0))
            throw ConfigError("router.grid_step_deg", fmt::format("must lie in (0, 90), got {}", doa_options.grid_step_deg));
        if (measure_snapshots < 1)
            throw ConfigError("router.measure_snapshots", fmt::format("must be positive, got {}", measure_snapshots));
        try
        {
            geometry.validate();
        }
        catch (const DomainError &e)
        {
            throw ConfigError("router.geometry", e.what());
        }
    }

    double retrack_threshold(const RouterConfig &config)
    {
        if (config.retrack_threshold_deg)
            return *config.retrack_threshold_deg;
        const auto pattern = beam_pattern(conjugate_weights(config.geometry, 0.0), config.geometry, 0.01);
        return 0.5 * pattern.beamwidth_3db_deg;
    }

    std::string_view to_string(ActionKind kind)
    {
        switch (kind)
        {
        case ActionKind::EmitBeacon:
            return "EmitBeacon";
        case ActionKind::AssignBeam:
            return "AssignBeam";
        case ActionKind::UpdateBeam:
            return "UpdateBeam";
        case ActionKind::ReleaseBeam:
            return "ReleaseBeam";
        case ActionKind::RejectJoin:
            return "RejectJoin";
        }
        return "?";
    }

    std::optional<ActionKind> parse_action_kind(std::string_view name)
    {
        for (auto k : {ActionKind::EmitBeacon, ActionKind::AssignBeam, ActionKind::UpdateBeam,
                       ActionKind::ReleaseBeam, ActionKind::RejectJoin})
            if (to_string(k) == name)
                return k;
        return std::nullopt;
    }

    std::string format_log_line(std::int64_t tick, const RouterAction &action)
    {
        return fmt::format("tick={} action={} node={} theta={} detail={}", tick, to_string(action.kind),
                           action.node ? fmt::format("{}", *action.node) : "-",
                           action.theta_deg ? fmt::format("{:.6f}", *action.theta_deg) : "-",
                           action.detail.empty() ? "-" : action.detail);
    }

    Bearing azimuth_of(const Position &p)
    {
        if (p.x_m == 0.0 && p.y_m == 0.0)
            throw DomainError("node position coincides with the access point");
        if (!(p.y_m > 0.0))
            throw OutOfSectorError(fmt::format("position ({}, {}) is behind the array", p.x_m, p.y_m));
        return {rad_to_deg(std::atan2(p.x_m, p.y_m)), std::hypot(p.x_m, p.y_m)};
    }

    RouterMode mode_for(const RouterState &state, const RouterConfig &config)
    {
        return static_cast<int>(state.served.size()) >= config.capacity ? RouterMode::Saturated
                                                                        : RouterMode::Broadcasting;
    }

    namespace
    {
        // Beam toward `theta` with nulls on the nearest other served nodes. Directions within
        // 1 degree of the target or of an already chosen null are skipped, and at most M-2 are kept.
        BeamWeights design_beam(const RouterState &state, const RouterConfig &config, NodeId node_id, double theta,
                                std::string &detail, std::vector<std::string> &warnings)
        {
            std::vector<double> others;
            for (const auto &[id, entry] : state.served)
                if (id != node_id)
                    others.push_back(entry.last_doa_deg);
            std::sort(others.begin(), others.end(), [&](double a, double b)
                      {
                          const double da = std::abs(a - theta), db = std::abs(b - theta);
                          return da != db ? da < db : a < b; });

            const auto max_nulls = static_cast<std::size_t>(std::max(config.geometry.num_elements - 2, 0));
            std::vector<double> nulls;
            std::size_t too_close = 0, over_cap = 0;
            for (double az : others)
            {
                const auto near = [&](double other)
                { return std::abs(az - other) < min_constraint_separation_deg; };
                if (near(theta) || std::any_of(nulls.begin(), nulls.end(), near))
                    ++too_close;
                else if (nulls.size() >= max_nulls)
                    ++over_cap;
                else
                    nulls.push_back(az);
            }

            bool degraded = too_close > 0;
            if (too_close > 0)
                warnings.push_back(fmt::format("node {}: {} served direction(s) within {} deg not nulled", node_id,
                                               too_close, min_constraint_separation_deg));
            if (over_cap > 0)
                warnings.push_back(fmt::format("node {}: {} served direction(s) beyond the {}-null limit not nulled",
                                               node_id, over_cap, max_nulls));

            BeamWeights beam;
            try
            {
                beam = null_steering_weights(config.geometry, theta, nulls);
            }
            catch (const ConditioningError &e)
            {
                warnings.push_back(fmt::format("node {}: {}; falling back to a conjugate beam", node_id, e.what()));
                beam = conjugate_weights(config.geometry, theta);
                nulls.clear();
                degraded = true;
            }
            detail = fmt::format("nulls={}{}", nulls.size(), degraded ? ",degraded-nulling" : "");
            return beam;
        }

        RouterAction release(NodeId id, double theta, std::string reason)
        {
            return RouterAction{ActionKind::ReleaseBeam, id, theta, std::move(reason), std::nullopt};
        }

        int event_rank(const RouterEvent &e) { return static_cast<int>(e.index()); }

        NodeId event_node(const RouterEvent &e)
        {
            if (const auto *d = std::get_if<Detach>(&e))
                return d->node_id;
            if (const auto *j = std::get_if<JoinRequest>(&e))
                return j->node_id;
            return 0;
        }

        std::uint64_t measurement_seed(const RouterConfig &config, std::int64_t tick, NodeId id)
        {
            std::seed_seq seq{static_cast<std::uint32_t>(config.measure_seed),
                              static_cast<std::uint32_t>(config.measure_seed >> 32),
                              static_cast<std::uint32_t>(tick), static_cast<std::uint32_t>(id), 0x74726bu};
            std::array<std::uint32_t, 2> out{};
            seq.generate(out.begin(), out.end());
            return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
        }
    }

    JoinResult handle_join(const RouterState &state, const RouterConfig &config, NodeId node_id,
                           const SnapshotMatrix &snapshot, double demand)
    {
        if (!(snapshot.geometry() == config.geometry))
            throw DomainError(fmt::format("join snapshot for node {} was recorded by a different array", node_id));

        JoinResult out{state, RouterAction{ActionKind::RejectJoin, node_id, std::nullopt, "", std::nullopt}, {}};
        if (static_cast<int>(state.served.size()) >= config.capacity)
        {
            out.action.detail = "saturated";
            return out;
        }
        if (state.served.count(node_id))
        {
            out.action.detail = "already-served";
            return out;
        }

        double theta = 0.0;
        try
        {
            const auto doa = estimate_doa(snapshot, config.doa_method, 1, config.doa_options);
            theta = doa.azimuth_deg.front();
            if (doa.degraded)
                out.warnings.push_back(fmt::format("node {}: degraded DOA estimate", node_id));
        }
        catch (const EstimationError &e)
        {
            out.warnings.push_back(fmt::format("node {}: DOA failed: {}", node_id, e.what()));
            out.action.detail = "doa-failed";
            return out;
        }
        catch (const DomainError &e)
        {
            out.warnings.push_back(fmt::format("node {}: DOA failed: {}", node_id, e.what()));
            out.action.detail = "doa-failed";
            return out;
        }

        std::string detail;
        BeamWeights beam = design_beam(state, config, node_id, theta, detail, out.warnings);
        out.state.served.emplace(node_id, ServedEntry{node_id, beam, theta, state.tick, demand});
        out.state.mode = mode_for(out.state, config);
        out.action = RouterAction{ActionKind::AssignBeam, node_id, theta, std::move(detail), std::move(beam)};
        return out;
    }

    TickResult track(const RouterState &state, const RouterConfig &config, const NodePositions &node_positions)
    {
        TickResult out{state, {}, {}};
        const double threshold = retrack_threshold(config);

        std::vector<NodeId> ids;
        for (const auto &kv : state.served)
            ids.push_back(kv.first);

        for (NodeId id : ids)
        {
            auto &entry = out.state.served.at(id);
            const auto pos = node_positions.find(id);
            if (pos == node_positions.end())
            {
                out.warnings.push_back(fmt::format("node {}: no position available for tracking", id));
                continue;
            }

            Bearing bearing;
            try
            {
                bearing = azimuth_of(pos->second);
            }
            catch (const DomainError &)
            {
                out.actions.push_back(release(id, entry.last_doa_deg, "out-of-sector"));
                out.state.served.erase(id);
                continue;
            }
            if (bearing.range_m > config.range_m)
            {
                out.actions.push_back(release(id, entry.last_doa_deg, "out-of-range"));
                out.state.served.erase(id);
                continue;
            }

            double theta = bearing.azimuth_deg;
            if (config.tracking == TrackingMode::Measured)
            {
                const std::array<SourceSpec, 1> src{SourceSpec{theta, config.measure_snr_db, Waveform::Gaussian}};
                try
                {
                    const auto x = synthesize_snapshots(config.geometry, src, config.measure_snapshots,
                                                        measurement_seed(config, state.tick, id));
                    theta = estimate_doa(x, config.doa_method, 1, config.doa_options).azimuth_deg.front();
                }
                catch (const std::exception &e)
                {
                    out.warnings.push_back(fmt::format("node {}: tracking measurement failed: {}", id, e.what()));
                    continue;
                }
            }

            if (std::abs(theta - entry.last_doa_deg) > threshold)
            {
                std::string detail;
                entry.beam = design_beam(out.state, config, id, theta, detail, out.warnings);
                entry.last_doa_deg = theta;
                entry.last_update_tick = state.tick;
                out.actions.push_back(RouterAction{ActionKind::UpdateBeam, id, theta, std::move(detail), entry.beam});
            }
        }
        out.state.mode = mode_for(out.state, config);
        return out;
    }

    TickResult tick(const RouterState &state, const RouterConfig &config, std::vector<RouterEvent> events,
                    const NodePositions &node_positions)
    {
        std::stable_sort(events.begin(), events.end(), [](const RouterEvent &a, const RouterEvent &b)
                         {
                             const int ra = event_rank(a), rb = event_rank(b);
                             return ra != rb ? ra < rb : event_node(a) < event_node(b); });

        TickResult out{state, {}, {}};
        const std::int64_t now = state.tick;

        for (const auto &ev : events)
        {
            if (const auto *d = std::get_if<Detach>(&ev))
            {
                const auto it = out.state.served.find(d->node_id);
                if (it == out.state.served.end())
                {
                    out.warnings.push_back(fmt::format("tick {}: detach of unknown node {} ignored", now, d->node_id));
                    continue;
                }
                out.actions.push_back(release(d->node_id, it->second.last_doa_deg, "detach"));
                out.state.served.erase(it);
                out.state.mode = mode_for(out.state, config);
            }
            else if (const auto *j = std::get_if<JoinRequest>(&ev))
            {
                auto joined = handle_join(out.state, config, j->node_id, j->snapshot, j->demand);
                out.state = std::move(joined.state);
                out.actions.push_back(std::move(joined.action));
                out.warnings.insert(out.warnings.end(), joined.warnings.begin(), joined.warnings.end());
            }
        }

        if (now % config.track_update_ticks == 0 && !out.state.served.empty())
        {
            auto tracked = track(out.state, config, node_positions);
            out.state = std::move(tracked.state);
            out.actions.insert(out.actions.end(), tracked.actions.begin(), tracked.actions.end());
            out.warnings.insert(out.warnings.end(), tracked.warnings.begin(), tracked.warnings.end());
        }

        out.state.mode = mode_for(out.state, config);
        if (now % config.beacon_period_ticks == 0 && out.state.mode == RouterMode::Broadcasting)
            out.actions.push_back(RouterAction{ActionKind::EmitBeacon, std::nullopt, std::nullopt, "", std::nullopt});

        out.state.tick = now + 1;
        return out;
    }
}
