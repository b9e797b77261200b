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

#ifndef SMARTAP_ROUTER_FSM_HPP
#define SMARTAP_ROUTER_FSM_HPP

// Access point control logic.
//
// Each tick processes, in this order: detaches, joins (ascending node id), beam tracking
// (every track_update_ticks), then beaconing. The SSID beacon goes out on ticks that are
// multiples of beacon_period_ticks while the router is Broadcasting; it is suppressed
// whenever every slot of the capacity is taken.

#include "smartap/beamformer.hpp"
#include "smartap/doa.hpp"
#include "smartap/mobility.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace smartap
{
    enum class RouterMode
    {
        Broadcasting,
        Saturated
    };

    enum class TrackingMode
    {
        Ideal,   // Beam follows the ground-truth azimuth
        Measured // Re-synthesize a snapshot at the true azimuth and re-estimate
    };

    struct RouterConfig
    {
        int capacity = 256;
        double range_m = 100.0;
        int beacon_period_ticks = 10;
        double beacon_duty = 0.1;
        int track_update_ticks = 5;
        std::optional<double> retrack_threshold_deg; // Unset: half the broadside 3 dB beamwidth
        ArrayGeometry geometry;

        DoaMethod doa_method = DoaMethod::Music;
        DoaOptions doa_options;

        TrackingMode tracking = TrackingMode::Ideal;
        double measure_snr_db = 20.0;
        int measure_snapshots = 256;
        std::uint64_t measure_seed = 0;

        // Throws ConfigError naming the offending field
        void validate() const;
    };

    // Configured threshold, or half the 3 dB beamwidth of a broadside conjugate beam
    double retrack_threshold(const RouterConfig &config);

    struct ServedEntry
    {
        NodeId node_id = 0;
        BeamWeights beam; // target_azimuth_deg == last_doa_deg
        double last_doa_deg = 0.0;
        std::int64_t last_update_tick = 0;
        double demand = 1.0;
    };

    struct RouterState
    {
        RouterMode mode = RouterMode::Broadcasting;
        std::map<NodeId, ServedEntry> served;
        std::int64_t tick = 0; // Next tick to be processed
    };

    struct Detach
    {
        NodeId node_id = 0;
    };

    struct JoinRequest
    {
        NodeId node_id = 0;
        SnapshotMatrix snapshot;
        double demand = 1.0;
    };

    struct TickElapsed
    {
    };

    using RouterEvent = std::variant<Detach, JoinRequest, TickElapsed>;

    enum class ActionKind
    {
        EmitBeacon,
        AssignBeam,
        UpdateBeam,
        ReleaseBeam,
        RejectJoin
    };

    std::string_view to_string(ActionKind kind);
    std::optional<ActionKind> parse_action_kind(std::string_view name);

    struct RouterAction
    {
        ActionKind kind = ActionKind::EmitBeacon;
        std::optional<NodeId> node;
        std::optional<double> theta_deg;
        std::string detail; // No whitespace
        std::optional<BeamWeights> beam;
    };

    // `tick=<n> action=<kind> node=<id|-> theta=<deg|-> detail=<text|->`
    std::string format_log_line(std::int64_t tick, const RouterAction &action);

    using NodePositions = std::map<NodeId, Position>;

    struct TickResult
    {
        RouterState state;
        std::vector<RouterAction> actions;
        std::vector<std::string> warnings;
    };

    struct JoinResult
    {
        RouterState state;
        RouterAction action; // AssignBeam or RejectJoin
        std::vector<std::string> warnings;
    };

    struct Bearing
    {
        double azimuth_deg = 0.0;
        double range_m = 0.0;
    };

    // Azimuth from the +y broadside axis and distance from the origin.
    // Origin throws DomainError; y <= 0 throws OutOfSectorError.
    Bearing azimuth_of(const Position &position);

    // Mode implied by occupancy
    RouterMode mode_for(const RouterState &state, const RouterConfig &config);

    TickResult tick(const RouterState &state, const RouterConfig &config, std::vector<RouterEvent> events,
                    const NodePositions &node_positions);

    JoinResult handle_join(const RouterState &state, const RouterConfig &config, NodeId node_id,
                           const SnapshotMatrix &snapshot, double demand = 1.0);

    // Re-points beams whose node drifted beyond the threshold and releases nodes that left
    // the service range or the forward sector. Emits UpdateBeam and ReleaseBeam actions.
    TickResult track(const RouterState &state, const RouterConfig &config, const NodePositions &node_positions);
}

#endif
