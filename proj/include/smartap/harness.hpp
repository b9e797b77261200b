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

#ifndef SMARTAP_HARNESS_HPP
#define SMARTAP_HARNESS_HPP

// Scenario files, the deterministic tick loop and report files.
//
// Per tick: advance node positions, synthesize join snapshots for arriving nodes at their
// true azimuth, run the router, then account power. Everything derives from the scenario
// seed; outputs carry no timestamps, so identical scenarios give byte-identical reports.

#include "smartap/mobility.hpp"
#include "smartap/power.hpp"
#include "smartap/router_fsm.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace smartap
{
    struct Scenario
    {
        std::string name = "scenario";
        std::int64_t ticks = 1000;
        double dt_s = 0.1;
        std::uint64_t seed = 1;
        double join_snr_db = 20.0;
        int join_snapshots = 256;
        RouterConfig router;
        PowerParams power;
        std::vector<NodeSpec> nodes;

        // Throws ConfigError with the offending field path
        void validate() const;
    };

    Scenario parse_scenario(const nlohmann::json &doc);
    Scenario load_scenario(const std::filesystem::path &file);
    nlohmann::ordered_json scenario_to_json(const Scenario &scenario);

    struct LogRecord
    {
        std::int64_t tick = 0;
        RouterAction action;
    };

    struct BeamSnapshot
    {
        std::int64_t tick = 0;
        NodeId node_id = 0;
        double theta_deg = 0.0;
        double beamwidth_deg = 0.0;
    };

    struct RunSummary
    {
        double savings_ratio = 0.0;
        double mean_adaptive_w = 0.0;
        double mean_baseline_w = 0.0;
        std::int64_t joins = 0;
        std::int64_t rejects = 0;
        std::int64_t beam_updates = 0;
        std::int64_t releases = 0;
        std::int64_t beacons = 0;
        std::int64_t ticks = 0;
    };

    struct RunResult
    {
        std::string scenario_name;
        std::vector<LogRecord> event_log;
        PowerLedger ledger;
        RunSummary summary;
        std::vector<BeamSnapshot> beam_snapshots;
        std::vector<std::string> warnings;
        RouterState final_state;
    };

    RunResult run_scenario(const Scenario &scenario);

    // Independent runs on up to `threads` workers; results keep the input order
    std::vector<RunResult> run_scenarios(std::span<const Scenario> scenarios, unsigned threads);

    // Writes events.log, power.csv, summary.json and beam_snapshots.csv into out_dir
    void emit_reports(const RunResult &result, const std::filesystem::path &out_dir);

    std::string summary_json(const RunSummary &summary);

    // Rebuilds the summary from power.csv and events.log in `dir`
    RunSummary recompute_summary(const std::filesystem::path &dir);

    // Parses one `tick=... action=... node=... theta=... detail=...` line
    LogRecord parse_log_line(const std::string &line);
}

#endif
