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

#include "smartap/harness.hpp"
#include "smartap/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

namespace smartap
{
    using nlohmann::json;

    namespace
    {
        // Typed access to one JSON object that remembers which keys were consumed
        class Fields
        {
        public:
            Fields(const json &obj, std::string path) : obj_(obj), path_(std::move(path))
            {
                if (!obj_.is_object())
                    throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
            }

            std::string path(const std::string &key) const { return path_.empty() ? key : path_ + "." + key; }

            const json *find(const std::string &key)
            {
                seen_.insert(key);
                const auto it = obj_.find(key);
                return it == obj_.end() || it->is_null() ? nullptr : &*it;
            }

            template <class T>
            T get(const std::string &key, T fallback)
            {
                const json *v = find(key);
                return v ? convert<T>(*v, path(key)) : fallback;
            }

            template <class T>
            std::optional<T> optional(const std::string &key)
            {
                const json *v = find(key);
                return v ? std::optional<T>(convert<T>(*v, path(key))) : std::nullopt;
            }

            template <class T>
            T require(const std::string &key)
            {
                const json *v = find(key);
                if (!v)
                    throw ConfigError(path(key), "missing required field");
                return convert<T>(*v, path(key));
            }

            void finish() const
            {
                for (const auto &item : obj_.items())
                    if (!seen_.count(item.key()))
                        throw ConfigError(path(item.key()), "unknown field");
            }

        private:
            template <class T>
            static T convert(const json &v, const std::string &where)
            {
                if constexpr (std::is_same_v<T, std::string>)
                {
                    if (!v.is_string())
                        throw ConfigError(where, "expected a string");
                    return v.get<std::string>();
                }
                else if constexpr (std::is_integral_v<T>)
                {
                    if (!v.is_number_integer())
                        throw ConfigError(where, "expected an integer");
                    if constexpr (std::is_unsigned_v<T>)
                        if (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)
                            throw ConfigError(where, "expected a non-negative integer");
                    return v.get<T>();
                }
                else
                {
                    if (!v.is_number())
                        throw ConfigError(where, "expected a number");
                    return v.get<T>();
                }
            }

            const json &obj_;
            std::string path_;
            std::set<std::string> seen_;
        };

        Position parse_position(const json &j, const std::string &path)
        {
            Fields f(j, path);
            Position p{f.require<double>("x_m"), f.require<double>("y_m")};
            f.finish();
            return p;
        }

        MobilityModel parse_model(const json &j, const std::string &path)
        {
            Fields f(j, path);
            const auto type = f.require<std::string>("type");
            MobilityModel model;
            if (type == "stationary")
                model = Stationary{};
            else if (type == "constant_velocity")
                model = ConstantVelocity{f.get<double>("vx_mps", 0.0), f.get<double>("vy_mps", 0.0)};
            else if (type == "random_waypoint")
            {
                RandomWaypoint rw;
                rw.speed_mps = f.require<double>("speed_mps");
                const json *b = f.find("bounds");
                if (!b)
                    throw ConfigError(f.path("bounds"), "missing required field");
                Fields fb(*b, f.path("bounds"));
                rw.bounds = Bounds{fb.require<double>("x_min"), fb.require<double>("x_max"),
                                   fb.require<double>("y_min"), fb.require<double>("y_max")};
                fb.finish();
                model = rw;
            }
            else
                throw ConfigError(f.path("type"), fmt::format("unknown mobility model '{}'", type));
            f.finish();
            return model;
        }

        json model_to_json(const MobilityModel &m)
        {
            if (std::holds_alternative<ConstantVelocity>(m))
            {
                const auto &v = std::get<ConstantVelocity>(m);
                return {{"type", "constant_velocity"}, {"vx_mps", v.vx_mps}, {"vy_mps", v.vy_mps}};
            }
            if (std::holds_alternative<RandomWaypoint>(m))
            {
                const auto &rw = std::get<RandomWaypoint>(m);
                return {{"type", "random_waypoint"},
                        {"speed_mps", rw.speed_mps},
                        {"bounds", {{"x_min", rw.bounds.x_min}, {"x_max", rw.bounds.x_max}, {"y_min", rw.bounds.y_min}, {"y_max", rw.bounds.y_max}}}};
            }
            return {{"type", "stationary"}};
        }

        std::uint64_t derive_seed(std::uint64_t base, std::uint32_t a, std::int64_t b, std::uint32_t tag)
        {
            std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32), a,
                              static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(static_cast<std::uint64_t>(b) >> 32),
                              tag};
            std::array<std::uint32_t, 2> out{};
            seq.generate(out.begin(), out.end());
            return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
        }

        struct NodeRuntime
        {
            const NodeSpec *spec = nullptr;
            NodeState state;
            SeedStream stream;
            bool present = false;
        };

        std::ofstream open_for_write(const std::filesystem::path &file)
        {
            std::ofstream os(file, std::ios::binary | std::ios::trunc);
            if (!os)
                throw std::runtime_error(fmt::format("cannot open '{}' for writing", file.string()));
            return os;
        }

        void check_written(std::ofstream &os, const std::filesystem::path &file)
        {
            os.flush();
            if (!os)
                throw std::runtime_error(fmt::format("write to '{}' failed", file.string()));
        }
    }

    void Scenario::validate() const
    {
        if (ticks < 1)
            throw ConfigError("ticks", fmt::format("must be at least 1, got {}", ticks));
        if (!(dt_s > 0.0) || !std::isfinite(dt_s))
            throw ConfigError("dt_s", fmt::format("must be positive, got {}", dt_s));
        if (!std::isfinite(join_snr_db))
            throw ConfigError("join_snr_db", "must be finite");
        if (join_snapshots < 1)
            throw ConfigError("join_snapshots", fmt::format("must be at least 1, got {}", join_snapshots));
        router.validate();
        power.validate();

        std::set<NodeId> ids;
        for (std::size_t i = 0; i < nodes.size(); ++i)
        {
            const auto &n = nodes[i];
            const auto at = [&](const char *field)
            { return fmt::format("nodes[{}].{}", i, field); };
            if (!ids.insert(n.node_id).second)
                throw ConfigError(at("node_id"), fmt::format("duplicate node id {}", n.node_id));
            if (n.arrival_tick < 0)
                throw ConfigError(at("arrival_tick"), "must be non-negative");
            if (n.departure_tick && *n.departure_tick <= n.arrival_tick)
                throw ConfigError(at("departure_tick"), "must come after arrival_tick");
            if (!(n.demand >= 0.0) || !std::isfinite(n.demand))
                throw ConfigError(at("demand"), "must be non-negative");
            if (!(n.initial_position.y_m > 0.0))
                throw ConfigError(at("initial_position"), "node must start in front of the array (y_m > 0)");
            if (const auto *rw = std::get_if<RandomWaypoint>(&n.model))
            {
                if (!(rw->speed_mps >= 0.0))
                    throw ConfigError(at("model.speed_mps"), "must be non-negative");
                const auto &b = rw->bounds;
                if (!(b.x_min < b.x_max && b.y_min < b.y_max && b.y_min > 0.0))
                    throw ConfigError(at("model.bounds"), "need x_min < x_max and 0 < y_min < y_max");
                if (!b.contains(n.initial_position))
                    throw ConfigError(at("initial_position"), "outside the random-waypoint bounds");
            }
        }
    }

    Scenario parse_scenario(const json &doc)
    {
        Scenario s;
        Fields root(doc, "");
        s.name = root.get<std::string>("name", s.name);
        s.ticks = root.require<std::int64_t>("ticks");
        s.dt_s = root.get<double>("dt_s", s.dt_s);
        s.seed = root.get<std::uint64_t>("seed", s.seed);
        s.join_snr_db = root.get<double>("join_snr_db", s.join_snr_db);
        s.join_snapshots = root.get<int>("join_snapshots", s.join_snapshots);

        if (const json *r = root.find("router"))
        {
            Fields f(*r, "router");
            auto &c = s.router;
            c.capacity = f.get<int>("capacity", c.capacity);
            c.range_m = f.get<double>("range_m", c.range_m);
            c.beacon_period_ticks = f.get<int>("beacon_period_ticks", c.beacon_period_ticks);
            c.beacon_duty = f.get<double>("beacon_duty", c.beacon_duty);
            c.track_update_ticks = f.get<int>("track_update_ticks", c.track_update_ticks);
            c.retrack_threshold_deg = f.optional<double>("retrack_threshold_deg");
            if (const json *g = f.find("geometry"))
            {
                Fields fg(*g, "router.geometry");
                c.geometry.num_elements = fg.get<int>("num_elements", c.geometry.num_elements);
                c.geometry.spacing = fg.get<double>("spacing", c.geometry.spacing);
                fg.finish();
            }
            const auto method = f.get<std::string>("doa_method", std::string(to_string(c.doa_method)));
            try
            {
                c.doa_method = parse_doa_method(method);
            }
            catch (const DomainError &e)
            {
                throw ConfigError("router.doa_method", e.what());
            }
            c.doa_options.grid_step_deg = f.get<double>("grid_step_deg", c.doa_options.grid_step_deg);
            c.doa_options.pencil_param = f.optional<int>("pencil_param");
            const auto tracking = f.get<std::string>("tracking", "ideal");
            if (tracking == "ideal")
                c.tracking = TrackingMode::Ideal;
            else if (tracking == "measured")
                c.tracking = TrackingMode::Measured;
            else
                throw ConfigError("router.tracking", fmt::format("expected 'ideal' or 'measured', got '{}'", tracking));
            c.measure_snr_db = f.get<double>("measure_snr_db", c.measure_snr_db);
            c.measure_snapshots = f.get<int>("measure_snapshots", c.measure_snapshots);
            f.finish();
        }
        s.router.measure_seed = s.seed;

        if (const json *p = root.find("power"))
        {
            Fields f(*p, "power");
            auto &pp = s.power;
            pp.p_omni_w = f.get<double>("p_omni_w", pp.p_omni_w);
            pp.beacon_fraction = f.get<double>("beacon_fraction", pp.beacon_fraction);
            pp.pathloss_exponent = f.get<double>("pathloss_exponent", pp.pathloss_exponent);
            pp.ref_range_m = f.get<double>("ref_range_m", pp.ref_range_m);
            pp.demand_ref = f.get<double>("demand_ref", pp.demand_ref);
            f.finish();
        }
        if (s.power.demand_ref > 0.0)
            s.power.demand_duty = clamped_linear_duty(s.power.demand_ref);

        if (const json *nodes = root.find("nodes"))
        {
            if (!nodes->is_array())
                throw ConfigError("nodes", "expected an array");
            for (std::size_t i = 0; i < nodes->size(); ++i)
            {
                const std::string path = fmt::format("nodes[{}]", i);
                Fields f((*nodes)[i], path);
                NodeSpec n;
                n.node_id = f.require<NodeId>("node_id");
                n.arrival_tick = f.get<std::int64_t>("arrival_tick", 0);
                n.departure_tick = f.optional<std::int64_t>("departure_tick");
                const json *pos = f.find("initial_position");
                if (!pos)
                    throw ConfigError(path + ".initial_position", "missing required field");
                n.initial_position = parse_position(*pos, path + ".initial_position");
                if (const json *m = f.find("model"))
                    n.model = parse_model(*m, path + ".model");
                n.demand = f.get<double>("demand", n.demand);
                f.finish();
                s.nodes.push_back(n);
            }
        }
        root.finish();
        s.validate();
        return s;
    }

    Scenario load_scenario(const std::filesystem::path &file)
    {
        std::ifstream is(file);
        if (!is)
            throw ConfigError(file.string(), "cannot open scenario file");
        json doc;
        try
        {
            doc = json::parse(is);
        }
        catch (const json::parse_error &e)
        {
            throw ConfigError(file.string(), e.what());
        }
        return parse_scenario(doc);
    }

    nlohmann::ordered_json scenario_to_json(const Scenario &s)
    {
        nlohmann::ordered_json j;
        j["name"] = s.name;
        j["ticks"] = s.ticks;
        j["dt_s"] = s.dt_s;
        j["seed"] = s.seed;
        j["join_snr_db"] = s.join_snr_db;
        j["join_snapshots"] = s.join_snapshots;
        const auto &c = s.router;
        j["router"] = {{"capacity", c.capacity},
                       {"range_m", c.range_m},
                       {"beacon_period_ticks", c.beacon_period_ticks},
                       {"beacon_duty", c.beacon_duty},
                       {"track_update_ticks", c.track_update_ticks},
                       {"retrack_threshold_deg", c.retrack_threshold_deg ? json(*c.retrack_threshold_deg) : json(nullptr)},
                       {"geometry", {{"num_elements", c.geometry.num_elements}, {"spacing", c.geometry.spacing}}},
                       {"doa_method", std::string(to_string(c.doa_method))},
                       {"grid_step_deg", c.doa_options.grid_step_deg},
                       {"tracking", c.tracking == TrackingMode::Ideal ? "ideal" : "measured"},
                       {"measure_snr_db", c.measure_snr_db},
                       {"measure_snapshots", c.measure_snapshots}};
        if (c.doa_options.pencil_param)
            j["router"]["pencil_param"] = *c.doa_options.pencil_param;
        const auto &p = s.power;
        j["power"] = {{"p_omni_w", p.p_omni_w},
                      {"beacon_fraction", p.beacon_fraction},
                      {"pathloss_exponent", p.pathloss_exponent},
                      {"ref_range_m", p.ref_range_m},
                      {"demand_ref", p.demand_ref}};
        j["nodes"] = nlohmann::ordered_json::array();
        for (const auto &n : s.nodes)
        {
            nlohmann::ordered_json jn;
            jn["node_id"] = n.node_id;
            jn["arrival_tick"] = n.arrival_tick;
            if (n.departure_tick)
                jn["departure_tick"] = *n.departure_tick;
            jn["initial_position"] = {{"x_m", n.initial_position.x_m}, {"y_m", n.initial_position.y_m}};
            jn["model"] = model_to_json(n.model);
            jn["demand"] = n.demand;
            j["nodes"].push_back(jn);
        }
        return j;
    }

    RunResult run_scenario(const Scenario &scenario)
    {
        scenario.validate();
        const auto &config = scenario.router;

        RunResult result{scenario.name, {}, PowerLedger(scenario.dt_s), {}, {}, {}, {}};
        for (auto &w : config.geometry.validate())
            result.warnings.push_back(std::move(w));

        std::vector<NodeRuntime> nodes;
        nodes.reserve(scenario.nodes.size());
        for (const auto &spec : scenario.nodes)
            nodes.push_back(NodeRuntime{&spec, NodeState{spec.initial_position, std::nullopt},
                                        make_seed_stream(scenario.seed, spec.node_id), false});
        std::sort(nodes.begin(), nodes.end(), [](const NodeRuntime &a, const NodeRuntime &b)
                  { return a.spec->node_id < b.spec->node_id; });

        RouterState state;
        for (std::int64_t t = 0; t < scenario.ticks; ++t)
        {
            std::vector<RouterEvent> events;
            NodePositions positions;
            for (auto &n : nodes)
            {
                if (n.spec->departure_tick && *n.spec->departure_tick == t && n.present)
                {
                    events.emplace_back(Detach{n.spec->node_id});
                    n.present = false;
                    continue;
                }
                if (n.present)
                    n.state = advance(n.state, n.spec->model, scenario.dt_s, n.stream);
                else if (n.spec->arrival_tick == t)
                {
                    n.present = true;
                    try
                    {
                        const auto bearing = azimuth_of(n.state.position);
                        const std::array<SourceSpec, 1> src{
                            SourceSpec{bearing.azimuth_deg, scenario.join_snr_db, Waveform::Gaussian}};
                        auto x = synthesize_snapshots(config.geometry, src, scenario.join_snapshots,
                                                      derive_seed(scenario.seed, n.spec->node_id, t, 0x6a6f696eu));
                        events.emplace_back(JoinRequest{n.spec->node_id, std::move(x), n.spec->demand});
                    }
                    catch (const DomainError &e)
                    {
                        result.warnings.push_back(
                            fmt::format("tick {}: node {} cannot be heard: {}", t, n.spec->node_id, e.what()));
                    }
                }
                if (n.present)
                    positions[n.spec->node_id] = n.state.position;
            }

            auto step = tick(state, config, std::move(events), positions);
            state = std::move(step.state);
            for (auto &w : step.warnings)
                result.warnings.push_back(std::move(w));

            bool beacon = false;
            for (auto &action : step.actions)
            {
                switch (action.kind)
                {
                case ActionKind::EmitBeacon:
                    beacon = true;
                    ++result.summary.beacons;
                    break;
                case ActionKind::AssignBeam:
                    ++result.summary.joins;
                    break;
                case ActionKind::UpdateBeam:
                    ++result.summary.beam_updates;
                    break;
                case ActionKind::ReleaseBeam:
                    ++result.summary.releases;
                    break;
                case ActionKind::RejectJoin:
                    ++result.summary.rejects;
                    break;
                }
                if (action.beam)
                {
                    const double width = beam_pattern(*action.beam, config.geometry, 0.05).beamwidth_3db_deg;
                    result.beam_snapshots.push_back(BeamSnapshot{t, *action.node, *action.theta_deg, width});
                }
                result.event_log.push_back(LogRecord{t, std::move(action)});
            }

            result.ledger.append(
                tick_power(t, state, positions, scenario.power, config.geometry, beacon, config.beacon_duty));
        }

        const auto savings = savings_report(result.ledger);
        result.summary.savings_ratio = savings.savings_ratio;
        result.summary.mean_adaptive_w = savings.mean_adaptive_w;
        result.summary.mean_baseline_w = savings.mean_baseline_w;
        result.summary.ticks = scenario.ticks;
        result.final_state = std::move(state);
        return result;
    }

    std::vector<RunResult> run_scenarios(std::span<const Scenario> scenarios, unsigned threads)
    {
        std::vector<std::optional<RunResult>> slots(scenarios.size());
        std::vector<std::exception_ptr> errors(scenarios.size());
        std::atomic<std::size_t> next{0};

        const auto worker = [&]
        {
            for (std::size_t i = next++; i < scenarios.size(); i = next++)
            {
                try
                {
                    slots[i] = run_scenario(scenarios[i]);
                }
                catch (...)
                {
                    errors[i] = std::current_exception();
                }
            }
        };

        const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(scenarios.size())));
        std::vector<std::thread> pool;
        for (unsigned i = 1; i < count; ++i)
            pool.emplace_back(worker);
        worker();
        for (auto &th : pool)
            th.join();

        std::vector<RunResult> out;
        for (std::size_t i = 0; i < slots.size(); ++i)
        {
            if (errors[i])
                std::rethrow_exception(errors[i]);
            out.push_back(std::move(*slots[i]));
        }
        return out;
    }

    std::string summary_json(const RunSummary &s)
    {
        nlohmann::ordered_json j;
        j["savings_ratio"] = s.savings_ratio;
        j["mean_adaptive_w"] = s.mean_adaptive_w;
        j["mean_baseline_w"] = s.mean_baseline_w;
        j["joins"] = s.joins;
        j["rejects"] = s.rejects;
        j["beam_updates"] = s.beam_updates;
        j["releases"] = s.releases;
        j["beacons"] = s.beacons;
        j["ticks"] = s.ticks;
        return j.dump(2) + "\n";
    }

    void emit_reports(const RunResult &result, const std::filesystem::path &out_dir)
    {
        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        if (ec)
            throw std::runtime_error(fmt::format("cannot create '{}': {}", out_dir.string(), ec.message()));

        {
            const auto file = out_dir / "events.log";
            auto os = open_for_write(file);
            for (const auto &rec : result.event_log)
                os << format_log_line(rec.tick, rec.action) << '\n';
            check_written(os, file);
        }
        {
            const auto file = out_dir / "power.csv";
            auto os = open_for_write(file);
            write_ledger_csv(os, result.ledger);
            check_written(os, file);
        }
        {
            const auto file = out_dir / "summary.json";
            auto os = open_for_write(file);
            os << summary_json(result.summary);
            check_written(os, file);
        }
        {
            const auto file = out_dir / "beam_snapshots.csv";
            auto os = open_for_write(file);
            os << "tick,node_id,theta_deg,beamwidth_deg\n";
            for (const auto &b : result.beam_snapshots)
                os << fmt::format("{},{},{:.6f},{:.6f}\n", b.tick, b.node_id, b.theta_deg, b.beamwidth_deg);
            check_written(os, file);
        }
    }

    LogRecord parse_log_line(const std::string &line)
    {
        const auto fail = [&](const char *why)
        { return std::runtime_error(fmt::format("malformed event line ({}): '{}'", why, line)); };

        const auto detail_pos = line.find(" detail=");
        if (detail_pos == std::string::npos)
            throw fail("no detail field");

        std::istringstream head(line.substr(0, detail_pos));
        std::string token;
        std::array<std::string, 4> values;
        constexpr std::array<const char *, 4> keys{"tick=", "action=", "node=", "theta="};
        for (std::size_t i = 0; i < keys.size(); ++i)
        {
            if (!(head >> token) || token.rfind(keys[i], 0) != 0)
                throw fail(keys[i]);
            values[i] = token.substr(std::char_traits<char>::length(keys[i]));
        }

        LogRecord rec;
        try
        {
            rec.tick = std::stoll(values[0]);
            const auto kind = parse_action_kind(values[1]);
            if (!kind)
                throw fail("action");
            rec.action.kind = *kind;
            if (values[2] != "-")
                rec.action.node = static_cast<NodeId>(std::stoul(values[2]));
            if (values[3] != "-")
                rec.action.theta_deg = std::stod(values[3]);
        }
        catch (const std::logic_error &)
        {
            throw fail("number");
        }
        const std::string detail = line.substr(detail_pos + 8);
        rec.action.detail = detail == "-" ? "" : detail;
        return rec;
    }

    RunSummary recompute_summary(const std::filesystem::path &dir)
    {
        RunSummary s;

        const auto power_file = dir / "power.csv";
        std::ifstream power(power_file);
        if (!power)
            throw std::runtime_error(fmt::format("cannot open '{}'", power_file.string()));
        std::string line;
        if (!std::getline(power, line) || line != ledger_csv_header)
            throw std::runtime_error(fmt::format("'{}' lacks the ledger header", power_file.string()));

        double sum_adaptive = 0.0, sum_baseline = 0.0, last_adaptive_j = 0.0, last_baseline_j = 0.0;
        while (std::getline(power, line))
        {
            if (line.empty())
                continue;
            std::array<double, 7> cols{};
            std::istringstream row(line);
            std::string cell;
            for (std::size_t i = 0; i < cols.size(); ++i)
            {
                if (!std::getline(row, cell, ','))
                    throw std::runtime_error(fmt::format("short row in '{}': '{}'", power_file.string(), line));
                cols[i] = std::stod(cell);
            }
            sum_adaptive += cols[3];
            sum_baseline += cols[4];
            last_adaptive_j = cols[5];
            last_baseline_j = cols[6];
            ++s.ticks;
        }
        if (s.ticks == 0)
            throw DomainError(fmt::format("'{}' has no ledger rows", power_file.string()));
        s.savings_ratio = 1.0 - last_adaptive_j / last_baseline_j;
        s.mean_adaptive_w = sum_adaptive / static_cast<double>(s.ticks);
        s.mean_baseline_w = sum_baseline / static_cast<double>(s.ticks);

        const auto events_file = dir / "events.log";
        std::ifstream events(events_file);
        if (!events)
            throw std::runtime_error(fmt::format("cannot open '{}'", events_file.string()));
        while (std::getline(events, line))
        {
            if (line.empty())
                continue;
            switch (parse_log_line(line).action.kind)
            {
            case ActionKind::EmitBeacon:
                ++s.beacons;
                break;
            case ActionKind::AssignBeam:
                ++s.joins;
                break;
            case ActionKind::UpdateBeam:
                ++s.beam_updates;
                break;
            case ActionKind::ReleaseBeam:
                ++s.releases;
                break;
            case ActionKind::RejectJoin:
                ++s.rejects;
                break;
            }
        }
        return s;
    }
}
