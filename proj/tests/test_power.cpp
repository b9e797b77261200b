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

#include "smartap/errors.hpp"
#include "smartap/power.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace smartap;

namespace
{
    ServedEntry conjugate_entry(const ArrayGeometry &g, NodeId id, double azimuth_deg, double demand = 1.0)
    {
        return {id, conjugate_weights(g, azimuth_deg), azimuth_deg, 0, demand};
    }

    // Savings of a single stationary node at the reference range, written out from the link budget:
    // beacons every `period` ticks while idle or serving, beam power p/M from the join tick on.
    double single_node_savings(int M, long ticks, long join_tick, long period)
    {
        const double p = 1.0, beacon = 0.1 * p * 0.1;
        double adaptive = 0.0;
        for (long t = 0; t < ticks; ++t)
        {
            if (t % period == 0)
                adaptive += beacon;
            if (t >= join_tick)
                adaptive += p / M;
        }
        return 1.0 - adaptive / (p * static_cast<double>(ticks));
    }

    SavingsReport simulate_single_node(int M)
    {
        const ArrayGeometry g{M, 0.5};
        const PowerParams params;
        RouterState state;
        const NodePositions pos{{1, {30.0, 40.0}}};
        PowerLedger ledger(0.1);
        for (std::int64_t t = 0; t < 1000; ++t)
        {
            if (t == 10)
                state.served.emplace(1, conjugate_entry(g, 1, 36.86989764584402));
            ledger.append(tick_power(t, state, pos, params, g, t % 10 == 0, 0.1));
        }
        return savings_report(ledger);
    }
}

TEST_CASE("beam power examples")
{
    const ArrayGeometry g{8, 0.5};
    PowerParams params;
    params.p_omni_w = 2.0;

    CHECK(beam_power(conjugate_entry(g, 1, 10.0), 50.0, params, g) == doctest::Approx(2.0 / 8.0));

    const ArrayGeometry single{1, 0.5};
    CHECK(beam_power(conjugate_entry(single, 1, 0.0), 25.0, params, single) == doctest::Approx(2.0 / 4.0));
    CHECK(beam_power(conjugate_entry(single, 1, 0.0), 50.0, params, single) == doctest::Approx(2.0));

    CHECK(beam_power(conjugate_entry(g, 1, 10.0, 0.0), 50.0, params, g) == doctest::Approx(0.01 * 2.0 / 8.0));
    CHECK(beam_power(conjugate_entry(g, 1, 10.0, 0.5), 50.0, params, g) == doctest::Approx(0.5 * 2.0 / 8.0));
    CHECK(beam_power(conjugate_entry(g, 1, 10.0, 7.0), 50.0, params, g) == doctest::Approx(2.0 / 8.0));

    params.pathloss_exponent = 3.0;
    CHECK(beam_power(conjugate_entry(g, 1, 10.0), 100.0, params, g) == doctest::Approx(2.0 * 8.0 / 8.0));
}

TEST_CASE("beam pointed away from its own target is an integrity error")
{
    const ArrayGeometry g{8, 0.5};
    auto entry = conjugate_entry(g, 1, 0.0);
    entry.last_doa_deg = std::asin(0.25) * 180.0 / 3.14159265358979323846; // first null of the broadside beam
    CHECK_THROWS_AS(beam_power(entry, 50.0, PowerParams{}, g), IntegrityError);
    CHECK_THROWS_AS(beam_power(conjugate_entry(g, 1, 0.0), 0.0, PowerParams{}, g), DomainError);
}

TEST_CASE("tick power rows")
{
    const ArrayGeometry g{8, 0.5};
    const PowerParams params;

    SUBCASE("idle beacon tick")
    {
        const auto row = tick_power(0, RouterState{}, {}, params, g, true, 0.1);
        CHECK(row.beacon_w == doctest::Approx(0.01));
        CHECK(row.beams_w == 0.0);
        CHECK(row.adaptive_w == doctest::Approx(0.01));
        CHECK(row.baseline_w == 1.0);
        CHECK(row.adaptive_w < row.baseline_w);
    }
    SUBCASE("one node at the reference range, non-beacon tick")
    {
        RouterState state;
        state.served.emplace(1, conjugate_entry(g, 1, 36.86989764584402));
        const auto row = tick_power(3, state, {{1, {30.0, 40.0}}}, params, g, false, 0.1);
        CHECK(row.beacon_w == 0.0);
        CHECK(row.adaptive_w / row.baseline_w == doctest::Approx(0.125).epsilon(1e-12));
    }
    SUBCASE("many nodes may exceed the baseline")
    {
        RouterState state;
        NodePositions pos;
        for (NodeId id = 1; id <= 8; ++id)
        {
            state.served.emplace(id, conjugate_entry(g, id, -70.0 + 15.0 * id));
            pos[id] = {0.0, 60.0};
        }
        const auto row = tick_power(1, state, pos, params, g, false, 0.1);
        CHECK(row.adaptive_w > 0.0);
    }
    SUBCASE("served node without a position")
    {
        RouterState state;
        state.served.emplace(1, conjugate_entry(g, 1, 0.0));
        CHECK_THROWS_AS(tick_power(1, state, {}, params, g, false, 0.1), IntegrityError);
    }
}

TEST_CASE("savings report examples")
{
    PowerLedger same(0.1), none(0.1), empty(0.1);
    for (int t = 0; t < 10; ++t)
    {
        same.append({t, 0.0, 1.0, 1.0, 1.0, 0.0, 0.0});
        none.append({t, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0});
    }
    CHECK(savings_report(same).savings_ratio == doctest::Approx(0.0));
    CHECK(savings_report(none).savings_ratio == doctest::Approx(1.0));
    CHECK(savings_report(same).mean_adaptive_w == doctest::Approx(1.0));
    CHECK_THROWS_AS(savings_report(empty), DomainError);
}

TEST_CASE("single stationary node savings")
{
    const auto rep = simulate_single_node(8);
    const double oracle = single_node_savings(8, 1000, 10, 10);
    CHECK(rep.savings_ratio > 0.5);
    CHECK(rep.savings_ratio == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(rep.savings_ratio == doctest::Approx(0.87525).epsilon(1e-12));

    double previous = -1.0;
    for (int M : {2, 4, 8, 16})
    {
        const double s = simulate_single_node(M).savings_ratio;
        CHECK(s == doctest::Approx(single_node_savings(M, 1000, 10, 10)).epsilon(1e-12));
        CHECK(s >= previous);
        previous = s;
    }
}

TEST_CASE("ledger accumulates energy monotonically")
{
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> w(0.0, 3.0);
    PowerLedger ledger(0.25);
    double prev_a = 0.0, prev_b = 0.0, sum_a = 0.0;
    for (int t = 0; t < 500; ++t)
    {
        const double beacon = w(rng), beams = w(rng);
        const auto &row = ledger.append({t, beacon, beams, beacon + beams, 1.0, 0.0, 0.0});
        sum_a += (beacon + beams) * 0.25;
        CHECK(row.cum_adaptive_j >= prev_a);
        CHECK(row.cum_baseline_j >= prev_b);
        prev_a = row.cum_adaptive_j;
        prev_b = row.cum_baseline_j;
    }
    CHECK(ledger.adaptive_j() == doctest::Approx(sum_a));
    CHECK(ledger.baseline_j() == doctest::Approx(125.0));
    CHECK_THROWS_AS(ledger.append({500, -1.0, 0.0, 0.0, 1.0, 0.0, 0.0}), IntegrityError);
    CHECK_THROWS_AS(PowerLedger(0.0), DomainError);
}

TEST_CASE("default duty map is monotone with a floor")
{
    const auto duty = clamped_linear_duty(4.0);
    CHECK(duty(0.0) == doctest::Approx(0.01));
    CHECK(duty(1.0) == doctest::Approx(0.25));
    CHECK(duty(100.0) == doctest::Approx(1.0));
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> d(0.0, 10.0);
    for (int i = 0; i < 1000; ++i)
    {
        double a = d(rng), b = d(rng);
        if (a > b)
            std::swap(a, b);
        CHECK(duty(a) <= duty(b));
        CHECK(duty(a) > 0.0);
        CHECK(duty(b) <= 1.0);
    }
}

TEST_CASE("power parameter validation")
{
    PowerParams p;
    CHECK_NOTHROW(p.validate());
    p.pathloss_exponent = 5.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = {};
    p.beacon_fraction = 1.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = {};
    p.p_omni_w = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("ledger CSV")
{
    PowerLedger ledger(0.1);
    ledger.append({0, 0.01, 0.0, 0.01, 1.0, 0.0, 0.0});
    ledger.append({1, 0.0, 0.125, 0.125, 1.0, 0.0, 0.0});
    std::ostringstream os;
    write_ledger_csv(os, ledger);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == ledger_csv_header);
    std::getline(is, line);
    CHECK(line == "0,0.01,0,0.01,1,0.001,0.10000000000000001");
    std::getline(is, line);
    CHECK(line.rfind("1,0,0.125,0.125,1,", 0) == 0);
}
