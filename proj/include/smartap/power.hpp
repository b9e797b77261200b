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

#ifndef SMARTAP_POWER_HPP
#define SMARTAP_POWER_HPP

// Energy accounting: adaptive router versus an always-on omnidirectional transmitter.
//
// Link budget with the received power held constant. A node at range r served through a
// beam of gain G needs
//
//     p = p_omni * (r / ref_range)^alpha / G * duty(demand)
//
// so p_omni is what a unit-gain transmitter spends at ref_range. The baseline always
// radiates p_omni regardless of load. The beacon costs beacon_fraction * p_omni * beacon_duty
// on ticks where it is emitted.

#include "smartap/router_fsm.hpp"

#include <cstdint>
#include <functional>
#include <ostream>
#include <vector>

namespace smartap
{
    // duty = clamp(demand / demand_ref, 0.01, 1)
    std::function<double(double)> clamped_linear_duty(double demand_ref);

    struct PowerParams
    {
        double p_omni_w = 1.0;
        double beacon_fraction = 0.1;
        double pathloss_exponent = 2.0;
        double ref_range_m = 50.0;
        double demand_ref = 1.0; // Used by the default duty map
        std::function<double(double)> demand_duty = clamped_linear_duty(1.0);

        void validate() const; // Throws ConfigError
    };

    struct PowerRow
    {
        std::int64_t tick = 0;
        double beacon_w = 0.0;
        double beams_w = 0.0;
        double adaptive_w = 0.0;
        double baseline_w = 0.0;
        double cum_adaptive_j = 0.0;
        double cum_baseline_j = 0.0;
    };

    class PowerLedger
    {
    public:
        explicit PowerLedger(double dt_s = 0.1);

        // Integrates the row over one tick and fills its cumulative columns
        const PowerRow &append(PowerRow row);

        const std::vector<PowerRow> &rows() const noexcept { return rows_; }
        double adaptive_j() const noexcept { return adaptive_j_; }
        double baseline_j() const noexcept { return baseline_j_; }
        double dt_s() const noexcept { return dt_s_; }
        bool empty() const noexcept { return rows_.empty(); }

    private:
        double dt_s_;
        double adaptive_j_ = 0.0;
        double baseline_j_ = 0.0;
        std::vector<PowerRow> rows_;
    };

    struct SavingsReport
    {
        double savings_ratio = 0.0; // 1 - adaptive_j / baseline_j
        double mean_adaptive_w = 0.0;
        double mean_baseline_w = 0.0;
    };

    // Throws IntegrityError when the beam gain toward its own target is below 1e-6
    double beam_power(const ServedEntry &entry, double node_range_m, const PowerParams &params,
                      const ArrayGeometry &geometry);

    // Row for the current tick (cumulative columns left at zero until appended to a ledger)
    PowerRow tick_power(std::int64_t tick, const RouterState &state, const NodePositions &node_positions,
                        const PowerParams &params, const ArrayGeometry &geometry, bool beacon_emitted,
                        double beacon_duty);

    SavingsReport savings_report(const PowerLedger &ledger);

    // `tick,beacon_w,beams_w,adaptive_w,baseline_w,cum_adaptive_j,cum_baseline_j`, full precision
    void write_ledger_csv(std::ostream &os, const PowerLedger &ledger);
    inline constexpr const char *ledger_csv_header =
        "tick,beacon_w,beams_w,adaptive_w,baseline_w,cum_adaptive_j,cum_baseline_j";
}

#endif
