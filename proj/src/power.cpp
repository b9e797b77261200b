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

#include "smartap/power.hpp"
#include "smartap/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace smartap
{
    std::function<double(double)> clamped_linear_duty(double demand_ref)
    {
        return [demand_ref](double demand)
        { return std::clamp(demand / demand_ref, 0.01, 1.0); };
    }

    void PowerParams::validate() const
    {
        if (!(p_omni_w > 0.0) || !std::isfinite(p_omni_w))
            throw ConfigError("power.p_omni_w", fmt::format("must be positive, got {}", p_omni_w));
        if (!(beacon_fraction > 0.0 && beacon_fraction < 1.0))
            throw ConfigError("power.beacon_fraction", fmt::format("must lie in (0, 1), got {}", beacon_fraction));
        if (!(pathloss_exponent >= 1.5 && pathloss_exponent <= 4.5))
            throw ConfigError("power.pathloss_exponent", fmt::format("must lie in [1.5, 4.5], got {}", pathloss_exponent));
        if (!(ref_range_m > 0.0) || !std::isfinite(ref_range_m))
            throw ConfigError("power.ref_range_m", fmt::format("must be positive, got {}", ref_range_m));
        if (!(demand_ref > 0.0) || !std::isfinite(demand_ref))
            throw ConfigError("power.demand_ref", fmt::format("must be positive, got {}", demand_ref));
        if (!demand_duty)
            throw ConfigError("power.demand_duty", "no duty map set");
    }

    PowerLedger::PowerLedger(double dt_s) : dt_s_(dt_s)
    {
        if (!(dt_s > 0.0))
            throw DomainError(fmt::format("ledger time step must be positive, got {}", dt_s));
    }

    const PowerRow &PowerLedger::append(PowerRow row)
    {
        if (row.beacon_w < 0.0 || row.beams_w < 0.0 || row.adaptive_w < 0.0 || row.baseline_w < 0.0)
            throw IntegrityError(fmt::format("negative power in ledger row for tick {}", row.tick));
        adaptive_j_ += row.adaptive_w * dt_s_;
        baseline_j_ += row.baseline_w * dt_s_;
        row.cum_adaptive_j = adaptive_j_;
        row.cum_baseline_j = baseline_j_;
        rows_.push_back(row);
        return rows_.back();
    }

    double beam_power(const ServedEntry &entry, double node_range_m, const PowerParams &params,
                      const ArrayGeometry &geometry)
    {
        if (!(node_range_m > 0.0))
            throw DomainError(fmt::format("node range must be positive, got {}", node_range_m));
        const double gain = beam_gain_at(entry.beam, geometry, entry.last_doa_deg);
        if (gain < 1e-6)
            throw IntegrityError(fmt::format("beam for node {} has gain {:.3e} toward its own target {} deg",
                                             entry.node_id, gain, entry.last_doa_deg));
        const double duty = params.demand_duty(entry.demand);
        return params.p_omni_w * std::pow(node_range_m / params.ref_range_m, params.pathloss_exponent) / gain * duty;
    }

    PowerRow tick_power(std::int64_t tick, const RouterState &state, const NodePositions &node_positions,
                        const PowerParams &params, const ArrayGeometry &geometry, bool beacon_emitted,
                        double beacon_duty)
    {
        PowerRow row;
        row.tick = tick;
        row.beacon_w = beacon_emitted ? params.beacon_fraction * params.p_omni_w * beacon_duty : 0.0;
        for (const auto &[id, entry] : state.served)
        {
            const auto pos = node_positions.find(id);
            if (pos == node_positions.end())
                throw IntegrityError(fmt::format("served node {} has no position", id));
            row.beams_w += beam_power(entry, std::hypot(pos->second.x_m, pos->second.y_m), params, geometry);
        }
        row.adaptive_w = row.beacon_w + row.beams_w;
        row.baseline_w = params.p_omni_w;
        return row;
    }

    SavingsReport savings_report(const PowerLedger &ledger)
    {
        if (ledger.empty())
            throw DomainError("savings report needs a non-empty ledger");
        const double duration = ledger.dt_s() * static_cast<double>(ledger.rows().size());
        return SavingsReport{1.0 - ledger.adaptive_j() / ledger.baseline_j(),
                             ledger.adaptive_j() / duration,
                             ledger.baseline_j() / duration};
    }

    void write_ledger_csv(std::ostream &os, const PowerLedger &ledger)
    {
        os << ledger_csv_header << '\n';
        for (const auto &r : ledger.rows())
            os << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", r.tick, r.beacon_w, r.beams_w,
                              r.adaptive_w, r.baseline_w, r.cum_adaptive_j, r.cum_baseline_j);
    }
}
