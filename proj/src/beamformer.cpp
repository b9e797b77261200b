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

#include "smartap/beamformer.hpp"
#include "smartap/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace smartap
{
    BeamWeights conjugate_weights(const ArrayGeometry &geometry, double target_deg)
    {
        const CVector a = steering_vector(geometry, target_deg);
        return BeamWeights{a / a.norm(), target_deg, {}};
    }

    BeamWeights null_steering_weights(const ArrayGeometry &geometry, double target_deg,
                                      const std::vector<double> &nulls_deg)
    {
        geometry.validate();
        require_azimuth(target_deg, "beam target");
        if (nulls_deg.empty())
            return conjugate_weights(geometry, target_deg);

        const int M = geometry.num_elements;
        if (static_cast<int>(nulls_deg.size()) > M - 2)
            throw DomainError(fmt::format("{} nulls requested but a {}-element array supports at most {}",
                                          nulls_deg.size(), M, std::max(M - 2, 0)));
        for (double n : nulls_deg)
            require_azimuth(n, "null direction");

        // Constraint matrix C = [a(target), a(null_1), ...]
        std::vector<double> directions{target_deg};
        directions.insert(directions.end(), nulls_deg.begin(), nulls_deg.end());
        const auto K = static_cast<Eigen::Index>(directions.size());
        CMatrix C(M, K);
        for (Eigen::Index k = 0; k < K; ++k)
            C.col(k) = steering_vector(geometry, directions[k]);

        const Eigen::VectorXd sv = Eigen::JacobiSVD<CMatrix>(C).singularValues();
        const double sigma_min = sv(K - 1);

        for (std::size_t i = 0; i < directions.size(); ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (std::abs(directions[i] - directions[j]) < min_constraint_separation_deg)
                    throw ConditioningError(
                        fmt::format("constraint directions {} and {} deg are closer than {} deg (sigma_min {:.3e})",
                                    directions[j], directions[i], min_constraint_separation_deg, sigma_min),
                        sigma_min);
        if (sigma_min <= 1e-8 * sv(0))
            throw ConditioningError(fmt::format("constraint matrix is rank deficient (sigma_min {:.3e})", sigma_min),
                                    sigma_min);

        // Minimum-norm solution of C^H w = [1, 0, ..., 0]^T, i.e. w = C (C^H C)^-1 f
        CVector f = CVector::Zero(K);
        f(0) = 1.0;
        CVector w = C.adjoint().completeOrthogonalDecomposition().solve(f);
        w /= w.norm();
        return BeamWeights{std::move(w), target_deg, nulls_deg};
    }

    double beam_gain_at(const BeamWeights &w, const ArrayGeometry &geometry, double azimuth_deg)
    {
        if (w.weights.size() != geometry.num_elements)
            throw DomainError(fmt::format("beam has {} weights but the array has {} elements",
                                          w.weights.size(), geometry.num_elements));
        return std::norm(w.weights.dot(steering_vector(geometry, azimuth_deg))); // dot() conjugates w
    }

    BeamPattern beam_pattern(const BeamWeights &w, const ArrayGeometry &geometry, double grid_step_deg)
    {
        if (!(grid_step_deg > 0.0) || grid_step_deg > 5.0)
            throw DomainError(fmt::format("pattern grid step must lie in (0, 5] deg, got {}", grid_step_deg));

        BeamPattern p;
        const auto n = static_cast<std::size_t>(std::floor((180.0 - 2.0 * grid_step_deg) / grid_step_deg + 1e-9)) + 1;
        for (std::size_t i = 0; i < n; ++i)
        {
            const double az = -90.0 + grid_step_deg * static_cast<double>(i + 1);
            if (!azimuth_in_field_of_view(az))
                break;
            p.azimuth_deg.push_back(az);
            p.gain.push_back(beam_gain_at(w, geometry, az));
        }

        const auto peak_it = std::max_element(p.gain.begin(), p.gain.end());
        const double peak = *peak_it;
        if (peak > 0.0)
            for (double &g : p.gain)
                g /= peak;

        // Walk out from the peak to the half-power crossings; a lobe that reaches the edge
        // of the grid extends to the edge of the field of view
        const auto ipk = static_cast<std::size_t>(peak_it - p.gain.begin());
        const auto crossing = [&](std::size_t inside, std::size_t outside)
        {
            const double gi = p.gain[inside], go = p.gain[outside];
            const double t = (gi - 0.5) / (gi - go);
            return p.azimuth_deg[inside] + t * (p.azimuth_deg[outside] - p.azimuth_deg[inside]);
        };

        double left = -90.0;
        for (std::size_t i = ipk; i > 0; --i)
            if (p.gain[i - 1] < 0.5)
            {
                left = crossing(i, i - 1);
                break;
            }
        double right = 90.0;
        for (std::size_t i = ipk; i + 1 < p.gain.size(); ++i)
            if (p.gain[i + 1] < 0.5)
            {
                right = crossing(i, i + 1);
                break;
            }
        p.beamwidth_3db_deg = right - left;
        return p;
    }
}
