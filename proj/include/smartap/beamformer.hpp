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

#ifndef SMARTAP_BEAMFORMER_HPP
#define SMARTAP_BEAMFORMER_HPP

// Per-node transmit beams. Gain toward azimuth theta is |w^H a(theta)|^2 with unit-norm w,
// so a full-aperture conjugate beam reaches gain M at its target and the average over
// uniform sin(theta) is 1 (same radiated power as a single isotropic element).

#include "smartap/array_model.hpp"

#include <vector>

namespace smartap
{
    // Constraint directions closer than this are rejected as ill-conditioned
    inline constexpr double min_constraint_separation_deg = 1.0;

    struct BeamWeights
    {
        CVector weights; // Unit norm
        double target_azimuth_deg = 0.0;
        std::vector<double> null_azimuths_deg;
    };

    struct BeamPattern
    {
        std::vector<double> azimuth_deg;
        std::vector<double> gain; // Normalized to a peak of 1
        double beamwidth_3db_deg = 0.0;
    };

    // w = a(target) / ||a(target)||
    BeamWeights conjugate_weights(const ArrayGeometry &geometry, double target_deg);

    // Zero-forcing: unit response toward target, exact zeros toward each null.
    // At most M-2 nulls; directions closer than 1 degree or a rank-deficient constraint
    // matrix throw ConditioningError carrying the smallest singular value.
    BeamWeights null_steering_weights(const ArrayGeometry &geometry, double target_deg,
                                      const std::vector<double> &nulls_deg);

    // Samples -90+step .. 90-step; grid_step in (0, 5]
    BeamPattern beam_pattern(const BeamWeights &w, const ArrayGeometry &geometry, double grid_step_deg);

    // |w^H a(azimuth)|^2, not normalized
    double beam_gain_at(const BeamWeights &w, const ArrayGeometry &geometry, double azimuth_deg);
}

#endif
