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

#ifndef SMARTAP_DOA_HPP
#define SMARTAP_DOA_HPP

// Direction-of-arrival estimation: MUSIC pseudospectrum search and the Matrix Pencil method.
// The number of sources is always supplied by the caller.

#include "smartap/array_model.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace smartap
{
    enum class DoaMethod
    {
        Music,
        MatrixPencil
    };

    std::string_view to_string(DoaMethod method);
    DoaMethod parse_doa_method(std::string_view name); // "music" | "pencil"

    // Pseudospectrum sampled on the grid -90+step, -90+2*step, ..., 90-step
    struct Pseudospectrum
    {
        double grid_step_deg = 0.1;
        std::vector<double> azimuth_deg;
        std::vector<double> value;
        bool degraded = false; // Signal/noise eigenvalue boundary was degenerate
    };

    struct PeakSet
    {
        std::vector<double> azimuth_deg;  // Ascending
        std::vector<std::size_t> index;   // Grid indices, same order as azimuth_deg
        std::vector<bool> is_local_max;   // False for padding entries
        bool degraded = false;            // Fewer than k strict local maxima existed
    };

    struct DoaResult
    {
        std::vector<double> azimuth_deg; // Strictly increasing, each in (-90, 90)
        DoaMethod method = DoaMethod::Music;
        std::optional<Pseudospectrum> spectrum;
        bool degraded = false;
    };

    struct DoaOptions
    {
        double grid_step_deg = 0.1;
        std::optional<int> pencil_param; // Defaults to floor(M / 2)
    };

    // 1 / (a^H En En^H a) with En spanning the M-K smallest eigenvalues of r
    Pseudospectrum music_spectrum(const CovarianceMatrix &r, const ArrayGeometry &geometry,
                                  int num_sources, double grid_step_deg);

    // Same, validating a raw matrix first (non-Hermitian input throws DomainError)
    Pseudospectrum music_spectrum(const CMatrix &r, const ArrayGeometry &geometry,
                                  int num_sources, double grid_step_deg);

    // The k largest strict interior local maxima, ties toward smaller azimuth.
    // Pads with the largest remaining grid values and sets `degraded` if there are fewer than k.
    PeakSet find_peaks(const Pseudospectrum &spectrum, int k);

    DoaResult matrix_pencil_doa(const SnapshotMatrix &x, int num_sources,
                                std::optional<int> pencil_param = std::nullopt);

    DoaResult estimate_doa(const SnapshotMatrix &x, DoaMethod method, int num_sources,
                           const DoaOptions &options = {});
}

#endif
