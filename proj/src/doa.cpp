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

#include "smartap/doa.hpp"
#include "smartap/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace smartap
{
    std::string_view to_string(DoaMethod method)
    {
        return method == DoaMethod::Music ? "music" : "pencil";
    }

    DoaMethod parse_doa_method(std::string_view name)
    {
        if (name == "music")
            return DoaMethod::Music;
        if (name == "pencil" || name == "matrix_pencil")
            return DoaMethod::MatrixPencil;
        throw DomainError(fmt::format("unknown DOA method '{}'", name));
    }

    Pseudospectrum music_spectrum(const CovarianceMatrix &r, const ArrayGeometry &geometry,
                                  int num_sources, double grid_step_deg)
    {
        geometry.validate();
        const int M = geometry.num_elements;
        if (r.size() != M)
            throw DomainError(fmt::format("covariance is {0}x{0} but the array has {1} elements", r.size(), M));
        if (num_sources < 1 || num_sources >= M)
            throw DomainError(fmt::format("MUSIC needs 1 <= sources < elements, got {} sources for {} elements",
                                          num_sources, M));
        if (!(grid_step_deg > 0.0) || grid_step_deg >= 90.0)
            throw DomainError(fmt::format("grid step must lie in (0, 90) deg, got {}", grid_step_deg));

        Eigen::SelfAdjointEigenSolver<CMatrix> eig(r.matrix());
        if (eig.info() != Eigen::Success)
            throw DomainError("eigendecomposition of the covariance matrix failed");

        // Eigenvalues come back ascending: the first M-K columns span the noise subspace
        const int noise_dim = M - num_sources;
        const CMatrix En = eig.eigenvectors().leftCols(noise_dim);

        Pseudospectrum out;
        out.grid_step_deg = grid_step_deg;

        const auto &lambda = eig.eigenvalues();
        const double scale = std::max(std::abs(r.matrix().trace().real()), std::numeric_limits<double>::min());
        out.degraded = (lambda(noise_dim) - lambda(noise_dim - 1)) <= 1e-9 * scale;

        const auto n = static_cast<std::size_t>(std::floor((180.0 - 2.0 * grid_step_deg) / grid_step_deg + 1e-9)) + 1;
        out.azimuth_deg.reserve(n);
        out.value.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            const double az = -90.0 + grid_step_deg * static_cast<double>(i + 1);
            if (!azimuth_in_field_of_view(az))
                break;
            const CVector a = steering_vector(geometry, az);
            const double denom = (En.adjoint() * a).squaredNorm();
            out.azimuth_deg.push_back(az);
            out.value.push_back(1.0 / std::max(denom, 1e-300));
        }
        return out;
    }

    Pseudospectrum music_spectrum(const CMatrix &r, const ArrayGeometry &geometry,
                                  int num_sources, double grid_step_deg)
    {
        return music_spectrum(CovarianceMatrix::validated(r), geometry, num_sources, grid_step_deg);
    }

    PeakSet find_peaks(const Pseudospectrum &spectrum, int k)
    {
        const auto &v = spectrum.value;
        if (v.empty() || v.size() != spectrum.azimuth_deg.size())
            throw DomainError("spectrum is empty or has mismatched grid and values");
        if (k < 1)
            throw DomainError(fmt::format("need k >= 1 peaks, got {}", k));
        if (static_cast<std::size_t>(k) > v.size())
            throw DomainError(fmt::format("requested {} peaks from a grid of {} points", k, v.size()));

        // Larger value first; equal values resolve toward the smaller azimuth (lower index)
        const auto higher = [&](std::size_t a, std::size_t b)
        { return v[a] != v[b] ? v[a] > v[b] : a < b; };

        std::vector<std::size_t> maxima;
        for (std::size_t i = 1; i + 1 < v.size(); ++i)
            if (v[i] > v[i - 1] && v[i] > v[i + 1])
                maxima.push_back(i);
        std::sort(maxima.begin(), maxima.end(), higher);

        const auto want = static_cast<std::size_t>(k);
        std::vector<std::pair<std::size_t, bool>> chosen;
        for (std::size_t i = 0; i < std::min(want, maxima.size()); ++i)
            chosen.emplace_back(maxima[i], true);

        PeakSet out;
        if (chosen.size() < want)
        {
            out.degraded = true;
            std::vector<bool> taken(v.size(), false);
            for (const auto &c : chosen)
                taken[c.first] = true;
            std::vector<std::size_t> rest;
            for (std::size_t i = 0; i < v.size(); ++i)
                if (!taken[i])
                    rest.push_back(i);
            std::sort(rest.begin(), rest.end(), higher);
            for (std::size_t i = 0; chosen.size() < want; ++i)
                chosen.emplace_back(rest[i], false);
        }

        std::sort(chosen.begin(), chosen.end());
        for (const auto &[idx, is_max] : chosen)
        {
            out.index.push_back(idx);
            out.azimuth_deg.push_back(spectrum.azimuth_deg[idx]);
            out.is_local_max.push_back(is_max);
        }
        return out;
    }

    namespace
    {
        // Vertex of the parabola through three log-domain samples around a strict local maximum
        double refine_peak(const Pseudospectrum &s, std::size_t i)
        {
            const double ym = std::log(s.value[i - 1]);
            const double y0 = std::log(s.value[i]);
            const double yp = std::log(s.value[i + 1]);
            const double curvature = ym - 2.0 * y0 + yp;
            if (!(curvature < 0.0))
                return s.azimuth_deg[i];
            const double offset = std::clamp(0.5 * (ym - yp) / curvature, -0.5, 0.5);
            return s.azimuth_deg[i] + offset * s.grid_step_deg;
        }

        void require_strictly_increasing(const std::vector<double> &az)
        {
            for (std::size_t i = 1; i < az.size(); ++i)
                if (!(az[i] > az[i - 1]))
                    throw EstimationError(fmt::format("coincident azimuth estimates at {} deg", az[i]), cd(0.0, 0.0));
        }
    }

    DoaResult matrix_pencil_doa(const SnapshotMatrix &x, int num_sources, std::optional<int> pencil_param)
    {
        const ArrayGeometry &geometry = x.geometry();
        const int M = geometry.num_elements;
        const int K = num_sources;
        if (K < 1)
            throw DomainError(fmt::format("need at least one source, got {}", K));
        if (M < 2 * K)
            throw DomainError(fmt::format("matrix pencil needs M >= 2K, got M = {} and K = {}", M, K));
        const int L = pencil_param.value_or(M / 2);
        if (L < K || L > M - K)
            throw DomainError(fmt::format("pencil parameter {} outside [{}, {}]", L, K, M - K));

        // One spatial vector: the snapshot itself, or the principal left singular vector
        // of the snapshot matrix (dominant eigenvector of X X^H) for N > 1
        CVector y;
        if (x.num_snapshots() == 1)
            y = x.samples().col(0);
        else
        {
            const CMatrix gram = x.samples() * x.samples().adjoint();
            Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (gram + gram.adjoint()));
            y = eig.eigenvectors().col(M - 1);
        }

        // Hankel data matrix, (M-L) x (L+1); Y0 and Y1 are its first and last L columns
        CMatrix Y(M - L, L + 1);
        for (int i = 0; i < M - L; ++i)
            for (int j = 0; j <= L; ++j)
                Y(i, j) = y(i + j);

        Eigen::JacobiSVD<CMatrix> svd(Y, Eigen::ComputeThinV);
        const CMatrix Vk = svd.matrixV().leftCols(K);
        const CMatrix V1h = Vk.topRows(L).adjoint();    // K x L, row space of truncated Y0
        const CMatrix V2h = Vk.bottomRows(L).adjoint(); // K x L, row space of truncated Y1

        // V2h = T diag(z) T^-1 V1h, so the pencil eigenvalues are those of V2h pinv(V1h)
        const CMatrix reduced = V2h * V1h.completeOrthogonalDecomposition().pseudoInverse();
        Eigen::ComplexEigenSolver<CMatrix> ces(reduced, false);
        if (ces.info() != Eigen::Success)
            throw EstimationError("eigendecomposition of the reduced pencil failed", cd(0.0, 0.0));

        DoaResult out;
        out.method = DoaMethod::MatrixPencil;
        for (int k = 0; k < K; ++k)
        {
            const cd z = ces.eigenvalues()(k);
            const double s = std::arg(z) / (2.0 * pi * geometry.spacing);
            if (!(std::abs(s) < 1.0))
                throw EstimationError(fmt::format("pencil eigenvalue ({}, {}) maps to sin(theta) = {}",
                                                  z.real(), z.imag(), s),
                                      z);
            out.azimuth_deg.push_back(rad_to_deg(std::asin(s)));
        }
        std::sort(out.azimuth_deg.begin(), out.azimuth_deg.end());
        require_strictly_increasing(out.azimuth_deg);
        return out;
    }

    DoaResult estimate_doa(const SnapshotMatrix &x, DoaMethod method, int num_sources, const DoaOptions &options)
    {
        if (num_sources < 1)
            throw DomainError(fmt::format("need at least one source, got {}", num_sources));

        if (method == DoaMethod::MatrixPencil)
            return matrix_pencil_doa(x, num_sources, options.pencil_param);

        const auto r = sample_covariance(x);
        auto spectrum = music_spectrum(r, x.geometry(), num_sources, options.grid_step_deg);
        const auto peaks = find_peaks(spectrum, num_sources);

        DoaResult out;
        out.method = DoaMethod::Music;
        out.degraded = spectrum.degraded || peaks.degraded;
        for (std::size_t i = 0; i < peaks.index.size(); ++i)
        {
            const std::size_t idx = peaks.index[i];
            out.azimuth_deg.push_back(peaks.is_local_max[i] ? refine_peak(spectrum, idx) : spectrum.azimuth_deg[idx]);
        }
        std::sort(out.azimuth_deg.begin(), out.azimuth_deg.end());
        require_strictly_increasing(out.azimuth_deg);
        out.spectrum = std::move(spectrum);
        return out;
    }
}
