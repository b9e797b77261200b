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

#include "smartap/array_model.hpp"
#include "smartap/errors.hpp"

#include <fmt/format.h>

#include <cmath>
#include <random>

namespace smartap
{
    bool azimuth_in_field_of_view(double azimuth_deg)
    {
        return azimuth_deg > -90.0 && azimuth_deg < 90.0; // false for NaN
    }

    void require_azimuth(double azimuth_deg, const char *what)
    {
        if (!azimuth_in_field_of_view(azimuth_deg))
            throw DomainError(fmt::format("{} {} deg is outside (-90, 90)", what, azimuth_deg));
    }

    std::vector<std::string> ArrayGeometry::validate() const
    {
        if (num_elements < 1)
            throw DomainError(fmt::format("array needs at least one element, got {}", num_elements));
        if (!(spacing > 0.0) || !std::isfinite(spacing))
            throw DomainError(fmt::format("element spacing must be positive, got {}", spacing));

        std::vector<std::string> warnings;
        if (spacing > 0.5)
            warnings.push_back(fmt::format(
                "element spacing {} exceeds half a wavelength; azimuth estimates over (-90, 90) are ambiguous", spacing));
        return warnings;
    }

    SnapshotMatrix::SnapshotMatrix(CMatrix samples, ArrayGeometry geometry)
        : samples_(std::move(samples)), geometry_(geometry)
    {
        geometry_.validate();
        if (samples_.cols() < 1)
            throw DomainError("snapshot matrix needs at least one snapshot");
        if (samples_.rows() != geometry_.num_elements)
            throw DomainError(fmt::format("snapshot matrix has {} rows but the array has {} elements",
                                          samples_.rows(), geometry_.num_elements));
    }

    CovarianceMatrix CovarianceMatrix::validated(CMatrix r)
    {
        if (r.rows() != r.cols() || r.rows() == 0)
            throw DomainError("covariance matrix must be square and non-empty");

        const double scale = r.cwiseAbs().maxCoeff();
        const double asym = (r - r.adjoint()).cwiseAbs().maxCoeff();
        if (!std::isfinite(scale) || asym > 1e-12 * scale)
            throw DomainError(fmt::format("covariance matrix is not Hermitian (asymmetry {:.3e} at scale {:.3e})",
                                          asym, scale));

        if (scale > 0.0)
        {
            Eigen::SelfAdjointEigenSolver<CMatrix> eig(r, Eigen::EigenvaluesOnly);
            const double trace = r.trace().real();
            const double lowest = eig.eigenvalues()(0);
            if (lowest < -1e-10 * std::abs(trace))
                throw DomainError(fmt::format("covariance matrix is not positive semidefinite (eigenvalue {:.3e})",
                                              lowest));
        }
        return CovarianceMatrix(std::move(r));
    }

    CVector steering_vector(const ArrayGeometry &geometry, double azimuth_deg)
    {
        geometry.validate();
        require_azimuth(azimuth_deg);

        const double step = 2.0 * pi * geometry.spacing * std::sin(deg_to_rad(azimuth_deg));
        CVector a(geometry.num_elements);
        for (int m = 0; m < geometry.num_elements; ++m)
            a(m) = std::polar(1.0, step * m);
        return a;
    }

    SnapshotMatrix synthesize_snapshots(const ArrayGeometry &geometry,
                                        std::span<const SourceSpec> sources,
                                        int num_snapshots,
                                        std::uint64_t seed,
                                        NoiseModel noise)
    {
        geometry.validate();
        if (num_snapshots < 1)
            throw DomainError(fmt::format("need at least one snapshot, got {}", num_snapshots));

        for (std::size_t i = 0; i < sources.size(); ++i)
        {
            require_azimuth(sources[i].azimuth_deg, "source azimuth");
            for (std::size_t j = 0; j < i; ++j)
                if (std::abs(sources[i].azimuth_deg - sources[j].azimuth_deg) < 0.1)
                    throw DomainError(fmt::format("source azimuths {} and {} are closer than 0.1 deg",
                                                  sources[j].azimuth_deg, sources[i].azimuth_deg));
        }

        const Eigen::Index M = geometry.num_elements;
        const Eigen::Index N = num_snapshots;

        std::mt19937_64 rng(seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        std::uniform_real_distribution<double> phase(-pi, pi);
        const double half = std::sqrt(0.5);

        CMatrix x = CMatrix::Zero(M, N);
        for (const auto &src : sources)
        {
            const CVector a = steering_vector(geometry, src.azimuth_deg);
            const double amplitude = std::sqrt(std::pow(10.0, src.snr_db / 10.0));

            Eigen::RowVectorXcd s(N);
            for (Eigen::Index t = 0; t < N; ++t)
            {
                if (src.waveform == Waveform::Gaussian)
                {
                    const double re = normal(rng);
                    const double im = normal(rng);
                    s(t) = cd(re, im) * half;
                }
                else
                    s(t) = std::polar(1.0, phase(rng));
            }
            x.noalias() += amplitude * a * s;
        }

        if (noise == NoiseModel::UnitWhite)
        {
            for (Eigen::Index t = 0; t < N; ++t)
                for (Eigen::Index m = 0; m < M; ++m)
                {
                    const double re = normal(rng);
                    const double im = normal(rng);
                    x(m, t) += cd(re, im) * half;
                }
        }
        return SnapshotMatrix(std::move(x), geometry);
    }

    CovarianceMatrix sample_covariance(const SnapshotMatrix &x)
    {
        const CMatrix &X = x.samples();
        CMatrix r = (X * X.adjoint()) / static_cast<double>(X.cols());
        // Round-off can leave the product a few ulps off Hermitian
        r = (0.5 * (r + r.adjoint())).eval();
        return CovarianceMatrix::validated(std::move(r));
    }
}
