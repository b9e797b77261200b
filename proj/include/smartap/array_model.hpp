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

#ifndef SMARTAP_ARRAY_MODEL_HPP
#define SMARTAP_ARRAY_MODEL_HPP

// Received-signal model of a uniform linear array (ULA).
//
// Elements sit on a line with spacing given in carrier wavelengths, so the carrier
// frequency never appears. Azimuth is measured from broadside in degrees and must lie
// strictly inside (-90, 90). Element m responds to a unit plane wave from azimuth theta
// with exp(i * 2*pi * spacing * m * sin(theta)), m = 0..M-1.
//
// Noise is spatially white with unit power per element; source SNR is per element.
// Expectations are always time averages over the N snapshots, so second-order
// statistics converge as 1/sqrt(N): with N = 256 a covariance entry carries roughly
// 6% relative sampling error.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace smartap
{
    using cd = std::complex<double>;
    using CVector = Eigen::VectorXcd;
    using CMatrix = Eigen::MatrixXcd;

    inline constexpr double pi = 3.14159265358979323846;
    inline constexpr double deg_to_rad(double deg) { return deg * pi / 180.0; }
    inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / pi; }

    // True if azimuth_deg lies strictly inside (-90, 90)
    bool azimuth_in_field_of_view(double azimuth_deg);

    // Throws DomainError naming `what` when the azimuth is outside (-90, 90)
    void require_azimuth(double azimuth_deg, const char *what = "azimuth");

    struct ArrayGeometry
    {
        int num_elements = 8; // M >= 1
        double spacing = 0.5; // Element spacing in wavelengths, > 0

        // Throws DomainError on M < 1 or spacing <= 0.
        // Returns human-readable warnings (spacing above half a wavelength aliases).
        std::vector<std::string> validate() const;

        bool operator==(const ArrayGeometry &) const = default;
    };

    enum class Waveform
    {
        Gaussian, // Complex circular Gaussian, unit power
        Tone      // Unit modulus with an independent uniform random phase per snapshot
    };

    struct SourceSpec
    {
        double azimuth_deg = 0.0;
        double snr_db = 20.0; // Per-element power relative to unit noise power
        Waveform waveform = Waveform::Gaussian;
    };

    enum class NoiseModel
    {
        UnitWhite, // Unit-power circular Gaussian per element
        None       // Noiseless; source powers keep their 10^(snr/10) scaling
    };

    // M x N element-by-time samples together with the array that recorded them
    class SnapshotMatrix
    {
    public:
        // Throws DomainError if N < 1 or the row count differs from geometry.num_elements
        SnapshotMatrix(CMatrix samples, ArrayGeometry geometry);

        const CMatrix &samples() const noexcept { return samples_; }
        const ArrayGeometry &geometry() const noexcept { return geometry_; }
        Eigen::Index num_elements() const noexcept { return samples_.rows(); }
        Eigen::Index num_snapshots() const noexcept { return samples_.cols(); }

    private:
        CMatrix samples_;
        ArrayGeometry geometry_;
    };

    // Hermitian positive semidefinite M x M matrix
    class CovarianceMatrix
    {
    public:
        // Validates Hermitian symmetry (1e-12 relative) and PSD (eigenvalues >= -1e-10 * trace).
        // Throws DomainError otherwise.
        static CovarianceMatrix validated(CMatrix r);

        const CMatrix &matrix() const noexcept { return r_; }
        Eigen::Index size() const noexcept { return r_.rows(); }

    private:
        explicit CovarianceMatrix(CMatrix r) : r_(std::move(r)) {}
        CMatrix r_;
    };

    // Array response a(theta); component 0 is exactly 1, all components unit modulus
    CVector steering_vector(const ArrayGeometry &geometry, double azimuth_deg);

    // samples = sum_k a(theta_k) s_k(t) + w(t); bit-identical for identical arguments.
    // Source azimuths must be pairwise separated by at least 0.1 degree.
    SnapshotMatrix synthesize_snapshots(const ArrayGeometry &geometry,
                                        std::span<const SourceSpec> sources,
                                        int num_snapshots,
                                        std::uint64_t seed,
                                        NoiseModel noise = NoiseModel::UnitWhite);

    // r = X X^H / N
    CovarianceMatrix sample_covariance(const SnapshotMatrix &x);
}

#endif
