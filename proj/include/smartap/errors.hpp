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

#ifndef SMARTAP_ERRORS_HPP
#define SMARTAP_ERRORS_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace smartap
{
    // Argument outside the domain of an operation (bad azimuth, bad count, ...)
    class DomainError : public std::domain_error
    {
    public:
        using std::domain_error::domain_error;
    };

    // Node position behind the forward-facing array
    class OutOfSectorError : public DomainError
    {
    public:
        using DomainError::DomainError;
    };

    // Zero-variance or constant-envelope input to a correlation estimate
    class DegenerateInputError : public DomainError
    {
    public:
        using DomainError::DomainError;
    };

    // Matrix pencil produced an eigenvalue whose phase maps outside [-90, 90] degrees
    class EstimationError : public std::runtime_error
    {
    public:
        EstimationError(const std::string &what, std::complex<double> eigenvalue)
            : std::runtime_error(what), eigenvalue_(eigenvalue) {}
        std::complex<double> eigenvalue() const noexcept { return eigenvalue_; }

    private:
        std::complex<double> eigenvalue_;
    };

    // Beamforming constraint matrix is (numerically) rank deficient
    class ConditioningError : public std::runtime_error
    {
    public:
        ConditioningError(const std::string &what, double smallest_singular_value)
            : std::runtime_error(what), sigma_min_(smallest_singular_value) {}
        double smallest_singular_value() const noexcept { return sigma_min_; }

    private:
        double sigma_min_;
    };

    // Internal consistency violated, e.g. a beam that does not point at its own target
    class IntegrityError : public std::logic_error
    {
    public:
        using std::logic_error::logic_error;
    };

    // Scenario validation failure; the message is prefixed with the offending field path
    class ConfigError : public std::invalid_argument
    {
    public:
        ConfigError(const std::string &field_path, const std::string &problem)
            : std::invalid_argument(field_path + ": " + problem), field_(field_path) {}
        const std::string &field() const noexcept { return field_; }

    private:
        std::string field_;
    };
}

#endif
