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

#ifndef SMARTAP_DIVERSITY_HPP
#define SMARTAP_DIVERSITY_HPP

// Two-branch diversity analysis.
//
// For Rayleigh branches the envelope correlation is close to the squared magnitude of the
// complex correlation, rho_e ~= |rho_c|^2, and selection combining yields useful gain
// when rho_e < 0.5. All expectations are sample averages.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace smartap
{
    using SignalTrace = std::vector<std::complex<double>>;
    using TraceView = std::span<const std::complex<double>>;

    struct BranchPair
    {
        SignalTrace first;
        SignalTrace second;
    };

    struct DiversityReport
    {
        double p1_w = 0.0;
        double p2_w = 0.0;
        std::complex<double> rho_c;
        double rho_e = 0.0;
        double outage_prob = 0.01;
        double gain_db = 0.0;
    };

    // (1/N) sum |x_t|^2, N >= 1
    double mean_power(TraceView x);

    // E[x1 conj(x2)] / sqrt(P1 P2) after removing sample means
    std::complex<double> complex_correlation(TraceView x1, TraceView x2);

    // Pearson correlation of |x1| and |x2|
    double envelope_correlation(TraceView x1, TraceView x2);

    // x1 unit complex Gaussian, x2 = conj(rho) x1 + sqrt(1 - |rho|^2) w, so that
    // complex_correlation(x1, x2) estimates rho
    BranchPair generate_correlated_rayleigh(std::size_t n, std::complex<double> rho, std::uint64_t seed);

    // Per sample, the branch with the larger envelope (ties keep x1)
    SignalTrace selection_combine(TraceView x1, TraceView x2);

    // 10 log10 of the outage-quantile power of the combined signal over that of x1.
    // Needs outage_prob in (0, 0.5) and N >= 100 / outage_prob.
    double diversity_gain_db(TraceView x1, TraceView x2, double outage_prob);

    DiversityReport analyze_diversity(TraceView x1, TraceView x2, double outage_prob);

    // Linear-interpolated sample quantile (Hyndman-Fan type 7) of |x|^2
    double power_quantile(TraceView x, double p);
}

#endif
