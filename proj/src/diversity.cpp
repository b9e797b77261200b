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

#include "smartap/diversity.hpp"
#include "smartap/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <random>

namespace smartap
{
    namespace
    {
        using cd = std::complex<double>;

        void require_same_length(TraceView x1, TraceView x2)
        {
            if (x1.size() != x2.size())
                throw DomainError(fmt::format("branch lengths differ: {} vs {}", x1.size(), x2.size()));
            if (x1.size() < 2)
                throw DomainError(fmt::format("correlation needs at least two samples, got {}", x1.size()));
        }

        template <class T>
        T mean_of(std::span<const T> v)
        {
            T sum{};
            for (const auto &s : v)
                sum += s;
            return sum / static_cast<double>(v.size());
        }

        std::vector<double> envelope(TraceView x)
        {
            std::vector<double> e(x.size());
            std::transform(x.begin(), x.end(), e.begin(), [](cd s)
                           { return std::abs(s); });
            return e;
        }
    }

    double mean_power(TraceView x)
    {
        if (x.empty())
            throw DomainError("mean power of an empty trace");
        double acc = 0.0;
        for (cd s : x)
            acc += std::norm(s);
        return acc / static_cast<double>(x.size());
    }

    std::complex<double> complex_correlation(TraceView x1, TraceView x2)
    {
        require_same_length(x1, x2);
        const cd m1 = mean_of(x1), m2 = mean_of(x2);

        cd cross = 0.0;
        double p1 = 0.0, p2 = 0.0, raw1 = 0.0, raw2 = 0.0;
        for (std::size_t t = 0; t < x1.size(); ++t)
        {
            const cd a = x1[t] - m1, b = x2[t] - m2;
            cross += a * std::conj(b);
            p1 += std::norm(a);
            p2 += std::norm(b);
            raw1 += std::norm(x1[t]);
            raw2 += std::norm(x2[t]);
        }
        // Variance below round-off of the raw power counts as constant
        if (!(p1 > 1e-24 * raw1) || !(p2 > 1e-24 * raw2))
            throw DegenerateInputError("complex correlation of a zero-variance branch");

        const cd rho = cross / std::sqrt(p1 * p2);
        const double mag = std::abs(rho);
        return mag > 1.0 ? rho / mag : rho;
    }

    double envelope_correlation(TraceView x1, TraceView x2)
    {
        require_same_length(x1, x2);
        const auto e1 = envelope(x1), e2 = envelope(x2);
        const double m1 = mean_of(std::span<const double>(e1)), m2 = mean_of(std::span<const double>(e2));

        double cov = 0.0, v1 = 0.0, v2 = 0.0;
        for (std::size_t t = 0; t < e1.size(); ++t)
        {
            const double a = e1[t] - m1, b = e2[t] - m2;
            cov += a * b;
            v1 += a * a;
            v2 += b * b;
        }
        const double n = static_cast<double>(e1.size());
        if (!(v1 > 1e-20 * m1 * m1 * n) || !(v2 > 1e-20 * m2 * m2 * n))
            throw DegenerateInputError("envelope correlation of a constant-envelope branch");
        return std::clamp(cov / std::sqrt(v1 * v2), -1.0, 1.0);
    }

    BranchPair generate_correlated_rayleigh(std::size_t n, std::complex<double> rho, std::uint64_t seed)
    {
        if (!(std::abs(rho) < 1.0))
            throw DomainError(fmt::format("target correlation magnitude must be below 1, got {}", std::abs(rho)));
        if (n < 2)
            throw DomainError(fmt::format("need at least two samples, got {}", n));

        std::mt19937_64 rng(seed);
        std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
        const double spread = std::sqrt(1.0 - std::norm(rho));
        const cd mix = std::conj(rho);

        BranchPair out;
        out.first.resize(n);
        out.second.resize(n);
        for (std::size_t t = 0; t < n; ++t)
        {
            const double a = normal(rng), b = normal(rng), c = normal(rng), d = normal(rng);
            const cd g(a, b), w(c, d);
            out.first[t] = g;
            out.second[t] = mix * g + spread * w;
        }
        return out;
    }

    SignalTrace selection_combine(TraceView x1, TraceView x2)
    {
        if (x1.size() != x2.size())
            throw DomainError(fmt::format("branch lengths differ: {} vs {}", x1.size(), x2.size()));
        SignalTrace out(x1.size());
        for (std::size_t t = 0; t < x1.size(); ++t)
            out[t] = std::norm(x2[t]) > std::norm(x1[t]) ? x2[t] : x1[t];
        return out;
    }

    double power_quantile(TraceView x, double p)
    {
        if (x.empty())
            throw DomainError("quantile of an empty trace");
        std::vector<double> pw(x.size());
        std::transform(x.begin(), x.end(), pw.begin(), [](cd s)
                       { return std::norm(s); });

        const double h = p * static_cast<double>(pw.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(h));
        std::nth_element(pw.begin(), pw.begin() + static_cast<std::ptrdiff_t>(lo), pw.end());
        const double below = pw[lo];
        if (lo + 1 >= pw.size())
            return below;
        const double above = *std::min_element(pw.begin() + static_cast<std::ptrdiff_t>(lo) + 1, pw.end());
        return below + (h - static_cast<double>(lo)) * (above - below);
    }

    double diversity_gain_db(TraceView x1, TraceView x2, double outage_prob)
    {
        if (!(outage_prob > 0.0 && outage_prob < 0.5))
            throw DomainError(fmt::format("outage probability must lie in (0, 0.5), got {}", outage_prob));
        if (x1.size() != x2.size())
            throw DomainError(fmt::format("branch lengths differ: {} vs {}", x1.size(), x2.size()));
        const double needed = 100.0 / outage_prob;
        if (static_cast<double>(x1.size()) < needed)
            throw DomainError(fmt::format("{} samples are too few for a {} outage quantile (need {})", x1.size(),
                                          outage_prob, std::ceil(needed)));

        const auto combined = selection_combine(x1, x2);
        const double q_combined = power_quantile(combined, outage_prob);
        const double q_single = power_quantile(x1, outage_prob);
        if (!(q_single > 0.0))
            throw DegenerateInputError("branch 1 outage power is zero");
        return 10.0 * std::log10(q_combined / q_single);
    }

    DiversityReport analyze_diversity(TraceView x1, TraceView x2, double outage_prob)
    {
        DiversityReport r;
        r.p1_w = mean_power(x1);
        r.p2_w = mean_power(x2);
        r.rho_c = complex_correlation(x1, x2);
        r.rho_e = envelope_correlation(x1, x2);
        r.outage_prob = outage_prob;
        r.gain_db = diversity_gain_db(x1, x2, outage_prob);
        return r;
    }
}
