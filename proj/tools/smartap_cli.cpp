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

// smartap: command-line front end.
// Exit codes: 0 success, 2 configuration/validation error, 3 runtime or estimation failure.

#include "smartap/diversity.hpp"
#include "smartap/doa.hpp"
#include "smartap/errors.hpp"
#include "smartap/harness.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <array>
#include <cmath>
#include <fstream>
#include <iostream>

namespace
{
    constexpr int exit_config = 2;
    constexpr int exit_runtime = 3;

    using namespace smartap;

    int cmd_simulate(const std::string &scenario_file, const std::string &out_dir)
    {
        const Scenario scenario = load_scenario(scenario_file);
        const RunResult result = run_scenario(scenario);
        for (const auto &w : result.warnings)
            std::cerr << "warning: " << w << '\n';
        emit_reports(result, out_dir);
        std::cout << summary_json(result.summary);
        return 0;
    }

    int cmd_doa(const std::string &method_name, int elements, double spacing, double theta, double snr,
                int snapshots, std::uint64_t seed, double grid_step)
    {
        const DoaMethod method = parse_doa_method(method_name);
        const ArrayGeometry geometry{elements, spacing};
        for (const auto &w : geometry.validate())
            std::cerr << "warning: " << w << '\n';

        const std::array<SourceSpec, 1> src{SourceSpec{theta, snr, Waveform::Gaussian}};
        const auto x = synthesize_snapshots(geometry, src, snapshots, seed);
        DoaOptions options;
        options.grid_step_deg = grid_step;
        const auto result = estimate_doa(x, method, 1, options);
        const double est = result.azimuth_deg.front();
        fmt::print("method={} theta_true={:.6f} theta_est={:.6f} error_deg={:.6f}{}\n", to_string(method), theta, est,
                   std::abs(est - theta), result.degraded ? " degraded=1" : "");
        return 0;
    }

    int cmd_beam(int elements, double spacing, double target, const std::vector<double> &nulls, double step)
    {
        const ArrayGeometry geometry{elements, spacing};
        for (const auto &w : geometry.validate())
            std::cerr << "warning: " << w << '\n';
        const auto w = null_steering_weights(geometry, target, nulls);
        const auto pattern = beam_pattern(w, geometry, step);
        std::cout << "azimuth_deg,gain_db\n";
        for (std::size_t i = 0; i < pattern.gain.size(); ++i)
            std::cout << fmt::format("{:.6f},{:.6f}\n", pattern.azimuth_deg[i],
                                     10.0 * std::log10(std::max(pattern.gain[i], 1e-30)));
        std::cerr << fmt::format("beamwidth_3db_deg={:.6f}\n", pattern.beamwidth_3db_deg);
        return 0;
    }

    int cmd_diversity(double rho_re, double rho_im, std::size_t samples, double outage, std::uint64_t seed,
                      const std::string &csv)
    {
        const auto pair = generate_correlated_rayleigh(samples, {rho_re, rho_im}, seed);
        const auto report = analyze_diversity(pair.first, pair.second, outage);
        fmt::print("p1_w={:.6f} p2_w={:.6f} rho_c=({:.6f},{:.6f}) abs_rho_c_sq={:.6f} rho_e={:.6f} outage={} gain_db={:.4f}\n",
                   report.p1_w, report.p2_w, report.rho_c.real(), report.rho_c.imag(), std::norm(report.rho_c),
                   report.rho_e, report.outage_prob, report.gain_db);

        if (!csv.empty())
        {
            std::ofstream os(csv);
            if (!os)
                throw std::runtime_error(fmt::format("cannot open '{}' for writing", csv));
            const auto combined = selection_combine(pair.first, pair.second);
            os << "t,x1_re,x1_im,x2_re,x2_im,xc_re,xc_im\n";
            for (std::size_t t = 0; t < samples; ++t)
                os << fmt::format("{},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g}\n", t, pair.first[t].real(),
                                  pair.first[t].imag(), pair.second[t].real(), pair.second[t].imag(),
                                  combined[t].real(), combined[t].imag());
        }
        return 0;
    }

    int cmd_report(const std::string &dir)
    {
        const RunSummary recomputed = recompute_summary(dir);
        std::cout << summary_json(recomputed);

        std::ifstream is(std::filesystem::path(dir) / "summary.json");
        if (!is)
            return 0;
        const auto stored = nlohmann::json::parse(is);
        const auto fresh = nlohmann::json::parse(summary_json(recomputed));

        bool ok = true;
        for (const char *key : {"joins", "rejects", "beam_updates", "releases", "beacons", "ticks"})
            if (stored.value(key, -1) != fresh.value(key, -2))
            {
                std::cerr << "mismatch: " << key << '\n';
                ok = false;
            }
        for (const char *key : {"savings_ratio", "mean_adaptive_w", "mean_baseline_w"})
        {
            const double a = stored.value(key, 0.0), b = fresh.value(key, 0.0);
            if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a)))
            {
                std::cerr << fmt::format("mismatch: {} stored {} recomputed {}\n", key, a, b);
                ok = false;
            }
        }
        std::cerr << (ok ? "cross-check: consistent\n" : "cross-check: INCONSISTENT\n");
        return ok ? 0 : exit_runtime;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Adaptive-array access point simulator"};
    app.require_subcommand(1);

    std::string scenario_file, out_dir;
    auto *simulate = app.add_subcommand("simulate", "Run a scenario and write reports");
    simulate->add_option("--scenario", scenario_file, "Scenario JSON file")->required();
    simulate->add_option("--out", out_dir, "Output directory")->required();

    std::string method = "music";
    int elements = 8;
    double spacing = 0.5, theta = 25.0, snr = 20.0, grid = 0.1;
    int snapshots = 256;
    std::uint64_t seed = 1;
    auto *doa = app.add_subcommand("doa", "Estimate the direction of one synthetic source");
    doa->add_option("--method", method, "music | pencil")->capture_default_str();
    doa->add_option("--elements", elements)->capture_default_str();
    doa->add_option("--spacing", spacing, "Element spacing in wavelengths")->capture_default_str();
    doa->add_option("--theta", theta, "True azimuth in degrees")->capture_default_str();
    doa->add_option("--snr", snr, "Per-element SNR in dB")->capture_default_str();
    doa->add_option("--snapshots", snapshots)->capture_default_str();
    doa->add_option("--seed", seed)->capture_default_str();
    doa->add_option("--grid", grid, "MUSIC grid step in degrees")->capture_default_str();

    double target = 0.0, step = 0.01;
    std::vector<double> nulls;
    auto *beam = app.add_subcommand("beam", "Print a beam pattern as CSV");
    beam->add_option("--elements", elements)->capture_default_str();
    beam->add_option("--spacing", spacing)->capture_default_str();
    beam->add_option("--target", target, "Beam target azimuth in degrees")->required();
    beam->add_option("--null", nulls, "Null direction in degrees (repeatable)");
    beam->add_option("--step", step, "Pattern grid step in degrees")->capture_default_str();

    double rho = 0.0, rho_im = 0.0, outage = 0.01;
    std::size_t samples = 100000;
    std::string csv;
    auto *diversity = app.add_subcommand("diversity", "Two-branch correlated Rayleigh diversity report");
    diversity->add_option("--rho", rho, "Target complex correlation, real part")->capture_default_str();
    diversity->add_option("--rho-imag", rho_im, "Target complex correlation, imaginary part")->capture_default_str();
    diversity->add_option("--samples", samples)->capture_default_str();
    diversity->add_option("--outage", outage)->capture_default_str();
    diversity->add_option("--seed", seed)->capture_default_str();
    diversity->add_option("--csv", csv, "Write per-sample traces to this CSV file");

    std::string in_dir;
    auto *report = app.add_subcommand("report", "Recompute the summary from power.csv and events.log");
    report->add_option("--in", in_dir, "Report directory")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    try
    {
        if (*simulate)
            return cmd_simulate(scenario_file, out_dir);
        if (*doa)
            return cmd_doa(method, elements, spacing, theta, snr, snapshots, seed, grid);
        if (*beam)
            return cmd_beam(elements, spacing, target, nulls, step);
        if (*diversity)
            return cmd_diversity(rho, rho_im, samples, outage, seed, csv);
        if (*report)
            return cmd_report(in_dir);
    }
    catch (const ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    }
    catch (const DomainError &e)
    {
        std::cerr << "invalid input: " << e.what() << '\n';
        return exit_config;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_runtime;
    }
    return 0;
}
