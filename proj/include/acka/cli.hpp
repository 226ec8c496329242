// Copyright 2026 The acka-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Subcommands of the `acka` tool.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "acka/harness.hpp"

namespace acka::cli {

/// Overrides every output directory when set.
inline constexpr const char* kOutputDirEnv = "ACKA_OUTPUT_DIR";

inline std::filesystem::path resolve_output_dir(const std::string& configured) {
    if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
    return configured;
}

inline int cmd_run(const std::string& config_path, const std::optional<std::string>& output_dir,
                   const std::optional<std::string>& fixed_settings, std::ostream& out) {
    auto settings = parse_run_config_file(config_path);
    if (fixed_settings) {
        settings.config.fixed_settings = detail::parse_settings(*fixed_settings);
        settings.config.validate();
    }
    const auto dir = resolve_output_dir(output_dir.value_or(settings.output_dir));
    const auto result = run_protocol(settings.config);
    const auto summary = summarize(result.transcript, true);
    const auto files = write_run_outputs(dir, result, settings.config, summary);
    print_summary(out, summary);
    out << "wrote " << files.transcript.string() << ", " << files.private_file.string() << ", "
        << files.summary_text.string() << ", " << files.summary_csv.string() << '\n';
    return 0;
}

inline int cmd_security(const SecurityInputs& in, const std::optional<std::string>& csv_path, std::ostream& out) {
    const auto report = build_report(in);
    out << "Security report\n";
    print_security_report(out, report);
    out << kSecurityCsvHeader << '\n' << security_csv_row(report) << '\n';
    if (csv_path) {
        write_text_file(*csv_path, std::string(kSecurityCsvHeader) + "\n" + security_csv_row(report) + "\n");
    }
    return 0;
}

inline RunSummary analyze_files(const std::string& transcript_path, const std::optional<std::string>& private_path) {
    std::ifstream pub(transcript_path);
    if (!pub) throw std::runtime_error("cannot open " + transcript_path);
    Transcript t;
    try {
        t = read_public_transcript(pub);
    } catch (const ParseError& e) {
        throw std::runtime_error(transcript_path + ": " + e.what());
    }
    if (private_path) {
        std::ifstream priv(*private_path);
        if (!priv) throw std::runtime_error("cannot open " + *private_path);
        try {
            read_private_transcript(priv, t);
        } catch (const ParseError& e) {
            throw std::runtime_error(*private_path + ": " + e.what());
        }
    }
    return summarize(t, private_path.has_value());
}

inline int cmd_analyze(const std::string& transcript_path, const std::optional<std::string>& private_path,
                       const std::optional<std::string>& csv_path, std::ostream& out) {
    const auto summary = analyze_files(transcript_path, private_path);
    print_summary(out, summary);
    if (csv_path) write_text_file(*csv_path, summary_csv_header() + "\n" + summary_csv_row(summary) + "\n");
    return 0;
}

inline int cmd_sweep(const SweepOptions& opt, const std::string& output_dir, std::ostream& out) {
    const auto dir = resolve_output_dir(output_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir.string());
    const auto result = run_sweep(opt);
    std::ostringstream text;
    print_sweep(text, result);
    write_text_file(dir / "sweep_runs.csv", sweep_runs_csv(result));
    write_text_file(dir / "sweep_cells.csv", sweep_cells_csv(result));
    write_text_file(dir / "sweep.txt", text.str());
    out << text.str();
    out << "wrote " << (dir / "sweep_runs.csv").string() << ", " << (dir / "sweep_cells.csv").string() << ", "
        << (dir / "sweep.txt").string() << '\n';
    return 0;
}

/// Entry point shared by the binary and the tests. Returns the exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Anonymous conference key agreement simulator"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run the protocol from a configuration file");
    std::string config_path;
    std::optional<std::string> run_output, fixed_settings;
    run->add_option("config", config_path, "Configuration file")->required();
    run->add_option("--output-dir", run_output, "Output directory (overrides the config file)");
    run->add_option("--fixed-settings", fixed_settings, "Participant bases for every Verification round, e.g. XY");

    auto* security = app.add_subcommand("security", "Security figures from round counts");
    SecurityInputs inputs;
    double raw_rate = -1;
    std::optional<std::string> security_csv;
    security->add_option("--keygen", inputs.num_keygen, "Number of KeyGen rounds")->required();
    security->add_option("--verification", inputs.num_verification, "Number of Verification rounds")->required();
    security->add_option("--failed", inputs.num_verification_failed, "Failed Verification rounds")->required();
    security->add_option("--fidelity", inputs.fidelity, "Fidelity of the distributed state")->required();
    security->add_option("--raw-rate", raw_rate, "Raw event rate in 1/s");
    security->add_option("--csv", security_csv, "Also write the CSV row to this file");

    auto* analyze = app.add_subcommand("analyze", "Recompute a summary from transcript files");
    std::string transcript_path;
    std::optional<std::string> private_path, analyze_csv;
    analyze->add_option("transcript", transcript_path, "Public transcript")->required();
    analyze->add_option("private", private_path, "Sender-private file");
    analyze->add_option("--csv", analyze_csv, "Write the summary CSV to this file");

    auto* sweep = app.add_subcommand("sweep", "Monte-Carlo sweep over presets and fidelities");
    SweepOptions sweep_opt;
    std::string presets_arg = "A,B,C,D,E,F";
    std::vector<double> fidelities{1.0};
    std::string sweep_output = "acka-sweep";
    double sweep_raw_rate = -1;
    sweep->add_option("--presets", presets_arg, "Comma-separated preset labels");
    sweep->add_option("--fidelities", fidelities, "Target fidelities")->delimiter(',');
    sweep->add_option("--repetitions", sweep_opt.repetitions, "Runs per cell");
    sweep->add_option("--seed", sweep_opt.seed, "Base seed");
    sweep->add_option("--rounds,-L", sweep_opt.rounds, "Rounds per run");
    sweep->add_option("--D", sweep_opt.D, "Security parameter");
    sweep->add_option("--threads", sweep_opt.threads, "Worker threads");
    sweep->add_option("--raw-rate", sweep_raw_rate, "Raw event rate in 1/s for the key-rate column");
    sweep->add_option("--output-dir", sweep_output, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*run) return cmd_run(config_path, run_output, fixed_settings, out);
        if (*security) {
            if (raw_rate >= 0) inputs.raw_rate = raw_rate;
            return cmd_security(inputs, security_csv, out);
        }
        if (*analyze) return cmd_analyze(transcript_path, private_path, analyze_csv, out);
        if (*sweep) {
            sweep_opt.presets.clear();
            for (auto label : io::split(presets_arg, ',')) {
                if (label.size() != 1) throw std::invalid_argument("preset labels are single letters");
                sweep_opt.presets.push_back(label[0]);
            }
            sweep_opt.fidelities = fidelities;
            if (sweep_raw_rate >= 0) sweep_opt.raw_rate = sweep_raw_rate;
            return cmd_sweep(sweep_opt, sweep_output, out);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace acka::cli
