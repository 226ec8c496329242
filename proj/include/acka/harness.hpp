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

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "acka/analytic.hpp"
#include "acka/protocol.hpp"
#include "acka/security.hpp"
#include "acka/transcript_io.hpp"

namespace acka {

// ---------------------------------------------------------------------------
// Four-party presets. A-D: sender with two participants, E-F: sender with
// one participant. Each preset puts a different party in the sender seat.

struct ConfigurationPreset {
    char label;
    std::size_t sender;
    std::vector<std::size_t> participants;
};

inline const std::array<ConfigurationPreset, 6>& presets() {
    static const std::array<ConfigurationPreset, 6> kPresets = {{
        {'A', 0, {1, 2}},
        {'B', 1, {2, 3}},
        {'C', 2, {0, 3}},
        {'D', 3, {0, 1}},
        {'E', 0, {1}},
        {'F', 2, {3}},
    }};
    return kPresets;
}

inline const ConfigurationPreset& find_preset(char label) {
    for (const auto& p : presets()) {
        if (p.label == label) return p;
    }
    throw std::invalid_argument(std::string("unknown preset '") + label + "' (expected A-F)");
}

inline NetworkConfig preset_config(char label, double fidelity = 1.0, std::size_t rounds = 10000,
                                   std::uint64_t seed = 0, std::uint32_t D = 20) {
    const auto& p = find_preset(label);
    NetworkConfig c;
    c.n = 4;
    c.sender = p.sender;
    c.participants = p.participants;
    c.D = D;
    c.rounds = rounds;
    c.noise = fidelity >= 1.0 ? NoiseModel::ideal() : NoiseModel::global_white(fidelity);
    c.seed = seed;
    return c;
}

// ---------------------------------------------------------------------------
// Run configuration file: `key = value` lines, '#' starts a comment.

struct RunSettings {
    NetworkConfig config;
    std::string output_dir = "acka-out";
};

namespace detail {
inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<PauliBasis> parse_settings(std::string_view s) {
    std::vector<PauliBasis> out;
    for (char c : s) {
        if (c == 'X') {
            out.push_back(PauliBasis::X);
        } else if (c == 'Y') {
            out.push_back(PauliBasis::Y);
        } else {
            throw std::invalid_argument("fixed settings must be a string of X and Y");
        }
    }
    return out;
}
}  // namespace detail

/// Throws ParseError naming the line and key on any malformed, unknown or
/// invalid entry.
inline RunSettings parse_run_config(std::istream& is) {
    struct Entry {
        std::string value;
        std::size_t line;
    };
    static const std::vector<std::string> kKeys = {
        "preset", "n", "sender", "participants", "D", "L", "noise.F_target", "adversary.party",
        "adversary.kind", "adversary.p_guess", "announcement_policy", "fixed_settings", "seed", "output_dir"};

    std::map<std::string, Entry> entries;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(is, raw)) {
        ++line_no;
        std::string_view view(raw);
        if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        const std::string line = detail::trim(view);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value', got '" + line + "'");
        const std::string key = detail::trim(std::string_view(line).substr(0, eq));
        const std::string value = detail::trim(std::string_view(line).substr(eq + 1));
        if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
            throw ParseError(line_no, "unknown key '" + key + "'");
        }
        if (entries.count(key)) throw ParseError(line_no, "duplicate key '" + key + "'");
        if (value.empty()) throw ParseError(line_no, "empty value for key '" + key + "'");
        entries[key] = {value, line_no};
    }

    RunSettings s;
    auto& c = s.config;
    c.participants.clear();
    auto with = [&](const std::string& key, auto&& apply) {
        auto it = entries.find(key);
        if (it == entries.end()) return;
        try {
            apply(it->second.value);
        } catch (const std::exception& e) {
            throw ParseError(it->second.line, "bad value '" + it->second.value + "' for key '" + key + "': " + e.what());
        }
    };

    with("preset", [&](const std::string& v) {
        if (v.size() != 1) throw std::invalid_argument("preset is a single letter A-F");
        const auto& p = find_preset(v[0]);
        c.n = 4;
        c.sender = p.sender;
        c.participants = p.participants;
    });
    with("n", [&](const std::string& v) { c.n = io::parse_number<std::size_t>(v); });
    with("sender", [&](const std::string& v) { c.sender = io::parse_number<std::size_t>(v); });
    with("participants", [&](const std::string& v) {
        c.participants.clear();
        for (auto p : io::split(v, ',')) c.participants.push_back(io::parse_number<std::size_t>(detail::trim(p)));
    });
    with("D", [&](const std::string& v) { c.D = io::parse_number<std::uint32_t>(v); });
    with("L", [&](const std::string& v) { c.rounds = io::parse_number<std::size_t>(v); });
    with("noise.F_target", [&](const std::string& v) {
        const double f = io::parse_double(v);
        c.noise = f == 1.0 ? NoiseModel::ideal() : NoiseModel::global_white(f);
    });
    with("announcement_policy", [&](const std::string& v) { c.policy = parse_announcement_policy(v); });
    with("fixed_settings", [&](const std::string& v) { c.fixed_settings = detail::parse_settings(v); });
    with("seed", [&](const std::string& v) { c.seed = io::parse_number<std::uint64_t>(v); });
    with("output_dir", [&](const std::string& v) { s.output_dir = v; });

    const bool has_party = entries.count("adversary.party") > 0;
    if (!has_party && (entries.count("adversary.kind") || entries.count("adversary.p_guess"))) {
        const auto& e = entries.count("adversary.kind") ? entries["adversary.kind"] : entries["adversary.p_guess"];
        throw ParseError(e.line, "adversary settings require 'adversary.party'");
    }
    if (has_party) {
        std::size_t party = 0;
        AdversaryStrategy strategy;
        with("adversary.party", [&](const std::string& v) { party = io::parse_number<std::size_t>(v); });
        with("adversary.kind", [&](const std::string& v) { strategy.kind = parse_adversary_kind(v); });
        with("adversary.p_guess", [&](const std::string& v) {
            if (strategy.kind != AdversaryStrategy::Kind::GuessKeyGen) {
                throw std::invalid_argument("p_guess only applies to guess_keygen");
            }
            strategy = AdversaryStrategy::guess_keygen(io::parse_double(v));
        });
        if (strategy.kind == AdversaryStrategy::Kind::AlwaysZ) strategy = AdversaryStrategy::always_z();
        c.adversaries[party] = strategy;
    }

    try {
        c.validate();
    } catch (const std::exception& e) {
        throw ParseError(line_no, e.what());
    }
    return s;
}

inline RunSettings parse_run_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path.string());
    return parse_run_config(in);
}

// ---------------------------------------------------------------------------
// Summaries

struct RunSummary {
    TranscriptHeader header;
    TranscriptCounts counts;
    /// Fraction of KeyGen rounds where every key party holds the same bit;
    /// only available with the sender-private file.
    std::optional<double> keygen_agreement;
    double verification_pass = 0;
    SecurityReport security;
    /// Largest failure rate the sender tolerates: expected white-noise
    /// failure rate plus three binomial standard deviations.
    double abort_threshold = 0;
    bool accepted = false;

    friend bool operator==(const RunSummary&, const RunSummary&) = default;
};

inline double abort_threshold(double fidelity, std::size_t n, std::size_t num_verification) {
    const double expected = expected_white_noise_failure(std::max(fidelity, std::ldexp(1.0, -static_cast<int>(n))), n);
    const double sigma =
        num_verification ? std::sqrt(expected * (1 - expected) / static_cast<double>(num_verification)) : 0.0;
    return expected + 3.0 * sigma;
}

/// Throws when the transcript has no KeyGen or no Verification round, since
/// the security figures are undefined there.
inline RunSummary summarize(const Transcript& t, bool have_private) {
    RunSummary s;
    s.header = t.header;
    s.counts = t.counts();
    if (have_private && s.counts.num_keygen > 0) {
        std::size_t agree = 0;
        for (const auto& r : t.rounds) {
            if (r.type != RoundType::KeyGen) continue;
            if (std::all_of(r.key_bits.begin(), r.key_bits.end(), [&](auto b) { return b == r.key_bits.front(); })) {
                ++agree;
            }
        }
        s.keygen_agreement = static_cast<double>(agree) / static_cast<double>(s.counts.num_keygen);
    }
    s.verification_pass = s.counts.num_verification
                              ? 1.0 - failure_rate(s.counts.num_verification_failed, s.counts.num_verification)
                              : 0.0;
    SecurityInputs in{s.counts.num_keygen, s.counts.num_verification, s.counts.num_verification_failed,
                      t.header.fidelity, std::nullopt};
    s.security = build_report(in);
    s.abort_threshold = abort_threshold(t.header.fidelity, t.header.n, s.counts.num_verification);
    s.accepted = s.security.eta <= s.abort_threshold;
    return s;
}

inline constexpr const char* kSummaryCsvPrefix =
    "n,D,L,policy,F,num_keygen,num_verification,num_verification_failed,keygen_agreement,verification_pass,"
    "abort_threshold,accepted,";

inline std::string summary_csv_header() { return std::string(kSummaryCsvPrefix) + kSecurityCsvHeader; }

inline std::string summary_csv_row(const RunSummary& s) {
    std::ostringstream os;
    os << s.header.n << ',' << s.header.D << ',' << s.header.rounds << ',' << to_string(s.header.policy) << ','
       << detail::fixed(s.header.fidelity) << ',' << s.counts.num_keygen << ',' << s.counts.num_verification << ','
       << s.counts.num_verification_failed << ','
       << (s.keygen_agreement ? detail::fixed(*s.keygen_agreement) : std::string()) << ','
       << detail::fixed(s.verification_pass) << ',' << detail::fixed(s.abort_threshold) << ','
       << (s.accepted ? "yes" : "no") << ',' << security_csv_row(s.security);
    return os.str();
}

inline void print_summary(std::ostream& os, const RunSummary& s) {
    os << "ACKA run summary\n";
    os << "  parties n=" << s.header.n << "  D=" << s.header.D << "  L=" << s.header.rounds
       << "  policy=" << to_string(s.header.policy) << "  F=" << detail::fixed(s.header.fidelity, 4) << '\n';
    os << "  KeyGen rounds               " << s.counts.num_keygen << '\n';
    os << "  Verification rounds         " << s.counts.num_verification << " (" << s.counts.num_verification_failed
       << " failed)\n";
    os << "  KeyGen agreement            "
       << (s.keygen_agreement ? detail::fixed(*s.keygen_agreement, 4) : std::string("unavailable (public file only)"))
       << '\n';
    os << "  Verification pass rate      " << detail::fixed(s.verification_pass, 4) << '\n';
    os << "  abort threshold on eta      " << detail::fixed(s.abort_threshold, 4) << "  -> "
       << (s.accepted ? "key accepted" : "key rejected") << '\n';
    os << "Security\n";
    print_security_report(os, s.security);
}

struct RunOutputs {
    std::filesystem::path transcript;
    std::filesystem::path private_file;
    std::filesystem::path summary_text;
    std::filesystem::path summary_csv;
};

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

inline RunOutputs write_run_outputs(const std::filesystem::path& dir, const ProtocolResult& result,
                                    const NetworkConfig& config, const RunSummary& summary) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
    RunOutputs out{dir / "transcript.txt", dir / "private.txt", dir / "summary.txt", dir / "summary.csv"};

    std::ostringstream pub, priv, text, csv;
    write_public_transcript(pub, result.transcript);
    write_private_transcript(priv, result.transcript, config);
    print_summary(text, summary);
    csv << summary_csv_header() << '\n' << summary_csv_row(summary) << '\n';
    write_text_file(out.transcript, pub.str());
    write_text_file(out.private_file, priv.str());
    write_text_file(out.summary_text, text.str());
    write_text_file(out.summary_csv, csv.str());
    return out;
}

// ---------------------------------------------------------------------------
// Sweeps

struct SweepOptions {
    std::vector<char> presets = {'A', 'B', 'C', 'D', 'E', 'F'};
    std::vector<double> fidelities = {1.0};
    std::size_t repetitions = 3;
    std::uint64_t seed = 0;
    std::size_t rounds = 10000;
    std::uint32_t D = 20;
    std::size_t threads = 1;
    std::optional<double> raw_rate;
};

struct SweepRun {
    char preset = 'A';
    std::size_t fidelity_index = 0;
    double fidelity = 1;
    std::size_t repetition = 0;
    std::uint64_t seed = 0;
    RunSummary summary;
};

struct MeanStd {
    double mean = 0;
    double stddev = 0;  // sample standard deviation, 0 for a single value
};

inline MeanStd mean_std(const std::vector<double>& xs) {
    MeanStd r;
    if (xs.empty()) return r;
    for (double x : xs) r.mean += x;
    r.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0;
        for (double x : xs) ss += (x - r.mean) * (x - r.mean);
        r.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    return r;
}

struct SweepCell {
    char preset = 'A';
    double fidelity = 1;
    std::size_t repetitions = 0;
    MeanStd keygen_agreement;
    MeanStd verification_pass;
    MeanStd p_worst;
    MeanStd p_corrected;
    MeanStd D_eff;
    AnalyticPrediction prediction;
    /// Binomial standard deviation of one run's pass rate at the expected
    /// number of Verification rounds.
    double predicted_pass_stddev = 0;
    std::optional<double> key_rate;
};

struct SweepResult {
    std::vector<SweepRun> runs;
    std::vector<SweepCell> cells;
};

inline std::uint64_t sweep_seed(std::uint64_t seed, char preset, std::size_t fidelity_index, std::size_t repetition) {
    return derive_seed(seed, (static_cast<std::uint64_t>(fidelity_index) << 8) | static_cast<unsigned char>(preset),
                       repetition);
}

/// Runs every (preset, fidelity, repetition) cell. Results are placed by
/// cell index, so output is independent of thread count and scheduling.
inline SweepResult run_sweep(const SweepOptions& opt) {
    if (opt.presets.empty() || opt.fidelities.empty() || opt.repetitions == 0) {
        throw std::invalid_argument("sweep: presets, fidelities and repetitions must be nonempty");
    }
    for (char p : opt.presets) find_preset(p);

    SweepResult result;
    for (char p : opt.presets) {
        for (std::size_t f = 0; f < opt.fidelities.size(); ++f) {
            for (std::size_t rep = 0; rep < opt.repetitions; ++rep) {
                SweepRun run;
                run.preset = p;
                run.fidelity_index = f;
                run.fidelity = opt.fidelities[f];
                run.repetition = rep;
                run.seed = sweep_seed(opt.seed, p, f, rep);
                result.runs.push_back(run);
            }
        }
    }
    for (const auto& run : result.runs) {
        preset_config(run.preset, run.fidelity, opt.rounds, run.seed, opt.D).validate();
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(result.runs.size());
    auto worker = [&] {
        for (std::size_t i = next++; i < result.runs.size(); i = next++) {
            auto& run = result.runs[i];
            try {
                const auto cfg = preset_config(run.preset, run.fidelity, opt.rounds, run.seed, opt.D);
                run.summary = summarize(run_protocol(cfg).transcript, true);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::max<std::size_t>(1, std::min(opt.threads, result.runs.size()));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    for (char p : opt.presets) {
        for (std::size_t f = 0; f < opt.fidelities.size(); ++f) {
            std::vector<double> agree, pass, worst, corrected, d_eff;
            for (const auto& run : result.runs) {
                if (run.preset != p || run.fidelity_index != f) continue;
                agree.push_back(run.summary.keygen_agreement.value_or(0.0));
                pass.push_back(run.summary.verification_pass);
                worst.push_back(run.summary.security.p_worst);
                corrected.push_back(run.summary.security.p_corrected);
                d_eff.push_back(run.summary.security.D_eff);
            }
            SweepCell cell;
            cell.preset = p;
            cell.fidelity = opt.fidelities[f];
            cell.repetitions = opt.repetitions;
            cell.keygen_agreement = mean_std(agree);
            cell.verification_pass = mean_std(pass);
            cell.p_worst = mean_std(worst);
            cell.p_corrected = mean_std(corrected);
            cell.prediction = predict(preset_config(p, cell.fidelity, opt.rounds, 0, opt.D));
            const double expected_ver = static_cast<double>(opt.rounds) * (1.0 - 1.0 / opt.D);
            const double q = cell.prediction.verification_pass;
            cell.predicted_pass_stddev = std::sqrt(q * (1 - q) / expected_ver);
            cell.D_eff = mean_std(d_eff);
            if (opt.raw_rate) cell.key_rate = *opt.raw_rate / cell.D_eff.mean;
            result.cells.push_back(cell);
        }
    }
    return result;
}

inline constexpr const char* kSweepRunsCsvHeader =
    "preset,F,repetition,seed,num_keygen,num_verification,num_verification_failed,keygen_agreement,"
    "verification_pass,D_eff,eta,eta_prime,p_no_fail,p_worst,p_corrected";

inline constexpr const char* kSweepCellsCsvHeader =
    "preset,F,repetitions,keygen_agreement_mean,keygen_agreement_std,verification_pass_mean,"
    "verification_pass_std,p_worst_mean,p_worst_std,p_corrected_mean,p_corrected_std,D_eff_mean,"
    "predicted_keygen_agreement,predicted_verification_pass,predicted_pass_std,key_rate";

inline std::string sweep_runs_csv(const SweepResult& r) {
    std::ostringstream os;
    os << kSweepRunsCsvHeader << '\n';
    for (const auto& run : r.runs) {
        const auto& s = run.summary;
        os << run.preset << ',' << detail::fixed(run.fidelity) << ',' << run.repetition << ',' << run.seed << ','
           << s.counts.num_keygen << ',' << s.counts.num_verification << ',' << s.counts.num_verification_failed
           << ',' << detail::fixed(s.keygen_agreement.value_or(0.0)) << ',' << detail::fixed(s.verification_pass)
           << ',' << detail::fixed(s.security.D_eff) << ',' << detail::fixed(s.security.eta) << ','
           << detail::fixed(s.security.eta_prime) << ',' << detail::fixed(s.security.p_no_fail) << ','
           << detail::fixed(s.security.p_worst) << ',' << detail::fixed(s.security.p_corrected) << '\n';
    }
    return os.str();
}

inline std::string sweep_cells_csv(const SweepResult& r) {
    std::ostringstream os;
    os << kSweepCellsCsvHeader << '\n';
    for (const auto& c : r.cells) {
        os << c.preset << ',' << detail::fixed(c.fidelity) << ',' << c.repetitions << ','
           << detail::fixed(c.keygen_agreement.mean) << ',' << detail::fixed(c.keygen_agreement.stddev) << ','
           << detail::fixed(c.verification_pass.mean) << ',' << detail::fixed(c.verification_pass.stddev) << ','
           << detail::fixed(c.p_worst.mean) << ',' << detail::fixed(c.p_worst.stddev) << ','
           << detail::fixed(c.p_corrected.mean) << ',' << detail::fixed(c.p_corrected.stddev) << ','
           << detail::fixed(c.D_eff.mean) << ','
           << detail::fixed(c.prediction.keygen_agreement) << ',' << detail::fixed(c.prediction.verification_pass)
           << ',' << detail::fixed(c.predicted_pass_stddev) << ',' << (c.key_rate ? detail::fixed(*c.key_rate) : "")
           << '\n';
    }
    return os.str();
}

/// Experimental reference values for four-party GHZ runs at F ~ 0.85.
/// Colored experimental noise; white noise is not expected to reproduce them.
inline constexpr double kReferenceKeyGenSuccess = 0.953;
inline constexpr double kReferenceKeyGenSpread = 0.013;
inline constexpr double kReferenceVerificationSuccess = 0.893;
inline constexpr double kReferenceVerificationSpread = 0.021;

inline void print_sweep(std::ostream& os, const SweepResult& r) {
    os << "preset  F       reps  agreement (mean +- std)   pass (mean +- std)        predicted agree/pass\n";
    for (const auto& c : r.cells) {
        os << "  " << c.preset << "     " << detail::fixed(c.fidelity, 4) << "  " << std::setw(4) << c.repetitions
           << "  " << detail::fixed(c.keygen_agreement.mean, 4) << " +- " << detail::fixed(c.keygen_agreement.stddev, 4)
           << "        " << detail::fixed(c.verification_pass.mean, 4) << " +- "
           << detail::fixed(c.verification_pass.stddev, 4) << "        "
           << detail::fixed(c.prediction.keygen_agreement, 4) << " / " << detail::fixed(c.prediction.verification_pass, 4)
           << '\n';
    }
    std::map<double, std::pair<double, double>> spread;
    for (const auto& c : r.cells) {
        auto [it, inserted] = spread.try_emplace(c.fidelity, c.verification_pass.mean, c.verification_pass.mean);
        it->second.first = std::min(it->second.first, c.verification_pass.mean);
        it->second.second = std::max(it->second.second, c.verification_pass.mean);
    }
    for (const auto& [f, range] : spread) {
        os << "cross-preset pass-rate spread at F=" << detail::fixed(f, 4) << ": "
           << detail::fixed(range.second - range.first, 4) << '\n';
    }
    os << "experimental reference (colored noise, F~0.85): KeyGen " << kReferenceKeyGenSuccess << " +- "
       << kReferenceKeyGenSpread << ", Verification " << kReferenceVerificationSuccess << " +- "
       << kReferenceVerificationSpread << '\n';
}

}  // namespace acka
