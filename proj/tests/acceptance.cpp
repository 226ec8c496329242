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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "acka/analytic.hpp"
#include "acka/cli.hpp"
#include "acka/harness.hpp"
#include "acka/protocol.hpp"
#include "acka/security.hpp"
#include "acka/transcript_io.hpp"
#include "protocol_checks.hpp"

using namespace acka;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

class Detail {
public:
    template <typename T>
    Detail& operator<<(const T& v) {
        os_ << v;
        return *this;
    }
    std::string str() const { return os_.str(); }

private:
    std::ostringstream os_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double binomial_sigma(double p, double count) { return std::sqrt(p * (1 - p) / count); }

std::string fmt(double v, int digits = 4) { return detail::fixed(v, digits); }

std::string public_text(const Transcript& t) {
    std::ostringstream os;
    write_public_transcript(os, t);
    return os.str();
}

std::string private_text(const Transcript& t, const NetworkConfig& c) {
    std::ostringstream os;
    write_private_transcript(os, t, c);
    return os.str();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// 1 ------------------------------------------------------------------------
Outcome noiseless_completeness() {
    Outcome o;
    Detail d;
    double slowest = 0;
    for (const auto& preset : presets()) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto c = preset_config(preset.label, 1.0, 10000, 101, 20);
        const auto result = run_protocol(c);
        const auto counts = result.transcript.counts();
        bool keys_agree = true;
        for (const auto& [p, key] : result.participant_keys) keys_agree = keys_agree && key == result.sender_key;
        const double secs = seconds_since(t0);
        slowest = std::max(slowest, secs);
        const bool ok = counts.num_verification_failed == 0 && counts.num_verification > 0 && keys_agree &&
                        result.sender_key.size() == counts.num_keygen && secs < 10.0;
        if (!ok) o.pass = false;
        d << preset.label << ":" << counts.num_verification << "V/" << counts.num_verification_failed << "F/"
          << counts.num_keygen << "K" << (keys_agree ? "" : "(key mismatch)") << " ";
    }
    d << "slowest " << fmt(slowest, 2) << "s (limit 10s)";
    o.detail = d.str();
    return o;
}

// 2 ------------------------------------------------------------------------
Outcome exhaustive_delta() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = checks::delta_correction_exhaustive(6);
    const double secs = seconds_since(t0);
    Outcome o;
    o.pass = r.ok() && r.worst_infidelity <= 1e-10 && secs < 5.0;
    Detail d;
    d << r.layouts << " layouts, " << r.patterns << " X patterns, " << r.outcome_strings
      << " outcome strings; worst infidelity " << r.worst_infidelity << " (limit 1e-10); " << fmt(secs, 2)
      << "s (limit 5s)";
    if (!r.ok()) d << "; " << r.failure;
    o.detail = d.str();
    return o;
}

// 3 ------------------------------------------------------------------------
Outcome stabilizer_table() {
    std::size_t checked = 0;
    const auto failure = checks::stabilizer_parity_table(5, &checked);
    Outcome o;
    o.pass = failure.empty() && checked > 0;
    o.detail = std::to_string(checked) + " even-Y X/Y strings on GHZ_2..GHZ_5 within 1e-9" +
               (failure.empty() ? "" : "; mismatch at " + failure);
    return o;
}

// 4 ------------------------------------------------------------------------
Outcome security_table() {
    const double D = 25, eta = 0.107, F = 0.85;
    const double p0 = guess_prob_no_fail(D);
    const double pw = guess_prob_worst(D, eta);
    const double pc = guess_prob_worst(D, corrected_eta(eta, F));
    // Same figures through the count-based path: 400 K + 9600 V, 1027 failed.
    const auto report = build_report({400, 9600, 1027, F, std::nullopt});
    Outcome o;
    o.pass = std::abs(p0 - 0.040) <= 0.002 && std::abs(pw - 0.143) <= 0.01 && std::abs(pc - 0.068) <= 0.01 &&
             std::abs(report.p_no_fail - 0.040) <= 0.002 && std::abs(report.p_worst - 0.143) <= 0.01 &&
             std::abs(report.p_corrected - 0.068) <= 0.01;
    o.detail = "p_no_fail " + fmt(p0) + " (0.040+-0.002), p_worst " + fmt(pw) + " (0.143+-0.01), p_corrected " +
               fmt(pc) + " (0.068+-0.01); from counts " + fmt(report.p_no_fail) + "/" + fmt(report.p_worst) + "/" +
               fmt(report.p_corrected);
    return o;
}

// 5 ------------------------------------------------------------------------
Outcome key_accounting() {
    Outcome o;
    Detail d;
    const std::size_t L = 100000;
    double lo = 1, hi = 0;
    for (std::uint32_t D : {20u, 25u, 32u}) {
        const auto counts = run_protocol(preset_config('A', 1.0, L, 500 + D, D)).transcript.counts();
        const double d_eff = effective_D(counts.num_keygen, counts.num_verification);
        const double q = 1.0 / D;
        // Delta method: D_eff = 1/q_hat.
        const double sigma = binomial_sigma(q, static_cast<double>(L)) / (q * q);
        const bool ok = std::abs(d_eff - D) <= 4 * sigma;
        if (!ok) o.pass = false;
        d << "D=" << D << ": D_eff " << fmt(d_eff, 3) << " (4sigma " << fmt(4 * sigma, 3) << ") ";
        for (double raw : {0.16, 0.33}) {
            const double rate = raw / d_eff;
            lo = std::min(lo, rate);
            hi = std::max(hi, rate);
            if (rate < 0.005 || rate > 0.017) o.pass = false;
        }
    }
    d << "; key rates for raw 0.16-0.33/s span [" << fmt(lo, 5) << ", " << fmt(hi, 5) << "] (allowed [0.005, 0.017])";
    o.detail = d.str();
    return o;
}

// 6 ------------------------------------------------------------------------
Outcome noisy_pass_rates() {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    Detail d;
    const std::size_t L = 100000;
    double worst_z = 0;
    for (const auto& preset : presets()) {
        const auto c = preset_config(preset.label, 0.85, L, 900 + static_cast<std::uint64_t>(preset.label), 20);
        const auto pred = predict(c);
        const auto summary = summarize(run_protocol(c).transcript, true);
        const auto& counts = summary.counts;
        const double z_pass = std::abs(summary.verification_pass - pred.verification_pass) /
                              binomial_sigma(pred.verification_pass, static_cast<double>(counts.num_verification));
        const double z_agree = std::abs(summary.keygen_agreement.value() - pred.keygen_agreement) /
                               binomial_sigma(pred.keygen_agreement, static_cast<double>(counts.num_keygen));
        worst_z = std::max({worst_z, z_pass, z_agree});
        if (z_pass > 4 || z_agree > 4) o.pass = false;
        d << preset.label << ": pass " << fmt(summary.verification_pass) << " vs " << fmt(pred.verification_pass)
          << ", agree " << fmt(*summary.keygen_agreement) << " vs " << fmt(pred.keygen_agreement) << "; ";
    }
    const double secs = seconds_since(t0);
    if (secs >= 120) o.pass = false;
    d << "max |z| " << fmt(worst_z, 2) << " (limit 4); " << fmt(secs, 1) << "s (limit 120s); experimental reference "
      << kReferenceKeyGenSuccess << "/" << kReferenceVerificationSuccess << " not expected under white noise";
    o.detail = d.str();
    return o;
}

// 7 ------------------------------------------------------------------------
Outcome adversary_detection() {
    auto c = preset_config('A', 1.0, 10500, 77, 20);
    c.adversaries[3] = AdversaryStrategy::always_z();
    const auto stats = detection_experiment(c, 10500);
    const double n = static_cast<double>(stats.verification_defections);
    const double z = std::abs(stats.detection_rate() - 0.5) / binomial_sigma(0.5, n);
    Outcome o;
    o.pass = z <= 4 && stats.keygen_defections > 0 && stats.keygen_bits_matched == stats.keygen_defections;
    o.detail = "detection " + fmt(stats.detection_rate()) + " over " + std::to_string(stats.verification_defections) +
               " defected V rounds (|z| " + fmt(z, 2) + ", limit 4); KeyGen bits matched " +
               std::to_string(stats.keygen_bits_matched) + "/" + std::to_string(stats.keygen_defections);
    return o;
}

// 8 ------------------------------------------------------------------------
Outcome anonymity() {
    Outcome o;
    Detail d;
    std::vector<AnonymityStats> stats;
    std::size_t min_count = SIZE_MAX;
    double worst_dev_sigma = 0;
    for (const auto& preset : presets()) {
        const auto c = preset_config(preset.label, 1.0, 10600, 300 + static_cast<std::uint64_t>(preset.label), 20);
        const auto result = run_protocol(c);
        stats.push_back(anonymity_statistics(result.transcript));
        for (const auto& party : stats.back().parties) {
            for (const auto& slot : party.slots) {
                min_count = std::min(min_count, slot.count);
                worst_dev_sigma = std::max(worst_dev_sigma, slot.deviation() / (slot.bound() / 4));
            }
        }
        if (stats.back().any_flagged()) o.pass = false;

        // Structural: the public file is a function of public fields only.
        auto scrubbed = result.transcript;
        for (auto& r : scrubbed.rounds) {
            r.delta.reset();
            r.extraction_truthful.clear();
            r.verification_truthful.clear();
            r.sender_basis.reset();
            r.sender_outcome.reset();
            r.key_bits.clear();
            r.defected.clear();
            r.adversary_bits.clear();
        }
        const auto text = public_text(result.transcript);
        if (public_text(scrubbed) != text) o.pass = false;
        for (const char* word : {"sender", "participant", "seed", "delta"})
            if (text.find(word) != std::string::npos) o.pass = false;
        std::istringstream is(text);
        for (const auto& r : read_public_transcript(is).rounds)
            if (r.delta || !r.key_bits.empty() || r.sender_basis || !r.extraction_truthful.empty()) o.pass = false;
    }
    if (min_count < 10000) o.pass = false;

    // Role permutations of the same shape: A-D share m=2, E-F share m=1.
    double worst_z = 0;
    for (std::size_t i : {1u, 2u, 3u}) worst_z = std::max(worst_z, max_marginal_z(stats[0], stats[i]));
    worst_z = std::max(worst_z, max_marginal_z(stats[4], stats[5]));
    if (worst_z > 4) o.pass = false;

    d << "min samples per slot " << min_count << " (need 1e4); max deviation " << fmt(worst_dev_sigma, 2)
      << " sigma (limit 4); role-permuted max |z| " << fmt(worst_z, 2) << " (limit 4); no private field in public files";
    o.detail = d.str();
    return o;
}

// 9 ------------------------------------------------------------------------
Outcome determinism() {
    Outcome o;
    Detail d;

    auto c = preset_config('C', 0.85, 5000, 4242, 20);
    c.adversaries[1] = AdversaryStrategy::guess_keygen(0.1);
    const auto a = run_protocol(c);
    const auto b = run_protocol(c);
    const bool same_run = public_text(a.transcript) == public_text(b.transcript) &&
                          private_text(a.transcript, c) == private_text(b.transcript, c) &&
                          summary_csv_row(summarize(a.transcript, true)) == summary_csv_row(summarize(b.transcript, true));
    if (!same_run) o.pass = false;

    // Through the CLI, twice, into separate directories.
    const auto root = fs::temp_directory_path() / ("acka-acceptance-" + std::to_string(::getpid()));
    fs::remove_all(root);
    fs::create_directories(root);
    write_text_file(root / "run.cfg", "preset = B\nL = 5000\nD = 25\nnoise.F_target = 0.85\nseed = 9\n");
    bool same_files = true;
    std::ostringstream sink;
    for (const char* dir : {"first", "second"}) {
        const std::string out = (root / dir).string();
        const std::string cfg = (root / "run.cfg").string();
        const char* argv[] = {"acka", "run", cfg.c_str(), "--output-dir", out.c_str()};
        if (cli::run_cli(5, argv, sink, sink) != 0) same_files = false;
    }
    for (const char* f : {"transcript.txt", "private.txt", "summary.txt", "summary.csv"}) {
        const auto x = slurp(root / "first" / f);
        if (x.empty() || x != slurp(root / "second" / f)) same_files = false;
    }
    if (!same_files) o.pass = false;

    // Sequential vs parallel sweep.
    SweepOptions opt;
    opt.fidelities = {1.0, 0.85};
    opt.repetitions = 2;
    opt.rounds = 2000;
    opt.seed = 31;
    opt.threads = 1;
    const auto serial = run_sweep(opt);
    opt.threads = 4;
    const auto parallel = run_sweep(opt);
    const bool same_sweep =
        sweep_runs_csv(serial) == sweep_runs_csv(parallel) && sweep_cells_csv(serial) == sweep_cells_csv(parallel);
    if (!same_sweep) o.pass = false;
    fs::remove_all(root);

    d << "repeated run " << (same_run ? "identical" : "DIFFERS") << "; CLI output files "
      << (same_files ? "identical" : "DIFFER") << "; sweep 1 vs 4 threads "
      << (same_sweep ? "identical" : "DIFFERS") << " (" << serial.runs.size() << " runs)";
    o.detail = d.str();
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"noiseless completeness", noiseless_completeness},
        {"extraction and phase correction, exhaustive n<=6", exhaustive_delta},
        {"stabilizer parity table", stabilizer_table},
        {"security table", security_table},
        {"key length and rate accounting", key_accounting},
        {"noisy pass rates vs density-matrix prediction", noisy_pass_rates},
        {"adversary detection", adversary_detection},
        {"anonymity of public announcements", anonymity},
        {"determinism", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::cout << (o.pass ? "PASS" : "FAIL") << " [" << (i + 1) << "] " << criteria[i].first << ": " << o.detail
                  << std::endl;
    }
    std::cout << (failures ? "FAILED " : "OK ") << (criteria.size() - static_cast<std::size_t>(failures)) << "/"
              << criteria.size() << " criteria" << std::endl;
    return failures ? 1 : 0;
}
