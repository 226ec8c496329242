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

// Security bookkeeping from round counts and state fidelity.
//
// An adversary who swaps its X measurement for Z wins a key bit when the
// round turns out to be KeyGen. Three estimates of its per-bit success:
//   no failures tolerated      1/D
//   every failure is cheating  (1 + eta (D - 1)) / D
//   noise floor removed        same, with eta' = max(0, eta - (1 - sqrt F))

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace acka {

struct SecurityInputs {
    std::size_t num_keygen = 0;
    std::size_t num_verification = 0;
    std::size_t num_verification_failed = 0;
    double fidelity = 1.0;
    std::optional<double> raw_rate;  // events per second

    void validate() const {
        if (num_verification_failed > num_verification) {
            throw std::invalid_argument("security inputs: failed rounds exceed verification rounds");
        }
        if (num_keygen == 0) throw std::invalid_argument("security inputs: at least one KeyGen round required");
        if (num_verification == 0) {
            throw std::invalid_argument("security inputs: at least one Verification round required");
        }
        if (!(fidelity > 0.0 && fidelity <= 1.0)) throw std::invalid_argument("security inputs: F must lie in (0, 1]");
        if (raw_rate && !(*raw_rate >= 0.0)) throw std::invalid_argument("security inputs: raw rate must be >= 0");
    }
};

struct SecurityReport {
    double D_eff = 0;
    double eta = 0;
    double r_f = 0;
    double eta_prime = 0;
    double p_no_fail = 0;
    double p_worst = 0;
    double p_corrected = 0;
    double h_worst = 0;
    double h_corrected = 0;
    std::optional<double> key_rate;
    /// D_eff below 2 cannot come from a valid schedule.
    bool degenerate_D = false;

    friend bool operator==(const SecurityReport&, const SecurityReport&) = default;
};

/// Observed ratio of all rounds to KeyGen rounds.
inline double effective_D(std::size_t num_keygen, std::size_t num_verification) {
    if (num_keygen == 0) throw std::invalid_argument("effective_D: no KeyGen rounds");
    return static_cast<double>(num_keygen + num_verification) / static_cast<double>(num_keygen);
}

inline double failure_rate(std::size_t num_verification_failed, std::size_t num_verification) {
    if (num_verification == 0) throw std::invalid_argument("failure_rate: no Verification rounds");
    if (num_verification_failed > num_verification) {
        throw std::invalid_argument("failure_rate: more failures than rounds");
    }
    return static_cast<double>(num_verification_failed) / static_cast<double>(num_verification);
}

inline double guess_prob_no_fail(double D) {
    if (!(D >= 1.0)) throw std::invalid_argument("guess_prob_no_fail: D must be >= 1");
    return 1.0 / D;
}

/// Clamped at 1; the raw expression exceeds 1 when eta (D - 1) > D - 1.
inline double guess_prob_worst(double D, double eta) {
    if (!(D >= 1.0)) throw std::invalid_argument("guess_prob_worst: D must be >= 1");
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("guess_prob_worst: eta must lie in [0, 1]");
    return std::min(1.0, (1.0 + eta * (D - 1.0)) / D);
}

/// Lower bound on the honest verification failure rate at fidelity F.
inline double fidelity_failure_floor(double F) {
    if (!(F > 0.0 && F <= 1.0)) throw std::invalid_argument("fidelity_failure_floor: F must lie in (0, 1]");
    return 1.0 - std::sqrt(F);
}

inline double corrected_eta(double eta, double F) { return std::max(0.0, eta - fidelity_failure_floor(F)); }

inline double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binary_entropy: p must lie in [0, 1]");
    if (p == 0.0 || p == 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

inline SecurityReport build_report(const SecurityInputs& in) {
    in.validate();
    SecurityReport r;
    r.D_eff = effective_D(in.num_keygen, in.num_verification);
    r.degenerate_D = r.D_eff < 2.0;
    r.eta = failure_rate(in.num_verification_failed, in.num_verification);
    r.r_f = fidelity_failure_floor(in.fidelity);
    r.eta_prime = corrected_eta(r.eta, in.fidelity);
    r.p_no_fail = guess_prob_no_fail(r.D_eff);
    r.p_worst = guess_prob_worst(r.D_eff, r.eta);
    r.p_corrected = guess_prob_worst(r.D_eff, r.eta_prime);
    r.h_worst = binary_entropy(r.p_worst);
    r.h_corrected = binary_entropy(r.p_corrected);
    if (in.raw_rate) r.key_rate = *in.raw_rate / r.D_eff;
    return r;
}

inline constexpr const char* kSecurityCsvHeader =
    "D_eff,eta,r_f,eta_prime,p_no_fail,p_worst,p_corrected,h_worst,h_corrected,key_rate";

namespace detail {
inline std::string fixed(double v, int digits = 6) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}
}  // namespace detail

/// One CSV row matching kSecurityCsvHeader; key_rate is empty when unknown.
inline std::string security_csv_row(const SecurityReport& r) {
    std::ostringstream os;
    os << detail::fixed(r.D_eff) << ',' << detail::fixed(r.eta) << ',' << detail::fixed(r.r_f) << ','
       << detail::fixed(r.eta_prime) << ',' << detail::fixed(r.p_no_fail) << ',' << detail::fixed(r.p_worst) << ','
       << detail::fixed(r.p_corrected) << ',' << detail::fixed(r.h_worst) << ',' << detail::fixed(r.h_corrected)
       << ',';
    if (r.key_rate) os << detail::fixed(*r.key_rate);
    return os.str();
}

inline void print_security_report(std::ostream& os, const SecurityReport& r) {
    auto line = [&os](const char* name, const std::string& value) {
        os << "  " << std::left << std::setw(28) << name << value << '\n';
    };
    line("effective D", detail::fixed(r.D_eff, 4) + (r.degenerate_D ? "  (warning: D < 2)" : ""));
    line("failure rate eta", detail::fixed(r.eta, 4));
    line("fidelity floor r_f", detail::fixed(r.r_f, 4));
    line("corrected eta'", detail::fixed(r.eta_prime, 4));
    line("guess p (no failures)", detail::fixed(r.p_no_fail, 4));
    line("guess p (worst case)", detail::fixed(r.p_worst, 4));
    line("guess p (non-unit F)", detail::fixed(r.p_corrected, 4));
    line("h(p) worst case", detail::fixed(r.h_worst, 4));
    line("h(p) non-unit F", detail::fixed(r.h_corrected, 4));
    line("effective key rate [1/s]", r.key_rate ? detail::fixed(*r.key_rate, 5) : std::string("n/a"));
}

}  // namespace acka
