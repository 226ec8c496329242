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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "acka/rng.hpp"

namespace acka {

enum class RoundType : std::uint8_t { KeyGen, Verification };

constexpr char round_type_char(RoundType t) noexcept { return t == RoundType::KeyGen ? 'K' : 'V'; }

/// Mixing weight p such that p |GHZ_n><GHZ_n| + (1 - p) I / 2^n has fidelity
/// `fidelity_target` with GHZ_n.
inline double calibrate_white_noise(double fidelity_target, std::size_t n) {
    if (n < 1 || n > 62) throw std::invalid_argument("calibrate_white_noise: bad qubit count");
    const double floor = std::ldexp(1.0, -static_cast<int>(n));
    if (!(fidelity_target >= floor && fidelity_target <= 1.0)) {
        throw std::domain_error("calibrate_white_noise: fidelity " + std::to_string(fidelity_target) +
                                " unreachable for " + std::to_string(n) + " qubits (must be in [2^-n, 1])");
    }
    return (fidelity_target - floor) / (1.0 - floor);
}

/// Noise applied to each distributed GHZ state.
struct NoiseModel {
    enum class Kind : std::uint8_t { Ideal, GlobalWhite };

    Kind kind = Kind::Ideal;
    double fidelity_target = 1.0;

    static NoiseModel ideal() { return {}; }
    static NoiseModel global_white(double fidelity_target) {
        if (!(fidelity_target > 0.0 && fidelity_target <= 1.0)) {
            throw std::domain_error("NoiseModel: fidelity target must lie in (0, 1]");
        }
        return {Kind::GlobalWhite, fidelity_target};
    }

    /// Fidelity of the distributed state with GHZ_n.
    double fidelity() const noexcept { return kind == Kind::Ideal ? 1.0 : fidelity_target; }

    double mixing_parameter(std::size_t n) const {
        return kind == Kind::Ideal ? 1.0 : calibrate_white_noise(fidelity_target, n);
    }

    friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

/// Behavior of a dishonest non-participant.
struct AdversaryStrategy {
    enum class Kind : std::uint8_t { Honest, AlwaysZ, GuessKeyGen };

    Kind kind = Kind::Honest;
    double p_guess = 0.0;

    static AdversaryStrategy honest() { return {}; }
    static AdversaryStrategy always_z() { return {Kind::AlwaysZ, 1.0}; }
    static AdversaryStrategy guess_keygen(double p_guess) {
        if (!(p_guess >= 0.0 && p_guess <= 1.0)) {
            throw std::domain_error("AdversaryStrategy: p_guess must lie in [0, 1]");
        }
        return {Kind::GuessKeyGen, p_guess};
    }

    friend bool operator==(const AdversaryStrategy&, const AdversaryStrategy&) = default;
};

inline std::string_view to_string(AdversaryStrategy::Kind k) {
    switch (k) {
        case AdversaryStrategy::Kind::Honest: return "honest";
        case AdversaryStrategy::Kind::AlwaysZ: return "always_Z";
        case AdversaryStrategy::Kind::GuessKeyGen: return "guess_keygen";
    }
    return "?";
}

inline AdversaryStrategy::Kind parse_adversary_kind(std::string_view s) {
    if (s == "honest") return AdversaryStrategy::Kind::Honest;
    if (s == "always_Z" || s == "always_z") return AdversaryStrategy::Kind::AlwaysZ;
    if (s == "guess_keygen") return AdversaryStrategy::Kind::GuessKeyGen;
    throw std::invalid_argument("unknown adversary kind '" + std::string(s) + "'");
}

enum class AdversaryAction : std::uint8_t { MeasureXAnnounceTrue, MeasureZAnnounceRandom };

/// Decides what a non-participant does this round.
///
/// guess_keygen defects with probability p_guess whatever the round type.
/// Honest parties draw nothing from `rng`.
inline AdversaryAction adversary_act(const AdversaryStrategy& strategy, RoundType /*round_type*/,
                                     Rng& rng) {
    switch (strategy.kind) {
        case AdversaryStrategy::Kind::Honest: return AdversaryAction::MeasureXAnnounceTrue;
        case AdversaryStrategy::Kind::AlwaysZ: return AdversaryAction::MeasureZAnnounceRandom;
        case AdversaryStrategy::Kind::GuessKeyGen:
            return rng.bernoulli(strategy.p_guess) ? AdversaryAction::MeasureZAnnounceRandom
                                                   : AdversaryAction::MeasureXAnnounceTrue;
    }
    return AdversaryAction::MeasureXAnnounceTrue;
}

/// Per-adversary bookkeeping of defections and their consequences.
struct DetectionStats {
    std::size_t rounds_defected = 0;
    std::size_t verification_defections = 0;
    std::size_t verification_failures_caused = 0;
    std::size_t keygen_defections = 0;
    /// KeyGen defections where the adversary's Z outcome equals the sender's key bit.
    std::size_t keygen_bits_matched = 0;

    double detection_rate() const {
        return verification_defections == 0
                   ? 0.0
                   : static_cast<double>(verification_failures_caused) /
                         static_cast<double>(verification_defections);
    }
};

}  // namespace acka
