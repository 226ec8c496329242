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

// Exact honest-protocol statistics computed on the density matrix of the
// distributed n-party state. Local measurements on different parties
// commute, so the extraction followed by the key-party measurements has the
// same joint statistics as measuring the full Pauli string on rho.

#include <cstddef>
#include <vector>

#include "acka/protocol.hpp"
#include "acka/quantum_sim.hpp"

namespace acka {

inline MixedState distributed_state(const NetworkConfig& config) {
    return depolarize_global(prepare_ghz(config.n), config.noise.mixing_parameter(config.n));
}

/// Probability that an honest Verification round passes, averaged over the
/// participants' uniformly random X/Y choices (or the fixed setting).
inline double predicted_verification_pass(const MixedState& rho, const NetworkConfig& config) {
    config.validate();
    const auto participants = config.sorted_participants();
    const std::size_t m = participants.size();
    std::vector<std::vector<PauliBasis>> settings;
    if (config.fixed_settings) {
        settings.push_back(*config.fixed_settings);
    } else {
        for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
            std::vector<PauliBasis> s(m);
            for (std::size_t i = 0; i < m; ++i) s[i] = (mask >> i) & 1 ? PauliBasis::Y : PauliBasis::X;
            settings.push_back(std::move(s));
        }
    }

    double total = 0;
    for (const auto& setting : settings) {
        std::vector<Pauli> paulis(config.n, Pauli::X);
        std::size_t participant_y = 0;
        for (std::size_t i = 0; i < m; ++i) {
            paulis[participants[i]] = to_pauli(setting[i]);
            if (setting[i] == PauliBasis::Y) ++participant_y;
        }
        paulis[config.sender] = to_pauli(sender_basis_for(participant_y));
        const std::size_t num_y = participant_y + (participant_y & 1);
        const double sign = ((num_y / 2) & 1) ? -1.0 : 1.0;
        total += 0.5 * (1.0 + sign * stabilizer_expectation(rho, paulis));
    }
    return total / static_cast<double>(settings.size());
}

namespace detail {
inline std::uint8_t party_bit(std::size_t index, std::size_t n, std::size_t party) {
    return static_cast<std::uint8_t>((index >> (n - 1 - party)) & 1);
}
}  // namespace detail

/// Probability that all key parties obtain the same Z outcome.
inline double predicted_keygen_agreement(const MixedState& rho, const NetworkConfig& config) {
    const auto key_parties = config.key_parties();
    double total = 0;
    for (std::size_t i = 0; i < rho.dimension(); ++i) {
        const auto first = detail::party_bit(i, config.n, key_parties.front());
        bool equal = true;
        for (auto p : key_parties) equal = equal && detail::party_bit(i, config.n, p) == first;
        if (equal) total += rho.diagonal(i);
    }
    return total;
}

/// Probability that `participant`'s key bit differs from the sender's.
inline double predicted_qber(const MixedState& rho, const NetworkConfig& config, std::size_t participant) {
    double total = 0;
    for (std::size_t i = 0; i < rho.dimension(); ++i) {
        if (detail::party_bit(i, config.n, config.sender) != detail::party_bit(i, config.n, participant)) {
            total += rho.diagonal(i);
        }
    }
    return total;
}

struct AnalyticPrediction {
    double verification_pass = 1;
    double keygen_agreement = 1;
    double qber = 0;  // first participant
};

inline AnalyticPrediction predict(const NetworkConfig& config) {
    const auto rho = distributed_state(config);
    return {predicted_verification_pass(rho, config), predicted_keygen_agreement(rho, config),
            predicted_qber(rho, config, config.sorted_participants().front())};
}

/// Honest failure rate under global white noise; independent of roles.
inline double expected_white_noise_failure(double fidelity, std::size_t n) {
    return 0.5 * (1.0 - calibrate_white_noise(fidelity, n));
}

}  // namespace acka
