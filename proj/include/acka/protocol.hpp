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

// Anonymous conference key agreement over distributed GHZ states.
//
// Round lifecycle: the public source types the round (KeyGen with
// probability 1/D), a GHZ_n state is distributed and noised, non-participants
// measure X, and the remaining GHZ_{m+1} is used either for one key bit (all
// key parties measure Z) or for a stabilizer test checked by the sender.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "acka/noise_adversary.hpp"
#include "acka/quantum_sim.hpp"
#include "acka/rng.hpp"

namespace acka {

enum class AnnouncementPolicy : std::uint8_t { VerificationOnly, EveryRound };

inline std::string to_string(AnnouncementPolicy p) {
    return p == AnnouncementPolicy::VerificationOnly ? "verification_only" : "every_round";
}

inline AnnouncementPolicy parse_announcement_policy(std::string_view s) {
    if (s == "verification_only") return AnnouncementPolicy::VerificationOnly;
    if (s == "every_round") return AnnouncementPolicy::EveryRound;
    throw std::invalid_argument("unknown announcement_policy '" + std::string(s) + "'");
}

enum class Role : std::uint8_t { Sender, Participant, NonParticipant };

struct NetworkConfig {
    static constexpr std::size_t kMinParties = 3;
    static constexpr std::size_t kMaxParties = 12;

    std::size_t n = 4;
    std::size_t sender = 0;
    std::vector<std::size_t> participants;
    std::uint32_t D = 20;
    std::size_t rounds = 10000;
    AnnouncementPolicy policy = AnnouncementPolicy::VerificationOnly;
    NoiseModel noise;
    std::map<std::size_t, AdversaryStrategy> adversaries;
    /// When set, participants use these bases (in increasing party order)
    /// in every Verification round instead of choosing at random.
    std::optional<std::vector<PauliBasis>> fixed_settings;
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument naming the violated constraint.
    void validate() const {
        auto fail = [](const std::string& what) { throw std::invalid_argument("invalid config: " + what); };
        if (n < kMinParties || n > kMaxParties) fail("n must be in 3..12, got " + std::to_string(n));
        if (sender >= n) fail("sender " + std::to_string(sender) + " is not a party");
        if (participants.empty()) fail("at least one participant is required");
        std::vector<std::size_t> sorted = participants;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) fail("duplicate participant");
        for (auto p : sorted) {
            if (p >= n) fail("participant " + std::to_string(p) + " is not a party");
            if (p == sender) fail("sender cannot be a participant");
        }
        if (D < 2) fail("D must be at least 2");
        if (rounds < 1) fail("L must be at least 1");
        if (noise.kind == NoiseModel::Kind::GlobalWhite) {
            const double floor = std::ldexp(1.0, -static_cast<int>(n));
            if (!(noise.fidelity_target >= floor && noise.fidelity_target <= 1.0)) {
                fail("noise.F_target must lie in [2^-n, 1]");
            }
        }
        for (const auto& [party, strategy] : adversaries) {
            if (party >= n) fail("adversary " + std::to_string(party) + " is not a party");
            if (role_of(party) != Role::NonParticipant) {
                fail("adversary " + std::to_string(party) + " must be a non-participant");
            }
            if (!(strategy.p_guess >= 0.0 && strategy.p_guess <= 1.0)) fail("p_guess must lie in [0, 1]");
        }
        if (fixed_settings) {
            if (fixed_settings->size() != participants.size()) {
                fail("fixed settings need one basis per participant");
            }
            for (auto b : *fixed_settings) {
                if (b == PauliBasis::Z) fail("fixed settings must be X or Y");
            }
        }
    }

    std::size_t m() const noexcept { return participants.size(); }

    Role role_of(std::size_t party) const {
        if (party == sender) return Role::Sender;
        if (std::find(participants.begin(), participants.end(), party) != participants.end()) {
            return Role::Participant;
        }
        return Role::NonParticipant;
    }

    /// Sender and participants in increasing party order; this is the qubit
    /// order of the extracted GHZ_{m+1} state.
    std::vector<std::size_t> key_parties() const {
        std::vector<std::size_t> out = participants;
        out.push_back(sender);
        std::sort(out.begin(), out.end());
        return out;
    }

    std::vector<std::size_t> non_participants() const {
        std::vector<std::size_t> out;
        for (std::size_t p = 0; p < n; ++p) {
            if (role_of(p) == Role::NonParticipant) out.push_back(p);
        }
        return out;
    }

    std::vector<std::size_t> sorted_participants() const {
        std::vector<std::size_t> out = participants;
        std::sort(out.begin(), out.end());
        return out;
    }

    AdversaryStrategy strategy_of(std::size_t party) const {
        auto it = adversaries.find(party);
        return it == adversaries.end() ? AdversaryStrategy::honest() : it->second;
    }
};

// ---------------------------------------------------------------------------
// Randomness layout: one stream per consumer, derived from the run seed.

namespace stream {
inline constexpr std::uint64_t kPublic = 0x7075626c6963ULL;
inline constexpr std::uint64_t kNature = 0x6e6174757265ULL;
inline constexpr std::uint64_t kCover = 0x636f766572ULL;
inline constexpr std::uint64_t kBasis = 0x6261736973ULL;
inline constexpr std::uint64_t kNotify = 0x6e6f74696679ULL;
inline constexpr std::uint64_t kAdversary = 0x616476ULL;
}  // namespace stream

struct ProtocolStreams {
    Rng public_source;
    Rng nature;
    std::vector<Rng> cover;
    std::vector<Rng> basis;
    std::vector<Rng> adversary;

    ProtocolStreams(std::uint64_t seed, std::size_t n)
        : public_source(derive_seed(seed, stream::kPublic)), nature(derive_seed(seed, stream::kNature)) {
        for (std::size_t p = 0; p < n; ++p) {
            cover.emplace_back(derive_seed(seed, stream::kCover, p));
            basis.emplace_back(derive_seed(seed, stream::kBasis, p));
            adversary.emplace_back(derive_seed(seed, stream::kAdversary, p));
        }
    }
};

// ---------------------------------------------------------------------------
// Notification

/// Splits each party's input bit into n XOR shares; row i is what party i
/// sends to parties 0..n-1 over private pairwise channels.
inline std::vector<std::vector<std::uint8_t>> notification_shares(const std::vector<std::uint8_t>& inputs,
                                                                  Rng& rng) {
    const std::size_t n = inputs.size();
    std::vector<std::vector<std::uint8_t>> shares(n, std::vector<std::uint8_t>(n));
    for (std::size_t i = 0; i < n; ++i) {
        std::uint8_t acc = 0;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            shares[i][k] = rng.bit();
            acc ^= shares[i][k];
        }
        shares[i][n - 1] = acc ^ (inputs[i] & 1);
    }
    return shares;
}

/// Each party k XORs the column of shares it received and forwards the
/// result privately to the target, which XORs the forwarded bits.
inline std::uint8_t combine_shares(const std::vector<std::vector<std::uint8_t>>& shares) {
    const std::size_t n = shares.size();
    std::uint8_t flag = 0;
    for (std::size_t k = 0; k < n; ++k) {
        std::uint8_t column = 0;
        for (std::size_t i = 0; i < n; ++i) column ^= shares[i].at(k);
        flag ^= column;
    }
    return flag;
}

/// Runs one share round per target party. Only the sender has a nonzero
/// input, and only for its chosen participants.
inline std::vector<bool> notify(const NetworkConfig& config, Rng& rng) {
    std::vector<bool> flags(config.n);
    for (std::size_t target = 0; target < config.n; ++target) {
        std::vector<std::uint8_t> inputs(config.n, 0);
        inputs[config.sender] = config.role_of(target) == Role::Participant ? 1 : 0;
        flags[target] = combine_shares(notification_shares(inputs, rng)) != 0;
    }
    return flags;
}

// ---------------------------------------------------------------------------
// Rounds

/// KeyGen with probability exactly 1/D.
inline RoundType schedule_round(std::uint32_t D, Rng& public_source) {
    if (D < 2) throw std::invalid_argument("schedule_round: D must be at least 2");
    return public_source.uniform() * D < 1.0 ? RoundType::KeyGen : RoundType::Verification;
}

enum class Verdict : std::uint8_t { NotApplicable, Pass, Fail };

struct VerificationAnnouncement {
    std::uint8_t basis_bit = 0;  // 0 = X, 1 = Y
    std::uint8_t outcome = 0;

    friend bool operator==(const VerificationAnnouncement&, const VerificationAnnouncement&) = default;
};

struct ExtractionResult {
    PureState reduced;
    /// XOR of the X outcomes actually obtained by non-participants.
    std::uint8_t true_delta = 0;
    /// XOR of the bits the non-participants announced; what the sender uses.
    std::optional<std::uint8_t> announced_delta;
    /// One bit per party, empty when no announcement was made.
    std::vector<std::uint8_t> announcements;
    std::vector<bool> truthful;
    std::vector<std::size_t> defected;
    std::vector<std::uint8_t> adversary_bits;
};

/// Measures every non-participant (X when honest, Z when defecting) and
/// returns the GHZ_{m+1,Delta} left on the key parties. `actions` holds one
/// entry per party; entries for key parties are ignored.
inline ExtractionResult run_extraction(const PureState& state, const NetworkConfig& config, RoundType round_type,
                                       const std::vector<AdversaryAction>& actions, ProtocolStreams& streams) {
    if (state.num_qubits() != config.n) {
        throw std::invalid_argument("run_extraction: state must have one qubit per party");
    }
    const auto outsiders = config.non_participants();
    std::vector<std::uint8_t> outcome(config.n, 0);
    std::vector<bool> measured_x(config.n, false);

    PureState current = state;
    // Highest index first so lower parties keep their qubit index.
    for (auto it = outsiders.rbegin(); it != outsiders.rend(); ++it) {
        const std::size_t party = *it;
        const bool defect = actions.at(party) == AdversaryAction::MeasureZAnnounceRandom;
        auto [result, reduced] =
            measure_qubit(current, party, defect ? PauliBasis::Z : PauliBasis::X, streams.nature);
        outcome[party] = result.bit;
        measured_x[party] = !defect;
        current = std::move(reduced);
    }

    ExtractionResult out{std::move(current), 0, std::nullopt, {}, {}, {}, {}};
    for (auto party : outsiders) {
        if (measured_x[party]) {
            out.true_delta ^= outcome[party];
        } else {
            out.defected.push_back(party);
            out.adversary_bits.push_back(outcome[party]);
        }
    }

    const bool announce =
        round_type == RoundType::Verification || config.policy == AnnouncementPolicy::EveryRound;
    if (announce) {
        out.announcements.assign(config.n, 0);
        out.truthful.assign(config.n, false);
        std::uint8_t announced = 0;
        for (std::size_t p = 0; p < config.n; ++p) {
            const bool honest_outsider = config.role_of(p) == Role::NonParticipant && measured_x[p];
            out.announcements[p] = honest_outsider ? outcome[p] : streams.cover[p].bit();
            out.truthful[p] = honest_outsider;
            if (config.role_of(p) == Role::NonParticipant) announced ^= out.announcements[p];
        }
        out.announced_delta = announced;
    }
    return out;
}

/// Z-basis measurement of every key party. Bits are in key-party order.
inline std::vector<std::uint8_t> run_keygen_round(const PureState& reduced, const NetworkConfig& config,
                                                  Rng& nature) {
    const std::size_t k = config.m() + 1;
    if (reduced.num_qubits() != k) {
        throw std::invalid_argument("run_keygen_round: reduced state must have m+1 qubits");
    }
    std::vector<std::uint8_t> bits(k);
    PureState current = reduced;
    for (std::size_t q = k; q-- > 0;) {
        auto [result, next] = measure_qubit(current, q, PauliBasis::Z, nature);
        bits[q] = result.bit;
        current = std::move(next);
    }
    return bits;
}

/// Parity the sender expects from the m+1 outcome bits when k of the bases
/// are Y and the extracted state carries phase (-1)^delta.
constexpr std::uint8_t expected_parity(std::size_t num_y, std::uint8_t delta) noexcept {
    return static_cast<std::uint8_t>(((num_y / 2) & 1) ^ (delta & 1));
}

/// Sender completes the participants' bases so the total Y count is even.
constexpr PauliBasis sender_basis_for(std::size_t participant_y_count) noexcept {
    return (participant_y_count & 1) ? PauliBasis::Y : PauliBasis::X;
}

/// Applies the sender's physical phase correction Z^delta to the extracted state.
inline PureState apply_phase_correction(const PureState& reduced, std::size_t sender_qubit, std::uint8_t delta) {
    return delta ? apply_pauli_z(reduced, sender_qubit) : reduced;
}

struct VerificationResult {
    Verdict verdict = Verdict::NotApplicable;
    std::vector<VerificationAnnouncement> announcements;  // one per party
    std::vector<bool> truthful;
    PauliBasis sender_basis = PauliBasis::X;
    std::uint8_t sender_outcome = 0;
    std::size_t num_y = 0;
};

/// Participants pick X or Y, measure and announce truthfully; everyone else
/// announces two random bits. The sender measures last and accepts iff the
/// outcome parity matches the stabilizer sign corrected by `delta`.
inline VerificationResult run_verification_round(const PureState& reduced, std::uint8_t delta,
                                                 const NetworkConfig& config, ProtocolStreams& streams) {
    const auto key_parties = config.key_parties();
    if (reduced.num_qubits() != key_parties.size()) {
        throw std::invalid_argument("run_verification_round: reduced state must have m+1 qubits");
    }

    std::vector<PauliBasis> bases(key_parties.size(), PauliBasis::X);
    std::size_t participant_y = 0;
    std::size_t sender_pos = 0;
    std::size_t participant_index = 0;
    for (std::size_t q = 0; q < key_parties.size(); ++q) {
        const std::size_t party = key_parties[q];
        if (party == config.sender) {
            sender_pos = q;
            continue;
        }
        if (config.fixed_settings) {
            bases[q] = (*config.fixed_settings)[participant_index];
        } else {
            bases[q] = streams.basis[party].bit() ? PauliBasis::Y : PauliBasis::X;
        }
        ++participant_index;
        if (bases[q] == PauliBasis::Y) ++participant_y;
    }
    bases[sender_pos] = sender_basis_for(participant_y);

    std::vector<std::uint8_t> outcomes(key_parties.size());
    PureState current = reduced;
    for (std::size_t q = key_parties.size(); q-- > 0;) {
        auto [result, next] = measure_qubit(current, q, bases[q], streams.nature);
        outcomes[q] = result.bit;
        current = std::move(next);
    }

    VerificationResult out;
    out.sender_basis = bases[sender_pos];
    out.sender_outcome = outcomes[sender_pos];
    out.num_y = static_cast<std::size_t>(std::count(bases.begin(), bases.end(), PauliBasis::Y));

    out.announcements.resize(config.n);
    out.truthful.assign(config.n, false);
    for (std::size_t p = 0; p < config.n; ++p) {
        if (config.role_of(p) == Role::Participant) {
            const auto q = static_cast<std::size_t>(
                std::find(key_parties.begin(), key_parties.end(), p) - key_parties.begin());
            out.announcements[p] = {static_cast<std::uint8_t>(bases[q] == PauliBasis::Y), outcomes[q]};
            out.truthful[p] = true;
        } else {
            const std::uint8_t b = streams.cover[p].bit();
            const std::uint8_t o = streams.cover[p].bit();
            out.announcements[p] = {b, o};
        }
    }

    std::uint8_t parity = 0;
    for (auto b : outcomes) parity ^= b;
    out.verdict = parity == expected_parity(out.num_y, delta) ? Verdict::Pass : Verdict::Fail;
    return out;
}

// ---------------------------------------------------------------------------
// Transcript

struct RoundRecord {
    std::size_t index = 0;
    RoundType type = RoundType::Verification;

    // Public.
    std::vector<std::uint8_t> extraction_bits;                 // empty when not announced
    std::vector<VerificationAnnouncement> verification_bits;  // empty on KeyGen
    Verdict verdict = Verdict::NotApplicable;

    // Sender-private.
    std::optional<std::uint8_t> delta;
    std::vector<bool> extraction_truthful;
    std::vector<bool> verification_truthful;
    std::optional<PauliBasis> sender_basis;
    std::optional<std::uint8_t> sender_outcome;

    // Simulation ground truth.
    std::vector<std::uint8_t> key_bits;  // key-party order; KeyGen only
    std::vector<std::size_t> defected;
    std::vector<std::uint8_t> adversary_bits;
};

/// Public parameters of a run; nothing here identifies a role.
struct TranscriptHeader {
    std::size_t n = 0;
    std::uint32_t D = 0;
    std::size_t rounds = 0;
    AnnouncementPolicy policy = AnnouncementPolicy::VerificationOnly;
    double fidelity = 1.0;

    friend bool operator==(const TranscriptHeader&, const TranscriptHeader&) = default;
};

struct TranscriptCounts {
    std::size_t num_keygen = 0;
    std::size_t num_verification = 0;
    std::size_t num_verification_failed = 0;

    friend bool operator==(const TranscriptCounts&, const TranscriptCounts&) = default;
};

struct Transcript {
    TranscriptHeader header;
    std::vector<RoundRecord> rounds;

    TranscriptCounts counts() const {
        TranscriptCounts c;
        for (const auto& r : rounds) {
            if (r.type == RoundType::KeyGen) {
                ++c.num_keygen;
            } else {
                ++c.num_verification;
                if (r.verdict == Verdict::Fail) ++c.num_verification_failed;
            }
        }
        return c;
    }
};

struct ProtocolResult {
    Transcript transcript;
    std::vector<bool> notification;
    std::vector<std::uint8_t> sender_key;
    /// Keyed by participant; one bit per KeyGen round.
    std::map<std::size_t, std::vector<std::uint8_t>> participant_keys;
    std::map<std::size_t, DetectionStats> detection;
};

inline ProtocolResult run_protocol(const NetworkConfig& config) {
    config.validate();
    ProtocolStreams streams(config.seed, config.n);
    Rng notify_rng(derive_seed(config.seed, stream::kNotify));

    ProtocolResult result;
    result.notification = notify(config, notify_rng);
    result.transcript.header = {config.n, config.D, config.rounds, config.policy, config.noise.fidelity()};
    result.transcript.rounds.reserve(config.rounds);

    const auto key_parties = config.key_parties();
    const auto sender_pos = static_cast<std::size_t>(
        std::find(key_parties.begin(), key_parties.end(), config.sender) - key_parties.begin());
    for (auto p : config.participants) result.participant_keys[p];
    for (const auto& [party, strategy] : config.adversaries) result.detection[party];

    const PureState ghz = prepare_ghz(config.n);
    const double p_mix = config.noise.mixing_parameter(config.n);

    std::vector<AdversaryAction> actions(config.n, AdversaryAction::MeasureXAnnounceTrue);
    for (std::size_t r = 0; r < config.rounds; ++r) {
        RoundRecord record;
        record.index = r;
        record.type = schedule_round(config.D, streams.public_source);

        for (const auto& [party, strategy] : config.adversaries) {
            actions[party] = adversary_act(strategy, record.type, streams.adversary[party]);
        }

        const PureState shared = sample_noisy_state(ghz, p_mix, streams.nature);
        auto extraction = run_extraction(shared, config, record.type, actions, streams);
        record.extraction_bits = std::move(extraction.announcements);
        record.extraction_truthful = std::move(extraction.truthful);
        record.delta = extraction.announced_delta;
        record.defected = extraction.defected;
        record.adversary_bits = extraction.adversary_bits;

        if (record.type == RoundType::KeyGen) {
            record.key_bits = run_keygen_round(extraction.reduced, config, streams.nature);
            record.sender_basis = PauliBasis::Z;
            record.sender_outcome = record.key_bits[sender_pos];
            result.sender_key.push_back(record.key_bits[sender_pos]);
            for (std::size_t q = 0; q < key_parties.size(); ++q) {
                if (q != sender_pos) result.participant_keys[key_parties[q]].push_back(record.key_bits[q]);
            }
        } else {
            auto verification =
                run_verification_round(extraction.reduced, extraction.announced_delta.value(), config, streams);
            record.verification_bits = std::move(verification.announcements);
            record.verification_truthful = std::move(verification.truthful);
            record.verdict = verification.verdict;
            record.sender_basis = verification.sender_basis;
            record.sender_outcome = verification.sender_outcome;
        }

        for (std::size_t i = 0; i < record.defected.size(); ++i) {
            auto& stats = result.detection[record.defected[i]];
            ++stats.rounds_defected;
            if (record.type == RoundType::KeyGen) {
                ++stats.keygen_defections;
                if (record.adversary_bits[i] == record.key_bits[sender_pos]) ++stats.keygen_bits_matched;
            } else {
                ++stats.verification_defections;
                if (record.verdict == Verdict::Fail) ++stats.verification_failures_caused;
            }
        }
        result.transcript.rounds.push_back(std::move(record));
    }
    return result;
}

/// Single-adversary cheating experiment: returns the stats of the one
/// configured adversary after L rounds.
inline DetectionStats detection_experiment(NetworkConfig config, std::size_t rounds) {
    if (config.adversaries.size() != 1) {
        throw std::invalid_argument("detection_experiment: exactly one adversary required");
    }
    config.rounds = rounds;
    auto result = run_protocol(config);
    return result.detection.begin()->second;
}

// ---------------------------------------------------------------------------
// Anonymity statistics

struct SlotFrequency {
    std::size_t count = 0;
    std::size_t ones = 0;

    double frequency() const { return count ? static_cast<double>(ones) / static_cast<double>(count) : 0.0; }
    double deviation() const { return std::abs(frequency() - 0.5); }
    /// Four standard deviations of a fair-coin frequency at this count.
    double bound() const { return count ? 4.0 * std::sqrt(0.25 / static_cast<double>(count)) : 1.0; }
};

/// Announcement slots: extraction bit, verification basis bit, verification outcome bit.
inline constexpr std::size_t kNumSlots = 3;
inline constexpr const char* kSlotNames[kNumSlots] = {"extraction", "basis", "outcome"};

struct PartyAnonymity {
    std::array<SlotFrequency, kNumSlots> slots;
    double max_deviation = 0;
    bool flagged = false;  // some slot deviates from 1/2 by more than 4 sigma
};

struct AnonymityStats {
    std::vector<PartyAnonymity> parties;
    double max_deviation = 0;

    bool any_flagged() const {
        return std::any_of(parties.begin(), parties.end(), [](const auto& p) { return p.flagged; });
    }
};

inline constexpr std::size_t kMinAnnouncementsPerParty = 100;

/// Per-party empirical frequency of 1 in each public announcement slot.
/// Throws std::invalid_argument when any party has fewer than 100 announced bits.
inline AnonymityStats anonymity_statistics(const Transcript& transcript) {
    const std::size_t n = transcript.header.n;
    AnonymityStats stats;
    stats.parties.resize(n);
    for (const auto& r : transcript.rounds) {
        if (!r.extraction_bits.empty()) {
            for (std::size_t p = 0; p < n; ++p) {
                auto& s = stats.parties[p].slots[0];
                ++s.count;
                s.ones += r.extraction_bits.at(p);
            }
        }
        if (!r.verification_bits.empty()) {
            for (std::size_t p = 0; p < n; ++p) {
                auto& basis = stats.parties[p].slots[1];
                auto& outcome = stats.parties[p].slots[2];
                ++basis.count;
                ++outcome.count;
                basis.ones += r.verification_bits.at(p).basis_bit;
                outcome.ones += r.verification_bits.at(p).outcome;
            }
        }
    }
    for (std::size_t p = 0; p < n; ++p) {
        auto& party = stats.parties[p];
        std::size_t total = 0;
        for (const auto& s : party.slots) {
            total += s.count;
            if (s.count == 0) continue;
            party.max_deviation = std::max(party.max_deviation, s.deviation());
            if (s.deviation() > s.bound()) party.flagged = true;
        }
        if (total < kMinAnnouncementsPerParty) {
            throw std::invalid_argument("anonymity_statistics: party " + std::to_string(p) + " has only " +
                                        std::to_string(total) + " announced bits (need 100)");
        }
        stats.max_deviation = std::max(stats.max_deviation, party.max_deviation);
    }
    return stats;
}

/// Largest two-sample z-score between matching (party, slot) frequencies
/// of two transcripts with the same party count.
inline double max_marginal_z(const AnonymityStats& a, const AnonymityStats& b) {
    if (a.parties.size() != b.parties.size()) throw std::invalid_argument("max_marginal_z: party counts differ");
    double worst = 0;
    for (std::size_t p = 0; p < a.parties.size(); ++p) {
        for (std::size_t s = 0; s < kNumSlots; ++s) {
            const auto& x = a.parties[p].slots[s];
            const auto& y = b.parties[p].slots[s];
            if (x.count == 0 || y.count == 0) continue;
            const double pooled = static_cast<double>(x.ones + y.ones) / static_cast<double>(x.count + y.count);
            const double var = pooled * (1 - pooled) *
                               (1.0 / static_cast<double>(x.count) + 1.0 / static_cast<double>(y.count));
            if (var <= 0) continue;
            worst = std::max(worst, std::abs(x.frequency() - y.frequency()) / std::sqrt(var));
        }
    }
    return worst;
}

}  // namespace acka
