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

// Line-oriented transcript files. The formats are documented byte-for-byte
// in docs/formats.md.
//
// Public file:
//   acka-transcript v1
//   n=<int> D=<int> L=<int> policy=<verification_only|every_round> F=<%.17g>
//   <round>\t<K|V>\t<extraction hex|->\t<verification hex|->\t<pass|fail|->
//   ...
//   counts keygen=<int> verification=<int> failed=<int>
//
// Sender-private file:
//   acka-private v1
//   sender=<int> participants=<i,j,...> seed=<uint64>
//   <round>\t<delta|->\t<sender basis>\t<sender outcome>\t<ext truthful|->\t<ver truthful|->\t<key bits|->\t<defections|->
//   ...

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "acka/protocol.hpp"

namespace acka {

class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

inline constexpr std::string_view kPublicMagic = "acka-transcript v1";
inline constexpr std::string_view kPrivateMagic = "acka-private v1";

namespace io {

/// Packs bits MSB-first into lowercase hex, zero-padded to a whole nibble.
inline std::string pack_hex(const std::vector<std::uint8_t>& bits) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    for (std::size_t i = 0; i < bits.size(); i += 4) {
        unsigned nibble = 0;
        for (std::size_t j = 0; j < 4; ++j) {
            nibble <<= 1;
            if (i + j < bits.size()) nibble |= bits[i + j] & 1;
        }
        out.push_back(kDigits[nibble]);
    }
    return out;
}

inline std::vector<std::uint8_t> unpack_hex(std::string_view hex, std::size_t num_bits) {
    if (hex.size() != (num_bits + 3) / 4) throw std::invalid_argument("hex field has wrong length");
    std::vector<std::uint8_t> bits;
    bits.reserve(num_bits);
    for (std::size_t i = 0; i < hex.size(); ++i) {
        const char c = hex[i];
        unsigned v;
        if (c >= '0' && c <= '9') {
            v = static_cast<unsigned>(c - '0');
        } else if (c >= 'a' && c <= 'f') {
            v = static_cast<unsigned>(c - 'a' + 10);
        } else {
            throw std::invalid_argument(std::string("bad hex digit '") + c + "'");
        }
        for (int j = 3; j >= 0; --j) {
            if (bits.size() < num_bits) {
                bits.push_back(static_cast<std::uint8_t>((v >> j) & 1));
            } else if ((v >> j) & 1) {
                throw std::invalid_argument("nonzero padding in hex field");
            }
        }
    }
    return bits;
}

inline std::string bit_string(const std::vector<std::uint8_t>& bits) {
    std::string s;
    for (auto b : bits) s.push_back(b ? '1' : '0');
    return s;
}

inline std::string bit_string(const std::vector<bool>& bits) {
    std::string s;
    for (bool b : bits) s.push_back(b ? '1' : '0');
    return s;
}

inline std::vector<std::uint8_t> parse_bit_string(std::string_view s) {
    std::vector<std::uint8_t> out;
    for (char c : s) {
        if (c != '0' && c != '1') throw std::invalid_argument("expected a string of 0/1");
        out.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return out;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

template <typename T>
T parse_number(std::string_view s) {
    T value{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw std::invalid_argument("expected a number, got '" + std::string(s) + "'");
    }
    return value;
}

inline double parse_double(std::string_view s) {
    double v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw std::invalid_argument("expected a real number, got '" + std::string(s) + "'");
    }
    return v;
}

/// Shortest text that reads back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/// Parses `key=value key=value ...` requiring exactly `keys` in order.
inline std::map<std::string, std::string> parse_header(std::string_view line, std::vector<std::string_view> keys,
                                                       std::size_t line_no) {
    std::map<std::string, std::string> out;
    const auto fields = split(line, ' ');
    if (fields.size() != keys.size()) throw ParseError(line_no, "header has wrong number of fields");
    for (std::size_t i = 0; i < keys.size(); ++i) {
        const auto eq = fields[i].find('=');
        if (eq == std::string_view::npos || fields[i].substr(0, eq) != keys[i]) {
            throw ParseError(line_no, "expected header field '" + std::string(keys[i]) + "'");
        }
        out[std::string(keys[i])] = std::string(fields[i].substr(eq + 1));
    }
    return out;
}

inline const char* verdict_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::NotApplicable: return "-";
    }
    return "-";
}

}  // namespace io

inline void write_public_transcript(std::ostream& os, const Transcript& t) {
    os << kPublicMagic << '\n';
    os << "n=" << t.header.n << " D=" << t.header.D << " L=" << t.header.rounds
       << " policy=" << to_string(t.header.policy) << " F=" << io::format_double(t.header.fidelity) << '\n';
    for (const auto& r : t.rounds) {
        os << r.index << '\t' << round_type_char(r.type) << '\t';
        os << (r.extraction_bits.empty() ? "-" : io::pack_hex(r.extraction_bits)) << '\t';
        if (r.verification_bits.empty()) {
            os << '-';
        } else {
            std::vector<std::uint8_t> bits;
            for (const auto& a : r.verification_bits) {
                bits.push_back(a.basis_bit);
                bits.push_back(a.outcome);
            }
            os << io::pack_hex(bits);
        }
        os << '\t' << io::verdict_string(r.verdict) << '\n';
    }
    const auto c = t.counts();
    os << "counts keygen=" << c.num_keygen << " verification=" << c.num_verification
       << " failed=" << c.num_verification_failed << '\n';
}

/// Reads a public transcript. Sender-private fields of the records stay empty.
/// Throws ParseError carrying the offending line number.
inline Transcript read_public_transcript(std::istream& is) {
    Transcript t;
    std::string line;
    std::size_t line_no = 0;
    auto next = [&]() -> bool {
        if (!std::getline(is, line)) return false;
        ++line_no;
        return true;
    };

    if (!next() || line != kPublicMagic) throw ParseError(1, "missing '" + std::string(kPublicMagic) + "' header");
    if (!next()) throw ParseError(2, "missing parameter header");
    try {
        auto h = io::parse_header(line, {"n", "D", "L", "policy", "F"}, line_no);
        t.header.n = io::parse_number<std::size_t>(h["n"]);
        t.header.D = io::parse_number<std::uint32_t>(h["D"]);
        t.header.rounds = io::parse_number<std::size_t>(h["L"]);
        t.header.policy = parse_announcement_policy(h["policy"]);
        t.header.fidelity = io::parse_double(h["F"]);
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(line_no, e.what());
    }
    const std::size_t n = t.header.n;

    bool saw_counts = false;
    while (next()) {
        if (line.rfind("counts ", 0) == 0) {
            TranscriptCounts declared;
            try {
                auto h = io::parse_header(std::string_view(line).substr(7), {"keygen", "verification", "failed"},
                                          line_no);
                declared.num_keygen = io::parse_number<std::size_t>(h["keygen"]);
                declared.num_verification = io::parse_number<std::size_t>(h["verification"]);
                declared.num_verification_failed = io::parse_number<std::size_t>(h["failed"]);
            } catch (const ParseError&) {
                throw;
            } catch (const std::exception& e) {
                throw ParseError(line_no, e.what());
            }
            if (declared != t.counts()) throw ParseError(line_no, "declared counts do not match the records");
            saw_counts = true;
            if (next()) throw ParseError(line_no, "content after counts line");
            break;
        }

        const auto fields = io::split(line, '\t');
        if (fields.size() != 5) {
            throw ParseError(line_no, "corrupt record: expected 5 tab-separated fields, got " +
                                          std::to_string(fields.size()));
        }
        try {
            RoundRecord r;
            r.index = io::parse_number<std::size_t>(fields[0]);
            if (r.index != t.rounds.size()) throw std::invalid_argument("round index out of sequence");
            if (fields[1] == "K") {
                r.type = RoundType::KeyGen;
            } else if (fields[1] == "V") {
                r.type = RoundType::Verification;
            } else {
                throw std::invalid_argument("round type must be K or V");
            }
            if (fields[2] != "-") r.extraction_bits = io::unpack_hex(fields[2], n);
            if (fields[3] != "-") {
                const auto bits = io::unpack_hex(fields[3], 2 * n);
                for (std::size_t p = 0; p < n; ++p) r.verification_bits.push_back({bits[2 * p], bits[2 * p + 1]});
            }
            if (fields[4] == "pass") {
                r.verdict = Verdict::Pass;
            } else if (fields[4] == "fail") {
                r.verdict = Verdict::Fail;
            } else if (fields[4] != "-") {
                throw std::invalid_argument("verdict must be pass, fail or -");
            }

            const bool verification = r.type == RoundType::Verification;
            if (verification != (r.verdict != Verdict::NotApplicable)) {
                throw std::invalid_argument("verdict present iff the round is a Verification round");
            }
            if (verification != !r.verification_bits.empty()) {
                throw std::invalid_argument("verification announcements present iff Verification round");
            }
            if (verification && r.extraction_bits.empty()) {
                throw std::invalid_argument("Verification round without extraction announcements");
            }
            if (!verification && t.header.policy == AnnouncementPolicy::VerificationOnly &&
                !r.extraction_bits.empty()) {
                throw std::invalid_argument("KeyGen round carries announcements under verification_only");
            }
            t.rounds.push_back(std::move(r));
        } catch (const std::exception& e) {
            throw ParseError(line_no, std::string("corrupt record: ") + e.what());
        }
    }
    if (!saw_counts) throw ParseError(line_no + 1, "missing counts line (truncated transcript?)");
    if (t.rounds.size() != t.header.rounds) {
        throw ParseError(line_no, "record count " + std::to_string(t.rounds.size()) + " does not match L=" +
                                      std::to_string(t.header.rounds));
    }
    return t;
}

/// Roles and seed, known only to the sender.
struct PrivateHeader {
    std::size_t sender = 0;
    std::vector<std::size_t> participants;  // increasing order
    std::uint64_t seed = 0;
};

inline void write_private_transcript(std::ostream& os, const Transcript& t, const NetworkConfig& config) {
    os << kPrivateMagic << '\n';
    os << "sender=" << config.sender << " participants=";
    const auto participants = config.sorted_participants();
    for (std::size_t i = 0; i < participants.size(); ++i) os << (i ? "," : "") << participants[i];
    os << " seed=" << config.seed << '\n';
    for (const auto& r : t.rounds) {
        os << r.index << '\t' << (r.delta ? std::to_string(*r.delta) : "-") << '\t'
           << (r.sender_basis ? basis_char(*r.sender_basis) : '-') << '\t'
           << (r.sender_outcome ? std::to_string(*r.sender_outcome) : "-") << '\t'
           << (r.extraction_truthful.empty() ? "-" : io::bit_string(r.extraction_truthful)) << '\t'
           << (r.verification_truthful.empty() ? "-" : io::bit_string(r.verification_truthful)) << '\t'
           << (r.key_bits.empty() ? "-" : io::bit_string(r.key_bits)) << '\t';
        if (r.defected.empty()) {
            os << '-';
        } else {
            for (std::size_t i = 0; i < r.defected.size(); ++i) {
                os << (i ? "," : "") << r.defected[i] << ':' << static_cast<int>(r.adversary_bits[i]);
            }
        }
        os << '\n';
    }
}

/// Merges the sender-private file into `t`, checking that it describes the
/// same rounds.
inline PrivateHeader read_private_transcript(std::istream& is, Transcript& t) {
    PrivateHeader header;
    std::string line;
    std::size_t line_no = 0;
    auto next = [&]() -> bool {
        if (!std::getline(is, line)) return false;
        ++line_no;
        return true;
    };
    if (!next() || line != kPrivateMagic) throw ParseError(1, "missing '" + std::string(kPrivateMagic) + "' header");
    if (!next()) throw ParseError(2, "missing role header");
    try {
        auto h = io::parse_header(line, {"sender", "participants", "seed"}, line_no);
        header.sender = io::parse_number<std::size_t>(h["sender"]);
        for (auto p : io::split(h["participants"], ',')) header.participants.push_back(io::parse_number<std::size_t>(p));
        header.seed = io::parse_number<std::uint64_t>(h["seed"]);
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(line_no, e.what());
    }
    const std::size_t key_size = header.participants.size() + 1;
    const std::size_t n = t.header.n;

    std::size_t index = 0;
    while (next()) {
        const auto fields = io::split(line, '\t');
        if (fields.size() != 8) {
            throw ParseError(line_no, "corrupt private record: expected 8 tab-separated fields");
        }
        if (index >= t.rounds.size()) throw ParseError(line_no, "more private records than public rounds");
        auto& r = t.rounds[index];
        try {
            if (io::parse_number<std::size_t>(fields[0]) != index) throw std::invalid_argument("round index mismatch");
            if (fields[1] != "-") r.delta = io::parse_number<std::uint8_t>(fields[1]);
            if (fields[2].size() != 1) throw std::invalid_argument("bad sender basis");
            switch (fields[2][0]) {
                case 'X': r.sender_basis = PauliBasis::X; break;
                case 'Y': r.sender_basis = PauliBasis::Y; break;
                case 'Z': r.sender_basis = PauliBasis::Z; break;
                default: throw std::invalid_argument("bad sender basis");
            }
            r.sender_outcome = io::parse_number<std::uint8_t>(fields[3]);
            auto to_flags = [](std::string_view s, std::size_t expected) {
                std::vector<bool> out;
                if (s == "-") return out;
                for (auto b : io::parse_bit_string(s)) out.push_back(b != 0);
                if (out.size() != expected) throw std::invalid_argument("truthful flags have wrong length");
                return out;
            };
            r.extraction_truthful = to_flags(fields[4], n);
            r.verification_truthful = to_flags(fields[5], n);
            if (fields[6] != "-") {
                r.key_bits = io::parse_bit_string(fields[6]);
                if (r.key_bits.size() != key_size) throw std::invalid_argument("key bits have wrong length");
            }
            if ((r.type == RoundType::KeyGen) != !r.key_bits.empty()) {
                throw std::invalid_argument("key bits present iff KeyGen round");
            }
            if (fields[7] != "-") {
                for (auto item : io::split(fields[7], ',')) {
                    const auto colon = item.find(':');
                    if (colon == std::string_view::npos) throw std::invalid_argument("bad defection entry");
                    r.defected.push_back(io::parse_number<std::size_t>(item.substr(0, colon)));
                    r.adversary_bits.push_back(io::parse_number<std::uint8_t>(item.substr(colon + 1)));
                }
            }
        } catch (const std::exception& e) {
            throw ParseError(line_no, std::string("corrupt private record: ") + e.what());
        }
        ++index;
    }
    if (index != t.rounds.size()) {
        throw ParseError(line_no, "private file has " + std::to_string(index) + " records, public has " +
                                      std::to_string(t.rounds.size()));
    }
    return header;
}

}  // namespace acka
