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

// Dense simulation of small qubit registers.
//
// Qubit q of an n-qubit register is bit (n - 1 - q) of the basis index, so
// qubit 0 (party 0) is the most significant bit. Measurement bit b always
// corresponds to eigenvalue (-1)^b of the measured Pauli.

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "acka/rng.hpp"

namespace acka {

using Complex = std::complex<double>;

enum class PauliBasis : std::uint8_t { X, Y, Z };

/// Single-qubit Pauli including identity, for stabilizer strings.
enum class Pauli : std::uint8_t { I, X, Y, Z };

constexpr Pauli to_pauli(PauliBasis b) noexcept {
    switch (b) {
        case PauliBasis::X: return Pauli::X;
        case PauliBasis::Y: return Pauli::Y;
        case PauliBasis::Z: return Pauli::Z;
    }
    return Pauli::I;
}

constexpr char basis_char(PauliBasis b) noexcept {
    switch (b) {
        case PauliBasis::X: return 'X';
        case PauliBasis::Y: return 'Y';
        case PauliBasis::Z: return 'Z';
    }
    return '?';
}

struct MeasurementResult {
    std::uint8_t bit = 0;

    constexpr int eigenvalue() const noexcept { return bit ? -1 : 1; }
    friend constexpr bool operator==(MeasurementResult, MeasurementResult) = default;
};

namespace detail {

inline constexpr double kNormTolerance = 1e-9;
inline constexpr double kImpossibleBranch = 1e-12;

constexpr std::size_t bit_position(std::size_t num_qubits, std::size_t qubit) noexcept {
    return num_qubits - 1 - qubit;
}

/// Expands a reduced index (qubit removed) into a full index with `bit` at `pos`.
constexpr std::size_t insert_bit(std::size_t reduced, std::size_t pos, std::size_t bit) noexcept {
    const std::size_t low = reduced & ((std::size_t{1} << pos) - 1);
    const std::size_t high = reduced >> pos;
    return (high << (pos + 1)) | (bit << pos) | low;
}

/// Components of the basis eigenvector for outcome `bit`, in the |0>,|1> basis.
inline std::pair<Complex, Complex> eigenvector(PauliBasis basis, std::uint8_t bit) {
    const double s = 1.0 / std::sqrt(2.0);
    const double sign = bit ? -1.0 : 1.0;
    switch (basis) {
        case PauliBasis::X: return {Complex(s, 0), Complex(sign * s, 0)};
        case PauliBasis::Y: return {Complex(s, 0), Complex(0, sign * s)};
        case PauliBasis::Z: return bit ? std::pair{Complex(0), Complex(1)} : std::pair{Complex(1), Complex(0)};
    }
    return {};
}

/// Action of a Pauli string on a computational basis state:
/// P|i> = phase * |i ^ flip_mask>.
struct PauliAction {
    std::size_t flip_mask = 0;
    std::size_t z_mask = 0;     // qubits contributing (-1)^bit
    std::size_t num_y = 0;      // each Y contributes a factor i
};

inline PauliAction pauli_action(std::span<const Pauli> paulis) {
    PauliAction a;
    const std::size_t n = paulis.size();
    for (std::size_t q = 0; q < n; ++q) {
        const std::size_t m = std::size_t{1} << bit_position(n, q);
        switch (paulis[q]) {
            case Pauli::I: break;
            case Pauli::X: a.flip_mask |= m; break;
            case Pauli::Y:
                a.flip_mask |= m;
                a.z_mask |= m;
                ++a.num_y;
                break;
            case Pauli::Z: a.z_mask |= m; break;
        }
    }
    return a;
}

inline Complex pauli_phase(const PauliAction& a, std::size_t index) {
    static constexpr Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    Complex phase = kIPow[a.num_y % 4];
    if (std::popcount(index & a.z_mask) & 1) phase = -phase;
    return phase;
}

}  // namespace detail

/// Normalized amplitude vector over up to 12 qubits. A zero-qubit register
/// (a single unit amplitude) marks a fully measured state.
class PureState {
  public:
    static constexpr std::size_t kMaxQubits = 12;

    PureState(std::size_t num_qubits, std::vector<Complex> amplitudes)
        : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
        if (num_qubits_ > kMaxQubits) {
            throw std::invalid_argument("PureState: at most 12 qubits supported, got " +
                                        std::to_string(num_qubits_));
        }
        if (amplitudes_.size() != (std::size_t{1} << num_qubits_)) {
            throw std::invalid_argument("PureState: amplitude count must be 2^num_qubits");
        }
        if (std::abs(norm_squared() - 1.0) > detail::kNormTolerance) {
            throw std::invalid_argument("PureState: amplitudes are not normalized");
        }
    }

    static PureState basis_state(std::size_t num_qubits, std::size_t index) {
        std::vector<Complex> amps(std::size_t{1} << num_qubits);
        amps.at(index) = 1.0;
        return PureState(num_qubits, std::move(amps));
    }

    std::size_t num_qubits() const noexcept { return num_qubits_; }
    std::size_t dimension() const noexcept { return amplitudes_.size(); }
    std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
    const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }

    double norm_squared() const noexcept {
        double total = 0;
        for (const auto& a : amplitudes_) total += std::norm(a);
        return total;
    }

  private:
    friend PureState apply_pauli_string(const PureState&, std::span<const Pauli>);

    std::size_t num_qubits_;
    std::vector<Complex> amplitudes_;
};

/// Density operator over up to 10 qubits, stored row-major.
class MixedState {
  public:
    static constexpr std::size_t kMaxQubits = 10;

    MixedState(std::size_t num_qubits, std::vector<Complex> matrix)
        : num_qubits_(num_qubits), matrix_(std::move(matrix)) {
        if (num_qubits_ < 1 || num_qubits_ > kMaxQubits) {
            throw std::invalid_argument("MixedState: qubit count must be in 1..10");
        }
        const std::size_t d = dimension();
        if (matrix_.size() != d * d) {
            throw std::invalid_argument("MixedState: matrix must be 2^n x 2^n");
        }
        Complex tr = 0;
        for (std::size_t i = 0; i < d; ++i) {
            tr += (*this)(i, i);
            for (std::size_t j = i + 1; j < d; ++j) {
                if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > detail::kNormTolerance) {
                    throw std::invalid_argument("MixedState: matrix is not Hermitian");
                }
            }
        }
        if (std::abs(tr - 1.0) > detail::kNormTolerance) {
            throw std::invalid_argument("MixedState: trace must be 1");
        }
    }

    static MixedState projector(const PureState& psi) {
        const std::size_t d = psi.dimension();
        std::vector<Complex> m(d * d);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) m[i * d + j] = psi[i] * std::conj(psi[j]);
        }
        return MixedState(psi.num_qubits(), std::move(m));
    }

    static MixedState maximally_mixed(std::size_t num_qubits) {
        const std::size_t d = std::size_t{1} << num_qubits;
        std::vector<Complex> m(d * d);
        for (std::size_t i = 0; i < d; ++i) m[i * d + i] = 1.0 / static_cast<double>(d);
        return MixedState(num_qubits, std::move(m));
    }

    std::size_t num_qubits() const noexcept { return num_qubits_; }
    std::size_t dimension() const noexcept { return std::size_t{1} << num_qubits_; }
    const Complex& operator()(std::size_t row, std::size_t col) const {
        return matrix_[row * dimension() + col];
    }
    std::span<const Complex> data() const noexcept { return matrix_; }

    /// Probability of computational basis outcome `index` for all qubits.
    double diagonal(std::size_t index) const { return (*this)(index, index).real(); }

  private:
    std::size_t num_qubits_;
    std::vector<Complex> matrix_;
};

/// (|0...0> + |1...1>) / sqrt(2)
inline PureState prepare_ghz(std::size_t n) {
    if (n < 1 || n > PureState::kMaxQubits) {
        throw std::invalid_argument("prepare_ghz: n must be in 1..12, got " + std::to_string(n));
    }
    std::vector<Complex> amps(std::size_t{1} << n);
    amps.front() = 1.0 / std::sqrt(2.0);
    amps.back() = 1.0 / std::sqrt(2.0);
    return PureState(n, std::move(amps));
}

/// Projects `qubit` onto the eigenvector of `basis` with outcome `bit` and
/// removes it. Returns the branch probability and the normalized remainder.
/// Throws std::domain_error if the branch has (numerically) zero probability.
inline std::pair<double, PureState> project_qubit(const PureState& state, std::size_t qubit,
                                                  PauliBasis basis, std::uint8_t bit) {
    const std::size_t n = state.num_qubits();
    if (qubit >= n) {
        throw std::out_of_range("project_qubit: qubit " + std::to_string(qubit) +
                                " out of range for " + std::to_string(n) + "-qubit state");
    }
    const std::size_t pos = detail::bit_position(n, qubit);
    const auto [c0, c1] = detail::eigenvector(basis, bit);
    std::vector<Complex> reduced(state.dimension() / 2);
    double prob = 0;
    for (std::size_t r = 0; r < reduced.size(); ++r) {
        const Complex a = std::conj(c0) * state[detail::insert_bit(r, pos, 0)] +
                          std::conj(c1) * state[detail::insert_bit(r, pos, 1)];
        reduced[r] = a;
        prob += std::norm(a);
    }
    if (prob < detail::kImpossibleBranch) {
        throw std::domain_error("project_qubit: outcome has zero probability");
    }
    const double scale = 1.0 / std::sqrt(prob);
    for (auto& a : reduced) a *= scale;
    return {prob, PureState(n - 1, std::move(reduced))};
}

/// Probability that measuring `qubit` in `basis` yields bit 0.
inline double outcome_zero_probability(const PureState& state, std::size_t qubit, PauliBasis basis) {
    const std::size_t n = state.num_qubits();
    if (qubit >= n) throw std::out_of_range("measure_qubit: qubit index out of range");
    const std::size_t pos = detail::bit_position(n, qubit);
    const auto [c0, c1] = detail::eigenvector(basis, 0);
    double p0 = 0;
    for (std::size_t r = 0; r < state.dimension() / 2; ++r) {
        p0 += std::norm(std::conj(c0) * state[detail::insert_bit(r, pos, 0)] +
                        std::conj(c1) * state[detail::insert_bit(r, pos, 1)]);
    }
    return p0;
}

/// Born-rule measurement; the measured qubit is removed and the remaining
/// qubits keep their relative order.
inline std::pair<MeasurementResult, PureState> measure_qubit(const PureState& state, std::size_t qubit,
                                                             PauliBasis basis, Rng& rng) {
    const double p0 = outcome_zero_probability(state, qubit, basis);
    const std::uint8_t bit = rng.uniform() < p0 ? 0 : 1;
    auto [prob, reduced] = project_qubit(state, qubit, basis, bit);
    return {MeasurementResult{bit}, std::move(reduced)};
}

inline PureState apply_pauli_string(const PureState& state, std::span<const Pauli> paulis) {
    if (paulis.size() != state.num_qubits()) {
        throw std::invalid_argument("apply_pauli_string: one Pauli per qubit required");
    }
    const auto action = detail::pauli_action(paulis);
    PureState out = state;
    for (std::size_t i = 0; i < state.dimension(); ++i) {
        out.amplitudes_[i ^ action.flip_mask] = detail::pauli_phase(action, i) * state[i];
    }
    return out;
}

namespace detail {
inline PureState apply_single(const PureState& state, std::size_t qubit, Pauli p, const char* name) {
    if (qubit >= state.num_qubits()) {
        throw std::out_of_range(std::string(name) + ": qubit index out of range");
    }
    std::vector<Pauli> paulis(state.num_qubits(), Pauli::I);
    paulis[qubit] = p;
    return apply_pauli_string(state, paulis);
}
}  // namespace detail

inline PureState apply_pauli_z(const PureState& state, std::size_t qubit) {
    return detail::apply_single(state, qubit, Pauli::Z, "apply_pauli_z");
}

inline PureState apply_pauli_x(const PureState& state, std::size_t qubit) {
    return detail::apply_single(state, qubit, Pauli::X, "apply_pauli_x");
}

/// <psi|P|psi> for a Pauli string with one entry per qubit.
inline double stabilizer_expectation(const PureState& state, std::span<const Pauli> paulis) {
    if (paulis.size() != state.num_qubits()) {
        throw std::invalid_argument("stabilizer_expectation: Pauli string length " +
                                    std::to_string(paulis.size()) + " does not match " +
                                    std::to_string(state.num_qubits()) + " qubits");
    }
    const auto action = detail::pauli_action(paulis);
    Complex total = 0;
    for (std::size_t i = 0; i < state.dimension(); ++i) {
        total += std::conj(state[i ^ action.flip_mask]) * detail::pauli_phase(action, i) * state[i];
    }
    return total.real();
}

/// tr(rho P)
inline double stabilizer_expectation(const MixedState& rho, std::span<const Pauli> paulis) {
    if (paulis.size() != rho.num_qubits()) {
        throw std::invalid_argument("stabilizer_expectation: Pauli string length does not match");
    }
    const auto action = detail::pauli_action(paulis);
    Complex total = 0;
    for (std::size_t i = 0; i < rho.dimension(); ++i) {
        total += rho(i, i ^ action.flip_mask) * detail::pauli_phase(action, i);
    }
    return total.real();
}

/// p_mix |psi><psi| + (1 - p_mix) I / 2^n
inline MixedState depolarize_global(const PureState& state, double p_mix) {
    if (!(p_mix >= 0.0 && p_mix <= 1.0)) {
        throw std::domain_error("depolarize_global: p_mix must lie in [0, 1]");
    }
    if (state.num_qubits() > MixedState::kMaxQubits) {
        throw std::invalid_argument("depolarize_global: at most 10 qubits for a density matrix");
    }
    const std::size_t d = state.dimension();
    const double floor = (1.0 - p_mix) / static_cast<double>(d);
    std::vector<Complex> m(d * d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) m[i * d + j] = p_mix * state[i] * std::conj(state[j]);
        m[i * d + i] += floor;
    }
    return MixedState(state.num_qubits(), std::move(m));
}

/// <psi|rho|psi>
inline double fidelity(const MixedState& rho, const PureState& reference) {
    if (rho.num_qubits() != reference.num_qubits()) {
        throw std::invalid_argument("fidelity: qubit counts differ");
    }
    const std::size_t d = rho.dimension();
    Complex total = 0;
    for (std::size_t i = 0; i < d; ++i) {
        Complex row = 0;
        for (std::size_t j = 0; j < d; ++j) row += rho(i, j) * reference[j];
        total += std::conj(reference[i]) * row;
    }
    return total.real();
}

/// |<a|b>|^2
inline double fidelity(const PureState& a, const PureState& b) {
    if (a.num_qubits() != b.num_qubits()) throw std::invalid_argument("fidelity: qubit counts differ");
    Complex overlap = 0;
    for (std::size_t i = 0; i < a.dimension(); ++i) overlap += std::conj(a[i]) * b[i];
    return std::norm(overlap);
}

/// Pure-state unraveling of depolarize_global: returns `reference` with
/// probability p_mix, otherwise `reference` with a uniformly random Pauli
/// string applied. Averaging P rho P over all 4^n strings gives I / 2^n.
inline PureState sample_noisy_state(const PureState& reference, double p_mix, Rng& rng) {
    if (!(p_mix >= 0.0 && p_mix <= 1.0)) {
        throw std::domain_error("sample_noisy_state: p_mix must lie in [0, 1]");
    }
    if (p_mix == 1.0 || rng.uniform() < p_mix) return reference;
    std::vector<Pauli> paulis(reference.num_qubits());
    for (auto& p : paulis) p = static_cast<Pauli>(rng.below(4));
    return apply_pauli_string(reference, paulis);
}

}  // namespace acka
