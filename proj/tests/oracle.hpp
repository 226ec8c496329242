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

// Test-only brute-force oracle. Builds explicit Kronecker-product operators
// and never calls into the library's index arithmetic, so it can check the
// simulator independently.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace oracle {

using C = std::complex<double>;

struct Mat {
    std::size_t rows = 0, cols = 0;
    std::vector<C> a;

    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}
    C& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    C operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

inline Mat kron(const Mat& x, const Mat& y) {
    Mat out(x.rows * y.rows, x.cols * y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = 0; j < x.cols; ++j)
            for (std::size_t k = 0; k < y.rows; ++k)
                for (std::size_t l = 0; l < y.cols; ++l) out(i * y.rows + k, j * y.cols + l) = x(i, j) * y(k, l);
    return out;
}

inline Mat mul(const Mat& x, const Mat& y) {
    Mat out(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t k = 0; k < x.cols; ++k)
            for (std::size_t j = 0; j < y.cols; ++j) out(i, j) += x(i, k) * y(k, j);
    return out;
}

inline Mat column(const std::vector<C>& v) {
    Mat m(v.size(), 1);
    m.a = v;
    return m;
}

/// 'I', 'X', 'Y', 'Z' as 2x2 matrices.
inline Mat pauli(char p) {
    Mat m(2, 2);
    switch (p) {
        case 'I': m(0, 0) = 1; m(1, 1) = 1; break;
        case 'X': m(0, 1) = 1; m(1, 0) = 1; break;
        case 'Y': m(0, 1) = C(0, -1); m(1, 0) = C(0, 1); break;
        case 'Z': m(0, 0) = 1; m(1, 1) = -1; break;
    }
    return m;
}

/// Row vector <e| for the eigenvector of Pauli `p` with eigenvalue (-1)^bit,
/// found from the 2x2 matrix by (I + s P)/2 applied to a seed vector.
inline Mat eigen_bra(char p, int bit) {
    const double s = bit ? -1.0 : 1.0;
    const Mat P = pauli(p);
    // Projector (I + sP)/2; take its first nonzero column and normalize.
    Mat proj(2, 2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) proj(i, j) = 0.5 * ((i == j ? 1.0 : 0.0) + s * P(i, j));
    std::size_t col = std::abs(proj(0, 0)) + std::abs(proj(1, 0)) > 1e-12 ? 0 : 1;
    C v0 = proj(0, col), v1 = proj(1, col);
    const double norm = std::sqrt(std::norm(v0) + std::norm(v1));
    Mat bra(1, 2);
    bra(0, 0) = std::conj(v0 / norm);
    bra(0, 1) = std::conj(v1 / norm);
    return bra;
}

/// (|0..0> + (-1)^delta |1..1>)/sqrt(2)
inline std::vector<C> ghz(std::size_t n, int delta = 0) {
    std::vector<C> v(std::size_t{1} << n);
    v.front() = 1 / std::sqrt(2.0);
    v.back() = (delta ? -1.0 : 1.0) / std::sqrt(2.0);
    return v;
}

/// Pauli string as a full matrix; string index 0 is qubit 0 (most significant).
inline Mat pauli_string(const std::vector<char>& ps) {
    Mat m(1, 1);
    m(0, 0) = 1;
    for (char p : ps) m = kron(m, pauli(p));
    return m;
}

inline double expectation(const std::vector<C>& psi, const std::vector<char>& ps) {
    const Mat v = mul(pauli_string(ps), column(psi));
    C total = 0;
    for (std::size_t i = 0; i < psi.size(); ++i) total += std::conj(psi[i]) * v.a[i];
    return total.real();
}

/// Projects the qubits with bases[q] != 'I' onto the eigenvector selected by
/// bits[q] and traces them out. Returns the unnormalized remainder.
inline std::vector<C> project(const std::vector<C>& psi, const std::vector<char>& bases, const std::vector<int>& bits) {
    Mat op(1, 1);
    op(0, 0) = 1;
    for (std::size_t q = 0; q < bases.size(); ++q) op = kron(op, bases[q] == 'I' ? pauli('I') : eigen_bra(bases[q], bits[q]));
    return mul(op, column(psi)).a;
}

inline double norm2(const std::vector<C>& v) {
    double t = 0;
    for (auto& x : v) t += std::norm(x);
    return t;
}

inline double overlap2(const std::vector<C>& a, const std::vector<C>& b) {
    C t = 0;
    for (std::size_t i = 0; i < a.size(); ++i) t += std::conj(a[i]) * b[i];
    return std::norm(t) / (norm2(a) * norm2(b));
}

}  // namespace oracle
