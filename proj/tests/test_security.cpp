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

#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include "acka/harness.hpp"
#include "acka/security.hpp"

using namespace acka;
using Catch::Matchers::WithinAbs;

TEST_CASE("effective_D", "[security]") {
    CHECK(effective_D(500, 9500) == 20.0);
    CHECK(effective_D(1, 0) == 1.0);
    CHECK_THROWS_AS(effective_D(0, 10), std::invalid_argument);

    CHECK_FALSE(build_report({1, 1, 0, 1.0, std::nullopt}).degenerate_D);
    SecurityInputs degenerate{2, 1, 0, 1.0, std::nullopt};
    CHECK(build_report(degenerate).degenerate_D);
    degenerate.num_verification = 0;
    CHECK_THROWS(build_report(degenerate));
}

TEST_CASE("effective_D of a simulated D=25 run is within the binomial band", "[security][montecarlo]") {
    auto cfg = preset_config('A', 1.0, 100000, 2024, 25);
    const auto counts = run_protocol(cfg).transcript.counts();
    const double q = 1.0 / 25;
    // D_eff = L/K; delta method on K ~ Bin(L, 1/D).
    const double sigma = 25.0 * 25.0 * std::sqrt(q * (1 - q) / 100000.0);
    CHECK(std::abs(effective_D(counts.num_keygen, counts.num_verification) - 25.0) <= 4 * sigma);
}

TEST_CASE("failure_rate", "[security]") {
    CHECK(failure_rate(0, 1000) == 0.0);
    CHECK(failure_rate(1000, 1000) == 1.0);
    CHECK_THAT(failure_rate(107, 1000), WithinAbs(0.107, 1e-15));
    CHECK_THROWS_AS(failure_rate(0, 0), std::invalid_argument);
    CHECK_THROWS_AS(failure_rate(2, 1), std::invalid_argument);
}

TEST_CASE("guessing probabilities", "[security]") {
    CHECK_THAT(guess_prob_no_fail(25), WithinAbs(0.04, 1e-15));
    CHECK_THAT(guess_prob_no_fail(20), WithinAbs(0.05, 1e-15));
    CHECK_THAT(guess_prob_no_fail(32), WithinAbs(0.03125, 1e-15));

    CHECK_THAT(guess_prob_worst(25, 0.107), WithinAbs(0.14272, 1e-12));
    CHECK_THAT(guess_prob_worst(25, 0.0), WithinAbs(0.04, 1e-15));
    CHECK(guess_prob_worst(25, 1.0) == 1.0);
    CHECK_THROWS(guess_prob_worst(25, 1.5));
}

TEST_CASE("fidelity floor and corrected failure rate", "[security]") {
    CHECK(fidelity_failure_floor(1.0) == 0.0);
    CHECK_THAT(fidelity_failure_floor(0.85), WithinAbs(0.07805, 1e-5));
    CHECK_THAT(fidelity_failure_floor(0.25), WithinAbs(0.5, 1e-15));

    CHECK_THAT(corrected_eta(0.107, 0.85), WithinAbs(0.0290, 1e-4));
    CHECK(corrected_eta(0.05, 0.85) == 0.0);
    CHECK(corrected_eta(0.123, 1.0) == 0.123);
}

TEST_CASE("binary_entropy", "[security]") {
    CHECK(binary_entropy(0.5) == 1.0);
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK_THAT(binary_entropy(0.0679), WithinAbs(0.3582, 1e-3));
    for (int i = 0; i <= 1000; ++i) {
        const double p = i / 1000.0;
        CHECK_THAT(binary_entropy(p), WithinAbs(binary_entropy(1 - p), 1e-12));
    }
    CHECK_THROWS(binary_entropy(-0.01));
}

TEST_CASE("build_report", "[security]") {
    SECTION("D=25, eta=0.107, F=0.85") {
        // 400 KeyGen + 9600 Verification gives D_eff = 25; 1027/9600 ~ 0.107.
        const auto r = build_report({400, 9600, 1027, 0.85, std::nullopt});
        CHECK(r.D_eff == 25.0);
        CHECK_THAT(r.eta, WithinAbs(0.107, 1e-3));
        CHECK_THAT(r.p_no_fail, WithinAbs(0.04, 1e-12));
        CHECK_THAT(r.p_worst, WithinAbs(0.143, 1e-3));
        CHECK_THAT(r.p_corrected, WithinAbs(0.068, 1e-3));
        CHECK_THAT(r.h_worst, WithinAbs(binary_entropy(r.p_worst), 0));
        CHECK_FALSE(r.key_rate.has_value());
    }
    SECTION("key rate") {
        const auto r = build_report({500, 9500, 0, 1.0, 0.33});
        REQUIRE(r.key_rate.has_value());
        CHECK_THAT(*r.key_rate, WithinAbs(0.0165, 1e-12));
        CHECK_THAT(r.p_worst, WithinAbs(1.0 / 20, 1e-15));
    }
    SECTION("invalid counts") {
        CHECK_THROWS(build_report({10, 5, 6, 0.9, std::nullopt}));
        CHECK_THROWS(build_report({10, 5, 0, 0.0, std::nullopt}));
    }
    SECTION("determinism") {
        const SecurityInputs in{123, 4567, 89, 0.91, 0.2};
        CHECK(build_report(in) == build_report(in));
    }
}

TEST_CASE("report ordering invariants on a grid", "[security][property]") {
    for (int i = 0; i < 100; ++i) {
        for (int j = 0; j < 100; ++j) {
            const double eta = i / 99.0;
            const double F = 0.01 + 0.99 * j / 99.0;
            for (double D : {2.0, 20.0, 32.0}) {
                const double worst = guess_prob_worst(D, eta);
                const double corrected = guess_prob_worst(D, corrected_eta(eta, F));
                REQUIRE(corrected <= worst);
                REQUIRE(corrected_eta(eta, F) <= eta);
                REQUIRE(guess_prob_no_fail(D) <= worst);
            }
        }
    }
    // Nondecreasing in eta at fixed D.
    for (double D : {2.0, 10.0, 25.0, 100.0}) {
        double prev = 0;
        for (int i = 0; i <= 200; ++i) {
            const double p = guess_prob_worst(D, i / 200.0);
            REQUIRE(p >= prev);
            prev = p;
        }
    }
    // Nonincreasing in D at fixed eta: the derivative is (eta - 1)/D^2.
    for (double eta : {0.0, 0.107, 0.5, 1.0}) {
        double prev = 1.0;
        for (int D = 2; D <= 200; ++D) {
            const double p = guess_prob_worst(D, eta);
            REQUIRE(p <= prev + 1e-15);
            prev = p;
        }
    }
}

TEST_CASE("security CSV row matches the header", "[security]") {
    const auto r = build_report({400, 9600, 1027, 0.85, 0.25});
    const std::string row = security_csv_row(r);
    CHECK(std::count(row.begin(), row.end(), ',') == 9);
    CHECK(std::string(kSecurityCsvHeader) ==
          "D_eff,eta,r_f,eta_prime,p_no_fail,p_worst,p_corrected,h_worst,h_corrected,key_rate");
    CHECK(row.rfind("25.000000,0.106979,", 0) == 0);
}
