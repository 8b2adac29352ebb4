/**
 * Copyright 2026 The heraldsim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "heraldsim/evolution.hpp"
#include "heraldsim/heralding.hpp"

using namespace heraldsim;

namespace {

StateVector tritter_output() { return apply(dft_unitary(3), product_input({1, 1, 1})); }
StateVector quitter_output() { return apply(dft_unitary(4), product_input({1, 1, 1, 1})); }

DetectionPattern exact_pattern(std::map<int, int> counts) {
    DetectionPattern p;
    p.exact = std::move(counts);
    return p;
}

DetectionPattern aggregate_pattern(std::vector<int> modes, int total) {
    DetectionPattern p;
    p.aggregate = DetectionPattern::Aggregate{std::move(modes), total};
    return p;
}

}  // namespace

TEST_CASE("single photon in the first tritter port heralds a photon pair") {
    const auto outcomes = project(tritter_output(), exact_pattern({{0, 1}}));
    REQUIRE(outcomes.size() == 1);
    REQUIRE(outcomes[0].probability == Catch::Approx(1.0 / 3.0).margin(1e-9));
    REQUIRE(outcomes[0].conditional_state.term_count() == 1);
    REQUIRE(std::abs(std::abs(outcomes[0].conditional_state.amplitude(
                         FockState(std::vector<int>{1, 1}))) -
                     1.0) < 1e-9);
}

TEST_CASE("three photons in the first tritter port herald vacuum") {
    const auto outcomes = project(tritter_output(), exact_pattern({{0, 3}}));
    REQUIRE(outcomes.size() == 1);
    REQUIRE(outcomes[0].probability == Catch::Approx(2.0 / 9.0).margin(1e-9));
    REQUIRE(outcomes[0].conditional_state.term_count() == 1);
    REQUIRE(std::abs(std::abs(outcomes[0].conditional_state.amplitude(FockState::zero(2))) -
                     1.0) < 1e-9);
}

TEST_CASE("single photon in the first quitter port heralds the two-branch pair state") {
    const auto outcomes = project(quitter_output(), exact_pattern({{0, 1}}));
    REQUIRE(outcomes.size() == 1);
    REQUIRE(outcomes[0].probability == Catch::Approx(1.0 / 4.0).margin(1e-9));
    const StateVector& cond = outcomes[0].conditional_state;
    REQUIRE(cond.term_count() == 2);
    const double w = 1.0 / std::sqrt(2.0);
    REQUIRE(std::abs(std::abs(cond.amplitude(FockState(std::vector<int>{2, 1, 0}))) - w) <
            1e-9);
    REQUIRE(std::abs(std::abs(cond.amplitude(FockState(std::vector<int>{0, 1, 2}))) - w) <
            1e-9);
}

TEST_CASE("herald probability of four photons in the first quitter port") {
    REQUIRE(herald_probability(quitter_output(), exact_pattern({{0, 4}})) ==
            Catch::Approx(3.0 / 32.0).margin(1e-9));
    REQUIRE(herald_probability(vacuum(2), exact_pattern({{0, 1}})) == 0.0);
}

TEST_CASE("empty pattern returns the state unchanged with probability one") {
    const StateVector state = tritter_output();
    const auto outcomes = project(state, DetectionPattern{});
    REQUIRE(outcomes.size() == 1);
    REQUIRE(outcomes[0].probability == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(outcomes[0].pattern_instance.empty());
    REQUIRE(outcomes[0].conditional_state.term_count() == state.term_count());
}

TEST_CASE("aggregate instances are enumerated deterministically and completely") {
    const auto outcomes = project(tritter_output(), aggregate_pattern({0, 1, 2}, 3));
    // every supported term is its own instance; order is lexicographic
    REQUIRE(outcomes.size() == 4);
    double total = 0.0;
    std::vector<std::vector<int>> instances;
    for (const auto& outcome : outcomes) {
        total += outcome.probability;
        std::vector<int> counts;
        for (const auto& [mode, count] : outcome.pattern_instance) counts.push_back(count);
        instances.push_back(counts);
    }
    REQUIRE(total == Catch::Approx(1.0).margin(1e-9));
    REQUIRE(std::is_sorted(instances.begin(), instances.end()));
}

TEST_CASE("detection completeness over all photon-count partitions") {
    std::mt19937 rng(808);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd g(4, 4);
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) g(r, c) = Amplitude{gauss(rng), gauss(rng)};
    }
    const Unitary u = make_unitary(Eigen::HouseholderQR<Eigen::MatrixXcd>(g).householderQ(),
                                   Provenance::Custom, "random");
    const StateVector out = apply(u, product_input({2, 0, 1, 1}));
    REQUIRE(herald_probability(out, aggregate_pattern({0, 1, 2, 3}, 4)) ==
            Catch::Approx(1.0).margin(1e-9));
    // partial aggregates partition the probability by the photon split
    double split_total = 0.0;
    for (int left = 0; left <= 4; ++left) {
        split_total += herald_probability(out, aggregate_pattern({0, 1}, left));
    }
    REQUIRE(split_total == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("conditional states are normalized") {
    const auto outcomes = project(quitter_output(), aggregate_pattern({0, 1}, 2));
    REQUIRE(!outcomes.empty());
    for (const auto& outcome : outcomes) {
        REQUIRE(std::abs(outcome.conditional_state.norm() - 1.0) < 1e-9);
    }
}

TEST_CASE("pattern validation") {
    const StateVector state = tritter_output();
    DetectionPattern overlap;
    overlap.exact = {{0, 1}};
    overlap.aggregate = DetectionPattern::Aggregate{{0, 1}, 2};
    REQUIRE_THROWS_AS(project(state, overlap), InvalidArgument);
    REQUIRE_THROWS_AS(project(state, exact_pattern({{5, 1}})), InvalidArgument);
    DetectionPattern dup;
    dup.aggregate = DetectionPattern::Aggregate{{1, 1}, 2};
    REQUIRE_THROWS_AS(project(state, dup), InvalidArgument);
}

TEST_CASE("phases are gauged to the first canonical term") {
    StateVector s(2);
    s.accumulate(FockState(std::vector<int>{0, 1}), Amplitude{1.0 / std::sqrt(2.0), 0.0});
    s.accumulate(FockState(std::vector<int>{1, 0}), Amplitude{0.0, -1.0 / std::sqrt(2.0)});
    const auto outcomes = project(s, DetectionPattern{});
    REQUIRE(outcomes[0].phases.size() == 2);
    REQUIRE(outcomes[0].phases[0] == Catch::Approx(0.0));
    REQUIRE(outcomes[0].phases[1] == Catch::Approx(-std::numbers::pi / 2.0).margin(1e-12));
}

TEST_CASE("extract_phases needs the expected support") {
    const auto outcomes = project(quitter_output(), exact_pattern({{0, 1}}));
    const std::vector<FockState> expected = {FockState(std::vector<int>{2, 1, 0}),
                                             FockState(std::vector<int>{0, 1, 2})};
    const auto phases = extract_phases(outcomes[0], expected);
    REQUIRE(phases.size() == 1);
    REQUIRE(std::abs(phases[0]) < 1e-9);  // both branches carry the same sign

    const std::vector<FockState> wrong = {FockState(std::vector<int>{2, 1, 0}),
                                          FockState(std::vector<int>{1, 1, 1})};
    try {
        extract_phases(outcomes[0], wrong);
        FAIL("expected SupportMismatch");
    } catch (const SupportMismatch& e) {
        REQUIRE(e.offending_term() == FockState(std::vector<int>{0, 1, 2}).to_string());
    }

    // single-term state: no relative phases
    const auto vacuum_outcome = project(tritter_output(), exact_pattern({{0, 3}}));
    REQUIRE(extract_phases(vacuum_outcome[0], {FockState::zero(2)}).empty());
}

TEST_CASE("equal weights check") {
    HeraldOutcome outcome;
    StateVector lopsided(1);
    lopsided.accumulate(FockState(std::vector<int>{0}), Amplitude{0.9, 0.0});
    lopsided.accumulate(FockState(std::vector<int>{1}), Amplitude{0.1, 0.0});
    outcome.conditional_state = lopsided;
    REQUIRE(!equal_weights_check(outcome, 1e-9));
    outcome.conditional_state = project(tritter_output(), exact_pattern({{0, 1}}))[0]
                                    .conditional_state;
    REQUIRE(equal_weights_check(outcome, 1e-9));
}

TEST_CASE("rotated-basis detection heralds the two-photon entangled pair") {
    // one photon of each internal label alternating over four ports
    const ModeLayout layout(4, 2);
    const Unitary splitter = lift_spatial(dft_unitary(4), {0, 1, 2, 3}, layout);
    const StateVector out = apply(splitter, product_input({1, 0, 0, 1, 1, 0, 0, 1}));
    Eigen::Matrix2cd h = dft_unitary(2).entries;
    const StateVector rotated =
        apply(compose(internal_rotation(2, h, layout), internal_rotation(3, h, layout)), out);
    double total = 0.0;
    for (int plus2 : {0, 1}) {
        for (int plus3 : {0, 1}) {
            const auto outcomes = project(
                rotated, exact_pattern({{4, plus2}, {5, 1 - plus2}, {6, plus3}, {7, 1 - plus3}}));
            REQUIRE(outcomes.size() == 1);
            REQUIRE(outcomes[0].probability == Catch::Approx(1.0 / 32.0).margin(1e-9));
            const std::vector<FockState> support = {FockState(std::vector<int>{0, 1, 1, 0}),
                                                    FockState(std::vector<int>{1, 0, 0, 1})};
            const auto phases = extract_phases(outcomes[0], support);
            const double expected =
                ((plus2 + plus3) % 2 == 0) ? std::numbers::pi : 0.0;  // equal signs flip the pair
            REQUIRE(std::abs(std::abs(phases[0]) - expected) < 1e-9);
            total += outcomes[0].probability;
        }
    }
    REQUIRE(total == Catch::Approx(1.0 / 8.0).margin(1e-9));
}

TEST_CASE("cyclic input shifts leave detection probabilities unchanged") {
    // one port with m1 photons and the rest with m2, for every connector
    // family: (m1, m2, ports-per-dimension) = (1,3,1), (1,4,1), (0,2,2)
    struct Row { int single; int bulk; int ports_per_d; };
    for (const Row& row : {Row{1, 3, 1}, Row{1, 4, 1}, Row{0, 2, 2}}) {
        for (int d = 2; d <= 3; ++d) {
            const int ports = row.ports_per_d * d;
            std::vector<int> gamma(static_cast<std::size_t>(ports), row.bulk);
            gamma[0] = row.single;
            std::vector<int> shifted(static_cast<std::size_t>(ports));
            for (int m = 0; m < ports; ++m) {
                shifted[static_cast<std::size_t>((m + 1) % ports)] =
                    gamma[static_cast<std::size_t>(m)];
            }
            const Unitary u = dft_unitary(ports);
            const StateVector out_a = apply(u, product_input(gamma));
            const StateVector out_b = apply(u, product_input(shifted));
            for (const auto& [basis, amp] : out_a.terms()) {
                REQUIRE(std::abs(std::norm(amp) - std::norm(out_b.amplitude(basis))) < 1e-9);
            }
            REQUIRE(out_a.term_count() == out_b.term_count());
        }
    }
}
