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

#include "heraldsim/fock.hpp"

using namespace heraldsim;

TEST_CASE("mode layout flattening is a bijection") {
    std::mt19937 rng(42);
    std::uniform_int_distribution<int> spatial_dist(1, 20);
    std::uniform_int_distribution<int> internal_dist(1, 5);
    for (int round = 0; round < 50; ++round) {
        const int spatial = spatial_dist(rng);
        const int internal = internal_dist(rng);
        const ModeLayout layout(spatial, internal);
        REQUIRE(layout.mode_count() == spatial * internal);
        std::vector<bool> hit(static_cast<std::size_t>(layout.mode_count()), false);
        for (int s = 0; s < spatial; ++s) {
            for (int i = 0; i < internal; ++i) {
                const int flat = layout.flatten({s, i});
                REQUIRE(flat >= 0);
                REQUIRE(flat < layout.mode_count());
                REQUIRE(!hit[static_cast<std::size_t>(flat)]);
                hit[static_cast<std::size_t>(flat)] = true;
                const ModeIndex back = layout.unflatten(flat);
                REQUIRE(back.spatial == s);
                REQUIRE(back.internal_label == i);
            }
        }
    }
}

TEST_CASE("mode layout rejects out-of-range indices") {
    const ModeLayout layout(3, 2);
    REQUIRE_THROWS_AS(layout.flatten({3, 0}), InvalidArgument);
    REQUIRE_THROWS_AS(layout.flatten({0, 2}), InvalidArgument);
    REQUIRE_THROWS_AS(layout.unflatten(6), InvalidArgument);
    REQUIRE_THROWS_AS(ModeLayout(0, 1), InvalidArgument);
}

TEST_CASE("vacuum is a single unit all-zero term") {
    const StateVector v3 = vacuum(3);
    REQUIRE(v3.term_count() == 1);
    REQUIRE(v3.amplitude(FockState::zero(3)) == Amplitude{1.0, 0.0});
    REQUIRE(norm(vacuum(8)) == Catch::Approx(1.0));
    REQUIRE(norm(vacuum(1)) == Catch::Approx(1.0));
    REQUIRE_THROWS_AS(vacuum(0), InvalidArgument);
}

TEST_CASE("product_input stores the normalized number state") {
    const StateVector s = product_input({1, 1, 1});
    REQUIRE(s.term_count() == 1);
    REQUIRE(s.amplitude(FockState(std::vector<int>{1, 1, 1})) == Amplitude{1.0, 0.0});

    const StateVector every_second = product_input({1, 0, 1, 0});
    REQUIRE(every_second.amplitude(FockState(std::vector<int>{1, 0, 1, 0})) ==
            Amplitude{1.0, 0.0});

    // all-zero occupations give the vacuum
    const StateVector zero = product_input({0, 0});
    REQUIRE(zero.term_count() == 1);
    REQUIRE(zero.amplitude(FockState::zero(2)) == Amplitude{1.0, 0.0});
}

TEST_CASE("norm of random product inputs is one") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> len_dist(1, 8);
    std::uniform_int_distribution<int> occ_dist(0, 4);
    for (int round = 0; round < 25; ++round) {
        std::vector<int> occ(static_cast<std::size_t>(len_dist(rng)));
        for (int& n : occ) n = occ_dist(rng);
        REQUIRE(norm(product_input(occ)) == Catch::Approx(1.0));
    }
}

TEST_CASE("norm sums squared magnitudes") {
    StateVector s(1);
    s.accumulate(FockState(std::vector<int>{1}), Amplitude{0.6, 0.0});
    s.accumulate(FockState(std::vector<int>{0}), Amplitude{0.0, 0.8});
    REQUIRE(norm(s) == Catch::Approx(1.0));
}

TEST_CASE("inner product basics") {
    const StateVector a = vacuum(2);
    const StateVector b = product_input({1, 0});
    REQUIRE(std::abs(inner_product(a, b)) == Catch::Approx(0.0));
    REQUIRE_THROWS_AS(inner_product(vacuum(2), vacuum(3)), InvalidArgument);
}

TEST_CASE("inner product is conjugate-symmetric and matches the squared norm") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::uniform_int_distribution<int> occ_dist(0, 3);
    for (int round = 0; round < 25; ++round) {
        StateVector x(3), y(3);
        for (int t = 0; t < 4; ++t) {
            std::vector<int> occ = {occ_dist(rng), occ_dist(rng), occ_dist(rng)};
            x.accumulate(FockState(occ), Amplitude{coeff(rng), coeff(rng)});
            occ = {occ_dist(rng), occ_dist(rng), occ_dist(rng)};
            y.accumulate(FockState(occ), Amplitude{coeff(rng), coeff(rng)});
        }
        const Amplitude xy = inner_product(x, y);
        const Amplitude yx = inner_product(y, x);
        REQUIRE(std::abs(xy - std::conj(yx)) < 1e-12);
        REQUIRE(std::abs(inner_product(x, x).real() - norm(x) * norm(x)) < 1e-12);
        REQUIRE(std::abs(inner_product(x, x).imag()) < 1e-12);
    }
}

TEST_CASE("accumulate merges and prune drops tiny terms") {
    StateVector s(2);
    const FockState f(std::vector<int>{1, 1});
    s.accumulate(f, Amplitude{0.5, 0.0});
    s.accumulate(f, Amplitude{0.25, 0.0});
    REQUIRE(s.term_count() == 1);
    REQUIRE(s.amplitude(f) == Amplitude{0.75, 0.0});
    s.accumulate(FockState(std::vector<int>{0, 2}), Amplitude{1e-13, 0.0});
    s.prune();
    REQUIRE(s.term_count() == 1);
}

TEST_CASE("canonical text serialization is sorted and stable") {
    StateVector s(3);
    s.accumulate(FockState(std::vector<int>{3, 0, 0}), Amplitude{0.5, 0.0});
    s.accumulate(FockState(std::vector<int>{0, 3, 0}), Amplitude{-0.5, 0.0});
    s.accumulate(FockState(std::vector<int>{1, 1, 1}), Amplitude{0.0, 0.5});
    const std::string text = to_canonical_text(s);
    const std::string expected =
        "|0,3,0\xE2\x9F\xA9 : -0.5,0\n"
        "|1,1,1\xE2\x9F\xA9 : 0,0.5\n"
        "|3,0,0\xE2\x9F\xA9 : 0.5,0\n";
    REQUIRE(text == expected);
    REQUIRE(to_canonical_text(s) == text);
}

TEST_CASE("tensor product concatenates occupations") {
    const StateVector joint = tensor_product(product_input({2}), product_input({0, 1}));
    REQUIRE(joint.mode_count() == 3);
    REQUIRE(joint.amplitude(FockState(std::vector<int>{2, 0, 1})) == Amplitude{1.0, 0.0});
}

TEST_CASE("normalized rejects the zero state") {
    StateVector s(1);
    REQUIRE_THROWS_AS(s.normalized(), InvalidArgument);
}

TEST_CASE("format_real uses 12 significant digits and folds negative zero") {
    REQUIRE(format_real(4.0 / 81.0) == "0.0493827160494");
    REQUIRE(format_real(-0.0) == "0");
    REQUIRE(format_real(0.25) == "0.25");
}
