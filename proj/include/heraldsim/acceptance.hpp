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

/**
 * End-to-end verification: every reference value the simulator must
 * reproduce, runnable both from the `verify` subcommand and from the
 * acceptance test binary. Each criterion is pinned at tolerance 1e-9
 * unless stated otherwise.
 *
 * The fault-injection knobs perturb the inputs of two checks (a splitter
 * matrix entry, the permanent oracle comparison) so the reporting pipeline
 * itself can be tested for honest failures.
 */

#ifndef HERALDSIM_ACCEPTANCE_HPP
#define HERALDSIM_ACCEPTANCE_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "heraldsim/analysis.hpp"
#include "heraldsim/evolution.hpp"
#include "heraldsim/heralding.hpp"
#include "heraldsim/schemes.hpp"

namespace heraldsim {

struct CriterionResult {
    int index = 0;
    std::string name;
    bool passed = false;
    std::string detail;
};

struct FaultInjection {
    bool perturb_dft = false;   // breaks the unitarity leg of the invariant suite
    bool break_oracle = false;  // breaks the permanent/expansion cross-check
};

namespace detail {

inline constexpr double kTol = 1e-9;

struct Check {
    bool ok = true;
    double worst = 0.0;
    std::ostringstream notes;

    void expect_near(double actual, double expected, const std::string& label,
                     double tol = kTol) {
        const double diff = std::abs(actual - expected);
        worst = std::max(worst, diff);
        if (diff > tol) {
            ok = false;
            notes << " [" << label << ": got " << format_real(actual) << ", want "
                  << format_real(expected) << "]";
        }
    }

    void expect_true(bool condition, const std::string& label) {
        if (!condition) {
            ok = false;
            notes << " [" << label << "]";
        }
    }

    CriterionResult finish(int index, const std::string& name) const {
        CriterionResult r;
        r.index = index;
        r.name = name;
        r.passed = ok;
        std::ostringstream os;
        os << "max deviation " << format_real(worst) << notes.str();
        r.detail = os.str();
        return r;
    }
};

inline void expect_state(Check& check, const StateVector& state,
                         const std::vector<std::pair<std::vector<int>, double>>& expected,
                         const std::string& label) {
    check.expect_true(state.term_count() == expected.size(),
                      label + ": term count " + std::to_string(state.term_count()) +
                          " != " + std::to_string(expected.size()));
    for (const auto& [occ, value] : expected) {
        const Amplitude amp = state.amplitude(FockState(occ));
        check.expect_near(amp.real(), value, label + " re " + FockState(occ).to_string());
        check.expect_near(amp.imag(), 0.0, label + " im " + FockState(occ).to_string());
    }
}

inline Unitary random_unitary(int dim, std::mt19937& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd g(dim, dim);
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) g(r, c) = Amplitude{gauss(rng), gauss(rng)};
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    return make_unitary(std::move(q), Provenance::Custom, "random(" + std::to_string(dim) + ")");
}

inline std::vector<FockState> all_fock_states(int modes, int photons) {
    std::vector<FockState> out;
    std::vector<int> occ(static_cast<std::size_t>(modes), 0);
    std::function<void(int, int)> rec = [&](int mode, int left) {
        if (mode == modes - 1) {
            occ[static_cast<std::size_t>(mode)] = left;
            out.emplace_back(occ);
            return;
        }
        for (int take = 0; take <= left; ++take) {
            occ[static_cast<std::size_t>(mode)] = take;
            rec(mode + 1, left - take);
        }
    };
    rec(0, photons);
    return out;
}

// --- the criteria -----------------------------------------------------

inline CriterionResult criterion_tritter_output() {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    const StateVector out = apply(dft_unitary(3), product_input({1, 1, 1}));
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    const double w = std::sqrt(2.0) / 3.0;
    expect_state(check, out,
                 {{{3, 0, 0}, w}, {{0, 3, 0}, w}, {{0, 0, 3}, w},
                  {{1, 1, 1}, -1.0 / std::sqrt(3.0)}},
                 "tritter");
    check.expect_true(ms < 1000.0, "runtime " + format_real(ms) + " ms >= 1 s");
    check.notes << " (runtime " << format_real(ms) << " ms)";
    return check.finish(1, "tritter-output");
}

inline CriterionResult criterion_quitter_outputs() {
    Check check;
    const Unitary u4 = dft_unitary(4);
    const double a = std::sqrt(3.0) / (4.0 * std::sqrt(2.0));
    const double b = 1.0 / (2.0 * std::sqrt(2.0));
    expect_state(check, apply(u4, product_input({1, 1, 1, 1})),
                 {{{4, 0, 0, 0}, a}, {{0, 4, 0, 0}, -a}, {{0, 0, 4, 0}, a}, {{0, 0, 0, 4}, -a},
                  {{1, 2, 1, 0}, b}, {{0, 1, 2, 1}, -b}, {{1, 0, 1, 2}, b}, {{2, 1, 0, 1}, -b},
                  {{0, 2, 0, 2}, 0.25}, {{2, 0, 2, 0}, -0.25}},
                 "uniform four-photon input");
    expect_state(check, apply(u4, product_input({1, 0, 1, 0})),
                 {{{2, 0, 0, 0}, b}, {{0, 2, 0, 0}, -b}, {{0, 0, 2, 0}, b}, {{0, 0, 0, 2}, -b},
                  {{1, 0, 1, 0}, 0.5}, {{0, 1, 0, 1}, -0.5}},
                 "photons in ports 0 and 2");
    expect_state(check, apply(u4, product_input({0, 1, 0, 1})),
                 {{{2, 0, 0, 0}, b}, {{0, 2, 0, 0}, b}, {{0, 0, 2, 0}, b}, {{0, 0, 0, 2}, b},
                  {{1, 0, 1, 0}, -0.5}, {{0, 1, 0, 1}, -0.5}},
                 "photons in ports 1 and 3");
    return check.finish(2, "quitter-outputs");
}

inline CriterionResult criterion_qubit_bell() {
    Check check;
    const SchemeResult result =
        build_and_run({SchemeKind::QubitBell4SMS, 2, 2, false, false});
    check.expect_near(result.total_probability, 1.0 / 8.0, "total");
    check.expect_true(result.outcomes.size() == 4, "expected 4 detection outcomes");
    const std::vector<FockState> support = {FockState(std::vector<int>{0, 1, 1, 0}),
                                            FockState(std::vector<int>{1, 0, 0, 1})};
    for (const auto& outcome : result.outcomes) {
        check.expect_near(outcome.probability, 1.0 / 32.0, "outcome probability");
        // plus-count over the rotated detector modes decides the sign:
        // (+,+) and (-,-) herald the antisymmetric branch pair, (+,-) and
        // (-,+) the symmetric one.
        const int plus_count =
            outcome.pattern_instance.at(4) + outcome.pattern_instance.at(6);
        const std::vector<double> phases = extract_phases(outcome, support);
        check.expect_true(phases.size() == 1, "one relative phase per outcome");
        const double expected_phase = (plus_count % 2 == 0) ? std::numbers::pi : 0.0;
        if (!phases.empty()) {
            check.expect_near(std::abs(phases[0]), expected_phase, "relative branch phase");
        }
    }
    return check.finish(3, "qubit-bell-heralding");
}

inline CriterionResult criterion_ghz_chains() {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    for (int n : {2, 4, 6, 8}) {
        const SchemeResult result = build_and_run({SchemeKind::QubitGHZChain, 2, n, false, false});
        check.expect_near(result.total_probability, std::pow(0.5, 2 * n - 1),
                          "even chain n=" + std::to_string(n));
        check.expect_true(verify_heralded_state(result).ok,
                          "chain n=" + std::to_string(n) + " state verification");
    }
    for (int n : {3, 5, 7}) {
        const SchemeResult result = build_and_run({SchemeKind::QubitGHZChain, 2, n, false, false});
        check.expect_near(result.total_probability, std::pow(0.5, 2 * n),
                          "odd chain n=" + std::to_string(n));
        check.expect_true(verify_heralded_state(result).ok,
                          "chain n=" + std::to_string(n) + " state verification");
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    check.expect_true(seconds < 60.0, "chains took " + format_real(seconds) + " s >= 60 s");
    check.notes << " (all chains in " << format_real(seconds) << " s)";
    return check.finish(4, "ghz-chains");
}

inline CriterionResult criterion_qudit_bell() {
    Check check;
    for (int d = 2; d <= 6; ++d) {
        const SchemeSpec spec{SchemeKind::QuditBell3SMS, d, 2, false, false};
        const SchemeResult result = build_and_run(spec);
        check.expect_near(result.total_probability, closed_form_probability(spec),
                          "d=" + std::to_string(d));
        check.expect_true(verify_heralded_state(result).ok,
                          "d=" + std::to_string(d) + " state verification");
    }
    check.expect_near(
        build_and_run({SchemeKind::QuditBell3SMS, 2, 2, false, false}).total_probability,
        4.0 / 27.0, "d=2 explicit");
    check.expect_near(
        build_and_run({SchemeKind::QuditBell3SMS, 3, 2, false, false}).total_probability,
        4.0 / 81.0, "d=3 explicit");
    return check.finish(5, "qudit-bell");
}

inline CriterionResult criterion_inverted_bell() {
    Check check;
    const SchemeResult inverted =
        build_and_run({SchemeKind::QuditBellInverted, 3, 2, false, false});
    check.expect_near(inverted.total_probability, 2.0 / 27.0, "inverted d=3");
    check.expect_true(verify_heralded_state(inverted).ok, "inverted d=3 state verification");
    const SchemeResult standard =
        build_and_run({SchemeKind::QuditBell3SMS, 3, 2, false, false});
    check.expect_near(standard.total_probability + inverted.total_probability, 10.0 / 81.0,
                      "combined d=3");
    const StateReport broken = verify_heralded_state(run_inverted_bell_diagnostic(4));
    check.expect_true(!broken.ok, "inverted heralding must fail the support check at d=4");
    return check.finish(6, "inverted-bell");
}

inline CriterionResult criterion_qudit_ghz() {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    for (int d = 2; d <= 4; ++d) {
        const SchemeSpec spec{SchemeKind::QuditGHZ4SMS, d, 2, false, false};
        const SchemeResult result = build_and_run(spec);
        check.expect_near(result.total_probability, closed_form_probability(spec),
                          "d=" + std::to_string(d));
        check.expect_true(verify_heralded_state(result).ok,
                          "d=" + std::to_string(d) + " state verification");
    }
    check.expect_near(
        build_and_run({SchemeKind::QuditGHZ4SMS, 2, 2, false, false}).total_probability,
        3.0 / 64.0, "d=2 explicit");
    check.expect_near(
        build_and_run({SchemeKind::QuditGHZ4SMS, 3, 2, false, false}).total_probability,
        27.0 / 4096.0, "d=3 explicit");
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    check.expect_true(seconds < 300.0, "GHZ runs took " + format_real(seconds) + " s >= 5 min");
    check.notes << " (all GHZ runs in " << format_real(seconds) << " s)";
    return check.finish(7, "qudit-ghz");
}

inline CriterionResult criterion_subtraction() {
    Check check;
    const auto [sub3, fired3] = subtract_photon(apply(dft_unitary(3), product_input({1, 1, 1})), 0);
    expect_state(check, sub3,
                 {{{2, 0, 0}, std::sqrt(2.0 / 3.0)}, {{0, 1, 1}, -1.0 / std::sqrt(3.0)}},
                 "subtracted three-port block");
    check.expect_near(fired3, 5.0 / 9.0, "three-port occupancy");

    const auto [sub4, fired4] = subtract_photon(apply(dft_unitary(4), product_input({1, 1, 1, 1})), 0);
    const double b = 1.0 / (2.0 * std::sqrt(2.0));
    expect_state(check, sub4,
                 {{{3, 0, 0, 0}, std::sqrt(3.0) / (2.0 * std::sqrt(2.0))},
                  {{1, 1, 0, 1}, -0.5},
                  {{0, 2, 1, 0}, b},
                  {{0, 0, 1, 2}, b},
                  {{1, 0, 2, 0}, -b}},
                 "subtracted four-port block");
    check.expect_near(fired4, 17.0 / 32.0, "four-port occupancy");

    for (int d = 2; d <= 6; ++d) {
        const SchemeSpec bell_sub{SchemeKind::QuditBell3SMSSub, d, 2, false, false};
        check.expect_near(build_and_run(bell_sub).total_probability,
                          closed_form_probability(bell_sub), "bell-sub d=" + std::to_string(d));
        const SchemeSpec inv_sub{SchemeKind::QuditBellInvertedSub, d, 2, false, false};
        check.expect_near(build_and_run(inv_sub).total_probability,
                          closed_form_probability(inv_sub), "inv-sub d=" + std::to_string(d));
    }
    for (int d = 3; d <= 6; ++d) {
        const double sum =
            build_and_run({SchemeKind::QuditBell3SMSSub, d, 2, false, false}).total_probability +
            build_and_run({SchemeKind::QuditBellInvertedSub, d, 2, false, false}).total_probability;
        check.expect_near(sum, sum_subtracted_bell_closed_form(d),
                          "sum-sub d=" + std::to_string(d));
        if (d == 3) check.expect_near(sum, 2.0 / 3.0, "sum-sub d=3 explicit");
    }
    for (int d = 2; d <= 4; ++d) {
        const SchemeSpec ghz_sub{SchemeKind::QuditGHZ4SMSSub, d, 2, false, false};
        check.expect_near(build_and_run(ghz_sub).total_probability,
                          closed_form_probability(ghz_sub), "ghz-sub d=" + std::to_string(d));
    }
    // One-shot curves: repeat-until-success values times occupancy^d.
    for (int d = 2; d <= 4; ++d) {
        const double repeat =
            build_and_run({SchemeKind::QuditBell3SMSSub, d, 2, false, false}).total_probability;
        const double one_shot =
            build_and_run({SchemeKind::QuditBell3SMSSub, d, 2, true, false}).total_probability;
        check.expect_near(one_shot, repeat * std::pow(5.0 / 9.0, d),
                          "bell-sub one-shot d=" + std::to_string(d));
    }
    for (int d = 2; d <= 3; ++d) {
        const double repeat =
            build_and_run({SchemeKind::QuditGHZ4SMSSub, d, 2, false, false}).total_probability;
        const double one_shot =
            build_and_run({SchemeKind::QuditGHZ4SMSSub, d, 2, true, false}).total_probability;
        check.expect_near(one_shot, repeat * std::pow(17.0 / 32.0, d),
                          "ghz-sub one-shot d=" + std::to_string(d));
    }
    return check.finish(8, "photon-subtraction");
}

inline CriterionResult criterion_bell_2sms() {
    Check check;
    for (int d = 2; d <= 6; ++d) {
        const SchemeSpec spec{SchemeKind::QuditBell2SMS, d, 2, false, false};
        const SchemeResult result = build_and_run(spec);
        check.expect_near(result.total_probability, closed_form_probability(spec),
                          "d=" + std::to_string(d));
        if (result.outcomes_enumerated) {
            const StateReport report = verify_heralded_state(result);
            check.expect_true(report.ok, "d=" + std::to_string(d) + " state verification");
            check.expect_true(report.expected_branches == 2 * d,
                              "d=" + std::to_string(d) + " branch count");
        }
    }
    check.expect_near(
        build_and_run({SchemeKind::QuditBell2SMS, 2, 2, false, false}).total_probability,
        1.0 / 4.0, "d=2 explicit");
    return check.finish(9, "bell-2sms");
}

inline CriterionResult criterion_cyclic_shift() {
    Check check;
    struct Row { int single; int bulk; int ports_per_d; };
    const std::vector<Row> rows = {{1, 3, 1}, {1, 4, 1}, {0, 2, 2}};
    for (const Row& row : rows) {
        for (int d = 2; d <= 4; ++d) {
            const int ports = row.ports_per_d * d;
            std::vector<int> gamma(static_cast<std::size_t>(ports), row.bulk);
            gamma[0] = row.single;
            std::vector<int> shifted(static_cast<std::size_t>(ports));
            for (int m = 0; m < ports; ++m) {
                shifted[static_cast<std::size_t>((m + 1) % ports)] = gamma[static_cast<std::size_t>(m)];
            }
            const Unitary u = dft_unitary(ports);
            const StateVector out_a = apply(u, product_input(gamma));
            const StateVector out_b = apply(u, product_input(shifted));
            double worst = 0.0;
            for (const auto& [basis, amp] : out_a.terms()) {
                worst = std::max(worst,
                                 std::abs(std::norm(amp) - std::norm(out_b.amplitude(basis))));
            }
            for (const auto& [basis, amp] : out_b.terms()) {
                worst = std::max(worst,
                                 std::abs(std::norm(amp) - std::norm(out_a.amplitude(basis))));
            }
            check.expect_near(worst, 0.0,
                              "row (" + std::to_string(row.single) + "," +
                                  std::to_string(row.bulk) + ") d=" + std::to_string(d));
        }
    }
    return check.finish(10, "cyclic-shift-invariance");
}

inline CriterionResult criterion_oracle_equivalence(bool break_oracle) {
    Check check;
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> dim_dist(2, 5);
    std::uniform_int_distribution<int> photon_dist(1, 4);
    for (int round = 0; round < 200; ++round) {
        const int dim = dim_dist(rng);
        const int photons = photon_dist(rng);
        std::vector<int> input(static_cast<std::size_t>(dim), 0);
        std::uniform_int_distribution<int> mode_dist(0, dim - 1);
        for (int p = 0; p < photons; ++p) input[static_cast<std::size_t>(mode_dist(rng))]++;
        const Unitary u = random_unitary(dim, rng);
        const StateVector out = apply(u, product_input(input));
        const FockState in_state(input);
        double worst = 0.0;
        for (const FockState& candidate : all_fock_states(dim, photons)) {
            Amplitude oracle = amplitude_permanent(u, in_state, candidate);
            if (break_oracle) oracle += Amplitude{1e-6, 0.0};
            worst = std::max(worst, std::abs(oracle - out.amplitude(candidate)));
        }
        check.expect_near(worst, 0.0, "round " + std::to_string(round));
        if (!check.ok) break;
    }
    return check.finish(11, "oracle-equivalence");
}

inline CriterionResult criterion_invariant_suite(bool perturb_dft) {
    Check check;
    // unitarity
    for (int n = 2; n <= 8; ++n) {
        Eigen::MatrixXcd m = dft_unitary(n).entries;
        if (perturb_dft && n == 4) m(0, 0) += 1e-6;
        check.expect_true(unitarity_defect(m) < kUnitarityTolerance,
                          "unitarity of " + std::to_string(n) + "-port splitter");
    }
    check.expect_true(
        unitarity_defect(embed(dft_unitary(3), {0, 3, 6}, 9).entries) < kUnitarityTolerance,
        "unitarity of embedded splitter");
    const ModeLayout layout(4, 2);
    check.expect_true(unitarity_defect(lift_spatial(dft_unitary(4), {0, 1, 2, 3}, layout).entries) <
                          kUnitarityTolerance,
                      "unitarity of lifted splitter");

    // norm preservation and photon-number conservation
    std::mt19937 rng(2718);
    std::uniform_int_distribution<int> dim_dist(2, 5);
    std::uniform_int_distribution<int> photon_dist(1, 4);
    for (int round = 0; round < 20; ++round) {
        const int dim = dim_dist(rng);
        const int photons = photon_dist(rng);
        std::vector<int> occ(static_cast<std::size_t>(dim), 0);
        std::uniform_int_distribution<int> mode_dist(0, dim - 1);
        for (int p = 0; p < photons; ++p) occ[static_cast<std::size_t>(mode_dist(rng))]++;
        const StateVector out = apply(random_unitary(dim, rng), product_input(occ));
        check.expect_near(out.norm(), 1.0, "norm preservation round " + std::to_string(round));
        for (const auto& [basis, amp] : out.terms()) {
            if (basis.total_photons() != photons) {
                check.expect_true(false, "photon-number conservation round " +
                                             std::to_string(round));
                break;
            }
        }
    }

    // detection completeness: probabilities over all outcomes sum to 1
    const StateVector tritter_out = apply(dft_unitary(3), product_input({1, 1, 1}));
    DetectionPattern everything;
    DetectionPattern::Aggregate aggregate;
    aggregate.modes = {0, 1, 2};
    aggregate.total = 3;
    everything.aggregate = aggregate;
    check.expect_near(herald_probability(tritter_out, everything), 1.0,
                      "detection completeness (three-port output)");
    const StateVector random_out = apply(random_unitary(4, rng), product_input({2, 1, 0, 1}));
    DetectionPattern everything4;
    DetectionPattern::Aggregate aggregate4;
    aggregate4.modes = {0, 1, 2, 3};
    aggregate4.total = 4;
    everything4.aggregate = aggregate4;
    check.expect_near(herald_probability(random_out, everything4), 1.0,
                      "detection completeness (random four-mode state)");
    return check.finish(12, "invariant-suite");
}

}  // namespace detail

/// Runs the acceptance criteria; one result per criterion, in order.
/// `only` restricts to the listed criterion indices (empty = all).
inline std::vector<CriterionResult> run_acceptance(const FaultInjection& faults = {},
                                                   const std::vector<int>& only = {}) {
    using Runner = std::function<CriterionResult()>;
    const std::vector<Runner> runners = {
        [] { return detail::criterion_tritter_output(); },
        [] { return detail::criterion_quitter_outputs(); },
        [] { return detail::criterion_qubit_bell(); },
        [] { return detail::criterion_ghz_chains(); },
        [] { return detail::criterion_qudit_bell(); },
        [] { return detail::criterion_inverted_bell(); },
        [] { return detail::criterion_qudit_ghz(); },
        [] { return detail::criterion_subtraction(); },
        [] { return detail::criterion_bell_2sms(); },
        [] { return detail::criterion_cyclic_shift(); },
        [&] { return detail::criterion_oracle_equivalence(faults.break_oracle); },
        [&] { return detail::criterion_invariant_suite(faults.perturb_dft); },
    };
    std::vector<CriterionResult> results;
    for (std::size_t i = 0; i < runners.size(); ++i) {
        const int index = static_cast<int>(i) + 1;
        if (!only.empty() && std::find(only.begin(), only.end(), index) == only.end()) {
            continue;
        }
        results.push_back(runners[i]());
    }
    return results;
}

}  // namespace heraldsim

#endif  // HERALDSIM_ACCEPTANCE_HPP
