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
 * Photon-number detection: projecting states onto measurement outcomes,
 * outcome probabilities, conditional states on the undetected modes, and
 * per-term phase extraction.
 */

#ifndef HERALDSIM_HERALDING_HPP
#define HERALDSIM_HERALDING_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "heraldsim/errors.hpp"
#include "heraldsim/fock.hpp"

namespace heraldsim {

/// What the detectors are asked to see.
///
/// `exact` pins the photon count of individual modes. `aggregate` asks for
/// a total of `total` photons distributed arbitrarily over `modes`; every
/// concrete distribution becomes its own detection instance. The two mode
/// sets must be disjoint; modes mentioned in neither are undetected and
/// survive into the conditional state.
struct DetectionPattern {
    struct Aggregate {
        std::vector<int> modes;
        int total = 0;
    };

    std::map<int, int> exact;
    std::optional<Aggregate> aggregate;

    void validate(int mode_count) const {
        for (const auto& [mode, count] : exact) {
            if (mode < 0 || mode >= mode_count) {
                throw InvalidArgument("detection pattern: exact mode out of range");
            }
            if (count < 0) throw InvalidArgument("detection pattern: negative count");
        }
        if (aggregate) {
            if (aggregate->total < 0) {
                throw InvalidArgument("detection pattern: negative aggregate total");
            }
            std::set<int> seen;
            for (int mode : aggregate->modes) {
                if (mode < 0 || mode >= mode_count) {
                    throw InvalidArgument("detection pattern: aggregate mode out of range");
                }
                if (!seen.insert(mode).second) {
                    throw InvalidArgument("detection pattern: duplicate aggregate mode");
                }
                if (exact.count(mode)) {
                    throw InvalidArgument(
                        "detection pattern: aggregate and exact mode sets overlap");
                }
            }
        }
    }

    /// All constrained modes, ascending.
    std::vector<int> detected_modes() const {
        std::set<int> modes;
        for (const auto& [mode, count] : exact) modes.insert(mode);
        if (aggregate) modes.insert(aggregate->modes.begin(), aggregate->modes.end());
        return {modes.begin(), modes.end()};
    }
};

/// One concrete detection event: the per-mode counts that fired, its
/// probability, the normalized state left on the undetected modes, and the
/// per-term phases of that state (canonical term order, first term gauged
/// to 0). The detected modes are removed from the conditional state's mode
/// space in ascending index order.
struct HeraldOutcome {
    std::map<int, int> pattern_instance;
    double probability = 0.0;
    StateVector conditional_state{1};
    std::vector<double> phases;
};

namespace detail {

inline std::vector<double> gauge_phases(const StateVector& state) {
    std::vector<double> phases;
    const auto terms = state.sorted_terms();
    phases.reserve(terms.size());
    double gauge = 0.0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const double arg = std::arg(terms[i].second);
        if (i == 0) gauge = arg;
        double rel = arg - gauge;
        while (rel > std::numbers::pi) rel -= 2.0 * std::numbers::pi;
        while (rel <= -std::numbers::pi) rel += 2.0 * std::numbers::pi;
        phases.push_back(rel);
    }
    return phases;
}

}  // namespace detail

/// Projects `state` onto every detection instance compatible with
/// `pattern`. Returns one outcome per instance with nonzero probability,
/// ordered lexicographically by the detected counts. An empty pattern
/// yields a single outcome of probability 1 with the state unchanged.
inline std::vector<HeraldOutcome> project(const StateVector& state,
                                          const DetectionPattern& pattern) {
    pattern.validate(state.mode_count());
    const std::vector<int> detected = pattern.detected_modes();

    if (detected.empty()) {
        HeraldOutcome outcome;
        outcome.pattern_instance = {};
        outcome.probability = state.norm() * state.norm();
        outcome.conditional_state = state.normalized();
        outcome.phases = detail::gauge_phases(outcome.conditional_state);
        return {std::move(outcome)};
    }

    std::vector<int> kept;
    kept.reserve(static_cast<std::size_t>(state.mode_count()) - detected.size());
    for (int m = 0; m < state.mode_count(); ++m) {
        if (!std::binary_search(detected.begin(), detected.end(), m)) kept.push_back(m);
    }
    // Group surviving terms by their restriction to the detected modes.
    std::map<std::vector<int>, StateVector> groups;
    for (const auto& [basis, amp] : state.terms()) {
        bool ok = true;
        for (const auto& [mode, count] : pattern.exact) {
            if (basis.occupation(mode) != count) { ok = false; break; }
        }
        if (ok && pattern.aggregate) {
            int sum = 0;
            for (int mode : pattern.aggregate->modes) sum += basis.occupation(mode);
            ok = sum == pattern.aggregate->total;
        }
        if (!ok) continue;
        std::vector<int> instance;
        instance.reserve(detected.size());
        for (int mode : detected) instance.push_back(basis.occupation(mode));
        auto it = groups.find(instance);
        if (it == groups.end()) {
            // When every mode is detected the conditional lives in a
            // zero-mode space; represent it as a one-mode vacuum stub.
            it = groups.emplace(std::move(instance),
                                StateVector(std::max<int>(1, static_cast<int>(kept.size()))))
                     .first;
        }
        if (kept.empty()) {
            it->second.accumulate(FockState::zero(1), amp);
        } else {
            it->second.accumulate(basis.restricted_to(kept), amp);
        }
    }

    std::vector<HeraldOutcome> outcomes;
    outcomes.reserve(groups.size());
    for (auto& [instance, conditional] : groups) {
        const double p = conditional.norm() * conditional.norm();
        if (p <= 0.0) continue;
        HeraldOutcome outcome;
        for (std::size_t i = 0; i < detected.size(); ++i) {
            outcome.pattern_instance[detected[i]] = instance[i];
        }
        outcome.probability = p;
        outcome.conditional_state = conditional.normalized();
        outcome.phases = detail::gauge_phases(outcome.conditional_state);
        outcomes.push_back(std::move(outcome));
    }
    return outcomes;
}

/// Total probability of the pattern: sum over its detection instances.
inline double herald_probability(const StateVector& state, const DetectionPattern& pattern) {
    double total = 0.0;
    for (const auto& outcome : project(state, pattern)) total += outcome.probability;
    return total;
}

/// Relative phases of the conditional state against a caller-supplied
/// canonical term order. The state's support must consist of exactly the
/// expected terms; otherwise throws SupportMismatch naming the first
/// unexpected (or missing) term. Returns one phase per term after the
/// first, so a single-term state yields an empty vector.
inline std::vector<double> extract_phases(const HeraldOutcome& outcome,
                                          const std::vector<FockState>& expected_support) {
    const StateVector& state = outcome.conditional_state;
    for (const auto& [basis, amp] : state.terms()) {
        if (std::find(expected_support.begin(), expected_support.end(), basis) ==
            expected_support.end()) {
            throw SupportMismatch("conditional state has an unexpected Fock term",
                                  basis.to_string());
        }
    }
    std::vector<double> phases;
    double gauge = 0.0;
    for (std::size_t i = 0; i < expected_support.size(); ++i) {
        const Amplitude amp = state.amplitude(expected_support[i]);
        if (std::abs(amp) < kPruneThreshold) {
            throw SupportMismatch("conditional state is missing an expected Fock term",
                                  expected_support[i].to_string());
        }
        const double arg = std::arg(amp);
        if (i == 0) {
            gauge = arg;
            continue;
        }
        double rel = arg - gauge;
        while (rel > std::numbers::pi) rel -= 2.0 * std::numbers::pi;
        while (rel <= -std::numbers::pi) rel += 2.0 * std::numbers::pi;
        phases.push_back(rel);
    }
    return phases;
}

/// True iff all term magnitudes of the conditional state agree within tol.
inline bool equal_weights_check(const HeraldOutcome& outcome, double tol) {
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (const auto& [basis, amp] : outcome.conditional_state.terms()) {
        const double mag = std::abs(amp);
        if (first) {
            lo = hi = mag;
            first = false;
        } else {
            lo = std::min(lo, mag);
            hi = std::max(hi, mag);
        }
    }
    return hi - lo <= tol;
}

}  // namespace heraldsim

#endif  // HERALDSIM_HERALDING_HPP
