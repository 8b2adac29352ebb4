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
 * Chains of 4-port splitter blocks connected by beam splitters, heralding
 * multi-photon GHZ states of two-level (internal-label) qubits.
 *
 * Block b occupies spatial modes 4b..4b+3, each carrying a two-level
 * internal label (0 and 1, the two orthogonal single-photon states). The
 * input loads internal label 0 into spatial ports 0 and 2 of every block
 * and label 1 into ports 1 and 3. Acceptance per block:
 *
 *   - first block: one photon, detected in the rotated (+/-) internal
 *     basis, in its spatial port 2,
 *   - between neighbours: a beam splitter couples port 3 of one block to
 *     port 0 of the next; accepted events have exactly two photons there,
 *     one of each internal label, in any spatial distribution,
 *   - last block, even chain: one rotated-basis photon in spatial port 1,
 *   - last block, odd chain: two rotated-basis photons across spatial
 *     ports 1 and 3 (any distribution), shrinking that block to a single
 *     qubit. `mirror` moves this termination to the first block (ports 0
 *     and 2 detected, port 1 carrying the qubit).
 *
 * The walk proceeds block by block, branching on every accepted detection
 * instance, so each completed path is one herald outcome with its exact
 * conditional state.
 */

#ifndef HERALDSIM_SCHEMES_CHAIN_HPP
#define HERALDSIM_SCHEMES_CHAIN_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "heraldsim/evolution.hpp"
#include "heraldsim/fock.hpp"
#include "heraldsim/heralding.hpp"
#include "heraldsim/unitary.hpp"

namespace heraldsim {
namespace detail {

struct ChainModeTag {
    int block = 0;
    int spatial = 0;          // port within the block, 0..3
    int internal_label = 0;   // 0/1; after a rotation these mean +/-
    int global_flat() const { return (block * 4 + spatial) * 2 + internal_label; }
};

struct ChainPath {
    StateVector state{1};
    std::vector<ChainModeTag> tags;
    double probability = 1.0;
    std::map<int, int> instance;  // detected counts keyed by global flat mode
};

inline std::vector<int> chain_find_modes(const std::vector<ChainModeTag>& tags, int block,
                                         std::initializer_list<int> spatials) {
    std::vector<int> idx;
    for (int s : spatials) {
        for (std::size_t i = 0; i < tags.size(); ++i) {
            if (tags[i].block == block && tags[i].spatial == s) idx.push_back(static_cast<int>(i));
        }
    }
    return idx;
}

/// Rotates the internal pair of one spatial port into the +/- basis.
inline StateVector chain_rotate(const StateVector& state, const std::vector<ChainModeTag>& tags,
                                int block, int spatial) {
    const std::vector<int> pair = chain_find_modes(tags, block, {spatial});
    const Unitary rot = embed(dft_unitary(2), pair, state.mode_count());
    return apply(rot, state);
}

/// Applies one detection pattern, appending the surviving branch (if any).
template <typename OnBranch>
inline void chain_project(const StateVector& state, const std::vector<ChainModeTag>& tags,
                          const DetectionPattern& pattern, const ChainPath& path,
                          OnBranch&& on_branch) {
    for (const auto& outcome : project(state, pattern)) {
        ChainPath next;
        next.state = outcome.conditional_state;
        next.probability = path.probability * outcome.probability;
        next.instance = path.instance;
        for (const auto& [mode, count] : outcome.pattern_instance) {
            next.instance[tags[static_cast<std::size_t>(mode)].global_flat()] = count;
        }
        const std::vector<int> detected = pattern.detected_modes();
        for (std::size_t i = 0; i < tags.size(); ++i) {
            if (!std::binary_search(detected.begin(), detected.end(), static_cast<int>(i))) {
                next.tags.push_back(tags[i]);
            }
        }
        on_branch(std::move(next));
    }
}

/// Single +/- photon in (block, spatial): two accepted instances.
template <typename OnBranch>
inline void chain_detect_single(const ChainPath& path, int block, int spatial,
                                OnBranch&& on_branch) {
    const StateVector rotated = chain_rotate(path.state, path.tags, block, spatial);
    const std::vector<int> pair = chain_find_modes(path.tags, block, {spatial});
    for (int plus : {1, 0}) {
        DetectionPattern pattern;
        pattern.exact[pair[0]] = plus;
        pattern.exact[pair[1]] = 1 - plus;
        chain_project(rotated, path.tags, pattern, path, on_branch);
    }
}

/// Two +/- photons across two spatial ports of one block, any distribution.
template <typename OnBranch>
inline void chain_detect_pair_any(const ChainPath& path, int block, int spatial_a, int spatial_b,
                                  OnBranch&& on_branch) {
    StateVector rotated = chain_rotate(path.state, path.tags, block, spatial_a);
    rotated = chain_rotate(rotated, path.tags, block, spatial_b);
    const std::vector<int> modes = chain_find_modes(path.tags, block, {spatial_a, spatial_b});
    DetectionPattern pattern;
    DetectionPattern::Aggregate aggregate;
    aggregate.modes = modes;
    aggregate.total = 2;
    pattern.aggregate = std::move(aggregate);
    chain_project(rotated, path.tags, pattern, path, on_branch);
}

/// Beam-splitter link between port 3 of `left_block` and port 0 of the
/// just-appended `right_block`, then detection of exactly one photon of
/// each internal label across the two coupled spatial ports.
template <typename OnBranch>
inline void chain_connect(const ChainPath& path, int left_block, int right_block,
                          OnBranch&& on_branch) {
    const std::vector<int> left = chain_find_modes(path.tags, left_block, {3});
    const std::vector<int> right = chain_find_modes(path.tags, right_block, {0});
    const Unitary bs = dft_unitary(2);
    const Unitary link = compose(embed(bs, {left[0], right[0]}, path.state.mode_count()),
                                 embed(bs, {left[1], right[1]}, path.state.mode_count()));
    const StateVector mixed = apply(link, path.state);
    // one photon with internal label 0 and one with label 1, same or
    // distinct spatial ports
    for (int mode0 : {left[0], right[0]}) {
        for (int mode1 : {left[1], right[1]}) {
            DetectionPattern pattern;
            pattern.exact[left[0]] = 0;
            pattern.exact[left[1]] = 0;
            pattern.exact[right[0]] = 0;
            pattern.exact[right[1]] = 0;
            pattern.exact[mode0] += 1;
            pattern.exact[mode1] += 1;
            chain_project(mixed, path.tags, pattern, path, on_branch);
        }
    }
}

/// Runs the chain for `n_ghz` qubits. Outcome conditional states live on
/// the undetected (qubit-carrying) modes in block-major order; instance
/// keys are global flat mode indices (block * 4 + port) * 2 + label.
inline SchemeResult run_ghz_chain(int n_ghz, bool mirror) {
    const bool even = n_ghz % 2 == 0;
    const int block_count = even ? n_ghz / 2 : (n_ghz + 1) / 2;

    const ModeLayout block_layout(4, 2);
    const Unitary block_unitary = lift_spatial(dft_unitary(4), {0, 1, 2, 3}, block_layout);
    const StateVector block_state =
        apply(block_unitary, product_input({1, 0, 0, 1, 1, 0, 0, 1}));

    SchemeResult result;
    result.block_structure.block_count = block_count;
    result.block_structure.block_ports = 4;
    result.block_structure.connector_ports = 2;
    result.block_structure.detected_photons = 4 * block_count - n_ghz;
    result.block_structure.summary =
        std::to_string(block_count) + "x4-port splitter (two-level internal label), " +
        std::to_string(block_count - 1) + " beam-splitter links, " +
        (even ? "single-photon ends" : (mirror ? "two-photon mirrored end" : "two-photon end"));

    std::vector<ChainPath> completed;
    // Walks one block at a time; `stage` is the next block to append.
    std::function<void(ChainPath, int)> advance = [&](ChainPath path, int stage) {
        if (stage == block_count) {
            completed.push_back(std::move(path));
            return;
        }
        ChainPath joined;
        joined.probability = path.probability;
        joined.instance = path.instance;
        joined.state = tensor_product(path.state, block_state);
        joined.tags = path.tags;
        for (int s = 0; s < 4; ++s) {
            for (int i = 0; i < 2; ++i) joined.tags.push_back({stage, s, i});
        }
        auto after_link = [&](ChainPath next) {
            const bool last = stage == block_count - 1;
            if (!last) {
                advance(std::move(next), stage + 1);
                return;
            }
            if (even || mirror) {
                chain_detect_single(next, stage, 1,
                                    [&](ChainPath done) { advance(std::move(done), stage + 1); });
            } else {
                chain_detect_pair_any(next, stage, 1, 3,
                                      [&](ChainPath done) { advance(std::move(done), stage + 1); });
            }
        };
        chain_connect(joined, stage - 1, stage, after_link);
    };

    // First block: its end detection, then the walk over the remaining blocks.
    ChainPath start;
    start.state = block_state;
    start.probability = 1.0;
    for (int s = 0; s < 4; ++s) {
        for (int i = 0; i < 2; ++i) start.tags.push_back({0, s, i});
    }
    auto begin_walk = [&](ChainPath path) {
        if (block_count == 1) {
            completed.push_back(std::move(path));
        } else {
            advance(std::move(path), 1);
        }
    };
    if (block_count == 1) {
        // Two-qubit chain: a single block with both single-photon ends.
        chain_detect_single(start, 0, 2, [&](ChainPath mid) {
            chain_detect_single(mid, 0, 3, begin_walk);
        });
    } else if (!even && mirror) {
        chain_detect_pair_any(start, 0, 0, 2, begin_walk);
    } else {
        chain_detect_single(start, 0, 2, begin_walk);
    }

    double total = 0.0;
    for (const auto& path : completed) {
        HeraldOutcome outcome;
        outcome.pattern_instance = path.instance;
        outcome.probability = path.probability;
        outcome.conditional_state = path.state;
        outcome.phases = detail::gauge_phases(outcome.conditional_state);
        total += path.probability;
        result.outcomes.push_back(std::move(outcome));
    }
    result.total_probability = total;
    result.outcomes_enumerated = true;
    return result;
}

}  // namespace detail
}  // namespace heraldsim

#endif  // HERALDSIM_SCHEMES_CHAIN_HPP
