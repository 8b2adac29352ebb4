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
 * Scheme compiler for heralded entanglement generation.
 *
 * Every scheme is run as a factored pipeline: the splitter blocks are
 * evolved independently, one heralding mode per block is routed through a
 * connecting D-port splitter, and photon detection on the connector
 * outputs heralds an entangled state on the undetected register modes.
 * The factorization is exact because unitaries on disjoint modes commute;
 * it is what keeps 16-photon runs tractable.
 *
 * Run totals are cross-checked against closed-form success probabilities
 * carried in closed_form_probability().
 */

#ifndef HERALDSIM_SCHEMES_HPP
#define HERALDSIM_SCHEMES_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "heraldsim/errors.hpp"
#include "heraldsim/evolution.hpp"
#include "heraldsim/fock.hpp"
#include "heraldsim/heralding.hpp"
#include "heraldsim/unitary.hpp"

namespace heraldsim {

enum class SchemeKind {
    QubitBell4SMS,         // one 4-port splitter, two-level internal label
    QubitGHZChain,         // 4-port splitters chained via beam splitters
    QuditBell3SMS,         // d 3-port splitters + connecting d-port splitter
    QuditBellInverted,     // complement encoding of QuditBell3SMS (d = 3 only)
    QuditGHZ4SMS,          // d 4-port splitters + connecting d-port splitter
    QuditBell2SMS,         // 2d beam splitters + connecting 2d-port splitter
    QuditBell3SMSSub,      // photon-subtracted variants of the three above
    QuditBellInvertedSub,
    QuditGHZ4SMSSub,
};

inline const char* to_string(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::QubitBell4SMS: return "qubit-bell-4sms";
        case SchemeKind::QubitGHZChain: return "qubit-ghz-chain";
        case SchemeKind::QuditBell3SMS: return "qudit-bell-3sms";
        case SchemeKind::QuditBellInverted: return "qudit-bell-inverted";
        case SchemeKind::QuditGHZ4SMS: return "qudit-ghz-4sms";
        case SchemeKind::QuditBell2SMS: return "qudit-bell-2sms";
        case SchemeKind::QuditBell3SMSSub: return "qudit-bell-3sms-sub";
        case SchemeKind::QuditBellInvertedSub: return "qudit-bell-inverted-sub";
        case SchemeKind::QuditGHZ4SMSSub: return "qudit-ghz-4sms-sub";
    }
    return "unknown";
}

inline SchemeKind scheme_kind_from_string(const std::string& name) {
    static const std::map<std::string, SchemeKind> table = {
        {"qubit-bell-4sms", SchemeKind::QubitBell4SMS},
        {"qubit-ghz-chain", SchemeKind::QubitGHZChain},
        {"qudit-bell-3sms", SchemeKind::QuditBell3SMS},
        {"qudit-bell-inverted", SchemeKind::QuditBellInverted},
        {"qudit-ghz-4sms", SchemeKind::QuditGHZ4SMS},
        {"qudit-bell-2sms", SchemeKind::QuditBell2SMS},
        {"qudit-bell-3sms-sub", SchemeKind::QuditBell3SMSSub},
        {"qudit-bell-inverted-sub", SchemeKind::QuditBellInvertedSub},
        {"qudit-ghz-4sms-sub", SchemeKind::QuditGHZ4SMSSub},
    };
    auto it = table.find(name);
    if (it == table.end()) throw InvalidArgument("unknown scheme kind: " + name);
    return it->second;
}

inline bool is_subtracted(SchemeKind kind) {
    return kind == SchemeKind::QuditBell3SMSSub ||
           kind == SchemeKind::QuditBellInvertedSub ||
           kind == SchemeKind::QuditGHZ4SMSSub;
}

inline bool is_ghz_family(SchemeKind kind) {
    return kind == SchemeKind::QuditGHZ4SMS || kind == SchemeKind::QuditGHZ4SMSSub ||
           kind == SchemeKind::QubitGHZChain;
}

/// Which scheme to run.
///
/// `d` is the qudit dimension for the qudit schemes. `n_ghz` is the chain
/// length for QubitGHZChain. `one_shot` multiplies results by the
/// probability that every per-block photon subtraction fires in a single
/// try (occupancy^d); it is valid only for the subtracted kinds — without
/// it those kinds report the repeat-until-success figures. `mirror`
/// selects the mirrored termination of odd chains (single-qubit end on
/// the first block instead of the last).
struct SchemeSpec {
    SchemeKind kind = SchemeKind::QuditBell3SMS;
    int d = 2;
    int n_ghz = 2;
    bool one_shot = false;
    bool mirror = false;
};

/// Shape of the factored pipeline a scheme compiles to.
struct BlockStructure {
    int block_count = 0;        // independent splitter blocks
    int block_ports = 0;        // ports per block splitter
    int connector_ports = 0;    // D of the connecting splitter (0 = none)
    int detected_photons = 0;   // photons detected to accept a run
    std::string summary;
};

struct SchemeResult {
    SchemeSpec spec;
    double total_probability = 0.0;
    double closed_form = std::numeric_limits<double>::quiet_NaN();
    bool has_closed_form = false;
    std::vector<HeraldOutcome> outcomes;
    /// False when only the total was computed (outcome enumeration would
    /// exceed the in-memory term budget); the total then comes from the
    /// heralding-mode photon-number marginals, which the connecting
    /// splitter cannot change.
    bool outcomes_enumerated = true;
    /// Probability that one block's photon subtraction fires (1 when the
    /// scheme has no subtraction stage).
    double occupancy_probability = 1.0;
    BlockStructure block_structure;
};

inline void validate_spec(const SchemeSpec& spec) {
    switch (spec.kind) {
        case SchemeKind::QubitBell4SMS:
            break;
        case SchemeKind::QubitGHZChain:
            if (spec.n_ghz < 2) throw SchemeError("qubit-ghz-chain requires n_ghz >= 2");
            if (spec.n_ghz > 12) {
                throw CapacityError("qubit-ghz-chain supports n_ghz <= 12");
            }
            break;
        case SchemeKind::QuditBellInverted:
            if (spec.d != 3) {
                throw SchemeError(
                    "qudit-bell-inverted requires d = 3 without subtraction: for d > 3 "
                    "additional detection events contaminate the heralded support");
            }
            break;
        default:
            if (spec.d < 2) throw SchemeError("qudit schemes require d >= 2");
            if (spec.d > 8) throw CapacityError("qudit schemes support d <= 8");
            break;
    }
    if (spec.kind == SchemeKind::QuditBellInverted && spec.d < 2) {
        throw SchemeError("qudit schemes require d >= 2");
    }
    if (spec.one_shot && !is_subtracted(spec.kind)) {
        throw SchemeError("one_shot applies to subtraction-boosted schemes only");
    }
    if (spec.mirror && spec.kind != SchemeKind::QubitGHZChain) {
        throw SchemeError("mirror applies to qubit-ghz-chain only");
    }
}

/// Closed-form success probability for the scheme. d = 1 degenerate specs
/// are evaluated (formula only); build_and_run itself rejects d < 2.
/// Throws NotApplicable when no closed form exists.
inline double closed_form_probability(const SchemeSpec& spec) {
    const double d = static_cast<double>(spec.d);
    if (spec.kind != SchemeKind::QubitBell4SMS && spec.kind != SchemeKind::QubitGHZChain &&
        spec.d < 1) {
        throw InvalidArgument("closed_form_probability requires d >= 1");
    }
    double p = 0.0;
    switch (spec.kind) {
        case SchemeKind::QubitBell4SMS:
            p = 1.0 / 8.0;
            break;
        case SchemeKind::QubitGHZChain: {
            const int n = spec.n_ghz;
            if (n < 2) throw InvalidArgument("chain closed form requires n_ghz >= 2");
            p = (n % 2 == 0) ? std::pow(0.5, 2 * n - 1) : std::pow(0.5, 2 * n);
            break;
        }
        case SchemeKind::QuditBell3SMS:
            p = d * std::pow(2.0, d - 1) / std::pow(3.0, 2.0 * d - 1);
            break;
        case SchemeKind::QuditBellInverted:
            if (spec.d != 3) {
                throw NotApplicable(
                    "no closed form: inverted heralding without subtraction works for d = 3 only");
            }
            p = 2.0 / 27.0;
            break;
        case SchemeKind::QuditGHZ4SMS:
            p = d * std::pow(3.0, d - 1) / std::pow(2.0, 5.0 * d - 3);
            break;
        case SchemeKind::QuditBell2SMS:
            p = d / std::pow(2.0, 2.0 * d - 1);
            break;
        case SchemeKind::QuditBell3SMSSub:
            p = d * std::pow(2.0, d - 1) / std::pow(3.0, d);
            break;
        case SchemeKind::QuditBellInvertedSub:
            p = d * 2.0 / std::pow(3.0, d);
            break;
        case SchemeKind::QuditGHZ4SMSSub:
            p = d * std::pow(3.0, d - 1) / std::pow(2.0, 3.0 * d - 1);
            break;
    }
    if (spec.one_shot) {
        if (!is_subtracted(spec.kind)) {
            throw NotApplicable("one-shot factors apply to subtracted schemes only");
        }
        const double occupancy = is_ghz_family(spec.kind) ? 17.0 / 32.0 : 5.0 / 9.0;
        p *= std::pow(occupancy, d);
    }
    return p;
}

/// Combined success probability of running the subtracted schemes for both
/// the standard and the inverted d-dimensional two-photon entangled state:
/// d (2 + 2^(d-1)) / 3^d. Defined for d >= 3; at d = 2 the two detection
/// events coincide and summing would double count.
inline double sum_subtracted_bell_closed_form(int d, bool one_shot = false) {
    if (d < 3) {
        throw NotApplicable("combined subtracted total is defined for d >= 3");
    }
    double p = d * (2.0 + std::pow(2.0, d - 1)) / std::pow(3.0, d);
    if (one_shot) p *= std::pow(5.0 / 9.0, d);
    return p;
}

namespace detail {

/// Residual states on a block's register modes, keyed by the photon count
/// the block emits into its heralding mode. Residuals are unnormalized:
/// their squared norms are the sector probabilities.
using SectorMap = std::map<int, StateVector>;

inline SectorMap split_by_heralding_occupation(const StateVector& block_state) {
    const int registers = block_state.mode_count() - 1;
    std::vector<int> register_modes(static_cast<std::size_t>(registers));
    for (int i = 0; i < registers; ++i) register_modes[static_cast<std::size_t>(i)] = i + 1;
    SectorMap sectors;
    for (const auto& [basis, amp] : block_state.terms()) {
        const int herald = basis.occupation(0);
        auto it = sectors.find(herald);
        if (it == sectors.end()) it = sectors.emplace(herald, StateVector(registers)).first;
        it->second.accumulate(basis.restricted_to(register_modes), amp);
    }
    return sectors;
}

/// The deterministic register fix-up for 4-port blocks: a quarter-wave
/// phase on the last register mode followed by a beam splitter between
/// the outer register modes maps (|2,1,0> + |0,1,2>)/sqrt(2) to |1,1,1>.
inline Unitary ghz_register_fix() {
    Eigen::MatrixXcd phase = Eigen::MatrixXcd::Identity(3, 3);
    phase(2, 2) = std::complex<double>(0.0, 1.0);
    const Unitary quarter_wave =
        make_unitary(std::move(phase), Provenance::Custom, "phase(i) on register 2");
    return compose(quarter_wave, embed(dft_unitary(2), {0, 2}, 3));
}

inline double binomial_bound(int n, int k) {
    double v = 1.0;
    for (int i = 0; i < k; ++i) v *= static_cast<double>(n - i) / (i + 1);
    return v;
}

/// Recursively enumerates per-block heralding occupations summing to the
/// detected photon number.
inline void enumerate_sectors(const std::vector<int>& available, int blocks, int target,
                              std::vector<int>& prefix,
                              const std::function<void(const std::vector<int>&)>& visit) {
    if (blocks == 0) {
        if (target == 0) visit(prefix);
        return;
    }
    const int max_occ = available.empty() ? 0 : available.back();
    for (int occ : available) {
        if (occ > target) break;
        if (target - occ > max_occ * (blocks - 1)) continue;
        prefix.push_back(occ);
        enumerate_sectors(available, blocks - 1, target - occ, prefix, visit);
        prefix.pop_back();
    }
}

struct DsmsParams {
    int block_ports = 3;
    int block_count = 2;
    int detect_total = 0;
    bool subtract = false;
    bool fix_registers = false;  // apply ghz_register_fix to every residual
};

/// Outcome-term budget above which the runner reports totals only.
inline constexpr double kEnumerationTermCap = 200000.0;

/// Runs a block-factored scheme: identical splitter blocks, one heralding
/// mode each, a connecting block_count-port splitter on the heralding
/// modes, and detection of detect_total photons across all connector
/// outputs. Joint conditional states live on the register modes,
/// block-major; connector outputs occupy the trailing mode range during
/// detection and are removed from the conditionals.
inline SchemeResult run_dsms_scheme(const DsmsParams& params) {
    const int ports = params.block_ports;
    const int blocks = params.block_count;
    const int registers_per_block = ports - 1;
    const int register_total = registers_per_block * blocks;

    StateVector block_state =
        apply(dft_unitary(ports), product_input(std::vector<int>(static_cast<std::size_t>(ports), 1)));
    double occupancy = 1.0;
    if (params.subtract) {
        auto [subtracted, fired] = subtract_photon(block_state, 0);
        block_state = std::move(subtracted);
        occupancy = fired;
    }

    SectorMap sectors = split_by_heralding_occupation(block_state);
    if (params.fix_registers) {
        const Unitary fix = ghz_register_fix();
        for (auto& [occ, residual] : sectors) residual = apply(fix, residual);
    }

    std::vector<int> available;
    available.reserve(sectors.size());
    for (const auto& [occ, residual] : sectors) available.push_back(occ);

    const double outcome_bound =
        binomial_bound(params.detect_total + blocks - 1, blocks - 1);
    const bool enumerate = outcome_bound <= kEnumerationTermCap;

    SchemeResult result;
    result.occupancy_probability = params.subtract ? occupancy : 1.0;
    result.outcomes_enumerated = enumerate;
    result.block_structure.block_count = blocks;
    result.block_structure.block_ports = ports;
    result.block_structure.connector_ports = blocks;
    result.block_structure.detected_photons = params.detect_total;
    {
        std::ostringstream os;
        os << blocks << "x" << ports << "-port splitter"
           << (params.subtract ? " (heralding mode photon-subtracted)" : "") << " -> "
           << blocks << "-port connector, detect " << params.detect_total
           << " photons; conditional modes 0.." << register_total - 1
           << " are registers, block-major";
        result.block_structure.summary = os.str();
    }

    const Unitary connector = dft_unitary(blocks);
    double total = 0.0;
    std::optional<StateVector> joint;
    if (enumerate) joint.emplace(register_total + blocks);

    std::vector<int> prefix;
    prefix.reserve(static_cast<std::size_t>(blocks));
    enumerate_sectors(available, blocks, params.detect_total, prefix,
                      [&](const std::vector<int>& sector) {
        if (!enumerate) {
            double weight = 1.0;
            for (int occ : sector) {
                const double n = sectors.at(occ).norm();
                weight *= n * n;
            }
            total += weight;
            return;
        }
        // Residual tensor across blocks, then the connector acting on the
        // heralding occupations of this sector.
        StateVector residual_tensor = sectors.at(sector[0]);
        for (int b = 1; b < blocks; ++b) {
            residual_tensor =
                tensor_product(residual_tensor, sectors.at(sector[static_cast<std::size_t>(b)]));
        }
        const StateVector connector_out = apply(connector, product_input(sector));
        for (const auto& [registers, register_amp] : residual_tensor.terms()) {
            for (const auto& [sigma, connector_amp] : connector_out.terms()) {
                std::vector<std::uint8_t> occ = registers.occupations();
                occ.insert(occ.end(), sigma.occupations().begin(), sigma.occupations().end());
                joint->accumulate(FockState(std::move(occ)), register_amp * connector_amp);
            }
        }
    });

    if (enumerate) {
        DetectionPattern pattern;
        DetectionPattern::Aggregate aggregate;
        for (int m = 0; m < blocks; ++m) aggregate.modes.push_back(register_total + m);
        aggregate.total = params.detect_total;
        pattern.aggregate = std::move(aggregate);
        result.outcomes = project(*joint, pattern);
        for (const auto& outcome : result.outcomes) total += outcome.probability;
    }

    result.total_probability = total;
    return result;
}

}  // namespace detail

// (chain and top-level runners below)

}  // namespace heraldsim

#include "heraldsim/schemes_chain.hpp"
#include "heraldsim/schemes_run.hpp"

#endif  // HERALDSIM_SCHEMES_HPP
