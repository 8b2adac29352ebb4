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
 * Analysis front end: run configs, dimension sweeps, figure data and the
 * serialization behind the command-line tool. All emitted text is
 * deterministic: terms and rows are ordered canonically and floats are
 * printed with 12 significant digits, so identical configs produce
 * byte-identical files.
 */

#ifndef HERALDSIM_ANALYSIS_HPP
#define HERALDSIM_ANALYSIS_HPP

#include <algorithm>
#include <cmath>
#include <future>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "heraldsim/format.hpp"
#include "heraldsim/schemes.hpp"

namespace heraldsim {

inline constexpr int kSchemaVersion = 1;

/// Exit codes of the command-line front end.
enum ExitCode : int {
    kExitOk = 0,
    kExitConfigError = 2,
    kExitSchemeError = 3,
    kExitInvariantFailure = 4,
};

/// Hard tractability bounds of the front end. Beyond these the tool
/// refuses with a capacity error instead of an open-ended runtime.
inline constexpr int kMaxBellDimension = 6;
inline constexpr int kMaxGhzDimension = 4;
inline constexpr int kMaxChainLength = 8;

inline void check_tractability(const SchemeSpec& spec) {
    switch (spec.kind) {
        case SchemeKind::QubitGHZChain:
            if (spec.n_ghz > kMaxChainLength) {
                throw CapacityError("qubit-ghz-chain is bounded at n_ghz <= " +
                                    std::to_string(kMaxChainLength));
            }
            break;
        case SchemeKind::QuditGHZ4SMS:
        case SchemeKind::QuditGHZ4SMSSub:
            if (spec.d > kMaxGhzDimension) {
                throw CapacityError("GHZ-family schemes are bounded at d <= " +
                                    std::to_string(kMaxGhzDimension));
            }
            break;
        case SchemeKind::QubitBell4SMS:
            break;
        default:
            if (spec.d > kMaxBellDimension) {
                throw CapacityError("Bell-family schemes are bounded at d <= " +
                                    std::to_string(kMaxBellDimension));
            }
            break;
    }
}

// ---------------------------------------------------------------------------
// run configuration

struct RunConfig {
    SchemeSpec spec;
    unsigned seed = 0;  // accepted and recorded; the exact engine ignores it
    std::optional<std::string> json_out;
    std::optional<std::string> csv_out;
    std::size_t max_outcomes_in_json = 10000;
};

inline RunConfig parse_run_config(const nlohmann::json& j) {
    if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
    if (!j.contains("kind")) throw InvalidArgument("config is missing \"kind\"");
    RunConfig config;
    config.spec.kind = scheme_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("d")) config.spec.d = j.at("d").get<int>();
    if (j.contains("n_ghz")) config.spec.n_ghz = j.at("n_ghz").get<int>();
    if (j.contains("one_shot")) config.spec.one_shot = j.at("one_shot").get<bool>();
    if (j.contains("mirror")) config.spec.mirror = j.at("mirror").get<bool>();
    if (j.contains("seed")) config.seed = j.at("seed").get<unsigned>();
    if (j.contains("json_out")) config.json_out = j.at("json_out").get<std::string>();
    if (j.contains("csv_out")) config.csv_out = j.at("csv_out").get<std::string>();
    if (j.contains("max_outcomes_in_json")) {
        config.max_outcomes_in_json = j.at("max_outcomes_in_json").get<std::size_t>();
    }
    static const std::vector<std::string> known = {
        "kind", "d", "n_ghz", "one_shot", "mirror",
        "seed", "json_out", "csv_out", "max_outcomes_in_json"};
    for (const auto& [key, value] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw InvalidArgument("config has unknown key \"" + key + "\"");
        }
    }
    return config;
}

// ---------------------------------------------------------------------------
// serialization

inline nlohmann::json outcome_to_json(const HeraldOutcome& outcome) {
    nlohmann::json j;
    nlohmann::json instance = nlohmann::json::array();
    for (const auto& [mode, count] : outcome.pattern_instance) {
        instance.push_back({mode, count});
    }
    j["instance"] = std::move(instance);
    j["probability"] = outcome.probability;
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [basis, amp] : outcome.conditional_state.sorted_terms()) {
        nlohmann::json occ = nlohmann::json::array();
        for (std::uint8_t n : basis.occupations()) occ.push_back(static_cast<int>(n));
        terms.push_back({{"occupations", std::move(occ)},
                         {"amplitude", {amp.real(), amp.imag()}}});
    }
    j["conditional_terms"] = std::move(terms);
    j["phases"] = outcome.phases;
    return j;
}

inline nlohmann::json unitary_to_json(const Unitary& u) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < u.dim(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < u.dim(); ++c) {
            row.push_back({u.entries(r, c).real(), u.entries(r, c).imag()});
        }
        rows.push_back(std::move(row));
    }
    return {{"dim", u.dim()},
            {"provenance", to_string(u.provenance)},
            {"description", u.description},
            {"entries", std::move(rows)}};
}

inline nlohmann::json scheme_result_to_json(const SchemeResult& result,
                                            std::size_t max_outcomes = 10000) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = to_string(result.spec.kind);
    j["d"] = result.spec.d;
    j["n_ghz"] = result.spec.n_ghz;
    j["one_shot"] = result.spec.one_shot;
    j["mirror"] = result.spec.mirror;
    j["total_probability"] = result.total_probability;
    if (result.has_closed_form) {
        j["closed_form"] = result.closed_form;
    } else {
        j["closed_form"] = nullptr;
    }
    j["occupancy_probability"] = result.occupancy_probability;
    j["outcomes_enumerated"] = result.outcomes_enumerated;
    j["block_structure"] = {{"block_count", result.block_structure.block_count},
                            {"block_ports", result.block_structure.block_ports},
                            {"connector_ports", result.block_structure.connector_ports},
                            {"detected_photons", result.block_structure.detected_photons},
                            {"summary", result.block_structure.summary}};
    j["outcome_count"] = result.outcomes.size();
    nlohmann::json outcomes = nlohmann::json::array();
    std::size_t emitted = 0;
    for (const auto& outcome : result.outcomes) {
        if (emitted == max_outcomes) break;
        outcomes.push_back(outcome_to_json(outcome));
        ++emitted;
    }
    j["outcomes"] = std::move(outcomes);
    j["outcomes_truncated"] = emitted < result.outcomes.size();
    return j;
}

inline nlohmann::json error_json(const std::string& type, const std::string& message) {
    return {{"error", {{"type", type}, {"message", message}}}};
}

/// One-line CSV summary of a run (plus header).
inline std::string scheme_result_csv(const SchemeResult& result, const StateReport& report) {
    std::ostringstream os;
    os << "kind,d,n_ghz,one_shot,simulated_p,closed_form_p,abs_diff,"
          "max_branch_weight_dev,outcomes\n";
    os << to_string(result.spec.kind) << "," << result.spec.d << "," << result.spec.n_ghz
       << "," << (result.spec.one_shot ? "true" : "false") << ","
       << format_real(result.total_probability) << ",";
    if (result.has_closed_form) {
        os << format_real(result.closed_form) << ","
           << format_real(std::abs(result.total_probability - result.closed_form));
    } else {
        os << ",";
    }
    os << "," << format_real(report.max_weight_deviation) << "," << result.outcomes.size()
       << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// dimension sweeps

struct SweepRow {
    std::string family;
    std::string variant;
    int d = 0;
    bool one_shot = false;
    double simulated = 0.0;
    double closed_form = 0.0;
    double max_weight_deviation = 0.0;
};

inline const std::vector<std::string>& bell_sweep_variants() {
    static const std::vector<std::string> v = {"bell", "bell2", "bell-sub", "inv-bell-sub",
                                               "sum-bell-sub"};
    return v;
}

inline const std::vector<std::string>& ghz_sweep_variants() {
    static const std::vector<std::string> v = {"ghz", "ghz-sub"};
    return v;
}

namespace detail {

inline SweepRow compute_sweep_row(const std::string& family, const std::string& variant,
                                  int d, bool one_shot) {
    SweepRow row;
    row.family = family;
    row.variant = variant;
    row.d = d;

    auto run_one = [&](SchemeKind kind, bool apply_one_shot) {
        SchemeSpec spec{kind, d, 2, apply_one_shot, false};
        SchemeResult result = build_and_run(spec);
        const StateReport report = verify_heralded_state(result);
        row.simulated += result.total_probability;
        row.max_weight_deviation = std::max(row.max_weight_deviation,
                                            report.max_weight_deviation);
        return result;
    };

    if (variant == "bell") {
        row.closed_form = closed_form_probability({SchemeKind::QuditBell3SMS, d, 2, false, false});
        run_one(SchemeKind::QuditBell3SMS, false);
    } else if (variant == "bell2") {
        row.closed_form = closed_form_probability({SchemeKind::QuditBell2SMS, d, 2, false, false});
        run_one(SchemeKind::QuditBell2SMS, false);
    } else if (variant == "bell-sub") {
        row.one_shot = one_shot;
        row.closed_form =
            closed_form_probability({SchemeKind::QuditBell3SMSSub, d, 2, one_shot, false});
        run_one(SchemeKind::QuditBell3SMSSub, one_shot);
    } else if (variant == "inv-bell-sub") {
        row.one_shot = one_shot;
        row.closed_form =
            closed_form_probability({SchemeKind::QuditBellInvertedSub, d, 2, one_shot, false});
        run_one(SchemeKind::QuditBellInvertedSub, one_shot);
    } else if (variant == "sum-bell-sub") {
        row.one_shot = one_shot;
        // Simulated as the sum of the two runs; the closed form is the
        // independent combined expression, so the comparison stays a real
        // cross-check.
        row.closed_form = sum_subtracted_bell_closed_form(d, one_shot);
        run_one(SchemeKind::QuditBell3SMSSub, one_shot);
        run_one(SchemeKind::QuditBellInvertedSub, one_shot);
    } else if (variant == "ghz") {
        row.closed_form = closed_form_probability({SchemeKind::QuditGHZ4SMS, d, 2, false, false});
        run_one(SchemeKind::QuditGHZ4SMS, false);
    } else if (variant == "ghz-sub") {
        row.one_shot = one_shot;
        row.closed_form =
            closed_form_probability({SchemeKind::QuditGHZ4SMSSub, d, 2, one_shot, false});
        run_one(SchemeKind::QuditGHZ4SMSSub, one_shot);
    } else {
        throw InvalidArgument("unknown sweep variant: " + variant);
    }
    return row;
}

}  // namespace detail

/// Sweeps a scheme family over d. Rows are computed in parallel and
/// assembled in deterministic (d, variant) order. family is "bell" or
/// "ghz"; an empty variant list selects every variant of the family.
inline std::vector<SweepRow> run_sweep(const std::string& family, int d_min, int d_max,
                                       std::vector<std::string> variants, bool one_shot) {
    const bool bell = family == "bell";
    if (!bell && family != "ghz") {
        throw InvalidArgument("sweep family must be \"bell\" or \"ghz\"");
    }
    const int bound = bell ? kMaxBellDimension : kMaxGhzDimension;
    if (d_min < 2 || d_max < d_min) throw InvalidArgument("sweep requires 2 <= d_min <= d_max");
    if (d_max > bound) {
        throw CapacityError(family + " sweeps are bounded at d <= " + std::to_string(bound));
    }
    if (variants.empty()) variants = bell ? bell_sweep_variants() : ghz_sweep_variants();
    const auto& known = bell ? bell_sweep_variants() : ghz_sweep_variants();
    for (const auto& variant : variants) {
        if (std::find(known.begin(), known.end(), variant) == known.end()) {
            throw InvalidArgument("variant \"" + variant + "\" is not in family " + family);
        }
    }

    std::vector<std::future<SweepRow>> futures;
    for (int d = d_min; d <= d_max; ++d) {
        for (const auto& variant : variants) {
            if (variant == "sum-bell-sub" && d < 3) continue;  // events coincide at d = 2
            futures.push_back(std::async(std::launch::async, [=] {
                return detail::compute_sweep_row(family, variant, d, one_shot);
            }));
        }
    }
    std::vector<SweepRow> rows;
    rows.reserve(futures.size());
    for (auto& f : futures) rows.push_back(f.get());
    return rows;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "family,variant,d,one_shot,simulated_p,closed_form_p,abs_diff,"
          "max_branch_weight_dev\n";
    for (const auto& row : rows) {
        os << row.family << "," << row.variant << "," << row.d << ","
           << (row.one_shot ? "true" : "false") << "," << format_real(row.simulated) << ","
           << format_real(row.closed_form) << ","
           << format_real(std::abs(row.simulated - row.closed_form)) << ","
           << format_real(row.max_weight_deviation) << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// figure data: the closed-form success-probability curves

/// Closed-form curves behind the probability figures, one row per d.
///   6: Bell-family curves, repeat-until-success
///   7: GHZ-family curves, repeat-until-success
///   8: Bell-family with the one-shot occupancy factor (5/9)^d on the
///      subtracted curves
///   9: GHZ-family with the factor (17/32)^d on the subtracted curve
inline std::string figure_csv(int figure, int d_max = 10) {
    if (d_max < 2) throw InvalidArgument("figure data requires d_max >= 2");
    std::ostringstream os;
    const bool bell = figure == 6 || figure == 8;
    const bool one_shot = figure == 8 || figure == 9;
    if (!bell && figure != 7 && figure != 9) {
        throw InvalidArgument("figure must be one of 6, 7, 8, 9");
    }
    if (bell) {
        os << "d,p_bell,p_bell2,p_bell_sub" << (one_shot ? "_oneshot" : "")
           << ",p_inv_bell_sub" << (one_shot ? "_oneshot" : "") << ",p_sum_bell_sub"
           << (one_shot ? "_oneshot" : "") << "\n";
        for (int d = 2; d <= d_max; ++d) {
            os << d << ","
               << format_real(closed_form_probability({SchemeKind::QuditBell3SMS, d, 2, false, false}))
               << ","
               << format_real(closed_form_probability({SchemeKind::QuditBell2SMS, d, 2, false, false}))
               << ","
               << format_real(
                      closed_form_probability({SchemeKind::QuditBell3SMSSub, d, 2, one_shot, false}))
               << ","
               << format_real(closed_form_probability(
                      {SchemeKind::QuditBellInvertedSub, d, 2, one_shot, false}))
               << ",";
            if (d >= 3) os << format_real(sum_subtracted_bell_closed_form(d, one_shot));
            os << "\n";
        }
    } else {
        os << "d,p_ghz,p_ghz_sub" << (one_shot ? "_oneshot" : "") << "\n";
        for (int d = 2; d <= d_max; ++d) {
            os << d << ","
               << format_real(closed_form_probability({SchemeKind::QuditGHZ4SMS, d, 2, false, false}))
               << ","
               << format_real(
                      closed_form_probability({SchemeKind::QuditGHZ4SMSSub, d, 2, one_shot, false}))
               << "\n";
        }
    }
    return os.str();
}

}  // namespace heraldsim

#endif  // HERALDSIM_ANALYSIS_HPP
