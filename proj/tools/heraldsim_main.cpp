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

// Command-line front end: simulate | sweep | verify | emit-plot-data |
// show-unitary. Errors are reported as machine-readable JSON on stdout
// with exit codes 2 (config), 3 (scheme validity / capacity) and
// 4 (invariant-check failure).

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "heraldsim/acceptance.hpp"
#include "heraldsim/analysis.hpp"

namespace {

using heraldsim::ExitCode;

void write_text(const std::string& path, const std::string& text) {
    if (path == "-" || path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw heraldsim::InvalidArgument("cannot open output file: " + path);
    out << text;
}

int fail(const std::string& type, const std::string& message, int code) {
    std::cout << heraldsim::error_json(type, message).dump(2) << "\n";
    return code;
}

int cmd_simulate(const std::string& config_path) {
    heraldsim::RunConfig config;
    try {
        std::ifstream in(config_path);
        if (!in) {
            return fail("config", "cannot open config file: " + config_path, ExitCode::kExitConfigError);
        }
        nlohmann::json j = nlohmann::json::parse(in);
        config = heraldsim::parse_run_config(j);
    } catch (const nlohmann::json::exception& e) {
        return fail("config", e.what(), ExitCode::kExitConfigError);
    } catch (const heraldsim::Error& e) {
        return fail("config", e.what(), ExitCode::kExitConfigError);
    }

    heraldsim::SchemeResult result;
    try {
        heraldsim::check_tractability(config.spec);
        result = heraldsim::build_and_run(config.spec);
    } catch (const heraldsim::CapacityError& e) {
        return fail("capacity", e.what(), ExitCode::kExitSchemeError);
    } catch (const heraldsim::Error& e) {
        return fail("scheme", e.what(), ExitCode::kExitSchemeError);
    }

    const heraldsim::StateReport report = heraldsim::verify_heralded_state(result);
    try {
        const std::string json_text =
            heraldsim::scheme_result_to_json(result, config.max_outcomes_in_json).dump(2) + "\n";
        if (config.json_out) {
            write_text(*config.json_out, json_text);
        } else {
            std::cout << json_text;
        }
        if (config.csv_out) {
            write_text(*config.csv_out, heraldsim::scheme_result_csv(result, report));
        }
    } catch (const heraldsim::Error& e) {
        return fail("io", e.what(), ExitCode::kExitConfigError);
    }

    // invariant checks: heralded-state verification, conditional norms,
    // agreement with the closed form when one exists
    std::string violation;
    if (!report.ok) {
        violation = report.failures.empty() ? "state verification failed" : report.failures.front();
    }
    for (const auto& outcome : result.outcomes) {
        if (std::abs(outcome.conditional_state.norm() - 1.0) > heraldsim::kNormTolerance) {
            violation = "conditional state norm deviates for an outcome";
            break;
        }
    }
    if (result.has_closed_form &&
        std::abs(result.total_probability - result.closed_form) > 1e-9) {
        violation = "simulated total deviates from the closed form";
    }
    if (!violation.empty()) {
        return fail("invariant", violation, ExitCode::kExitInvariantFailure);
    }
    return ExitCode::kExitOk;
}

int cmd_sweep(const std::string& family, int d_min, int d_max,
              const std::vector<std::string>& variants, bool one_shot,
              const std::string& out_path) {
    try {
        const auto rows = heraldsim::run_sweep(family, d_min, d_max, variants, one_shot);
        write_text(out_path, heraldsim::sweep_csv(rows));
        for (const auto& row : rows) {
            if (std::abs(row.simulated - row.closed_form) > 1e-9) {
                return fail("invariant",
                            "sweep row " + row.variant + " d=" + std::to_string(row.d) +
                                " deviates from the closed form",
                            ExitCode::kExitInvariantFailure);
            }
        }
        return ExitCode::kExitOk;
    } catch (const heraldsim::CapacityError& e) {
        return fail("capacity", e.what(), ExitCode::kExitSchemeError);
    } catch (const heraldsim::Error& e) {
        return fail("scheme", e.what(), ExitCode::kExitSchemeError);
    }
}

int cmd_verify(const std::string& json_path, const std::string& fault,
               const std::vector<int>& only) {
    heraldsim::FaultInjection faults;
    if (fault == "dft") {
        faults.perturb_dft = true;
    } else if (fault == "oracle") {
        faults.break_oracle = true;
    } else if (!fault.empty()) {
        return fail("config", "unknown fault: " + fault, ExitCode::kExitConfigError);
    }
    const auto results = heraldsim::run_acceptance(faults, only);
    bool all_passed = true;
    nlohmann::json report = nlohmann::json::array();
    for (const auto& r : results) {
        all_passed = all_passed && r.passed;
        std::printf("[%s] %02d %-24s %s\n", r.passed ? "PASS" : "FAIL", r.index,
                    r.name.c_str(), r.detail.c_str());
        report.push_back({{"index", r.index},
                          {"name", r.name},
                          {"passed", r.passed},
                          {"detail", r.detail}});
    }
    if (!json_path.empty()) {
        nlohmann::json doc = {{"schema_version", heraldsim::kSchemaVersion},
                              {"all_passed", all_passed},
                              {"criteria", report}};
        write_text(json_path, doc.dump(2) + "\n");
    }
    return all_passed ? ExitCode::kExitOk : ExitCode::kExitInvariantFailure;
}

int cmd_emit_plot_data(int figure, int d_max, const std::string& out_path) {
    try {
        write_text(out_path, heraldsim::figure_csv(figure, d_max));
        return ExitCode::kExitOk;
    } catch (const heraldsim::Error& e) {
        return fail("config", e.what(), ExitCode::kExitConfigError);
    }
}

int cmd_show_unitary(int ports, const std::string& out_path) {
    try {
        const auto u = heraldsim::dft_unitary(ports);
        write_text(out_path, heraldsim::unitary_to_json(u).dump(2) + "\n");
        return ExitCode::kExitOk;
    } catch (const heraldsim::Error& e) {
        return fail("config", e.what(), ExitCode::kExitConfigError);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Fock-space simulator for heralded entanglement generation"};
    app.require_subcommand(1);

    std::string config_path;
    auto* simulate = app.add_subcommand("simulate", "run one scheme from a JSON config");
    simulate->add_option("--config", config_path, "path to the JSON run config")->required();

    std::string family;
    int d_min = 2, d_max = 2;
    std::vector<std::string> variants;
    bool one_shot = false;
    std::string sweep_out = "-";
    auto* sweep = app.add_subcommand("sweep", "sweep a scheme family over the dimension");
    sweep->add_option("--kind", family, "scheme family: bell or ghz")->required();
    sweep->add_option("--d-min", d_min, "smallest dimension")->required();
    sweep->add_option("--d-max", d_max, "largest dimension")->required();
    sweep->add_option("--variants", variants, "comma-separated variant list")->delimiter(',');
    sweep->add_flag("--one-shot", one_shot, "apply the one-shot occupancy factors");
    sweep->add_option("--out", sweep_out, "output CSV path (- for stdout)");

    std::string verify_json;
    std::string fault;
    auto* verify = app.add_subcommand("verify", "run the full verification suite");
    verify->add_option("--json", verify_json, "also write a JSON report to this path");
    verify->add_option("--inject-fault", fault, "test hook: dft or oracle")
        ->check(CLI::IsMember({"dft", "oracle"}));
    std::vector<int> verify_only;
    verify->add_option("--criteria", verify_only, "restrict to these criterion indices")
        ->delimiter(',');

    int figure = 6;
    int plot_d_max = 10;
    std::string plot_out = "-";
    auto* plot = app.add_subcommand("emit-plot-data", "emit closed-form probability curves");
    plot->add_option("--figure", figure, "curve family: 6, 7, 8 or 9")->required();
    plot->add_option("--d-max", plot_d_max, "largest dimension (default 10)");
    plot->add_option("--out", plot_out, "output CSV path (- for stdout)");

    int ports = 4;
    std::string unitary_out = "-";
    auto* show = app.add_subcommand("show-unitary", "print a splitter unitary as JSON");
    show->add_option("--ports", ports, "port count of the splitter")->required();
    show->add_option("--out", unitary_out, "output path (- for stdout)");

    CLI11_PARSE(app, argc, argv);

    if (simulate->parsed()) return cmd_simulate(config_path);
    if (sweep->parsed()) return cmd_sweep(family, d_min, d_max, variants, one_shot, sweep_out);
    if (verify->parsed()) return cmd_verify(verify_json, fault, verify_only);
    if (plot->parsed()) return cmd_emit_plot_data(figure, plot_d_max, plot_out);
    if (show->parsed()) return cmd_show_unitary(ports, unitary_out);
    return ExitCode::kExitOk;
}
