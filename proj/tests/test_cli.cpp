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

// Exercises the installed command-line surface end to end: exit codes,
// emitted artifacts and their determinism.

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

struct CliResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

CliResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path out_path =
        fs::temp_directory_path() / ("heraldsim_cli_" + std::to_string(counter++) + ".out");
    const std::string command =
        std::string(HERALDSIM_CLI_PATH) + " " + args + " > " + out_path.string() + " 2>&1";
    const int raw = std::system(command.c_str());
    CliResult result;
    result.exit_code = WEXITSTATUS(raw);
    std::ifstream in(out_path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    result.output = os.str();
    fs::remove(out_path);
    return result;
}

fs::path write_config(const nlohmann::json& config) {
    static int counter = 0;
    const fs::path path =
        fs::temp_directory_path() / ("heraldsim_cfg_" + std::to_string(counter++) + ".json");
    std::ofstream out(path);
    out << config.dump(2);
    return path;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("simulate emits JSON and CSV artifacts") {
    const fs::path json_path = fs::temp_directory_path() / "heraldsim_sim.json";
    const fs::path csv_path = fs::temp_directory_path() / "heraldsim_sim.csv";
    const fs::path config = write_config({{"kind", "qudit-bell-3sms"},
                                          {"d", 3},
                                          {"json_out", json_path.string()},
                                          {"csv_out", csv_path.string()}});
    const CliResult result = run_cli("simulate --config " + config.string());
    CAPTURE(result.output);
    REQUIRE(result.exit_code == 0);

    const nlohmann::json doc = nlohmann::json::parse(slurp(json_path));
    REQUIRE(doc.at("kind").get<std::string>() == "qudit-bell-3sms");
    REQUIRE(doc.at("total_probability").get<double>() ==
            Catch::Approx(4.0 / 81.0).margin(1e-9));

    const std::string csv = slurp(csv_path);
    REQUIRE(csv.find("0.0493827160494") != std::string::npos);

    fs::remove(json_path);
    fs::remove(csv_path);
    fs::remove(config);
}

TEST_CASE("simulate rejects a broken config with exit code 2") {
    const fs::path config = write_config({{"kind", "no-such-scheme"}});
    const CliResult result = run_cli("simulate --config " + config.string());
    REQUIRE(result.exit_code == 2);
    REQUIRE(result.output.find("\"error\"") != std::string::npos);
    fs::remove(config);

    const CliResult missing = run_cli("simulate --config /nonexistent/cfg.json");
    REQUIRE(missing.exit_code == 2);
}

TEST_CASE("simulate rejects invalid scheme parameters with exit code 3") {
    const fs::path config = write_config({{"kind", "qudit-bell-3sms"}, {"d", 0}});
    const CliResult result = run_cli("simulate --config " + config.string());
    REQUIRE(result.exit_code == 3);
    fs::remove(config);

    const fs::path capacity = write_config({{"kind", "qubit-ghz-chain"}, {"n_ghz", 9}});
    const CliResult over = run_cli("simulate --config " + capacity.string());
    REQUIRE(over.exit_code == 3);
    REQUIRE(over.output.find("capacity") != std::string::npos);
    fs::remove(capacity);
}

TEST_CASE("sweep emits matching simulated and closed-form columns") {
    const CliResult result =
        run_cli("sweep --kind ghz --d-min 2 --d-max 3 --variants ghz,ghz-sub");
    REQUIRE(result.exit_code == 0);
    REQUIRE(result.output.find("family,variant,d,one_shot,simulated_p,closed_form_p") == 0);
    REQUIRE(result.output.find("ghz,ghz,2,false,0.046875,0.046875,") != std::string::npos);
    const CliResult repeat =
        run_cli("sweep --kind ghz --d-min 2 --d-max 3 --variants ghz,ghz-sub");
    REQUIRE(repeat.output == result.output);
}

TEST_CASE("sweep rejects out-of-range dimensions with exit code 3") {
    const CliResult result = run_cli("sweep --kind bell --d-min 2 --d-max 9");
    REQUIRE(result.exit_code == 3);
    REQUIRE(result.output.find("bounded at d <= 6") != std::string::npos);
}

TEST_CASE("emit-plot-data output is deterministic and labeled") {
    const CliResult fig6 = run_cli("emit-plot-data --figure 6 --d-max 8");
    REQUIRE(fig6.exit_code == 0);
    REQUIRE(fig6.output.find("d,p_bell,p_bell2,") == 0);
    REQUIRE(run_cli("emit-plot-data --figure 6 --d-max 8").output == fig6.output);
    const CliResult bad = run_cli("emit-plot-data --figure 5");
    REQUIRE(bad.exit_code == 2);
}

TEST_CASE("verify reports per-criterion lines and honors fault injection") {
    const CliResult clean = run_cli("verify --criteria 1,2,10");
    REQUIRE(clean.exit_code == 0);
    REQUIRE(clean.output.find("[PASS] 01 tritter-output") != std::string::npos);
    REQUIRE(clean.output.find("[PASS] 02 quitter-outputs") != std::string::npos);
    REQUIRE(clean.output.find("[PASS] 10 cyclic-shift-invariance") != std::string::npos);

    const CliResult dft_fault = run_cli("verify --inject-fault dft --criteria 12");
    REQUIRE(dft_fault.exit_code == 4);
    REQUIRE(dft_fault.output.find("[FAIL] 12 invariant-suite") != std::string::npos);

    const CliResult oracle_fault = run_cli("verify --inject-fault oracle --criteria 11");
    REQUIRE(oracle_fault.exit_code == 4);
    REQUIRE(oracle_fault.output.find("[FAIL] 11 oracle-equivalence") != std::string::npos);
}

TEST_CASE("show-unitary prints the splitter matrix as JSON") {
    const CliResult result = run_cli("show-unitary --ports 3");
    REQUIRE(result.exit_code == 0);
    const nlohmann::json doc = nlohmann::json::parse(result.output);
    REQUIRE(doc.at("dim").get<int>() == 3);
    REQUIRE(doc.at("provenance").get<std::string>() == "dft");
}
