// Command-line front end: run scenario configurations, inspect Davies
// generators, validate configs. Exit codes: 0 success, 1 I/O or validation
// error, 2 physics check failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>

#include "pagecurve/log.hpp"
#include "pagecurve/matrix_io.hpp"
#include "pagecurve/scenarios.hpp"

namespace {

using namespace pagecurve;

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

void print_check(const char* name, bool ok) {
    std::printf("check %s: %s\n", name, ok ? "pass" : "FAIL");
}

int report_result(const ScenarioResult& result) {
    if (result.page.has_value())
        std::printf("page: t_star=%.6g S_star=%.6g energy_fraction=%.4f\n", result.page->t_star,
                    result.page->S_star, result.page->energy_fraction);
    else
        std::printf("page: %s (no interior entropy maximum)\n", result.page_error.c_str());
    print_check("spohn", result.checks.spohn);
    print_check("landauer", result.checks.landauer);
    print_check("endpoints", result.checks.endpoints);
    std::printf("steady-state distance: %.3g\n", result.checks.steady_state_distance);
    return result.checks.physics_ok() ? 0 : 2;
}

int run_config(const ScenarioConfig& config, const std::string& out_dir) {
    const ScenarioResult result = run_scenario(config, out_dir);
    return report_result(result);
}

int cmd_run(const std::string& config_path, const std::string& out_dir) {
    const ScenarioConfig config = ScenarioConfig::from_json(read_json_file(config_path));
    return run_config(config, out_dir);
}

int cmd_builtin(const std::string& name, const std::string& out_dir, int jobs) {
    if (name == "all") {
        int next = 0;
        const std::vector<std::string>& names = builtin_names();
        std::vector<int> codes(names.size(), 0);
        // Fan out at most `jobs` scenarios at a time; runs are independent.
        while (next < int(names.size())) {
            std::vector<std::pair<int, std::future<int>>> batch;
            for (int k = 0; k < jobs && next < int(names.size()); ++k, ++next) {
                const std::string n = names[next];
                const std::string dir = out_dir + "/" + n;
                batch.emplace_back(next, std::async(std::launch::async, [n, dir]() {
                                       const ScenarioConfig config = builtin_scenario(n);
                                       std::filesystem::create_directories(dir);
                                       std::ofstream cfg(dir + "/config.json");
                                       cfg << config.to_json().dump(2) << "\n";
                                       const ScenarioResult r = run_scenario(config, dir);
                                       return r.checks.physics_ok() ? 0 : 2;
                                   }));
            }
            for (auto& [idx, fut] : batch) {
                codes[idx] = fut.get();
                std::printf("builtin %s: %s\n", names[idx].c_str(),
                            codes[idx] == 0 ? "ok" : "physics check failed");
            }
        }
        int worst = 0;
        for (int c : codes) worst = std::max(worst, c);
        return worst;
    }
    const ScenarioConfig config = builtin_scenario(name);
    std::filesystem::create_directories(out_dir);
    std::ofstream cfg(out_dir + "/config.json");
    if (!cfg) throw std::runtime_error("cannot write " + out_dir + "/config.json");
    cfg << config.to_json().dump(2) << "\n";
    return run_config(config, out_dir);
}

int cmd_validate(const std::string& config_path) {
    const ScenarioConfig config = ScenarioConfig::from_json(read_json_file(config_path));
    std::cout << config.to_json().dump(2) << "\n";
    return 0;
}

int cmd_davies_inspect(const std::string& hs_path, const std::string& s_path, double temperature,
                       double gamma, double degeneracy_tol) {
    const HermitianOperator h(load_matrix(hs_path), 1e-10);
    const HermitianOperator s(load_matrix(s_path), 1e-10);
    const BathSpec bath{temperature, gamma};
    const GKLSGenerator gen =
        degeneracy_tol > 0.0 ? build_generator(h, s, bath, degeneracy_tol)
                             : build_generator(h, s, bath);
    nlohmann::ordered_json j;
    j["dim"] = gen.dim();
    j["temperature"] = temperature;
    j["coupling_strength"] = gamma;
    nlohmann::ordered_json channels = nlohmann::ordered_json::array();
    for (const JumpChannel& ch : gen.channels()) {
        channels.push_back({{"omega", ch.bohr_frequency},
                            {"rate", ch.rate},
                            {"operator_norm", ch.op.norm()}});
    }
    j["channels"] = std::move(channels);
    std::cout << j.dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Markovian open-system entropy dynamics: Davies generators, Page curves and "
                 "thermodynamic checks"};
    app.require_subcommand(1);

    std::string config_path, out_dir, name;
    std::string hs_path, s_path;
    double temperature = 0.0, gamma = 0.0, degeneracy_tol = 0.0;
    int jobs = 1;

    CLI::App* run = app.add_subcommand("run", "Run a scenario config and write its outputs");
    run->add_option("config", config_path, "Scenario config JSON")->required();
    run->add_option("out_dir", out_dir, "Output directory")->required();

    CLI::App* builtin =
        app.add_subcommand("builtin", "Run a built-in scenario (or 'all') by name");
    builtin->add_option("name", name, "Built-in name or 'all'")->required();
    builtin->add_option("out_dir", out_dir, "Output directory")->required();
    builtin->add_option("--jobs", jobs, "Parallel built-in runs (with 'all')")
        ->check(CLI::PositiveNumber);

    CLI::App* inspect = app.add_subcommand(
        "davies-inspect", "Print the jump channels built from H_S and S as JSON");
    inspect->add_option("--hs", hs_path, "Hamiltonian matrix file")->required();
    inspect->add_option("--s", s_path, "Coupling operator matrix file")->required();
    inspect->add_option("--temp", temperature, "Bath temperature (>= 0)")->required();
    inspect->add_option("--gamma", gamma, "Coupling strength (> 0)")->required();
    inspect->add_option("--degeneracy-tol", degeneracy_tol,
                        "Bohr frequency clustering tolerance (default 1e-9 max|H|)");

    CLI::App* validate =
        app.add_subcommand("validate", "Parse a config, check invariants, print it normalized");
    validate->add_option("config", config_path, "Scenario config JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (run->parsed()) return cmd_run(config_path, out_dir);
        if (builtin->parsed()) return cmd_builtin(name, out_dir, jobs);
        if (inspect->parsed())
            return cmd_davies_inspect(hs_path, s_path, temperature, gamma, degeneracy_tol);
        if (validate->parsed()) return cmd_validate(config_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
