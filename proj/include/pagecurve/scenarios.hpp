#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pagecurve/gaussian.hpp"
#include "pagecurve/integrator.hpp"
#include "pagecurve/thermo.hpp"

namespace pagecurve {

enum class ModelKind { qubit, oscillator, custom };
enum class Representation { fock, gaussian };

struct ModelSpec {
    ModelKind kind = ModelKind::qubit;
    double epsilon0 = 1.0;                             // qubit gap
    double omega0 = 1.0;                               // oscillator frequency
    Representation representation = Representation::fock; // oscillator only
    int n_max = 40;                                    // fock truncation
    std::string hs_file, s_file;                       // custom model matrices
};

enum class InitialStateKind { excited, ground, gibbs, squeezed_vacuum, matrix_file, covariance };

struct InitialStateSpec {
    InitialStateKind kind = InitialStateKind::ground;
    double beta = 1.0;                  // gibbs
    double delta = 1e-3;                // squeezed_vacuum: sxx = delta, spp = 1/(4 delta)
    double sxx = 0.5, sxp = 0.0, spp = 0.5; // covariance
    std::string path;                   // matrix_file
};

struct OutputSpec {
    std::optional<std::string> trajectory_csv;
    std::optional<std::string> thermo_csv;
    std::optional<std::string> summary_json;
    std::optional<std::string> states_dir; // fock representation only
};

struct ScenarioConfig {
    ModelSpec model;
    BathSpec bath;
    InitialStateSpec initial_state;
    IntegrationControls controls;
    OutputSpec outputs;

    void validate() const; // throws ConfigError naming the offending field
    static ScenarioConfig from_json(const nlohmann::json& j);
    nlohmann::ordered_json to_json() const;
};

// Built-in configurations: fig1_cold, fig1_hot, fig2_cold_1e3, fig2_cold_1e4,
// fig2_hot. Throws ConfigError (listing the valid names) on unknown input.
ScenarioConfig builtin_scenario(const std::string& name);
const std::vector<std::string>& builtin_names();

// Physics checks evaluated over the recorded samples. Tolerances:
// spohn      sigma >= -1e-8 wherever defined
// landauer   -T dS/dt <= -Qdot + 1e-8 (T > 0); Qdot <= 1e-10 (T = 0);
//            plus the implication dS/dt < -1e-10 => Qdot < 0
// endpoints  at T = 0: S(0) <= 1e-12 for pure initial states and
//            S(t_end) <= 1e-6
struct CheckResults {
    bool spohn = true;
    bool landauer = true;
    bool endpoints = true;
    bool rel_entropy_monotone = true; // informational, T > 0
    double steady_state_distance = 0.0;
    int ill_conditioned_samples = 0;

    bool physics_ok() const { return spohn && landauer && endpoints; }
};

struct ScenarioResult {
    std::vector<double> times;
    std::optional<Trajectory> fock_trajectory;       // fock representation
    std::vector<CovarianceState> covariances;        // gaussian representation
    std::vector<ThermoRecord> thermo;
    std::optional<PageSummary> page;
    std::string page_error; // "window-too-short" when no interior maximum
    CheckResults checks;
};

// Run a scenario and write every declared output below out_dir. Partially
// written outputs are removed if the run fails.
ScenarioResult run_scenario(const ScenarioConfig& config,
                            const std::filesystem::path& out_dir);

} // namespace pagecurve
