#include "pagecurve/scenarios.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "pagecurve/log.hpp"
#include "pagecurve/matrix_io.hpp"

namespace pagecurve {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// All numeric CSV output carries 17 significant digits so that reruns are
// bit-identical; non-finite values (undefined sigma, infinite relative
// entropy) serialize as the literal "nan".
std::string fmt17(double x) {
    if (!std::isfinite(x)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> known,
                         const std::string& where) {
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* k : known) ok |= item.key() == k;
        if (!ok) throw ConfigError(where + ": unknown key '" + item.key() + "'");
    }
}

double require_number(const nlohmann::json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw ConfigError(where + "." + key + ": required number");
    return j.at(key).get<double>();
}

std::string require_string(const nlohmann::json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j.at(key).is_string())
        throw ConfigError(where + "." + key + ": required string");
    return j.at(key).get<std::string>();
}

} // namespace

void ScenarioConfig::validate() const {
    try {
        bath.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    switch (model.kind) {
    case ModelKind::qubit:
        if (!(model.epsilon0 > 0.0)) throw ConfigError("model.epsilon0 must be > 0");
        break;
    case ModelKind::oscillator:
        if (!(model.omega0 > 0.0)) throw ConfigError("model.omega0 must be > 0");
        if (model.representation == Representation::fock && model.n_max < 2)
            throw ConfigError("model.n_max must be >= 2");
        break;
    case ModelKind::custom:
        if (model.hs_file.empty() || model.s_file.empty())
            throw ConfigError("model.hs_file and model.s_file are required");
        break;
    }
    if (model.representation == Representation::gaussian) {
        if (model.kind != ModelKind::oscillator)
            throw ConfigError("model.representation 'gaussian' requires the oscillator model");
        if (initial_state.kind != InitialStateKind::squeezed_vacuum &&
            initial_state.kind != InitialStateKind::covariance)
            throw ConfigError("model.representation 'gaussian' requires a squeezed_vacuum or "
                              "covariance initial state");
        if (outputs.states_dir.has_value())
            throw ConfigError("outputs.states_dir requires the fock representation");
    }
    switch (initial_state.kind) {
    case InitialStateKind::excited:
        if (model.kind != ModelKind::qubit)
            throw ConfigError("initial_state 'excited' requires the qubit model");
        break;
    case InitialStateKind::gibbs:
        if (!(initial_state.beta >= 0.0))
            throw ConfigError("initial_state.beta must be >= 0");
        break;
    case InitialStateKind::squeezed_vacuum:
        if (model.kind != ModelKind::oscillator)
            throw ConfigError("initial_state 'squeezed_vacuum' requires the oscillator model");
        if (!(initial_state.delta > 0.0))
            throw ConfigError("initial_state.delta must be > 0");
        break;
    case InitialStateKind::covariance:
        if (model.kind != ModelKind::oscillator)
            throw ConfigError("initial_state 'covariance' requires the oscillator model");
        if (CovarianceState(initial_state.sxx, initial_state.sxp, initial_state.spp).det() <
            0.25 - 1e-12)
            throw ConfigError("initial_state covariance below the Heisenberg bound");
        break;
    case InitialStateKind::matrix_file:
        if (initial_state.path.empty()) throw ConfigError("initial_state.path is required");
        break;
    case InitialStateKind::ground:
        break;
    }
    try {
        controls.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

ScenarioConfig ScenarioConfig::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    reject_unknown_keys(j, {"model", "bath", "initial_state", "controls", "outputs"}, "config");
    if (!j.contains("model") || !j.contains("bath") || !j.contains("initial_state"))
        throw ConfigError("config: model, bath and initial_state are required");

    ScenarioConfig c;

    const auto& jm = j.at("model");
    const std::string mtype = require_string(jm, "type", "model");
    if (mtype == "qubit") {
        reject_unknown_keys(jm, {"type", "epsilon0"}, "model");
        c.model.kind = ModelKind::qubit;
        c.model.epsilon0 = require_number(jm, "epsilon0", "model");
    } else if (mtype == "oscillator") {
        reject_unknown_keys(jm, {"type", "omega0", "representation", "n_max"}, "model");
        c.model.kind = ModelKind::oscillator;
        c.model.omega0 = require_number(jm, "omega0", "model");
        const std::string rep = require_string(jm, "representation", "model");
        if (rep == "gaussian") {
            c.model.representation = Representation::gaussian;
            if (jm.contains("n_max"))
                throw ConfigError("model.n_max only applies to the fock representation");
        } else if (rep == "fock") {
            c.model.representation = Representation::fock;
            c.model.n_max = int(require_number(jm, "n_max", "model"));
        } else {
            throw ConfigError("model.representation must be 'gaussian' or 'fock'");
        }
    } else if (mtype == "custom") {
        reject_unknown_keys(jm, {"type", "hs_file", "s_file"}, "model");
        c.model.kind = ModelKind::custom;
        c.model.hs_file = require_string(jm, "hs_file", "model");
        c.model.s_file = require_string(jm, "s_file", "model");
    } else {
        throw ConfigError("model.type must be 'qubit', 'oscillator' or 'custom'");
    }

    const auto& jb = j.at("bath");
    reject_unknown_keys(jb, {"temperature", "coupling_strength"}, "bath");
    c.bath.temperature = require_number(jb, "temperature", "bath");
    c.bath.coupling_strength = require_number(jb, "coupling_strength", "bath");

    const auto& ji = j.at("initial_state");
    const std::string itype = require_string(ji, "type", "initial_state");
    if (itype == "excited") {
        reject_unknown_keys(ji, {"type"}, "initial_state");
        c.initial_state.kind = InitialStateKind::excited;
    } else if (itype == "ground") {
        reject_unknown_keys(ji, {"type"}, "initial_state");
        c.initial_state.kind = InitialStateKind::ground;
    } else if (itype == "gibbs") {
        reject_unknown_keys(ji, {"type", "beta"}, "initial_state");
        c.initial_state.kind = InitialStateKind::gibbs;
        c.initial_state.beta = require_number(ji, "beta", "initial_state");
    } else if (itype == "squeezed_vacuum") {
        reject_unknown_keys(ji, {"type", "delta"}, "initial_state");
        c.initial_state.kind = InitialStateKind::squeezed_vacuum;
        c.initial_state.delta = require_number(ji, "delta", "initial_state");
    } else if (itype == "matrix_file") {
        reject_unknown_keys(ji, {"type", "path"}, "initial_state");
        c.initial_state.kind = InitialStateKind::matrix_file;
        c.initial_state.path = require_string(ji, "path", "initial_state");
    } else if (itype == "covariance") {
        reject_unknown_keys(ji, {"type", "sxx", "sxp", "spp"}, "initial_state");
        c.initial_state.kind = InitialStateKind::covariance;
        c.initial_state.sxx = require_number(ji, "sxx", "initial_state");
        c.initial_state.sxp = require_number(ji, "sxp", "initial_state");
        c.initial_state.spp = require_number(ji, "spp", "initial_state");
    } else {
        throw ConfigError("initial_state.type must be one of excited, ground, gibbs, "
                          "squeezed_vacuum, matrix_file, covariance");
    }

    // Controls are optional; t_end defaults to 20/gamma and record_stride to
    // a grid of ~2000 samples.
    c.controls.t_end = 20.0 / c.bath.coupling_strength;
    if (j.contains("controls")) {
        const auto& jc = j.at("controls");
        reject_unknown_keys(
            jc, {"t_end", "dt_init", "rel_tol", "abs_tol", "record_stride", "leak_threshold"},
            "controls");
        if (jc.contains("t_end")) c.controls.t_end = require_number(jc, "t_end", "controls");
        if (jc.contains("dt_init")) c.controls.dt_init = require_number(jc, "dt_init", "controls");
        if (jc.contains("rel_tol")) c.controls.rel_tol = require_number(jc, "rel_tol", "controls");
        if (jc.contains("abs_tol")) c.controls.abs_tol = require_number(jc, "abs_tol", "controls");
        if (jc.contains("record_stride"))
            c.controls.record_stride = int(require_number(jc, "record_stride", "controls"));
        if (jc.contains("leak_threshold"))
            c.controls.leak_threshold = require_number(jc, "leak_threshold", "controls");
        else if (c.model.kind != ModelKind::oscillator ||
                 c.model.representation != Representation::fock)
            c.controls.leak_threshold = 2.0; // no truncation semantics
        if (!jc.contains("record_stride"))
            c.controls.record_stride = std::max(
                1, int(std::lround(c.controls.t_end / (2000.0 * c.controls.dt_init))));
    } else {
        if (c.model.kind != ModelKind::oscillator ||
            c.model.representation != Representation::fock)
            c.controls.leak_threshold = 2.0;
        c.controls.record_stride =
            std::max(1, int(std::lround(c.controls.t_end / (2000.0 * c.controls.dt_init))));
    }

    if (j.contains("outputs")) {
        const auto& jo = j.at("outputs");
        reject_unknown_keys(jo, {"trajectory_csv", "thermo_csv", "summary_json", "states_dir"},
                            "outputs");
        if (jo.contains("trajectory_csv"))
            c.outputs.trajectory_csv = require_string(jo, "trajectory_csv", "outputs");
        if (jo.contains("thermo_csv"))
            c.outputs.thermo_csv = require_string(jo, "thermo_csv", "outputs");
        if (jo.contains("summary_json"))
            c.outputs.summary_json = require_string(jo, "summary_json", "outputs");
        if (jo.contains("states_dir"))
            c.outputs.states_dir = require_string(jo, "states_dir", "outputs");
    }

    c.validate();
    return c;
}

nlohmann::ordered_json ScenarioConfig::to_json() const {
    nlohmann::ordered_json j;
    switch (model.kind) {
    case ModelKind::qubit:
        j["model"] = {{"type", "qubit"}, {"epsilon0", model.epsilon0}};
        break;
    case ModelKind::oscillator:
        if (model.representation == Representation::gaussian)
            j["model"] = {{"type", "oscillator"}, {"omega0", model.omega0},
                          {"representation", "gaussian"}};
        else
            j["model"] = {{"type", "oscillator"}, {"omega0", model.omega0},
                          {"representation", "fock"}, {"n_max", model.n_max}};
        break;
    case ModelKind::custom:
        j["model"] = {{"type", "custom"}, {"hs_file", model.hs_file}, {"s_file", model.s_file}};
        break;
    }
    j["bath"] = {{"temperature", bath.temperature},
                 {"coupling_strength", bath.coupling_strength}};
    switch (initial_state.kind) {
    case InitialStateKind::excited:
        j["initial_state"] = {{"type", "excited"}};
        break;
    case InitialStateKind::ground:
        j["initial_state"] = {{"type", "ground"}};
        break;
    case InitialStateKind::gibbs:
        j["initial_state"] = {{"type", "gibbs"}, {"beta", initial_state.beta}};
        break;
    case InitialStateKind::squeezed_vacuum:
        j["initial_state"] = {{"type", "squeezed_vacuum"}, {"delta", initial_state.delta}};
        break;
    case InitialStateKind::matrix_file:
        j["initial_state"] = {{"type", "matrix_file"}, {"path", initial_state.path}};
        break;
    case InitialStateKind::covariance:
        j["initial_state"] = {{"type", "covariance"}, {"sxx", initial_state.sxx},
                              {"sxp", initial_state.sxp}, {"spp", initial_state.spp}};
        break;
    }
    j["controls"] = {{"t_end", controls.t_end},
                     {"dt_init", controls.dt_init},
                     {"rel_tol", controls.rel_tol},
                     {"abs_tol", controls.abs_tol},
                     {"record_stride", controls.record_stride},
                     {"leak_threshold", controls.leak_threshold}};
    nlohmann::ordered_json jo = nlohmann::ordered_json::object();
    if (outputs.trajectory_csv) jo["trajectory_csv"] = *outputs.trajectory_csv;
    if (outputs.thermo_csv) jo["thermo_csv"] = *outputs.thermo_csv;
    if (outputs.summary_json) jo["summary_json"] = *outputs.summary_json;
    if (outputs.states_dir) jo["states_dir"] = *outputs.states_dir;
    j["outputs"] = std::move(jo);
    return j;
}

const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names = {"fig1_cold", "fig1_hot", "fig2_cold_1e3",
                                                   "fig2_cold_1e4", "fig2_hot"};
    return names;
}

ScenarioConfig builtin_scenario(const std::string& name) {
    ScenarioConfig c;
    c.bath.coupling_strength = 0.01;
    c.controls.t_end = 2000.0; // 20/gamma
    c.controls.dt_init = 0.1;
    c.controls.rel_tol = 1e-9;
    c.controls.abs_tol = 1e-11;
    c.controls.record_stride = 10; // samples every 1.0 time units
    c.outputs.trajectory_csv = "trajectory.csv";
    c.outputs.thermo_csv = "thermo.csv";
    c.outputs.summary_json = "summary.json";

    if (name == "fig1_cold" || name == "fig1_hot") {
        c.model.kind = ModelKind::qubit;
        c.model.epsilon0 = 1.0;
        c.bath.temperature = name == "fig1_hot" ? 1.0 : 0.0;
        // The hot scenario starts from the ground state so its entropy rises
        // monotonically to the thermal value; an excited start would pass
        // through the fully mixed state and peak at ln 2 instead.
        c.initial_state.kind =
            name == "fig1_hot" ? InitialStateKind::ground : InitialStateKind::excited;
        c.controls.leak_threshold = 2.0; // qubit: no truncation to monitor
    } else if (name == "fig2_cold_1e3" || name == "fig2_cold_1e4" || name == "fig2_hot") {
        c.model.kind = ModelKind::oscillator;
        c.model.omega0 = 1.0;
        c.model.representation = Representation::gaussian;
        c.bath.temperature = name == "fig2_hot" ? 10.0 : 0.0;
        c.initial_state.kind = InitialStateKind::squeezed_vacuum;
        c.initial_state.delta = name == "fig2_cold_1e4" ? 1e-4 : 1e-3;
    } else {
        std::string msg = "unknown builtin '" + name + "'; valid names:";
        for (const auto& n : builtin_names()) msg += " " + n;
        throw ConfigError(msg);
    }
    c.validate();
    return c;
}

namespace {

struct GaussianRates {
    double gamma_minus = 0.0, gamma_plus = 0.0;
    double kappa() const { return gamma_minus - gamma_plus; }
    double steady_variance() const { return (gamma_minus + gamma_plus) / (2.0 * kappa()); }
};

GaussianRates gaussian_rates(double omega0, const BathSpec& bath) {
    GaussianRates r;
    r.gamma_minus = thermal_rate(+omega0, bath, omega0);
    const double up = bath.zero_temperature() ? 0.0 : thermal_rate(-omega0, bath, omega0);
    r.gamma_plus = up;
    return r;
}

bool initial_state_is_pure(const ScenarioConfig& cfg, const std::optional<DensityMatrix>& rho0) {
    switch (cfg.initial_state.kind) {
    case InitialStateKind::excited:
    case InitialStateKind::ground:
    case InitialStateKind::squeezed_vacuum:
        return true;
    case InitialStateKind::gibbs:
        return false;
    case InitialStateKind::covariance: {
        CovarianceState s(cfg.initial_state.sxx, cfg.initial_state.sxp, cfg.initial_state.spp);
        return s.det() <= 0.25 + 1e-9;
    }
    case InitialStateKind::matrix_file: {
        if (!rho0.has_value()) return false;
        const double purity = (rho0->matrix() * rho0->matrix()).trace().real();
        return purity > 1.0 - 1e-10;
    }
    }
    return false;
}

std::vector<double> sample_times(const IntegrationControls& controls) {
    std::vector<double> times;
    const double interval = controls.record_interval();
    const auto n = static_cast<long>(std::floor(controls.t_end / interval + 1e-9));
    for (long j = 0; j <= n; ++j) times.push_back(double(j) * interval);
    if (times.back() < controls.t_end * (1.0 - 1e-12)) times.push_back(controls.t_end);
    return times;
}

CheckResults evaluate_checks(const std::vector<ThermoRecord>& records, const BathSpec& bath,
                             bool initial_pure) {
    CheckResults out;
    const bool cold = bath.zero_temperature();
    for (size_t i = 0; i < records.size(); ++i) {
        const ThermoRecord& r = records[i];
        if (r.entropy_production.has_value() && *r.entropy_production < -1e-8) out.spohn = false;
        if (cold) {
            if (r.heat_current > 1e-10) out.landauer = false;
        } else {
            if (r.landauer_lhs > r.landauer_rhs + 1e-8) out.landauer = false;
        }
        // dS/dt < 0 must be exothermic.
        if (r.entropy_rate < -1e-10 && !(r.heat_current < 0.0)) out.landauer = false;
        if (!cold && i > 0 && std::isfinite(records[i - 1].relative_entropy) &&
            r.relative_entropy > records[i - 1].relative_entropy + 1e-8)
            out.rel_entropy_monotone = false;
        if (r.ill_conditioned) ++out.ill_conditioned_samples;
    }
    if (cold) {
        if (initial_pure && records.front().entropy > 1e-12) out.endpoints = false;
        if (records.back().entropy > 1e-6) out.endpoints = false;
    }
    return out;
}

void write_fock_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "t,trace_err,min_eig,top_pop\n";
    for (size_t i = 0; i < traj.times.size(); ++i)
        out << fmt17(traj.times[i]) << ',' << fmt17(traj.health[i].trace_error) << ','
            << fmt17(traj.health[i].min_eigenvalue) << ','
            << fmt17(traj.health[i].top_level_population) << '\n';
}

void write_gaussian_trajectory_csv(const std::filesystem::path& path,
                                   const std::vector<double>& times,
                                   const std::vector<CovarianceState>& covs, double omega0) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "t,sxx,sxp,spp,lambda,S,E\n";
    for (size_t i = 0; i < times.size(); ++i) {
        const CovarianceState& s = covs[i];
        const double lambda = symplectic_eigenvalue(s);
        out << fmt17(times[i]) << ',' << fmt17(s.sxx) << ',' << fmt17(s.sxp) << ','
            << fmt17(s.spp) << ',' << fmt17(lambda) << ','
            << fmt17(gaussian_entropy_from_symplectic(lambda)) << ','
            << fmt17(omega0 * 0.5 * (s.sxx + s.spp)) << '\n';
    }
}

void write_thermo_csv(const std::filesystem::path& path,
                      const std::vector<ThermoRecord>& records) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "t,S,E,Qdot,sigma,relS,landauer_lhs,landauer_rhs\n";
    for (const ThermoRecord& r : records) {
        const double sigma = r.entropy_production.value_or(
            std::numeric_limits<double>::quiet_NaN());
        out << fmt17(r.t) << ',' << fmt17(r.entropy) << ',' << fmt17(r.energy) << ','
            << fmt17(r.heat_current) << ',' << fmt17(sigma) << ',' << fmt17(r.relative_entropy)
            << ',' << fmt17(r.landauer_lhs) << ',' << fmt17(r.landauer_rhs) << '\n';
    }
}

void write_summary_json(const std::filesystem::path& path, const ScenarioResult& result) {
    nlohmann::ordered_json j;
    if (result.page.has_value()) {
        j["t_star"] = result.page->t_star;
        j["S_star"] = result.page->S_star;
        j["energy_fraction"] = result.page->energy_fraction;
    } else {
        j["t_star"] = nullptr;
        j["S_star"] = nullptr;
        j["energy_fraction"] = nullptr;
        j["page_error"] = result.page_error;
    }
    j["checks"] = {{"spohn", result.checks.spohn},
                   {"landauer", result.checks.landauer},
                   {"endpoints", result.checks.endpoints}};
    j["rel_entropy_monotone"] = result.checks.rel_entropy_monotone;
    j["steady_state_distance"] = result.checks.steady_state_distance;
    j["ill_conditioned_samples"] = result.checks.ill_conditioned_samples;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

// Thermodynamic records along the covariance fast path, all in closed form.
std::vector<ThermoRecord> gaussian_thermo(const std::vector<double>& times,
                                          const std::vector<CovarianceState>& covs,
                                          const CovarianceState& sigma0, double omega0,
                                          const GaussianRates& rates, const BathSpec& bath) {
    const double kappa = rates.kappa();
    const double s_inf = rates.steady_variance();
    const double e_inf = omega0 * s_inf;
    const double tr_delta = sigma0.sxx + sigma0.spp - 2.0 * s_inf;
    const double det_delta =
        (sigma0.sxx - s_inf) * (sigma0.spp - s_inf) - sigma0.sxp * sigma0.sxp;
    const double nbar_inf = s_inf - 0.5;

    std::vector<ThermoRecord> records;
    records.reserve(times.size());
    for (size_t i = 0; i < times.size(); ++i) {
        const CovarianceState& s = covs[i];
        const double u = std::exp(-kappa * times[i]);
        const double lambda = symplectic_eigenvalue(s);

        ThermoRecord rec;
        rec.t = times[i];
        rec.entropy = gaussian_entropy_from_symplectic(lambda);
        rec.energy = omega0 * 0.5 * (s.sxx + s.spp);
        rec.heat_current = -kappa * (rec.energy - e_inf);

        // d(det)/dt from det(t) = s_inf^2 + s_inf u tr(Delta) + u^2 det(Delta).
        const double det_dot = -kappa * u * (s_inf * tr_delta + 2.0 * u * det_delta);
        const double lambda_dot = det_dot / (2.0 * lambda);
        const double nu = lambda - 0.5;
        rec.ill_conditioned = nu < kClipFloor;
        rec.entropy_rate = std::log((lambda + 0.5) / std::max(nu, kClipFloor)) * lambda_dot;

        rec.entropy_production = entropy_production(rec.entropy_rate, rec.heat_current, bath);
        std::tie(rec.landauer_lhs, rec.landauer_rhs) =
            landauer_margins(rec.entropy_rate, rec.heat_current, bath);

        if (bath.zero_temperature()) {
            const bool at_vacuum = nu <= 1e-15 && std::abs(rec.energy - e_inf) <= 1e-15;
            rec.relative_entropy = at_vacuum ? 0.0 : kInf;
        } else {
            // S(rho|tau) against the thermal steady state, via
            // tr rho ln tau = <n> ln(nbar/(1+nbar)) - ln(1+nbar).
            const double occ = s.mean_occupation();
            rec.relative_entropy = std::max(
                -rec.entropy + std::log(1.0 + nbar_inf) -
                    occ * std::log(nbar_inf / (1.0 + nbar_inf)),
                0.0);
        }
        records.push_back(rec);
    }
    return records;
}

} // namespace

ScenarioResult run_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir) {
    config.validate();
    std::filesystem::create_directories(out_dir);

    std::vector<std::filesystem::path> written;
    auto cleanup = [&written]() {
        for (const auto& p : written) {
            std::error_code ec;
            std::filesystem::remove_all(p, ec);
        }
    };

    try {
        ScenarioResult result;
        result.times = sample_times(config.controls);

        if (config.model.kind == ModelKind::oscillator &&
            config.model.representation == Representation::gaussian) {
            // Covariance fast path: closed-form evolution sampled on the grid.
            const GaussianRates rates = gaussian_rates(config.model.omega0, config.bath);
            CovarianceState sigma0 =
                config.initial_state.kind == InitialStateKind::squeezed_vacuum
                    ? CovarianceState(config.initial_state.delta, 0.0,
                                      0.25 / config.initial_state.delta)
                    : CovarianceState(config.initial_state.sxx, config.initial_state.sxp,
                                      config.initial_state.spp);
            result.covariances.reserve(result.times.size());
            for (const double t : result.times)
                result.covariances.push_back(evolve_covariance(
                    sigma0, config.model.omega0, rates.gamma_minus, rates.gamma_plus, t));
            result.thermo = gaussian_thermo(result.times, result.covariances, sigma0,
                                            config.model.omega0, rates, config.bath);
            result.checks =
                evaluate_checks(result.thermo, config.bath, initial_state_is_pure(config, {}));
            const CovarianceState& last = result.covariances.back();
            const double s_inf = rates.steady_variance();
            result.checks.steady_state_distance =
                std::max({std::abs(last.sxx - s_inf), std::abs(last.sxp),
                          std::abs(last.spp - s_inf)});
        } else {
            // Dense path: Davies construction plus adaptive integration.
            HermitianOperator h = [&]() -> HermitianOperator {
                switch (config.model.kind) {
                case ModelKind::qubit:
                    return HermitianOperator(0.5 * config.model.epsilon0 * pauli(Pauli::z));
                case ModelKind::oscillator:
                    return HermitianOperator(config.model.omega0 *
                                             ladder(config.model.n_max, Ladder::number));
                default:
                    return HermitianOperator(load_matrix(config.model.hs_file), 1e-10);
                }
            }();
            HermitianOperator coupling = [&]() -> HermitianOperator {
                switch (config.model.kind) {
                case ModelKind::qubit:
                    return HermitianOperator(pauli(Pauli::x));
                case ModelKind::oscillator:
                    return HermitianOperator(ladder(config.model.n_max, Ladder::lower) +
                                             ladder(config.model.n_max, Ladder::raise));
                default:
                    return HermitianOperator(load_matrix(config.model.s_file), 1e-10);
                }
            }();
            const GKLSGenerator gen = build_generator(h, coupling, config.bath);

            DensityMatrix rho0 = [&]() -> DensityMatrix {
                switch (config.initial_state.kind) {
                case InitialStateKind::excited: {
                    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
                    m(0, 0) = 1.0; // excited state first in the qubit basis
                    return DensityMatrix(std::move(m));
                }
                case InitialStateKind::ground:
                    return ground_state_projector(h);
                case InitialStateKind::gibbs:
                    return gibbs_state(h, config.initial_state.beta);
                case InitialStateKind::squeezed_vacuum:
                    return fock_projector_oracle(
                        CovarianceState(config.initial_state.delta, 0.0,
                                        0.25 / config.initial_state.delta),
                        config.model.n_max);
                case InitialStateKind::covariance:
                    return fock_projector_oracle(
                        CovarianceState(config.initial_state.sxx, config.initial_state.sxp,
                                        config.initial_state.spp),
                        config.model.n_max);
                default:
                    return DensityMatrix(load_matrix(config.initial_state.path));
                }
            }();

            result.fock_trajectory = evolve(gen, rho0, config.controls);
            const Trajectory& traj = *result.fock_trajectory;
            result.times = traj.times;

            const DensityMatrix tau = config.bath.zero_temperature()
                                          ? ground_state_projector(h)
                                          : gibbs_state(h, config.bath.beta());
            result.thermo.reserve(traj.times.size());
            for (size_t i = 0; i < traj.times.size(); ++i)
                result.thermo.push_back(
                    make_thermo_record(gen, traj.states[i], tau, traj.times[i]));
            result.checks = evaluate_checks(result.thermo, config.bath,
                                            initial_state_is_pure(config, rho0));
            result.checks.steady_state_distance =
                max_abs(traj.states.back().matrix() - tau.matrix());
        }

        std::vector<std::pair<double, double>> S, E;
        for (const ThermoRecord& r : result.thermo) {
            S.emplace_back(r.t, r.entropy);
            E.emplace_back(r.t, r.energy);
        }
        try {
            result.page = page_summary(S, E);
        } catch (const WindowTooShortError&) {
            result.page_error = "window-too-short";
        }

        if (config.outputs.trajectory_csv) {
            const auto path = out_dir / *config.outputs.trajectory_csv;
            std::filesystem::create_directories(path.parent_path());
            written.push_back(path);
            if (result.fock_trajectory)
                write_fock_trajectory_csv(path, *result.fock_trajectory);
            else
                write_gaussian_trajectory_csv(path, result.times, result.covariances,
                                              config.model.omega0);
            log::info("wrote %s", path.c_str());
        }
        if (config.outputs.thermo_csv) {
            const auto path = out_dir / *config.outputs.thermo_csv;
            std::filesystem::create_directories(path.parent_path());
            written.push_back(path);
            write_thermo_csv(path, result.thermo);
            log::info("wrote %s", path.c_str());
        }
        if (config.outputs.summary_json) {
            const auto path = out_dir / *config.outputs.summary_json;
            std::filesystem::create_directories(path.parent_path());
            written.push_back(path);
            write_summary_json(path, result);
            log::info("wrote %s", path.c_str());
        }
        if (config.outputs.states_dir && result.fock_trajectory) {
            const auto dir = out_dir / *config.outputs.states_dir;
            std::filesystem::create_directories(dir);
            written.push_back(dir);
            const std::string basis = config.model.kind == ModelKind::qubit
                                          ? "qubit: index 0 = excited (sigma_z = +1)"
                                          : "fock: index 0 = vacuum";
            const Trajectory& traj = *result.fock_trajectory;
            for (size_t i = 0; i < traj.states.size(); ++i) {
                char name[32];
                std::snprintf(name, sizeof(name), "state_%06zu.json", i);
                save_matrix(dir / name, traj.states[i].matrix(), basis);
            }
        }
        return result;
    } catch (...) {
        cleanup();
        throw;
    }
}

} // namespace pagecurve
