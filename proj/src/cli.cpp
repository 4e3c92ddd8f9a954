#include "qtime/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "qtime/fock.hpp"

namespace qtime::cli {

namespace {

using nlohmann::json;
using std::numbers::pi;

struct Artifact {
    std::string body;
    std::string summary;
};

std::vector<double> linspace(double start, double stop, int steps)
{
    if (steps < 1) {
        throw Error(ErrorKind::invalid_parameter, "--steps must be at least 1");
    }
    std::vector<double> values(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i <= steps; ++i) {
        values[i] = start + (stop - start) * i / steps;
    }
    return values;
}

json complex_json(complex_t z)
{
    return json::array({z.real(), z.imag()});
}

std::string summary_number(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// --- subcommand bodies -----------------------------------------------------

struct FockCheckArgs {
    int dim = 32;
    double omega = 1.0;
    double alpha = 2.0;
    double time = 0.5 * pi;
};

Artifact fock_check(const FockCheckArgs& args)
{
    const fock::FockBasis basis(args.dim);
    const auto ladder = fock::ladder_operators(basis);
    const auto h = fock::oscillator_hamiltonian(basis, args.omega);

    const Eigen::MatrixXcd defect =
        fock::commutator(ladder.a, ladder.a_dag).entries() - Eigen::MatrixXcd::Identity(args.dim, args.dim);
    double off_edge = 0.0;
    for (int i = 0; i < args.dim; ++i) {
        for (int j = 0; j < args.dim; ++j) {
            if (i != args.dim - 1 || j != args.dim - 1) {
                off_edge = std::max(off_edge, std::abs(defect(i, j)));
            }
        }
    }
    const Eigen::MatrixXcd ladder_residual =
        fock::commutator(h, ladder.a).entries() + args.omega * ladder.a.entries();

    const auto psi = fock::coherent_state(args.alpha, basis);
    const auto evolved = fock::evolve(h, psi, args.time);

    json doc;
    doc["dim"] = args.dim;
    doc["omega"] = args.omega;
    doc["commutator_edge_entry"] = fock::commutator(ladder.a, ladder.a_dag).entries()(args.dim - 1, args.dim - 1).real();
    doc["commutator_defect_edge_entry"] = defect(args.dim - 1, args.dim - 1).real();
    doc["commutator_defect_max_off_edge"] = off_edge;
    doc["hamiltonian_ladder_residual_max"] = ladder_residual.cwiseAbs().maxCoeff();
    doc["coherent"] = {
        {"alpha", args.alpha},
        {"time", args.time},
        {"mean_number", fock::expectation(ladder.n_op, psi).real()},
        {"a_expectation", complex_json(fock::expectation(ladder.a, psi))},
        {"evolved_a_expectation", complex_json(fock::expectation(ladder.a, evolved))},
        {"norm_drift", std::abs(evolved.norm() - 1.0)},
    };
    return {doc.dump(2) + "\n", "fock-check dim=" + std::to_string(args.dim) + " edge defect " +
                                    summary_number(defect(args.dim - 1, args.dim - 1).real())};
}

struct PhaseDefectArgs {
    int dim = 64;
    int half_dim = 32;
};

Artifact phase_defect(const PhaseDefectArgs& args)
{
    const auto sg = phase::isometry_defect(phase::sg_phase_operator(fock::FockBasis(args.dim)));
    const auto ext = phase::isometry_defect(phase::extended_phase_operator(phase::DoubledBasis(args.half_dim)));

    json doc;
    doc["sg_phase_operator"] = to_json(sg);
    doc["sg_phase_operator"]["dim"] = args.dim;
    doc["extended_phase_operator"] = to_json(ext);
    doc["extended_phase_operator"]["half_dim"] = args.half_dim;
    return {doc.dump(2) + "\n", "phase-defect sg rank " + std::to_string(sg.rank) + " norm " +
                                    summary_number(sg.norm) + "; extended norm " + summary_number(ext.norm)};
}

struct PhaseEvolveArgs {
    int half_dim = 48;
    double omega = 1.0;
    double amplitude = 2.0;
    double theta = 0.0;
    std::string subspace = "plus";
    double t_max = 2.0 * pi;
    int steps = 100;
};

Artifact phase_evolve(const PhaseEvolveArgs& args)
{
    const phase::DoubledBasis basis(args.half_dim);
    const auto target = args.subspace == "plus" ? phase::Subspace::plus : phase::Subspace::minus;
    const auto coherent = fock::coherent_state(std::polar(args.amplitude, args.theta), fock::FockBasis(args.half_dim));
    const auto psi0 = phase::embed(coherent, basis, target);
    const auto trajectory = phase::phase_trajectory(basis, args.omega, psi0, linspace(0.0, args.t_max, args.steps));

    std::ostringstream os;
    write_phase_csv(os, trajectory);
    return {os.str(), "phase-evolve subspace=" + args.subspace + " slope " + summary_number(trajectory.fit().slope)};
}

struct DilationArgs {
    int points = 4096;
    double extent = 200.0;
    double mass = 1.0;
    double q0 = -20.0;
    double p0 = 2.0;
    double sigma = 1.0;
    double t_max = 25.0;
    int steps = 100;
    double window = 0.0;
};

Artifact dilation_trace(const DilationArgs& args)
{
    const dilation::SpatialGrid grid(args.points, args.extent, args.mass);
    const auto packet = dilation::gaussian_packet(grid, args.q0, args.p0, args.sigma);
    const auto record = dilation::trace_trajectory(packet, linspace(0.0, args.t_max, args.steps), args.window);

    std::ostringstream os;
    write_trajectory_csv(os, record);
    const std::string monotone = dilation::labels_monotone(record.labels) ? "monotone" : "non-monotone";
    return {os.str(), "dilation-trace " + std::to_string(record.times.size()) + " samples, labels " + monotone};
}

struct CurveArgs {
    std::string profile = "belinfante";
    double epsilon = 0.0;
    int grid = 512;
    int angles = 181;
    bool normalize = false;
};

polarizer::TransmissionProfile named_profile(const std::string& name, double epsilon, int grid)
{
    if (name == "belinfante") {
        return polarizer::belinfante_profile(grid);
    }
    if (name == "two-mode-clipped") {
        return polarizer::clipped_two_mode_profile(epsilon, grid);
    }
    return polarizer::TransmissionProfile::from_fourier({1.0}, grid);
}

Artifact polarizer_curve(const CurveArgs& args)
{
    const auto profile = named_profile(args.profile, args.epsilon, args.grid);
    const auto rows = polarizer::curve_report(profile, args.epsilon, polarizer::angle_grid(args.angles), args.normalize);
    double worst = 0.0;
    for (const auto& row : rows) {
        worst = std::max(worst, std::abs(row.residual));
    }
    std::ostringstream os;
    write_curve_csv(os, rows);
    return {os.str(), "polarizer-curve profile=" + args.profile + " max |residual| " + summary_number(worst)};
}

struct FitArgs {
    polarizer::FitOptions options;
    std::string curve_output;
};

Artifact polarizer_fit(const FitArgs& args)
{
    const auto result = polarizer::fit_profile(args.options);
    const auto two_mode = polarizer::two_mode_malus_coefficients(args.options.epsilon);
    const auto clipped = polarizer::clipped_two_mode_profile(args.options.epsilon, args.options.grid_size);
    const auto alphas = polarizer::angle_grid(args.options.n_angles);
    double clipped_sq = 0.0;
    for (const auto& row : polarizer::curve_report(clipped, args.options.epsilon, alphas)) {
        clipped_sq += row.residual * row.residual;
    }

    json doc = to_json(result);
    doc["epsilon"] = args.options.epsilon;
    doc["n_modes"] = args.options.n_modes;
    doc["grid_size"] = args.options.grid_size;
    doc["n_angles"] = args.options.n_angles;
    doc["two_mode_exact"] = {
        {"coefficients", two_mode},
        {"profile_min", two_mode[0] - two_mode[1]},
        {"clipped_rms_residual", std::sqrt(clipped_sq / static_cast<double>(alphas.size()))},
    };

    if (!args.curve_output.empty()) {
        std::ofstream curve(args.curve_output);
        if (!curve) {
            throw Error(ErrorKind::invalid_parameter, "cannot open " + args.curve_output);
        }
        write_curve_csv(curve, polarizer::curve_report(result.profile, args.options.epsilon, alphas));
    }
    return {doc.dump(2) + "\n", "polarizer-fit rms " + summary_number(result.rms_residual) + " after " +
                                    std::to_string(result.iterations) + " iterations"};
}

struct ChshArgs {
    std::string model = "qm";
    std::string method = "quadrature";
    long events = 1000000;
    std::uint64_t seed = 1;
    int grid = 512;
};

Artifact bell_chsh(const ChshArgs& args)
{
    const auto setting = bell::ChshSetting::canonical();
    bell::ChshCorrelations correlations;
    if (args.model == "qm") {
        if (args.method != "quadrature") {
            throw Error(ErrorKind::invalid_parameter, "the qm model is closed-form; use --method quadrature");
        }
        correlations = bell::correlations_at(setting, bell::qm_correlation);
    } else {
        const auto profile = polarizer::belinfante_profile(args.grid);
        if (args.method == "quadrature") {
            correlations = bell::correlations_at(
                setting, [&](double a, double b) { return bell::hv_correlation(profile, a, b); });
        } else {
            std::uint64_t stream = args.seed;
            correlations = bell::correlations_at(setting, [&](double a, double b) {
                return bell::mc_simulate(profile, a, b, args.events, stream++);
            });
        }
    }

    const double s = bell::chsh(correlations);
    const std::array<std::pair<double, double>, 4> pairs{{{setting.a, setting.b},
                                                          {setting.a, setting.b_prime},
                                                          {setting.a_prime, setting.b},
                                                          {setting.a_prime, setting.b_prime}}};
    json doc;
    doc["model"] = args.model;
    doc["method"] = args.method;
    doc["settings"] = {{"a", setting.a}, {"a_prime", setting.a_prime}, {"b", setting.b}, {"b_prime", setting.b_prime}};
    doc["correlations"] = json::array();
    for (std::size_t i = 0; i < 4; ++i) {
        json entry = to_json(correlations[i]);
        entry["a"] = pairs[i].first;
        entry["b"] = pairs[i].second;
        doc["correlations"].push_back(entry);
    }
    doc["S"] = s;
    doc["S_std_error"] = bell::chsh_std_error(correlations);
    if (args.method != "quadrature") {
        doc["seed"] = args.seed;
        doc["events_per_pair"] = args.events;
    }
    return {doc.dump(2) + "\n", "bell-chsh model=" + args.model + " S = " + summary_number(s)};
}

struct SweepArgs {
    int profiles = 1000;
    int modes = 8;
    std::uint64_t seed = 1;
    int grid = 512;
};

Artifact bell_sweep(const SweepArgs& args)
{
    const auto result = bell::local_bound_sweep(args.profiles, args.modes, args.seed, args.grid);
    json doc = to_json(result);
    doc["n_modes"] = args.modes;
    doc["seed"] = args.seed;
    doc["grid_size"] = args.grid;
    return {doc.dump(2) + "\n", "bell-sweep max |S| = " + summary_number(result.max_abs_s) + " over " +
                                    std::to_string(result.n_profiles) + " profiles"};
}

}  // namespace

std::string format_number(double value)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_trajectory_csv(std::ostream& os, const dilation::TrajectoryRecord& record)
{
    os << "t,r,h,q,p,label\n";
    for (std::size_t i = 0; i < record.times.size(); ++i) {
        os << format_number(record.times[i]) << ',' << format_number(record.r_values[i]) << ','
           << format_number(record.h_values[i]) << ',' << format_number(record.q_values[i]) << ','
           << format_number(record.p_values[i]) << ',' << dilation::to_string(record.labels[i]) << '\n';
    }
}

void write_curve_csv(std::ostream& os, const std::vector<polarizer::CurveRow>& rows)
{
    os << "alpha,m,malus,residual\n";
    for (const auto& row : rows) {
        os << format_number(row.alpha) << ',' << format_number(row.m) << ',' << format_number(row.malus) << ','
           << format_number(row.residual) << '\n';
    }
}

void write_phase_csv(std::ostream& os, const phase::PhaseTrajectory& trajectory)
{
    os << "t,phase,subspace\n";
    for (std::size_t i = 0; i < trajectory.times.size(); ++i) {
        os << format_number(trajectory.times[i]) << ',' << format_number(trajectory.phase_values[i]) << ','
           << phase::to_string(trajectory.subspace) << '\n';
    }
}

nlohmann::json to_json(const phase::DefectReport& report)
{
    return {{"norm", report.norm}, {"rank", report.rank}, {"support", report.support}};
}

nlohmann::json to_json(const polarizer::FitResult& result)
{
    double box_violation = 0.0;
    for (double s : result.profile.samples()) {
        box_violation = std::max({box_violation, -s, s - 1.0});
    }
    return {
        {"coefficients", result.coefficients},
        {"profile_samples", result.profile.samples()},
        {"rms_residual", result.rms_residual},
        {"max_residual", result.max_residual},
        {"iterations", result.iterations},
        {"converged", result.converged},
        {"objective_history", result.objective_history},
        {"box_violation", box_violation},
    };
}

nlohmann::json to_json(const bell::CorrelationEstimate& estimate)
{
    return {{"value", estimate.value}, {"std_error", estimate.std_error}, {"n_events", estimate.n_events}};
}

nlohmann::json to_json(const bell::SweepResult& result)
{
    return {
        {"max_abs_s", result.max_abs_s},
        {"worst_profile", result.worst_profile},
        {"n_profiles", result.n_profiles},
        {"n_deterministic", result.n_deterministic},
        {"local_bound", 2.0},
        {"bound_satisfied", result.max_abs_s <= 2.0 + 1e-8},
    };
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Numerical experiments on phase operators, dilation flow and polarizer hidden-variable models",
                 "qtime"};
    app.require_subcommand(1);
    std::string output;
    std::function<Artifact()> action;

    auto add = [&](const std::string& name, const std::string& description) {
        auto* sub = app.add_subcommand(name, description);
        sub->add_option("--output", output, "artifact path (stdout when omitted)");
        return sub;
    };

    FockCheckArgs fock_args;
    auto* fock_cmd = add("fock-check", "ladder-operator identities, coherent-state evolution");
    fock_cmd->add_option("--dim", fock_args.dim)->check(CLI::Range(2, 4096));
    fock_cmd->add_option("--omega", fock_args.omega)->check(CLI::PositiveNumber);
    fock_cmd->add_option("--alpha", fock_args.alpha);
    fock_cmd->add_option("--time", fock_args.time);
    fock_cmd->callback([&] { action = [&] { return fock_check(fock_args); }; });

    PhaseDefectArgs defect_args;
    auto* defect_cmd = add("phase-defect", "isometry defect of the one-sided and doubled-space phase shifts");
    defect_cmd->add_option("--dim", defect_args.dim)->check(CLI::Range(2, 4096));
    defect_cmd->add_option("--half-dim", defect_args.half_dim)->check(CLI::Range(2, 4096));
    defect_cmd->callback([&] { action = [&] { return phase_defect(defect_args); }; });

    PhaseEvolveArgs evolve_args;
    auto* evolve_cmd = add("phase-evolve", "phase trajectory of a coherent probe on the doubled space");
    evolve_cmd->add_option("--half-dim", evolve_args.half_dim)->check(CLI::Range(2, 4096));
    evolve_cmd->add_option("--omega", evolve_args.omega)->check(CLI::PositiveNumber);
    evolve_cmd->add_option("--amplitude", evolve_args.amplitude)->check(CLI::NonNegativeNumber);
    evolve_cmd->add_option("--theta", evolve_args.theta);
    evolve_cmd->add_option("--subspace", evolve_args.subspace)->check(CLI::IsMember({"plus", "minus"}));
    evolve_cmd->add_option("--t-max", evolve_args.t_max);
    evolve_cmd->add_option("--steps", evolve_args.steps)->check(CLI::PositiveNumber);
    evolve_cmd->callback([&] { action = [&] { return phase_evolve(evolve_args); }; });

    DilationArgs dilation_args;
    auto* dilation_cmd = add("dilation-trace", "free wavepacket trajectory of <R>, <H>, <q>, <p> with in/out labels");
    dilation_cmd->add_option("--points", dilation_args.points);
    dilation_cmd->add_option("--extent", dilation_args.extent)->check(CLI::PositiveNumber);
    dilation_cmd->add_option("--mass", dilation_args.mass)->check(CLI::PositiveNumber);
    dilation_cmd->add_option("--q0", dilation_args.q0);
    dilation_cmd->add_option("--p0", dilation_args.p0);
    dilation_cmd->add_option("--sigma", dilation_args.sigma)->check(CLI::PositiveNumber);
    dilation_cmd->add_option("--t-max", dilation_args.t_max);
    dilation_cmd->add_option("--steps", dilation_args.steps)->check(CLI::PositiveNumber);
    dilation_cmd->add_option("--window", dilation_args.window, "interaction half-width")
        ->required()
        ->check(CLI::PositiveNumber);
    dilation_cmd->callback([&] { action = [&] { return dilation_trace(dilation_args); }; });

    CurveArgs curve_args;
    auto* curve_cmd = add("polarizer-curve", "pair transmission m(alpha) against the Malus target");
    curve_cmd->add_option("--profile", curve_args.profile)
        ->check(CLI::IsMember({"belinfante", "two-mode-clipped", "constant"}));
    curve_cmd->add_option("--epsilon", curve_args.epsilon)->check(CLI::Range(0.0, 1.0));
    curve_cmd->add_option("--grid", curve_args.grid)->check(CLI::Range(64, 1 << 20));
    curve_cmd->add_option("--angles", curve_args.angles)->check(CLI::Range(1, 1 << 20));
    curve_cmd->add_flag("--normalize", curve_args.normalize, "divide m by m(0)");
    curve_cmd->callback([&] { action = [&] { return polarizer_curve(curve_args); }; });

    FitArgs fit_args;
    auto* fit_cmd = add("polarizer-fit", "box-constrained profile fit to the generalized Malus law");
    fit_cmd->add_option("--epsilon", fit_args.options.epsilon)->check(CLI::Range(0.0, 1.0));
    fit_cmd->add_option("--modes", fit_args.options.n_modes)->check(CLI::Range(2, 256));
    fit_cmd->add_option("--grid", fit_args.options.grid_size);
    fit_cmd->add_option("--angles", fit_args.options.n_angles)->check(CLI::Range(2, 1 << 20));
    fit_cmd->add_option("--max-iter", fit_args.options.max_iter)->check(CLI::PositiveNumber);
    fit_cmd->add_option("--tol", fit_args.options.tol)->check(CLI::PositiveNumber);
    fit_cmd->add_option("--curve-output", fit_args.curve_output, "CSV curve report of the fitted profile");
    fit_cmd->callback([&] { action = [&] { return polarizer_fit(fit_args); }; });

    ChshArgs chsh_args;
    auto* chsh_cmd = add("bell-chsh", "CHSH value for the quantum or the Belinfante hidden-variable model");
    chsh_cmd->add_option("--model", chsh_args.model)->check(CLI::IsMember({"qm", "belinfante"}));
    chsh_cmd->add_option("--method", chsh_args.method)->check(CLI::IsMember({"quadrature", "monte-carlo"}));
    chsh_cmd->add_option("--events", chsh_args.events)->check(CLI::Range(1000L, 1000000000L));
    chsh_cmd->add_option("--seed", chsh_args.seed);
    chsh_cmd->add_option("--grid", chsh_args.grid)->check(CLI::Range(64, 1 << 20));
    chsh_cmd->callback([&] { action = [&] { return bell_chsh(chsh_args); }; });

    SweepArgs sweep_args;
    auto* sweep_cmd = add("bell-sweep", "max |S| over random admissible hidden-variable profiles");
    sweep_cmd->add_option("--profiles", sweep_args.profiles)->check(CLI::Range(100, 10000000));
    sweep_cmd->add_option("--modes", sweep_args.modes)->check(CLI::Range(1, 256));
    sweep_cmd->add_option("--seed", sweep_args.seed);
    sweep_cmd->add_option("--grid", sweep_args.grid);
    sweep_cmd->callback([&] { action = [&] { return bell_sweep(sweep_args); }; });

    std::vector<const char*> argv;
    argv.push_back("qtime");
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_validation;
    }

    try {
        const Artifact artifact = action();
        if (output.empty()) {
            out << artifact.body;
            err << artifact.summary << '\n';
        } else {
            std::ofstream file(output);
            if (!file) {
                err << "error: cannot open " << output << '\n';
                return exit_validation;
            }
            file << artifact.body;
            out << artifact.summary << '\n';
        }
    } catch (const Error& e) {
        err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return is_validation_error(e.kind()) ? exit_validation : exit_numerical;
    }
    return exit_ok;
}

}  // namespace qtime::cli
