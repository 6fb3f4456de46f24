#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mixrisk/mixrisk.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitSolver = 3;
constexpr int kExitNumerical = 4;

int exit_code_for(mixrisk::ErrorCategory c) {
    switch (c) {
        case mixrisk::ErrorCategory::Parse:
        case mixrisk::ErrorCategory::Schema:
        case mixrisk::ErrorCategory::Semantic:
        case mixrisk::ErrorCategory::Config:
            return kExitParse;
        case mixrisk::ErrorCategory::Solver:
        case mixrisk::ErrorCategory::Model:
            return kExitSolver;
        case mixrisk::ErrorCategory::Numerical:
        case mixrisk::ErrorCategory::Domain:
            return kExitNumerical;
    }
    return 1;
}

mixrisk::ParseDefaults defaults_from_env() {
    mixrisk::ParseDefaults defaults;
    if (const char* env = std::getenv("MIXRISK_QUAD_NODES")) {
        char* end = nullptr;
        long nodes = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || nodes < 1) {
            throw mixrisk::ConfigError(
                "MIXRISK_QUAD_NODES must be a positive integer, got '" +
                std::string(env) + "'");
        }
        defaults.quadrature_nodes = static_cast<int>(nodes);
    }
    return defaults;
}

std::string default_csv_path(const std::string& input) {
    std::filesystem::path p(input);
    p.replace_extension(".csv");
    return p.string();
}

int run_solve(const std::string& file, std::vector<std::string> outputs,
              std::optional<std::string> csv_path) {
    auto doc = mixrisk::load_scenario_file(file, defaults_from_env());
    if (outputs.empty()) outputs = doc.report_kinds;
    for (const auto& kind : outputs) {
        if (kind != "table" && kind != "csv") {
            throw mixrisk::ConfigError("--outputs entries must be 'table' or 'csv'");
        }
    }
    auto report = mixrisk::precautionary_report(doc.scenario);
    bool want_table = false, want_csv = false;
    for (const auto& kind : outputs) {
        want_table |= kind == "table";
        want_csv |= kind == "csv";
    }
    if (want_table) std::cout << mixrisk::render_table(report);
    if (want_csv) {
        std::string path = csv_path.value_or(
            doc.csv_path.value_or(default_csv_path(file)));
        mixrisk::emit_csv(report, path);
        std::cout << "csv written to " << path << "\n";
    }
    return kExitOk;
}

int run_verify(const std::string& file, const std::vector<double>& epsilons) {
    auto doc = mixrisk::load_scenario_file(file, defaults_from_env());
    auto study = mixrisk::epsilon_scaling_study(doc.scenario, epsilons);
    for (const auto& conv : study.indicators) {
        std::cout << mixrisk::to_string(conv.kind) << "\n";
        std::cout << "  epsilon        exact               predicted           "
                     "abs_error\n";
        for (const auto& s : conv.samples) {
            std::printf("  %-12g %- .12e %- .12e %.6e\n", s.epsilon, s.exact,
                        s.predicted, s.abs_error);
        }
        if (conv.exact_to_tolerance) {
            std::cout << "  prediction exact to quadrature tolerance at every "
                         "epsilon\n";
        } else if (!conv.orders.empty()) {
            std::cout << "  empirical order:";
            for (double p : conv.orders) std::printf(" %.2f", p);
            std::cout << "\n";
        }
    }
    return kExitOk;
}

int run_validate(const std::string& file) {
    auto doc = mixrisk::load_scenario_file(file, defaults_from_env());
    auto describe = [](const char* name, const mixrisk::UtilityValidationReport& r) {
        std::cout << name << ":\n"
                  << "  increasing in income:       " << (r.increasing_in_income ? "yes" : "NO")
                  << "\n"
                  << "  increasing in background:   "
                  << (r.increasing_in_background ? "yes" : "NO") << "\n"
                  << "  concave in income:          " << (r.concave_in_income ? "yes" : "NO")
                  << "\n"
                  << "  jointly concave:            " << (r.jointly_concave ? "yes" : "NO")
                  << "\n"
                  << "  max derivative discrepancy: " << r.max_derivative_discrepancy
                  << "\n";
    };
    auto u_report = mixrisk::validate_utility(doc.scenario.first_period);
    auto v_report = mixrisk::validate_utility(doc.scenario.second_period);
    describe("utility_u", u_report);
    describe("utility_v", v_report);
    std::cout << "scenario: valid\n";
    if (!v_report.solver_ready(doc.scenario.shape_override)) {
        std::cerr << "error: utility_v rejected for solver use"
                  << (doc.scenario.shape_override ? "" : " (no monotonicity_override set)")
                  << "\n";
        return kExitSolver;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-period optimal saving under mixed fuzzy/random risk"};
    app.require_subcommand(1);

    std::string solve_file;
    std::vector<std::string> solve_outputs;
    std::string solve_csv_path;
    auto* solve = app.add_subcommand("solve", "solve a scenario and report indicators");
    solve->add_option("file", solve_file, "scenario file")->required();
    solve->add_option("--outputs", solve_outputs, "report kinds (table, csv)")
        ->delimiter(',');
    solve->add_option("--csv-path", solve_csv_path, "path for the CSV report");

    std::string verify_file;
    std::vector<double> verify_epsilons{0.1, 0.05, 0.025};
    auto* verify = app.add_subcommand(
        "verify", "run the shrinking-risk check of the curvature predictions");
    verify->add_option("file", verify_file, "scenario file")->required();
    verify->add_option("--epsilons", verify_epsilons, "decreasing spread multipliers")
        ->delimiter(',');

    std::string validate_file;
    auto* validate =
        app.add_subcommand("validate", "parse a scenario and validate its utilities");
    validate->add_option("file", validate_file, "scenario file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) {
            std::optional<std::string> csv_path;
            if (!solve_csv_path.empty()) csv_path = solve_csv_path;
            return run_solve(solve_file, solve_outputs, csv_path);
        }
        if (verify->parsed()) return run_verify(verify_file, verify_epsilons);
        if (validate->parsed()) return run_validate(validate_file);
    } catch (const mixrisk::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.category());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
