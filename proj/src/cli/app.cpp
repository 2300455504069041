#include "loopcheck/cli/app.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "loopcheck/errors.hpp"
#include "loopcheck/io/trace_io.hpp"
#include "loopcheck/scenario/builtins.hpp"
#include "loopcheck/scenario/loop.hpp"
#include "loopcheck/scenario/parser.hpp"

namespace loopcheck::cli {

namespace {

constexpr int kExitPass = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void spill(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << data;
    if (!out) throw Error("write to '" + path + "' failed");
}

std::string format_real(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

void print_verification(std::ostream& out, const scenario::VerificationReport& report) {
    for (std::size_t k = 0; k < 4; ++k) {
        out << "  " << scenario::kSquareNames[k] << ": " << report.pass_counts[k] << "/"
            << report.cycles << " commute, max residual " << format_real(report.max_residuals[k])
            << "\n";
    }
    if (report.pass) {
        out << "verdict: pass (" << 4 * report.cycles << " squares commute)\n";
    } else {
        out << "verdict: FAIL";
        if (report.first_failure) {
            out << " at cycle " << report.first_failure->cycle << ", square "
                << report.first_failure->square;
        }
        out << "\n";
    }
}

int cmd_run(const std::string& path, const std::string& builtin, const std::string& out_path,
            const std::string& format, const std::vector<std::string>& overrides,
            std::ostream& out) {
    std::string source;
    if (!builtin.empty()) {
        source = scenario::builtin_source(builtin);
    } else {
        source = slurp(path);
    }
    const scenario::ControlScenario sc = scenario::parse_scenario(source, overrides);
    const scenario::Trace trace = scenario::run(sc);

    if (!out_path.empty()) {
        spill(out_path, format == "csv" ? io::trace_to_csv(trace) : io::trace_to_json(trace));
        out << "wrote " << out_path << "\n";
    }

    out << "scenario: " << trace.scenario_name << " (" << trace.scenario_hash << ")\n";
    out << "cycles: " << trace.cycles << "\n";
    print_verification(out, scenario::verify(trace));
    return trace.pass ? kExitPass : kExitVerificationFailure;
}

std::map<std::string, double> epsilon_with_overrides(const scenario::Trace& trace,
                                                     const std::vector<std::string>& overrides) {
    std::map<std::string, double> epsilon = trace.epsilon;
    for (const std::string& assignment : overrides) {
        const auto eq = assignment.find('=');
        if (eq == std::string::npos)
            throw ParseError(0, 0, "override '" + assignment + "' is not key=value");
        const std::string path = assignment.substr(0, eq);
        if (path.rfind("epsilon.", 0) != 0)
            throw ParseError(0, 0, "verify accepts epsilon.* overrides only, got '" + path + "'");
        const std::string square = path.substr(8);
        if (!epsilon.count(square))
            throw ParseError(0, 0, "unknown square '" + square + "' in override");
        double value = 0.0;
        const std::string number = assignment.substr(eq + 1);
        const char* first = number.data();
        auto [ptr, ec] = std::from_chars(first, first + number.size(), value);
        if (ec != std::errc{} || ptr != first + number.size() || value < 0.0)
            throw ParseError(0, 0, "override '" + assignment + "' needs a non-negative number");
        epsilon[square] = value;
    }
    return epsilon;
}

int cmd_verify(const std::string& path, const std::vector<std::string>& overrides,
               std::ostream& out) {
    const scenario::Trace trace = io::trace_from_json(slurp(path));
    const auto epsilon = epsilon_with_overrides(trace, overrides);
    const scenario::VerificationReport report = scenario::verify(trace, epsilon);
    out << "trace: " << trace.scenario_name << " (" << trace.scenario_hash << ")\n";
    print_verification(out, report);
    return report.pass ? kExitPass : kExitVerificationFailure;
}

int cmd_report(const std::string& path, std::ostream& out) {
    const scenario::Trace trace = io::trace_from_json(slurp(path));
    const scenario::VerificationReport report = scenario::verify(trace);
    out << "== " << trace.scenario_name << " ==\n";
    out << "output class: control cycle (the run's product is the final physical state of the "
           "plant, not an abstract result)\n";
    out << "scenario hash: " << trace.scenario_hash << "\n";
    out << "cycles: " << trace.cycles << ", dt: " << format_real(trace.dt) << "\n";
    out << "square residuals (max over run / tolerance):\n";
    for (std::size_t k = 0; k < 4; ++k) {
        out << "  " << scenario::kSquareNames[k] << ": "
            << format_real(report.max_residuals[k]) << " / "
            << format_real(trace.epsilon.at(scenario::kSquareNames[k])) << "\n";
    }
    print_verification(out, report);
    return report.pass ? kExitPass : kExitVerificationFailure;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"control-loop simulation and commutation checking"};
    app.require_subcommand(1);

    std::string scenario_path, builtin, out_path, trace_path;
    std::string format = "json";
    std::vector<std::string> overrides;

    CLI::App* run = app.add_subcommand("run", "run a scenario and check every cycle's squares");
    run->add_option("scenario", scenario_path, "scenario source file");
    run->add_option("--builtin", builtin, "run a built-in scenario instead of a file");
    run->add_option("--out", out_path, "write the trace to this path");
    run->add_option("--format", format, "trace format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    run->add_option("--override", overrides, "block.key=value applied before validation");

    CLI::App* verify = app.add_subcommand("verify", "re-check a stored trace against tolerances");
    verify->add_option("trace", trace_path, "trace JSON file")->required();
    verify->add_option("--override", overrides, "epsilon.square=value");

    CLI::App* report = app.add_subcommand("report", "render a residual summary for a stored trace");
    report->add_option("trace", trace_path, "trace JSON file")->required();

    app.add_subcommand("list-builtins", "list the built-in scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kExitPass;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (run->parsed()) {
            if (builtin.empty() == scenario_path.empty()) {
                err << "run needs exactly one of: a scenario file, or --builtin NAME\n";
                return kExitUsage;
            }
            return cmd_run(scenario_path, builtin, out_path, format, overrides, out);
        }
        if (verify->parsed()) return cmd_verify(trace_path, overrides, out);
        if (report->parsed()) return cmd_report(trace_path, out);
        for (const std::string& name : scenario::builtin_names()) out << name << "\n";
        return kExitPass;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace loopcheck::cli
