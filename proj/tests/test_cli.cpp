#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "loopcheck/cli/app.hpp"
#include "loopcheck/io/trace_io.hpp"
#include "loopcheck/scenario/builtins.hpp"
#include "loopcheck/scenario/loop.hpp"
#include "loopcheck/scenario/parser.hpp"

using namespace loopcheck;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code;
    std::string out;
    std::string err;
};

CliResult invoke(std::vector<std::string> args) {
    std::vector<const char*> argv;
    argv.push_back("loopcheck");
    for (const std::string& arg : args) argv.push_back(arg.c_str());
    std::ostringstream out, err;
    const int code =
        cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path temp_file(const std::string& name) {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "loopcheck-cli-tests";
        fs::create_directories(d);
        return d;
    }();
    return dir / name;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_CASE("list-builtins prints exactly the five scenarios") {
    const CliResult result = invoke({"list-builtins"});
    CHECK(result.exit_code == 0);
    const auto lines = split_lines(result.out);
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] == "thermostat-digital");
    CHECK(lines[1] == "thermostat-bimetal");
    CHECK(lines[2] == "governor");
    CHECK(lines[3] == "car-heater-human");
    CHECK(lines[4] == "agc-parity");
}

TEST_CASE("run: csv artifact carries the pinned header and one row per cycle") {
    const fs::path out_path = temp_file("digital.csv");
    const CliResult result = invoke({"run", "--builtin", "thermostat-digital", "--format", "csv",
                                     "--out", out_path.string(), "--override", "run.cycles=25"});
    CHECK(result.exit_code == 0);
    const auto lines = split_lines(slurp(out_path));
    REQUIRE(lines.size() == 26);
    CHECK(lines[0] == "cycle,t,y,e_or_c,s,res_encode,res_controller,res_decode,res_plant");
}

TEST_CASE("run: a one-cycle trace exports as a two-line csv") {
    const fs::path out_path = temp_file("one.csv");
    const CliResult result = invoke({"run", "--builtin", "thermostat-digital", "--format", "csv",
                                     "--out", out_path.string(), "--override", "run.cycles=1"});
    CHECK(result.exit_code == 0);
    CHECK(split_lines(slurp(out_path)).size() == 2);
}

TEST_CASE("run then verify on the same tolerances agree") {
    const fs::path out_path = temp_file("digital.json");
    const CliResult ran = invoke({"run", "--builtin", "thermostat-digital", "--out",
                                  out_path.string(), "--override", "run.cycles=40"});
    CHECK(ran.exit_code == 0);
    const CliResult verified = invoke({"verify", out_path.string()});
    CHECK(verified.exit_code == 0);
    CHECK(verified.out.find("verdict: pass") != std::string::npos);
}

TEST_CASE("verify: a tightened plant tolerance fails with a located first failure") {
    // the Euler one-step residual sits well above 1e-9
    const fs::path out_path = temp_file("tight.json");
    invoke({"run", "--builtin", "thermostat-digital", "--out", out_path.string(), "--override",
            "run.cycles=40", "--override", "run.integrator=euler"});
    const CliResult result =
        invoke({"verify", out_path.string(), "--override", "epsilon.plant=1e-9"});
    CHECK(result.exit_code == 1);
    CHECK(result.out.find("square plant") != std::string::npos);
    CHECK(result.out.find("cycle") != std::string::npos);
}

TEST_CASE("verify: rejects overrides outside epsilon") {
    const fs::path out_path = temp_file("digital.json");
    invoke({"run", "--builtin", "thermostat-digital", "--out", out_path.string(), "--override",
            "run.cycles=10"});
    const CliResult result =
        invoke({"verify", out_path.string(), "--override", "run.cycles=5"});
    CHECK(result.exit_code == 2);
}

TEST_CASE("run: a missing scenario file exits 2 with a diagnostic") {
    const CliResult result = invoke({"run", "definitely-missing.scn"});
    CHECK(result.exit_code == 2);
    CHECK(result.err.find("definitely-missing.scn") != std::string::npos);
}

TEST_CASE("run: a parse error in the source exits 2") {
    const fs::path bad = temp_file("bad.scn");
    std::ofstream(bad) << "scenario \"x\"\ntopology serial\nrun { dtt=0.1 }\n";
    const CliResult result = invoke({"run", bad.string()});
    CHECK(result.exit_code == 2);
    CHECK(result.err.find("dtt") != std::string::npos);
}

TEST_CASE("json round-trip: import verifies to the identical verdict") {
    const scenario::ControlScenario sc =
        scenario::parse_scenario(scenario::builtin_source("agc-parity"), {"run.cycles=30"});
    const scenario::Trace trace = scenario::run(sc);
    const scenario::Trace back = io::trace_from_json(io::trace_to_json(trace));
    CHECK(back.scenario_hash == trace.scenario_hash);
    const auto original = scenario::verify(trace);
    const auto imported = scenario::verify(back);
    CHECK(imported.pass == original.pass);
    CHECK(imported.pass_counts == original.pass_counts);
    CHECK(imported.max_residuals == original.max_residuals);
}

TEST_CASE("csv and json report identical residuals") {
    const scenario::ControlScenario sc = scenario::parse_scenario(
        scenario::builtin_source("thermostat-digital"), {"run.cycles=10"});
    const scenario::Trace trace = scenario::run(sc);
    const auto csv_lines = split_lines(io::trace_to_csv(trace));
    const scenario::Trace back = io::trace_from_json(io::trace_to_json(trace));
    REQUIRE(csv_lines.size() == trace.records.size() + 1);
    for (std::size_t i = 0; i < trace.records.size(); ++i) {
        std::istringstream row(csv_lines[i + 1]);
        std::string cell;
        std::vector<double> cells;
        while (std::getline(row, cell, ',')) {
            double value = 0.0;
            std::from_chars(cell.data(), cell.data() + cell.size(), value);
            cells.push_back(value);
        }
        REQUIRE(cells.size() == 9);
        for (std::size_t k = 0; k < 4; ++k) {
            CHECK(cells[5 + k] == back.records[i].reports[k].residual);
        }
    }
}

TEST_CASE("report: classifies the run's output as a control-cycle product") {
    const fs::path out_path = temp_file("report.json");
    invoke({"run", "--builtin", "thermostat-digital", "--out", out_path.string(), "--override",
            "run.cycles=20"});
    const CliResult result = invoke({"report", out_path.string()});
    CHECK(result.exit_code == 0);
    CHECK(result.out.find("control cycle") != std::string::npos);
    CHECK(result.out.find("final physical state of the plant") != std::string::npos);
    CHECK(result.out.find("verdict: pass") != std::string::npos);
}

TEST_CASE("run embeds the verdict in its exit code") {
    const CliResult failing = invoke({"run", "--builtin", "thermostat-digital", "--override",
                                      "epsilon.plant=1e-18", "--override", "run.cycles=20"});
    CHECK(failing.exit_code == 1);
    const CliResult passing =
        invoke({"run", "--builtin", "thermostat-digital", "--override", "run.cycles=20"});
    CHECK(passing.exit_code == 0);
}

TEST_CASE("usage errors exit 2") {
    CHECK(invoke({"run"}).exit_code == 2);  // neither file nor builtin
    CHECK(invoke({"frobnicate"}).exit_code == 2);
    CHECK(invoke({}).exit_code == 2);
}
