#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "loopcheck/controllers/bimetal.hpp"
#include "loopcheck/errors.hpp"
#include "loopcheck/scenario/builtins.hpp"
#include "loopcheck/scenario/loop.hpp"
#include "loopcheck/scenario/parser.hpp"

using namespace loopcheck;
using namespace loopcheck::scenario;

namespace {

const std::string kMinimalThermostat = R"(scenario "mini"
topology serial
plant thermal { T0=18.0  T_amb=10.0  C_th=1.0  k_loss=0.1  P_max=1.0 }
controller bangbang { T_re=20.0  h=1.0 }
run { dt=0.1  cycles=10  integrator=euler  seed=1 }
epsilon { encode=1e-9  controller=1e-9  decode=1e-9  plant=0.1 }
)";

std::string with_run_line(const std::string& run_line) {
    return "scenario \"mini\"\ntopology serial\n"
           "plant thermal { T0=18.0  T_amb=10.0  C_th=1.0  k_loss=0.1  P_max=1.0 }\n"
           "controller bangbang { T_re=20.0  h=1.0 }\n" +
           run_line +
           "\nepsilon { encode=1e-9  controller=1e-9  decode=1e-9  plant=0.1 }\n";
}

}  // namespace

// ---------------------------------------------------------------------------
// parser
// ---------------------------------------------------------------------------

TEST_CASE("parse: minimal thermostat source maps onto the scenario fields") {
    const ControlScenario sc = parse_scenario(kMinimalThermostat);
    CHECK(sc.name == "mini");
    CHECK(sc.topology == controllers::Topology::serial);
    CHECK(sc.plant_kind == "thermal");
    CHECK(sc.plant_params.at("T0") == 18.0);
    CHECK(sc.controller_kind == "bangbang");
    CHECK(sc.controller_params.at("T_re") == 20.0);
    CHECK(sc.dt == 0.1);
    CHECK(sc.cycles == 10);
    CHECK(sc.integrator == dynamics::StepMethod::explicit_euler);
    CHECK(sc.seed == 1);
    CHECK(sc.epsilon.at("plant") == 0.1);
    CHECK(sc.disturbances.empty());
}

TEST_CASE("parse: unknown key is a ParseError naming it") {
    const std::string bad = with_run_line("run { dtt=0.1  cycles=10  integrator=euler  seed=1 }");
    try {
        parse_scenario(bad);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.message().find("dtt") != std::string::npos);
        CHECK(e.line() == 5);
        CHECK(e.column() > 0);
    }
}

TEST_CASE("parse: structural breakage is a ParseError with a position") {
    CHECK_THROWS_AS(parse_scenario("scenario \"x\"\ntopology sideways\n"), ParseError);
    CHECK_THROWS_AS(parse_scenario("plant thermal { T0=1.0"), ParseError);
    CHECK_THROWS_AS(parse_scenario("scenario \"x\"\nscenario \"y\"\n"), ParseError);
    CHECK_THROWS_AS(parse_scenario("widget { a=1 }"), ParseError);
    CHECK_THROWS_AS(parse_scenario("plant fusion { q=1 }"), ParseError);
}

TEST_CASE("parse: semantic violations are ValidationErrors") {
    CHECK_THROWS_AS(
        parse_scenario(with_run_line("run { dt=0.0  cycles=10  integrator=euler  seed=1 }")),
        ValidationError);
    CHECK_THROWS_AS(
        parse_scenario(with_run_line("run { dt=0.1  cycles=0  integrator=euler  seed=1 }")),
        ValidationError);
    CHECK_THROWS_AS(
        parse_scenario(with_run_line("run { dt=0.1  cycles=10  integrator=leapfrog  seed=1 }")),
        ValidationError);
    // epsilon block missing entirely
    CHECK_THROWS_AS(
        parse_scenario("scenario \"x\"\ntopology serial\n"
                       "plant thermal { T0=1.0 T_amb=1.0 C_th=1.0 k_loss=0.0 P_max=0.0 }\n"
                       "controller bangbang { T_re=1.0 h=0.0 }\n"
                       "run { dt=0.1 cycles=1 integrator=euler seed=1 }\n"),
        ValidationError);
}

TEST_CASE("parse: disturbance indices must land inside the run") {
    const std::string source = kMinimalThermostat + "disturb { at=10  set=T_amb  value=5.0 }\n";
    CHECK_THROWS_AS(parse_scenario(source), ValidationError);
    const std::string ok = kMinimalThermostat + "disturb { at=5  set=T_amb  value=5.0 }\n";
    const ControlScenario sc = parse_scenario(ok);
    REQUIRE(sc.disturbances.size() == 1);
    CHECK(sc.disturbances[0].cycle == 5);
    CHECK(sc.disturbances[0].param == "T_amb");
}

TEST_CASE("parse: only live plant coefficients are disturbable") {
    // T0 seeds the initial state; stepping it mid-run would silently do nothing
    const std::string source = kMinimalThermostat + "disturb { at=5  set=T0  value=25.0 }\n";
    CHECK_THROWS_AS(parse_scenario(source), ValidationError);
}

TEST_CASE("parse: round-trip fixpoint") {
    const ControlScenario once = parse_scenario(kMinimalThermostat);
    const ControlScenario twice = parse_scenario(serialize_scenario(once));
    CHECK(once == twice);
    CHECK(scenario_hash(once) == scenario_hash(twice));
}

TEST_CASE("parse: overrides rewrite values before validation") {
    const ControlScenario sc =
        parse_scenario(kMinimalThermostat, {"run.cycles=3", "epsilon.plant=0.5"});
    CHECK(sc.cycles == 3);
    CHECK(sc.epsilon.at("plant") == 0.5);
    CHECK_THROWS_AS(parse_scenario(kMinimalThermostat, {"run.dtt=1"}), ParseError);
    CHECK_THROWS_AS(parse_scenario(kMinimalThermostat, {"run.dt=0"}), ValidationError);
}

TEST_CASE("parse: every builtin source parses and round-trips") {
    for (const std::string& name : builtin_names()) {
        const ControlScenario once = parse_scenario(builtin_source(name));
        CHECK(once.name == name);
        CHECK(parse_scenario(serialize_scenario(once)) == once);
    }
}

// ---------------------------------------------------------------------------
// unwind
// ---------------------------------------------------------------------------

TEST_CASE("unwind: a single cycle uses the scenario default signal") {
    const ControlScenario sc = parse_scenario(kMinimalThermostat, {"run.cycles=1"});
    const auto plans = unwind(sc);
    REQUIRE(plans.size() == 1);
    CHECK(plans[0].plant_input.kind == SignalSource::Kind::scenario_default);
    CHECK(plans[0].t_start == 0.0);
    CHECK(plans[0].t_end == doctest::Approx(0.1));
}

TEST_CASE("unwind: each plan's plant input is the previous plan's output") {
    const ControlScenario sc = parse_scenario(kMinimalThermostat, {"run.cycles=3"});
    const auto plans = unwind(sc);
    REQUIRE(plans.size() == 3);
    for (std::size_t i = 1; i < plans.size(); ++i) {
        CHECK(plans[i].plant_input.kind == SignalSource::Kind::prior_cycle);
        CHECK(plans[i].plant_input.cycle == plans[i - 1].index);
    }
}

TEST_CASE("unwind: disturbances splice at their cycle index") {
    const std::string source = kMinimalThermostat + "disturb { at=5  set=T_amb  value=5.0 }\n";
    const auto plans = unwind(parse_scenario(source));
    for (const CyclePlan& plan : plans) {
        if (plan.index == 5) {
            REQUIRE(plan.disturbances.size() == 1);
            CHECK(plan.disturbances[0].value == 5.0);
        } else {
            CHECK(plan.disturbances.empty());
        }
    }
}

// ---------------------------------------------------------------------------
// run
// ---------------------------------------------------------------------------

TEST_CASE("run: starting at the set point leaves the heater off") {
    const ControlScenario sc =
        parse_scenario(kMinimalThermostat, {"plant.T0=20.0", "run.cycles=1"});
    const Trace trace = run(sc);
    REQUIRE(trace.records.size() == 1);
    CHECK(trace.records[0].s == 0.0);
    CHECK(trace.records[0].reports[0].residual == 0.0);  // encode
    CHECK(trace.records[0].reports[1].residual == 0.0);  // controller
    CHECK(trace.records[0].reports[2].residual == 0.0);  // decode
    CHECK(trace.pass);
}

TEST_CASE("run: a cold start records e = 2 and switches on") {
    const Trace trace = run(parse_scenario(kMinimalThermostat, {"run.cycles=2"}));
    CHECK(trace.records[0].y == 18.0);
    CHECK(trace.records[0].e_or_c == 2.0);
    CHECK(trace.records[0].s == 1.0);
    // the signal issued at cycle 0 drives the plant during cycle 1
    CHECK(trace.records[0].plant_state.real("s") == 1.0);
    CHECK(trace.records[1].reports[3].corners.initial_physical.real("s") == 1.0);
}

TEST_CASE("run: a forced flip mid-run records a reset with exact digital faces") {
    std::string source = builtin_source("agc-parity");
    source += "disturb { at=3  set=force_flip  value=1 }\n";
    source += "disturb { at=4  set=force_flip  value=0 }\n";
    const ControlScenario sc = parse_scenario(source, {"plant.p_flip=0.0", "run.cycles=12"});
    const Trace trace = run(sc);
    CHECK(trace.records[3].s == 1.0);       // reset verdict
    CHECK(trace.records[3].e_or_c == 1.0);  // positive parity seen
    CHECK(trace.records[3].reports[1].residual == 0.0);
    for (std::size_t i = 0; i < 12; ++i) {
        if (i == 3) continue;
        CHECK(trace.records[i].s == 0.0);
    }
    CHECK(trace.pass);
}

TEST_CASE("run: determinism - identical scenario and seed, identical trace") {
    const ControlScenario sc = parse_scenario(builtin_source("agc-parity"), {"run.cycles=60"});
    const Trace a = run(sc);
    const Trace b = run(sc);
    CHECK(a.scenario_hash == b.scenario_hash);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].y == b.records[i].y);
        CHECK(a.records[i].s == b.records[i].s);
        CHECK(a.records[i].plant_state == b.records[i].plant_state);
        CHECK(a.records[i].controller_state == b.records[i].controller_state);
    }
}

TEST_CASE("run: signal causality across every cycle") {
    const ControlScenario sc = parse_scenario(kMinimalThermostat, {"run.cycles=50"});
    const Trace trace = run(sc);
    // cycle 0 runs under the scenario default; cycle i under cycle i-1's signal
    CHECK(trace.records[0].reports[3].corners.initial_physical.real("s") ==
          default_initial_signal(sc));
    for (std::size_t i = 1; i < trace.records.size(); ++i) {
        CHECK(trace.records[i].reports[3].corners.initial_physical.real("s") ==
              trace.records[i - 1].s);
    }
}

TEST_CASE("run: a diverging plant reports the failing cycle") {
    // dt*k_loss/C_th = 4: the explicit Euler iterate oscillates and overflows
    const ControlScenario sc = parse_scenario(
        kMinimalThermostat,
        {"plant.k_loss=40.0", "run.cycles=2000", "epsilon.plant=1e12"});
    try {
        run(sc);
        FAIL("expected a NonFiniteState wrapped with its cycle index");
    } catch (const Error& e) {
        const std::string what = e.what();
        CHECK(what.find("cycle") != std::string::npos);
        CHECK(what.find("non-finite") != std::string::npos);
    }
}

TEST_CASE("run: record timing and report shape invariants") {
    const Trace trace = run(parse_scenario(kMinimalThermostat));
    REQUIRE(trace.records.size() == 10);
    for (const CycleRecord& record : trace.records) {
        CHECK(record.t ==
              doctest::Approx(static_cast<double>(record.cycle) * 0.1).epsilon(1e-12));
        CHECK(record.reports.size() == 4);
    }
}

TEST_CASE("run: residual attribution - digital faces exact, plant face carries the error") {
    const Trace trace = run(parse_scenario(kMinimalThermostat, {"run.cycles=100"}));
    double max_plant = 0.0;
    for (const CycleRecord& record : trace.records) {
        CHECK(record.reports[0].residual == 0.0);
        CHECK(record.reports[1].residual == 0.0);
        CHECK(record.reports[2].residual == 0.0);
        max_plant = std::max(max_plant, record.reports[3].residual);
    }
    CHECK(max_plant > 0.0);
}

TEST_CASE("run: plant-face residuals re-anchor instead of accumulating") {
    const Trace trace = run(parse_scenario(kMinimalThermostat, {"run.cycles=2000"}));
    double first_ten = 0.0, overall = 0.0;
    for (const CycleRecord& record : trace.records) {
        const double residual = record.reports[3].residual;
        if (record.cycle < 10) first_ten = std::max(first_ten, residual);
        overall = std::max(overall, residual);
    }
    CHECK(overall <= 1.05 * first_ten);
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

TEST_CASE("verify: an exactly-commuting loop passes with zero residuals") {
    // lossless plant: closed form and one Euler step agree exactly
    const ControlScenario sc = parse_scenario(
        kMinimalThermostat, {"plant.k_loss=0.0", "plant.P_max=0.5", "run.cycles=20"});
    const Trace trace = run(sc);
    const VerificationReport report = verify(trace);
    CHECK(report.pass);
    for (double r : report.max_residuals) CHECK(r == 0.0);
    CHECK(report.pass_counts[0] == 20);
}

TEST_CASE("verify: tolerance below the discretization error fails at cycle 0, plant square") {
    const Trace trace = run(parse_scenario(kMinimalThermostat, {"epsilon.plant=1e-9"}));
    CHECK_FALSE(trace.pass);
    REQUIRE(trace.first_failure.has_value());
    CHECK(trace.first_failure->cycle == 0);
    CHECK(trace.first_failure->square == "plant");
    // the known cycle-0 residual: heater off, cooling from 18 K over dt=0.1
    const double exact = 10.0 + 8.0 * std::exp(-0.01);
    const double euler = 18.0 - 0.1 * 0.1 * 8.0;
    CHECK(trace.records[0].reports[3].residual ==
          doctest::Approx(std::abs(exact - euler)).epsilon(1e-9));
}

TEST_CASE("verify: rk4 at a fine step clears a 0.1 tolerance easily") {
    const Trace trace = run(parse_scenario(
        kMinimalThermostat, {"run.dt=0.01", "run.integrator=rk4", "epsilon.plant=0.1"}));
    CHECK(trace.pass);
}

TEST_CASE("verify: raising every tolerance never flips a pass to fail") {
    const Trace trace = run(parse_scenario(kMinimalThermostat, {"epsilon.plant=1e-9"}));
    const VerificationReport tight = verify(trace);
    std::map<std::string, double> loose = trace.epsilon;
    for (auto& [name, eps] : loose) eps = eps * 10.0 + 0.5;
    const VerificationReport relaxed = verify(trace, loose);
    for (std::size_t k = 0; k < 4; ++k) CHECK(relaxed.pass_counts[k] >= tight.pass_counts[k]);
    CHECK(relaxed.pass);
}

TEST_CASE("verify: run-embedded verdict agrees with a fresh verification") {
    for (const char* name : {"thermostat-digital", "agc-parity"}) {
        const ControlScenario sc = parse_scenario(builtin_source(name), {"run.cycles=50"});
        const Trace trace = run(sc);
        CHECK(verify(trace).pass == trace.pass);
    }
}

// ---------------------------------------------------------------------------
// representations & defaults
// ---------------------------------------------------------------------------

TEST_CASE("round-trip: controller representations invert on real loop states") {
    for (const std::string& name : builtin_names()) {
        ControlScenario sc = parse_scenario(builtin_source(name));
        sc.cycles = std::min<long>(sc.cycles, 40);
        const ScenarioRepresentations reps = scenario_representations(sc);
        const Trace trace = run(sc);
        for (const CycleRecord& record : trace.records) {
            const core::PhysicalState& state = record.controller_state;
            const core::PhysicalState back =
                core::instantiate(reps.controller, core::represent(reps.controller, state));
            for (const std::string& quantity : reps.controller.declared_quantities) {
                const core::Quantity& original = state.quantity(quantity);
                const core::Quantity& restored = back.quantity(quantity);
                CHECK(restored.unit == original.unit);
                if (original.unit == core::Unit::bits) {
                    CHECK(restored.value == original.value);
                } else {
                    CHECK(std::abs(restored.value - original.value) <=
                          1e-12 * std::max(1.0, std::abs(original.value)));
                }
            }
        }
    }
}

TEST_CASE("default signals: heater off, valve at bias, knob at rest, proceed") {
    CHECK(default_initial_signal(parse_scenario(builtin_source("thermostat-digital"))) == 0.0);
    CHECK(default_initial_signal(parse_scenario(builtin_source("governor"))) == 0.15);
    CHECK(default_initial_signal(parse_scenario(builtin_source("car-heater-human"))) == 0.0);
    CHECK(default_initial_signal(parse_scenario(builtin_source("agc-parity"))) == 0.0);
    // and the scenario can override it
    ControlScenario with_s0 = parse_scenario(builtin_source("governor"));
    with_s0.initial_signal = 0.4;
    CHECK(default_initial_signal(with_s0) == 0.4);
}
