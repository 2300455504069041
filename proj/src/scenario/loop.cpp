#include "loopcheck/scenario/loop.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>

#include "loopcheck/controllers/bangbang.hpp"
#include "loopcheck/controllers/bimetal.hpp"
#include "loopcheck/controllers/governor.hpp"
#include "loopcheck/controllers/human.hpp"
#include "loopcheck/controllers/parity.hpp"
#include "loopcheck/controllers/proportional.hpp"
#include "loopcheck/errors.hpp"
#include "loopcheck/plants/engine.hpp"
#include "loopcheck/plants/processor.hpp"
#include "loopcheck/plants/thermal.hpp"
#include "loopcheck/scenario/parser.hpp"

namespace loopcheck::scenario {

namespace {

using core::AbstractState;
using core::BitWord;
using core::Metric;
using core::PhysicalState;
using core::RepresentationPair;
using core::Unit;

using Params = std::map<std::string, double>;

double param(const Params& params, const std::string& name) {
    auto it = params.find(name);
    if (it == params.end()) throw Error("missing parameter '" + name + "'");
    return it->second;
}

// ---------------------------------------------------------------------------
// continuous families: thermal / engine plants with value-signal controllers
// ---------------------------------------------------------------------------

/// Everything the runner needs for one plant/controller pairing. The
/// controller's physical step and abstract step are built over one shared
/// pure decision routine, so digital faces commute exactly; the plant's two
/// routes (numeric step vs closed form) differ by discretization only.
struct ContinuousModel {
    std::string y_name;  // canonical output quantity: "T" or "omega"
    Unit y_unit = Unit::dimensionless;

    PhysicalState plant0;       // {y_name, "s"}; "s" holds the applied drive
    PhysicalState controller0;  // register state per controller kind

    std::function<double(double y, double s, double dt, const Params&)> plant_numeric;
    std::function<double(double y, double s, double dt, const Params&)> plant_closed_form;

    std::function<PhysicalState(const PhysicalState&, double dt)> ctl_phys_step;
    std::function<AbstractState(const AbstractState&, double dt)> ctl_abs_step;

    RepresentationPair rep_encode, rep_controller, rep_decode, rep_plant;
    Metric metric_controller, metric_decode;

    std::function<double(double s)> transduce;  // controller signal -> plant drive
    std::function<double(const PhysicalState& ctl_next, double y)> junction_value;
    double default_signal = 0.0;
};

RepresentationPair single_real_rep(std::string tag, std::string quantity, std::string value,
                                   Unit unit) {
    RepresentationPair rep;
    rep.theory_tag = std::move(tag);
    rep.declared_quantities = {quantity};
    rep.declared_values = {value};
    rep.represent_fn = [quantity, value](const PhysicalState& p) {
        AbstractState m;
        m.set_real(value, p.real(quantity));
        return m;
    };
    rep.instantiate_fn = [quantity, value, unit](const AbstractState& m) {
        PhysicalState p;
        p.set(quantity, m.real(value), unit);
        return p;
    };
    return rep;
}

void build_thermal_plant(ContinuousModel& model, const ControlScenario& sc) {
    model.y_name = "T";
    model.y_unit = Unit::kelvin;
    model.plant0.set("T", param(sc.plant_params, "T0"), Unit::kelvin);
    model.plant_numeric = [method = sc.integrator](double y, double s, double dt,
                                                   const Params& params) {
        plants::ThermalPlant plant{y, param(params, "T_amb"), param(params, "C_th"),
                                   param(params, "k_loss"), param(params, "P_max")};
        return plants::thermal_step(plant, s, dt, method).T;
    };
    model.plant_closed_form = [](double y, double s, double dt, const Params& params) {
        plants::ThermalPlant plant{y, param(params, "T_amb"), param(params, "C_th"),
                                   param(params, "k_loss"), param(params, "P_max")};
        return plants::thermal_abstract_step(y, s, dt, plant);
    };
}

void build_engine_plant(ContinuousModel& model, const ControlScenario& sc) {
    model.y_name = "omega";
    model.y_unit = Unit::radian_per_second;
    model.plant0.set("omega", param(sc.plant_params, "omega0"), Unit::radian_per_second);
    model.plant_numeric = [method = sc.integrator](double y, double s, double dt,
                                                   const Params& params) {
        plants::EnginePlant plant{y, param(params, "J"), param(params, "tau_max"),
                                  param(params, "tau_load"), 0.0};
        return plants::engine_step(plant, s, dt, method).omega;
    };
    model.plant_closed_form = [](double y, double s, double dt, const Params& params) {
        plants::EnginePlant plant{y, param(params, "J"), param(params, "tau_max"),
                                  param(params, "tau_load"), 0.0};
        return plants::engine_abstract_step(y, std::clamp(s, 0.0, 1.0), dt, plant);
    };
}

/// Representation over named real registers, with the physical -> abstract
/// renaming given per slot.
RepresentationPair register_rep(std::string tag,
                                std::vector<std::pair<std::string, std::string>> slots,
                                std::map<std::string, Unit> units) {
    RepresentationPair rep;
    rep.theory_tag = std::move(tag);
    for (const auto& [quantity, value] : slots) {
        rep.declared_quantities.push_back(quantity);
        rep.declared_values.push_back(value);
    }
    rep.represent_fn = [slots](const PhysicalState& p) {
        AbstractState m;
        for (const auto& [quantity, value] : slots) m.set_real(value, p.real(quantity));
        return m;
    };
    rep.instantiate_fn = [slots, units](const AbstractState& m) {
        PhysicalState p;
        for (const auto& [quantity, value] : slots) {
            auto it = units.find(quantity);
            p.set(quantity, m.real(value), it == units.end() ? Unit::dimensionless : it->second);
        }
        return p;
    };
    return rep;
}

/// Same, but the named slots are represented as booleans (stored physically
/// as 0/1 levels).
void add_bool_slot(RepresentationPair& rep, const std::string& quantity,
                   const std::string& value) {
    rep.declared_quantities.push_back(quantity);
    rep.declared_values.push_back(value);
    auto represent_prev = rep.represent_fn;
    rep.represent_fn = [represent_prev, quantity, value](const PhysicalState& p) {
        AbstractState m = represent_prev(p);
        m.set_bool(value, p.real(quantity) > 0.5);
        return m;
    };
    auto instantiate_prev = rep.instantiate_fn;
    rep.instantiate_fn = [instantiate_prev, quantity, value](const AbstractState& m) {
        PhysicalState p = instantiate_prev(m);
        p.set(quantity, m.boolean(value) ? 1.0 : 0.0, Unit::dimensionless);
        return p;
    };
}

void build_bangbang(ContinuousModel& model, const ControlScenario& sc) {
    const double T_re = param(sc.controller_params, "T_re");
    const double h = param(sc.controller_params, "h");
    const double u0 = param(sc.controller_params, "u0");

    model.controller0.set("T", T_re, Unit::kelvin);
    model.controller0.set("T_re", T_re, Unit::kelvin);
    model.controller0.set("s", u0, Unit::dimensionless);

    model.ctl_phys_step = [h](PhysicalState c, double dt) {
        const int u = controllers::bangbang_rule(c.real("T"), c.real("T_re"), h,
                                                 c.real("s") > 0.5 ? 1 : 0);
        c.set("s", u, Unit::dimensionless);
        c.set_time(c.time() + dt);
        return c;
    };
    model.ctl_abs_step = [h](AbstractState m, double) {
        const int u =
            controllers::bangbang_rule(m.real("y"), m.real("y_re"), h, m.boolean("s") ? 1 : 0);
        m.set_bool("s", u == 1);
        return m;
    };

    model.rep_controller = register_rep("thermostat-firmware", {{"T", "y"}, {"T_re", "y_re"}},
                                        {{"T", Unit::kelvin}, {"T_re", Unit::kelvin}});
    add_bool_slot(model.rep_controller, "s", "s");
    model.metric_controller = core::weighted_metric();
    model.metric_decode = core::discrete_metric();
    model.transduce = [](double s) { return s; };
    model.junction_value = [](const PhysicalState& ctl_next, double y) {
        return controllers::summing_junction(controllers::Topology::serial,
                                             ctl_next.real("T_re"), y);
    };
    model.default_signal = u0;
}

void build_bimetal(ContinuousModel& model, const ControlScenario& sc) {
    const controllers::BimetalCoil coil{
        param(sc.controller_params, "T_ref_cal"), param(sc.controller_params, "x_at_cal"),
        param(sc.controller_params, "alpha"), param(sc.controller_params, "x_re")};

    model.controller0.set("T", coil.T_ref_cal, Unit::kelvin);
    model.controller0.set("x", coil.x_at_cal, Unit::metre);
    model.controller0.set("s", 0.0, Unit::dimensionless);

    // The physical route decides in coil-position space; the abstract route
    // decides in temperature space. Their agreement is the whole point of
    // this controller's face.
    model.ctl_phys_step = [coil](PhysicalState c, double dt) {
        const controllers::BimetalDecision d = controllers::bimetal_decide(coil, c.real("T"));
        c.set("x", d.x, Unit::metre);
        c.set("s", d.contact, Unit::dimensionless);
        c.set_time(c.time() + dt);
        return c;
    };
    model.ctl_abs_step = [coil](AbstractState m, double) {
        m.set_bool("s", controllers::bimetal_rule(coil, m.real("y")) == 1);
        return m;
    };

    model.rep_controller =
        register_rep("bimetal-coil", {{"T", "y"}}, {{"T", Unit::kelvin}});
    add_bool_slot(model.rep_controller, "s", "s");
    model.metric_controller = core::weighted_metric();
    model.metric_decode = core::discrete_metric();
    model.transduce = [](double s) { return s; };
    model.junction_value = [](const PhysicalState& ctl_next, double) {
        return ctl_next.real("x");
    };
    model.default_signal = 0.0;
}

void build_proportional(ContinuousModel& model, const ControlScenario& sc) {
    const controllers::ProportionalController ctl{param(sc.controller_params, "gain"),
                                                  param(sc.controller_params, "out_min"),
                                                  param(sc.controller_params, "out_max")};
    const double r = *sc.reference;
    const auto topology = sc.topology;
    const std::string y_name = model.y_name;
    const Unit y_unit = model.y_unit;

    model.controller0.set(y_name, r, y_unit);
    model.controller0.set("r", r, y_unit);
    model.controller0.set("s", std::clamp(0.0, ctl.out_min, ctl.out_max), Unit::dimensionless);

    // serial: s = clamp(G * (r - y)); parallel: s = clamp(r - G * y). With
    // the pre-filter r/G the two forms compute the same signal.
    auto decide = [ctl, topology](double r_in, double y) {
        if (topology == controllers::Topology::serial)
            return controllers::proportional_decide(
                ctl, controllers::summing_junction(controllers::Topology::serial, r_in, y));
        return std::clamp(controllers::summing_junction(controllers::Topology::parallel, r_in,
                                                        ctl.gain * y),
                          ctl.out_min, ctl.out_max);
    };
    model.ctl_phys_step = [decide, y_name](PhysicalState c, double dt) {
        c.set("s", decide(c.real("r"), c.real(y_name)), Unit::dimensionless);
        c.set_time(c.time() + dt);
        return c;
    };
    model.ctl_abs_step = [decide](AbstractState m, double) {
        m.set_real("s", decide(m.real("y_re"), m.real("y")));
        return m;
    };

    model.rep_controller = register_rep(
        "static-gain", {{y_name, "y"}, {"r", "y_re"}, {"s", "s"}},
        {{y_name, y_unit}, {"r", y_unit}});
    model.metric_controller = core::absolute_metric();
    model.metric_decode = core::absolute_metric();
    model.transduce = [](double s) { return s; };
    model.junction_value = [topology, gain = ctl.gain, y_name](const PhysicalState& ctl_next,
                                                               double y) {
        if (topology == controllers::Topology::serial)
            return controllers::summing_junction(topology, ctl_next.real("r"), y);
        return gain * y;  // the parallel controller's output c
    };
    model.default_signal = std::clamp(0.0, ctl.out_min, ctl.out_max);
}

controllers::GovernorController governor_from(const Params& params, double theta,
                                              double theta_dot) {
    controllers::GovernorController ctl;
    ctl.theta = theta;
    ctl.theta_dot = theta_dot;
    ctl.l1 = param(params, "l1");
    ctl.beta = param(params, "beta");
    ctl.g = param(params, "g");
    ctl.c0 = param(params, "c0");
    ctl.c1 = param(params, "c1");
    ctl.x_re = param(params, "x_re");
    ctl.valve_gain = param(params, "valve_gain");
    ctl.v0 = param(params, "v0");
    return ctl;
}

void build_governor(ContinuousModel& model, const ControlScenario& sc) {
    const Params cp = sc.controller_params;
    const double theta0 = param(cp, "theta0");
    const double theta_dot0 = param(cp, "theta_dot0");
    const double v0 = param(cp, "v0");
    const auto method = sc.integrator;

    model.controller0.set("omega", param(sc.plant_params, "omega0"), Unit::radian_per_second);
    model.controller0.set("theta", theta0, Unit::radian);
    model.controller0.set("theta_dot", theta_dot0, Unit::radian_per_second);
    model.controller0.set("x",
                          controllers::governor_collar_height(governor_from(cp, theta0, 0.0),
                                                              theta0),
                          Unit::metre);
    model.controller0.set("s", v0, Unit::dimensionless);

    model.ctl_phys_step = [cp, method](PhysicalState c, double dt) {
        const controllers::GovernorOutput out = controllers::governor_step(
            governor_from(cp, c.real("theta"), c.real("theta_dot")), c.real("omega"), dt,
            method);
        c.set("theta", out.ctl.theta, Unit::radian);
        c.set("theta_dot", out.ctl.theta_dot, Unit::radian_per_second);
        c.set("x", out.x, Unit::metre);
        c.set("s", out.valve_cmd, Unit::dimensionless);
        c.set_time(c.time() + dt);
        return c;
    };
    model.ctl_abs_step = [cp, method](AbstractState m, double dt) {
        const controllers::GovernorOutput out = controllers::governor_step(
            governor_from(cp, m.real("theta"), m.real("theta_dot")), m.real("y"), dt, method);
        m.set_real("theta", out.ctl.theta);
        m.set_real("theta_dot", out.ctl.theta_dot);
        m.set_real("s", out.valve_cmd);
        return m;
    };

    model.rep_controller = register_rep(
        "flyball-linkage",
        {{"omega", "y"}, {"theta", "theta"}, {"theta_dot", "theta_dot"}, {"s", "s"}},
        {{"omega", Unit::radian_per_second},
         {"theta", Unit::radian},
         {"theta_dot", Unit::radian_per_second}});
    model.metric_controller = core::absolute_metric();
    model.metric_decode = core::absolute_metric();
    model.transduce = [](double s) { return s; };
    model.junction_value = [](const PhysicalState& ctl_next, double) {
        return ctl_next.real("x");
    };
    model.default_signal = v0;
}

std::vector<std::string> pending_names(int delay) {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(delay));
    for (int i = 0; i < delay; ++i) names.push_back("pending_" + std::to_string(i));
    return names;
}

void build_human(ContinuousModel& model, const ControlScenario& sc) {
    const Params cp = sc.controller_params;
    const double T_re = param(cp, "T_re");
    const double phi0 = param(cp, "phi0");
    const double phi_max = param(cp, "phi_max");
    const int delay = static_cast<int>(param(cp, "delay"));
    const std::vector<std::string> queue = pending_names(delay);

    model.controller0.set("T", T_re, Unit::kelvin);
    model.controller0.set("T_re", T_re, Unit::kelvin);
    for (const std::string& name : queue) model.controller0.set(name, 0.0, Unit::kelvin);
    model.controller0.set("s", phi0, Unit::radian);

    auto make_policy = [cp, delay](double phi) {
        controllers::HumanPolicy policy;
        policy.T_re = param(cp, "T_re");
        policy.k_h = param(cp, "k_h");
        policy.quantum = param(cp, "quantum");
        policy.delay = delay;
        policy.phi = phi;
        policy.phi_max = param(cp, "phi_max");
        return policy;
    };

    model.ctl_phys_step = [make_policy, queue](PhysicalState c, double dt) {
        controllers::HumanPolicy policy = make_policy(c.real("s"));
        for (const std::string& name : queue) policy.pending.push_back(c.real(name));
        policy = controllers::human_policy_decide(policy, c.real("T"));
        for (std::size_t i = 0; i < queue.size(); ++i)
            c.set(queue[i], policy.pending[i], Unit::kelvin);
        c.set("s", policy.phi, Unit::radian);
        c.set_time(c.time() + dt);
        return c;
    };
    model.ctl_abs_step = [make_policy, queue](AbstractState m, double) {
        controllers::HumanPolicy policy = make_policy(m.real("s"));
        for (const std::string& name : queue) policy.pending.push_back(m.real(name));
        policy = controllers::human_policy_decide(policy, m.real("y"));
        for (std::size_t i = 0; i < queue.size(); ++i) m.set_real(queue[i], policy.pending[i]);
        m.set_real("s", policy.phi);
        return m;
    };

    std::vector<std::pair<std::string, std::string>> slots = {{"T", "y"}, {"T_re", "y_re"}};
    for (const std::string& name : queue) slots.emplace_back(name, name);
    slots.emplace_back("s", "s");
    std::map<std::string, Unit> units{{"T", Unit::kelvin}, {"T_re", Unit::kelvin},
                                      {"s", Unit::radian}};
    for (const std::string& name : queue) units[name] = Unit::kelvin;
    model.rep_controller = register_rep("operator-habit", std::move(slots), std::move(units));
    model.metric_controller = core::absolute_metric();
    model.metric_decode = core::absolute_metric();
    model.transduce = [phi_max](double s) { return s / phi_max; };
    model.junction_value = [](const PhysicalState& ctl_next, double y) {
        return controllers::summing_junction(controllers::Topology::serial,
                                             ctl_next.real("T_re"), y);
    };
    model.default_signal = phi0;
}

ContinuousModel build_continuous_model(const ControlScenario& sc) {
    ContinuousModel model;
    if (sc.plant_kind == "thermal") {
        build_thermal_plant(model, sc);
    } else {
        build_engine_plant(model, sc);
    }

    if (sc.controller_kind == "bangbang") {
        build_bangbang(model, sc);
    } else if (sc.controller_kind == "bimetal") {
        build_bimetal(model, sc);
    } else if (sc.controller_kind == "proportional") {
        build_proportional(model, sc);
    } else if (sc.controller_kind == "governor") {
        build_governor(model, sc);
    } else if (sc.controller_kind == "human") {
        build_human(model, sc);
    } else {
        throw Error("no continuous model for controller '" + sc.controller_kind + "'");
    }

    model.rep_encode =
        single_real_rep("sensor", model.y_name, "y", model.y_unit);
    model.rep_decode = single_real_rep("actuator", "s", "s", Unit::dimensionless);
    model.rep_plant = single_real_rep("plant-output", model.y_name, "y", model.y_unit);

    const double s0 = sc.initial_signal.value_or(model.default_signal);
    model.plant0.set("s", model.transduce(s0), Unit::dimensionless);
    return model;
}

double epsilon_for(const ControlScenario& sc, const char* square) {
    return sc.epsilon.at(square);
}

void finalize_trace(Trace& trace) {
    const VerificationReport report = verify(trace);
    trace.pass = report.pass;
    trace.first_failure = report.first_failure;
}

Trace make_trace_shell(const ControlScenario& sc) {
    Trace trace;
    trace.scenario_name = sc.name;
    trace.scenario_hash = scenario_hash(sc);
    trace.dt = sc.dt;
    trace.cycles = sc.cycles;
    trace.epsilon = sc.epsilon;
    trace.records.reserve(static_cast<std::size_t>(sc.cycles));
    return trace;
}

Trace run_continuous(const ControlScenario& sc) {
    ContinuousModel model = build_continuous_model(sc);
    Params params = sc.plant_params;
    const double dt = sc.dt;

    PhysicalState plant = model.plant0;
    PhysicalState controller = model.controller0;
    Trace trace = make_trace_shell(sc);

    for (const CyclePlan& plan : unwind(sc)) try {
        for (const Disturbance& d : plan.disturbances) params[d.param] = d.value;

        const double t = plan.t_start;
        const double y = plant.real(model.y_name);

        // encode: the plant's output is sensed into the controller's input slot
        core::CommutationSquare encode;
        encode.initial_physical = plant;
        encode.rep = model.rep_encode;
        encode.abstract_evolution = [](const AbstractState& m) { return m; };
        encode.physical_evolution = [&model, base = controller](const PhysicalState& p) {
            PhysicalState c = base;
            c.set(model.y_name, p.real(model.y_name), model.y_unit);
            c.set_time(p.time());
            return c;
        };
        encode.metric = core::absolute_metric();
        encode.epsilon = epsilon_for(sc, "encode");

        const PhysicalState controller_in = encode.physical_evolution(plant);

        // controller face: device dynamics vs the abstract signal computation
        core::CommutationSquare face;
        face.initial_physical = controller_in;
        face.rep = model.rep_controller;
        face.abstract_evolution = [&model, dt](const AbstractState& m) {
            return model.ctl_abs_step(m, dt);
        };
        face.physical_evolution = [&model, dt](const PhysicalState& c) {
            return model.ctl_phys_step(c, dt);
        };
        face.metric = model.metric_controller;
        face.epsilon = epsilon_for(sc, "controller");

        const PhysicalState controller_next = model.ctl_phys_step(controller_in, dt);
        const double s_next = controller_next.real("s");

        // plant face: one integrator step vs the closed form, input held
        const double drive = plant.real("s");
        core::CommutationSquare plant_face;
        plant_face.initial_physical = plant;
        plant_face.rep = model.rep_plant;
        plant_face.abstract_evolution = [&model, &params, drive, dt](const AbstractState& m) {
            AbstractState out;
            out.set_real("y", model.plant_closed_form(m.real("y"), drive, dt, params));
            return out;
        };
        plant_face.physical_evolution = [&model, &params, dt](const PhysicalState& p) {
            PhysicalState q = p;
            q.set(model.y_name, model.plant_numeric(p.real(model.y_name), p.real("s"), dt, params),
                  model.y_unit);
            q.set_time(p.time() + dt);
            return q;
        };
        plant_face.metric = core::absolute_metric();
        plant_face.epsilon = epsilon_for(sc, "plant");

        const PhysicalState plant_next = plant_face.physical_evolution(plant);

        // decode: the emitted signal is transduced into the plant's drive
        core::CommutationSquare decode;
        decode.initial_physical = controller_next;
        decode.rep = model.rep_decode;
        decode.abstract_evolution = [&model](const AbstractState& m) {
            AbstractState out;
            out.set_real("s", model.transduce(m.real("s")));
            return out;
        };
        decode.physical_evolution = [&model, plant_next](const PhysicalState& c) {
            PhysicalState p = plant_next;
            p.set("s", model.transduce(c.real("s")), Unit::dimensionless);
            return p;
        };
        decode.metric = model.metric_decode;
        decode.epsilon = epsilon_for(sc, "decode");

        core::ComputeCube cube;
        cube.encode_square = encode;
        cube.controller_face = face;
        cube.decode_square = decode;
        cube.plant_face = plant_face;
        cube.problem = core::represent(model.rep_controller, controller_in);
        cube.solution = model.ctl_abs_step(cube.problem, dt);
        const std::vector<core::CommutationReport> reports = core::check_cube(cube);

        CycleRecord record;
        record.cycle = plan.index;
        record.t = t;
        record.y = y;
        record.e_or_c = model.junction_value(controller_next, y);
        record.s = s_next;
        record.plant_state = decode.physical_evolution(controller_next);
        record.controller_state = controller_next;
        std::copy_n(reports.begin(), 4, record.reports.begin());
        trace.records.push_back(std::move(record));

        plant = trace.records.back().plant_state;  // next drive already staged
        controller = controller_next;
    } catch (const Error& e) {
        throw Error("cycle " + std::to_string(plan.index) + ": " + e.what());
    }

    finalize_trace(trace);
    return trace;
}

// ---------------------------------------------------------------------------
// processor family: memory plant with parity controller
// ---------------------------------------------------------------------------

constexpr int kWordWidth = 16;

PhysicalState agc_to_physical(const plants::ProcessorPlant& plant, double time, double staged_s) {
    PhysicalState p(time);
    p.set_bits("w", plant.pending.value_or(plants::halt_word()), kWordWidth);
    p.set("w_valid", plant.pending.has_value() ? 1.0 : 0.0, Unit::dimensionless);
    p.set("pc", static_cast<double>(plant.pc), Unit::dimensionless);
    p.set_bits("acc", plant.acc, kWordWidth);
    p.set("attempt", static_cast<double>(plant.fetch_attempts), Unit::dimensionless);
    p.set("flips", static_cast<double>(plant.flips), Unit::dimensionless);
    p.set("halted", plant.halted ? 1.0 : 0.0, Unit::dimensionless);
    p.set("s", staged_s, Unit::dimensionless);
    return p;
}

plants::ProcessorPlant agc_from_quantities(const PhysicalState& p,
                                           const std::vector<std::uint16_t>& storage,
                                           const Params& params) {
    plants::ProcessorPlant plant;
    plant.storage = storage;
    plant.pc = static_cast<int>(p.real("pc"));
    plant.acc = static_cast<std::uint16_t>(p.word("acc"));
    plant.checkpoint = {plant.pc, plant.acc};  // the checkpoint is the committed state
    if (p.real("w_valid") > 0.5) plant.pending = static_cast<std::uint16_t>(p.word("w"));
    plant.halted = p.real("halted") > 0.5;
    plant.p_flip = param(params, "p_flip");
    plant.force_flip = param(params, "force_flip") > 0.5;
    plant.fetch_attempts = static_cast<std::uint64_t>(p.real("attempt"));
    plant.flips = static_cast<std::uint64_t>(p.real("flips"));
    return plant;
}

plants::ProcessorPlant agc_from_values(const AbstractState& m,
                                       const std::vector<std::uint16_t>& storage,
                                       const Params& params) {
    plants::ProcessorPlant plant;
    plant.storage = storage;
    plant.pc = static_cast<int>(m.real("pc"));
    plant.acc = static_cast<std::uint16_t>(m.bits("acc").value);
    plant.checkpoint = {plant.pc, plant.acc};
    if (m.boolean("w_valid")) plant.pending = static_cast<std::uint16_t>(m.bits("w").value);
    plant.halted = m.boolean("halted");
    plant.p_flip = param(params, "p_flip");
    plant.force_flip = param(params, "force_flip") > 0.5;
    plant.fetch_attempts = static_cast<std::uint64_t>(m.real("attempt"));
    plant.flips = static_cast<std::uint64_t>(m.real("flips"));
    return plant;
}

AbstractState agc_to_values(const plants::ProcessorPlant& plant) {
    AbstractState m;
    m.set_bits("w", BitWord(kWordWidth, plant.pending.value_or(plants::halt_word())));
    m.set_bool("w_valid", plant.pending.has_value());
    m.set_real("pc", static_cast<double>(plant.pc));
    m.set_bits("acc", BitWord(kWordWidth, plant.acc));
    m.set_real("attempt", static_cast<double>(plant.fetch_attempts));
    m.set_real("flips", static_cast<double>(plant.flips));
    m.set_bool("halted", plant.halted);
    return m;
}

RepresentationPair agc_plant_rep() {
    RepresentationPair rep;
    rep.theory_tag = "memory-image";
    rep.declared_quantities = {"w", "w_valid", "pc", "acc", "attempt", "flips", "halted"};
    rep.declared_values = rep.declared_quantities;
    rep.represent_fn = [](const PhysicalState& p) {
        AbstractState m;
        m.set_bits("w", BitWord(kWordWidth, p.word("w")));
        m.set_bool("w_valid", p.real("w_valid") > 0.5);
        m.set_real("pc", p.real("pc"));
        m.set_bits("acc", BitWord(kWordWidth, p.word("acc")));
        m.set_real("attempt", p.real("attempt"));
        m.set_real("flips", p.real("flips"));
        m.set_bool("halted", p.real("halted") > 0.5);
        return m;
    };
    rep.instantiate_fn = [](const AbstractState& m) {
        PhysicalState p;
        p.set_bits("w", m.bits("w").value, kWordWidth);
        p.set("w_valid", m.boolean("w_valid") ? 1.0 : 0.0, Unit::dimensionless);
        p.set("pc", m.real("pc"), Unit::dimensionless);
        p.set_bits("acc", m.bits("acc").value, kWordWidth);
        p.set("attempt", m.real("attempt"), Unit::dimensionless);
        p.set("flips", m.real("flips"), Unit::dimensionless);
        p.set("halted", m.boolean("halted") ? 1.0 : 0.0, Unit::dimensionless);
        return p;
    };
    return rep;
}

RepresentationPair agc_word_rep() {
    RepresentationPair rep;
    rep.theory_tag = "fetched-word";
    rep.declared_quantities = {"w"};
    rep.declared_values = {"w"};
    rep.represent_fn = [](const PhysicalState& p) {
        AbstractState m;
        m.set_bits("w", BitWord(kWordWidth, p.word("w")));
        return m;
    };
    rep.instantiate_fn = [](const AbstractState& m) {
        PhysicalState p;
        p.set_bits("w", m.bits("w").value, kWordWidth);
        return p;
    };
    return rep;
}

RepresentationPair agc_controller_rep() {
    RepresentationPair rep;
    rep.theory_tag = "parity-checker";
    rep.declared_quantities = {"w", "s"};
    rep.declared_values = {"w", "s"};
    rep.represent_fn = [](const PhysicalState& p) {
        AbstractState m;
        m.set_bits("w", BitWord(kWordWidth, p.word("w")));
        m.set_bool("s", p.real("s") > 0.5);  // true = reset
        return m;
    };
    rep.instantiate_fn = [](const AbstractState& m) {
        PhysicalState p;
        p.set_bits("w", m.bits("w").value, kWordWidth);
        p.set("s", m.boolean("s") ? 1.0 : 0.0, Unit::dimensionless);
        return p;
    };
    return rep;
}

RepresentationPair agc_signal_rep() {
    RepresentationPair rep;
    rep.theory_tag = "verdict-line";
    rep.declared_quantities = {"s"};
    rep.declared_values = {"s"};
    rep.represent_fn = [](const PhysicalState& p) {
        AbstractState m;
        m.set_bool("s", p.real("s") > 0.5);
        return m;
    };
    rep.instantiate_fn = [](const AbstractState& m) {
        PhysicalState p;
        p.set("s", m.boolean("s") ? 1.0 : 0.0, Unit::dimensionless);
        return p;
    };
    return rep;
}

Trace run_processor(const ControlScenario& sc) {
    Params params = sc.plant_params;
    const double dt = sc.dt;
    const std::uint64_t seed = sc.seed;
    const std::vector<std::uint16_t> storage = plants::make_program(
        static_cast<std::uint64_t>(param(params, "program_seed")),
        static_cast<int>(param(params, "words")));

    const double s0 = sc.initial_signal.value_or(0.0);  // proceed
    plants::ProcessorPlant fresh;
    fresh.storage = storage;
    PhysicalState plant = agc_to_physical(fresh, 0.0, s0);

    PhysicalState controller(0.0);
    controller.set_bits("w", plants::halt_word(), kWordWidth);
    controller.set("s", 0.0, Unit::dimensionless);

    Trace trace = make_trace_shell(sc);

    const RepresentationPair rep_plant = agc_plant_rep();
    const RepresentationPair rep_word = agc_word_rep();
    const RepresentationPair rep_ctl = agc_controller_rep();
    const RepresentationPair rep_signal = agc_signal_rep();

    for (const CyclePlan& plan : unwind(sc)) try {
        for (const Disturbance& d : plan.disturbances) params[d.param] = d.value;

        const double t = plan.t_start;
        const double staged_signal = plant.real("s");

        // plant face first: the memory cycle happens, then its word is checked
        core::CommutationSquare plant_face;
        plant_face.initial_physical = plant;
        plant_face.rep = rep_plant;
        plant_face.physical_evolution = [&storage, &params, seed, dt](const PhysicalState& p) {
            const plants::ProcessorPlant before = agc_from_quantities(p, storage, params);
            const auto signal = p.real("s") > 0.5 ? plants::ProcessorSignal::reset
                                                  : plants::ProcessorSignal::proceed;
            if (before.halted) {
                PhysicalState q = p;
                q.set_time(p.time() + dt);
                return q;
            }
            const plants::ProcessorStepResult result = plants::processor_step(before, signal, seed);
            return agc_to_physical(result.plant, p.time() + dt, p.real("s"));
        };
        plant_face.abstract_evolution = [&storage, &params, seed,
                                         staged_signal](const AbstractState& m) {
            const plants::ProcessorPlant before = agc_from_values(m, storage, params);
            if (before.halted) return m;
            const auto signal = staged_signal > 0.5 ? plants::ProcessorSignal::reset
                                                    : plants::ProcessorSignal::proceed;
            return agc_to_values(plants::processor_step(before, signal, seed).plant);
        };
        plant_face.metric = core::discrete_metric();
        plant_face.epsilon = epsilon_for(sc, "plant");

        const PhysicalState plant_next = plant_face.physical_evolution(plant);
        const std::uint16_t word = static_cast<std::uint16_t>(plant_next.word("w"));

        // encode: the fetched word reaches the parity checker
        core::CommutationSquare encode;
        encode.initial_physical = plant_next;
        encode.rep = rep_word;
        encode.abstract_evolution = [](const AbstractState& m) { return m; };
        encode.physical_evolution = [base = controller](const PhysicalState& p) {
            PhysicalState c = base;
            c.set_bits("w", p.word("w"), kWordWidth);
            c.set_time(p.time());
            return c;
        };
        encode.metric = core::discrete_metric();
        encode.epsilon = epsilon_for(sc, "encode");

        const PhysicalState controller_in = encode.physical_evolution(plant_next);

        // controller face: the parity computation
        core::CommutationSquare face;
        face.initial_physical = controller_in;
        face.rep = rep_ctl;
        face.physical_evolution = [dt](PhysicalState c) {
            const auto verdict = controllers::parity_decide(
                controllers::ParityController{}, static_cast<std::uint16_t>(c.word("w")));
            c.set("s", verdict == plants::ProcessorSignal::reset ? 1.0 : 0.0,
                  Unit::dimensionless);
            c.set_time(c.time() + dt);
            return c;
        };
        face.abstract_evolution = [](AbstractState m) {
            const auto verdict = controllers::parity_decide(
                controllers::ParityController{}, static_cast<std::uint16_t>(m.bits("w").value));
            m.set_bool("s", verdict == plants::ProcessorSignal::reset);
            return m;
        };
        face.metric = core::discrete_metric();
        face.epsilon = epsilon_for(sc, "controller");

        const PhysicalState controller_next = face.physical_evolution(controller_in);
        const double s_next = controller_next.real("s");

        // decode: the verdict line reaches the processor's control input
        core::CommutationSquare decode;
        decode.initial_physical = controller_next;
        decode.rep = rep_signal;
        decode.abstract_evolution = [](const AbstractState& m) {
            AbstractState out;
            out.set_bool("s", m.boolean("s"));
            return out;
        };
        decode.physical_evolution = [plant_next](const PhysicalState& c) {
            PhysicalState p = plant_next;
            p.set("s", c.real("s") > 0.5 ? 1.0 : 0.0, Unit::dimensionless);
            return p;
        };
        decode.metric = core::discrete_metric();
        decode.epsilon = epsilon_for(sc, "decode");

        core::ComputeCube cube;
        cube.encode_square = encode;
        cube.controller_face = face;
        cube.decode_square = decode;
        cube.plant_face = plant_face;
        cube.problem = core::represent(rep_ctl, controller_in);
        cube.solution = face.abstract_evolution(cube.problem);
        const std::vector<core::CommutationReport> reports = core::check_cube(cube);

        CycleRecord record;
        record.cycle = plan.index;
        record.t = t;
        record.y = static_cast<double>(word);
        record.e_or_c = plants::negative_parity(word) ? 0.0 : 1.0;  // c = parity (1 = positive)
        record.s = s_next;
        record.plant_state = decode.physical_evolution(controller_next);
        record.controller_state = controller_next;
        std::copy_n(reports.begin(), 4, record.reports.begin());
        trace.records.push_back(std::move(record));

        plant = trace.records.back().plant_state;
        controller = controller_next;
    } catch (const Error& e) {
        throw Error("cycle " + std::to_string(plan.index) + ": " + e.what());
    }

    finalize_trace(trace);
    return trace;
}

}  // namespace

std::vector<CyclePlan> unwind(const ControlScenario& sc) {
    std::vector<CyclePlan> plans;
    plans.reserve(static_cast<std::size_t>(sc.cycles));
    for (long i = 0; i < sc.cycles; ++i) {
        CyclePlan plan;
        plan.index = i;
        plan.t_start = static_cast<double>(i) * sc.dt;
        plan.t_end = static_cast<double>(i + 1) * sc.dt;
        plan.plant_input = i == 0 ? SignalSource{SignalSource::Kind::scenario_default, -1}
                                  : SignalSource{SignalSource::Kind::prior_cycle, i - 1};
        for (const Disturbance& d : sc.disturbances) {
            if (d.cycle == i) plan.disturbances.push_back(d);
        }
        plans.push_back(std::move(plan));
    }
    return plans;
}

Trace run(const ControlScenario& sc) {
    if (sc.plant_kind == "processor") return run_processor(sc);
    return run_continuous(sc);
}

VerificationReport verify(const Trace& trace) { return verify(trace, trace.epsilon); }

VerificationReport verify(const Trace& trace, const std::map<std::string, double>& epsilon) {
    VerificationReport report;
    report.cycles = static_cast<long>(trace.records.size());
    report.pass = true;
    for (const CycleRecord& record : trace.records) {
        for (std::size_t k = 0; k < 4; ++k) {
            const double residual = record.reports[k].residual;
            const double eps = epsilon.at(kSquareNames[k]);
            report.max_residuals[k] = std::max(report.max_residuals[k], residual);
            if (residual <= eps) {
                ++report.pass_counts[k];
            } else {
                report.pass = false;
                if (!report.first_failure)
                    report.first_failure = FirstFailure{record.cycle, kSquareNames[k]};
            }
        }
    }
    return report;
}

ScenarioRepresentations scenario_representations(const ControlScenario& sc) {
    if (sc.plant_kind == "processor") {
        return {agc_word_rep(), agc_controller_rep(), agc_signal_rep(), agc_plant_rep()};
    }
    const ContinuousModel model = build_continuous_model(sc);
    return {model.rep_encode, model.rep_controller, model.rep_decode, model.rep_plant};
}

double default_initial_signal(const ControlScenario& sc) {
    if (sc.initial_signal) return *sc.initial_signal;
    if (sc.plant_kind == "processor") return 0.0;
    return build_continuous_model(sc).default_signal;
}

}  // namespace loopcheck::scenario
