#include "loopcheck/scenario/builtins.hpp"

#include <map>

#include "loopcheck/errors.hpp"

namespace loopcheck::scenario {

namespace {

// A wall thermostat holding a room against a cold ambient. The heater at
// full power balances losses exactly at the set point, so the loop rides up
// to the band and holds.
const std::string kThermostatDigital = R"(scenario "thermostat-digital"
topology serial
plant thermal { T0=18.0  T_amb=10.0  C_th=1.0  k_loss=0.1  P_max=1.0 }
controller bangbang { T_re=20.0  h=1.0 }
run { dt=0.01  cycles=20000  integrator=rk4  seed=42 }
epsilon { encode=1e-9  controller=1e-9  decode=1e-9  plant=0.001 }
)";

// The same room driven by a bimetallic coil calibrated to close its contact
// at 19.0 (x reaches x_re one kelvin below the calibration temperature).
const std::string kThermostatBimetal = R"(scenario "thermostat-bimetal"
topology parallel
plant thermal { T0=18.0  T_amb=10.0  C_th=1.0  k_loss=0.1  P_max=1.0 }
controller bimetal { T_ref_cal=20.0  x_at_cal=0.01  alpha=0.001  x_re=0.009 }
run { dt=0.01  cycles=20000  integrator=rk4  seed=42 }
epsilon { encode=1e-9  controller=1e-9  decode=1e-9  plant=0.001 }
)";

// Flyball governor on a loaded shaft. x_re is the collar height at the
// 4 rad/s equilibrium (cos(theta*) = 9.81/16); the load steps up mid-run and
// the proportional action settles with the classic steady-state offset.
const std::string kGovernor = R"(scenario "governor"
topology parallel
plant engine { omega0=4.0  J=1.0  tau_max=2.0  tau_load=0.3 }
controller governor { l1=1.0  beta=2.0  c0=0.8  c1=-0.5  x_re=0.4934375  valve_gain=1.0  v0=0.15  theta0=0.9108  theta_dot0=0.0 }
run { dt=0.01  cycles=8000  integrator=rk4  seed=42 }
epsilon { encode=1e-9  controller=1e-9  decode=1e-9  plant=0.001 }
disturb { at=4000  set=tau_load  value=0.5 }
)";

// A driver nursing a cabin heater knob: slow reaction, coarse moves, and a
// dead zone below half a knob quantum.
const std::string kCarHeaterHuman = R"(scenario "car-heater-human"
topology serial
plant thermal { T0=12.0  T_amb=5.0  C_th=2.0  k_loss=0.1  P_max=2.0 }
controller human { T_re=21.0  k_h=0.0005  quantum=0.0005  delay=50  phi0=0.0  phi_max=3.14159265 }
run { dt=0.01  cycles=20000  integrator=rk4  seed=42 }
epsilon { encode=1e-9  controller=1e-9  decode=1e-9  plant=0.001 }
)";

// A processor pulling words from storage through a channel that flips at
// most one bit per fetch; the parity check sends it back to the checkpoint
// whenever a flip lands.
const std::string kAgcParity = R"(scenario "agc-parity"
topology parallel
plant processor { words=64  p_flip=0.1  program_seed=7 }
controller parity { }
run { dt=0.01  cycles=200  integrator=rk4  seed=42 }
epsilon { encode=0.5  controller=0.5  decode=0.5  plant=0.5 }
)";

const std::vector<std::string> kNames = {
    "thermostat-digital", "thermostat-bimetal", "governor", "car-heater-human", "agc-parity",
};

const std::map<std::string, const std::string*> kSources = {
    {"thermostat-digital", &kThermostatDigital},
    {"thermostat-bimetal", &kThermostatBimetal},
    {"governor", &kGovernor},
    {"car-heater-human", &kCarHeaterHuman},
    {"agc-parity", &kAgcParity},
};

}  // namespace

const std::vector<std::string>& builtin_names() { return kNames; }

const std::string& builtin_source(const std::string& name) {
    auto it = kSources.find(name);
    if (it == kSources.end()) throw Error("unknown builtin scenario '" + name + "'");
    return *it->second;
}

bool is_builtin(const std::string& name) { return kSources.count(name) > 0; }

}  // namespace loopcheck::scenario
