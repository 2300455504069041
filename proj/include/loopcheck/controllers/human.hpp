#pragma once

#include <algorithm>
#include <cmath>
#include <deque>

namespace loopcheck::controllers {

/// A human operator working a heater knob. Experience is parameterized as a
/// reaction delay (cycles between sensing an error and acting on it), a move
/// quantum (the coarseness of knob turns, with a dead zone below half a
/// quantum), and a feel for how far to turn per degree of error.
struct HumanPolicy {
    double T_re = 0.0;     // desired temperature, kelvin
    double k_h = 0.0;      // radian of knob per kelvin of error
    double quantum = 1.0;  // radian, > 0
    int delay = 0;         // cycles, >= 0
    double phi = 0.0;      // current knob angle, radian, in [0, phi_max]
    double phi_max = 1.0;  // radian

    std::deque<double> pending;  // delay line of sensed errors, size == delay
};

/// Quantized knob move for an acted-on error.
inline double human_knob_delta(double e, double k_h, double quantum) {
    return quantum * std::round(k_h * e / quantum);
}

/// Sense the temperature, queue the error, and act on the error sensed
/// `delay` cycles ago. Returns the controller with the knob updated; the new
/// angle is the emitted signal.
inline HumanPolicy human_policy_decide(HumanPolicy ctl, double T) {
    ctl.pending.push_back(ctl.T_re - T);
    const double acted_error = ctl.pending.front();
    ctl.pending.pop_front();
    ctl.phi = std::clamp(ctl.phi + human_knob_delta(acted_error, ctl.k_h, ctl.quantum), 0.0,
                         ctl.phi_max);
    return ctl;
}

/// Fresh policy with the delay line primed with zero errors.
inline HumanPolicy make_human_policy(double T_re, double k_h, double quantum, int delay,
                                     double phi0, double phi_max) {
    HumanPolicy ctl{T_re, k_h, quantum, delay, phi0, phi_max, {}};
    ctl.pending.assign(static_cast<std::size_t>(delay), 0.0);
    return ctl;
}

}  // namespace loopcheck::controllers
