#pragma once

namespace loopcheck::controllers {

/// Two-valued thermostat controller with a hysteresis band around the set
/// point. The current output doubles as the controller's memory: inside the
/// band the previous decision holds.
struct BangBangController {
    double T_re = 0.0;  // set point, kelvin
    double h = 0.0;     // hysteresis half-width, kelvin, >= 0
    int u = 0;          // current output, 0 or 1
};

/// Pure decision rule shared by the physical and abstract layers.
inline int bangbang_rule(double T, double T_re, double h, int u_prev) {
    if (T < T_re - h) return 1;
    if (T > T_re + h) return 0;
    return u_prev;
}

inline BangBangController bangbang_decide(BangBangController ctl, double T) {
    ctl.u = bangbang_rule(T, ctl.T_re, ctl.h, ctl.u);
    return ctl;
}

}  // namespace loopcheck::controllers
