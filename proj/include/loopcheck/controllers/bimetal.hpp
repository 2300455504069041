#pragma once

#include <algorithm>

#include "loopcheck/controllers/bangbang.hpp"

namespace loopcheck::controllers {

/// Bimetallic-coil thermostat. The coil end sits at distance
/// x = x_at_cal + alpha * (T - T_ref_cal) from the baseline and uncoils as
/// the temperature drops until it presses against the contact at x_re; the
/// closed contact switches the heater on. Contact closure is positional, so
/// the decision has no memory: it opens again as soon as the coil end clears
/// the contact.
struct BimetalCoil {
    double T_ref_cal = 0.0;  // calibration temperature, kelvin
    double x_at_cal = 0.0;   // coil end position at T_ref_cal, metre
    double alpha = 1.0;      // coil sensitivity, metre/kelvin, > 0
    double x_re = 0.0;       // contact position (set point), metre
};

/// Exact position equality is measure-zero in floating point, so "touching"
/// means within this fixed gap of the contact.
inline constexpr double kContactTol = 1e-6;  // metre

struct BimetalDecision {
    int contact = 0;  // 1 = touching = heater on
    double x = 0.0;   // coil end position, floored at x_re by the contact
};

inline BimetalDecision bimetal_decide(const BimetalCoil& ctl, double T) {
    const double x_free = ctl.x_at_cal + ctl.alpha * (T - ctl.T_ref_cal);
    const double x = std::max(x_free, ctl.x_re);  // the contact stops the coil
    return {x <= ctl.x_re + kContactTol ? 1 : 0, x};
}

/// Pure threshold form of the same decision, used as the coil's abstract
/// computation: touching iff T at or below the release temperature.
inline double bimetal_release_temperature(const BimetalCoil& ctl) {
    return ctl.T_ref_cal + (ctl.x_re + kContactTol - ctl.x_at_cal) / ctl.alpha;
}

inline int bimetal_rule(const BimetalCoil& ctl, double T) {
    return T <= bimetal_release_temperature(ctl) ? 1 : 0;
}

/// The digital controller whose decisions coincide with this coil's:
/// a degenerate-band thermostat whose set point is the coil's release
/// temperature. (A coil has no hold band, so the matched thermostat's band
/// collapses to a point; the decisions differ only at exact threshold
/// equality, which the hold then resolves.)
inline BangBangController matched_bangbang(const BimetalCoil& ctl, int u0 = 0) {
    return {bimetal_release_temperature(ctl), 0.0, u0};
}

}  // namespace loopcheck::controllers
