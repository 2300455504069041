#pragma once

#include <algorithm>

namespace loopcheck::controllers {

/// Static proportional controller: signal = clamp(gain * error).
struct ProportionalController {
    double gain = 1.0;
    double out_min = 0.0;
    double out_max = 1.0;
};

inline double proportional_decide(const ProportionalController& ctl, double e) {
    return std::clamp(ctl.gain * e, ctl.out_min, ctl.out_max);
}

}  // namespace loopcheck::controllers
