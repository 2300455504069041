#pragma once

#include <string_view>

namespace loopcheck::core {

/// Unit tags carried by physical quantities.
enum class Unit {
    kelvin,
    radian,
    radian_per_second,
    volt,
    metre,
    dimensionless,
    bits,
};

constexpr std::string_view unit_name(Unit u) {
    switch (u) {
        case Unit::kelvin: return "kelvin";
        case Unit::radian: return "radian";
        case Unit::radian_per_second: return "radian/second";
        case Unit::volt: return "volt";
        case Unit::metre: return "metre";
        case Unit::dimensionless: return "dimensionless";
        case Unit::bits: return "bits";
    }
    return "?";
}

}  // namespace loopcheck::core
