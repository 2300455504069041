#include "loopcheck/io/trace_io.hpp"

#include <charconv>
#include <sstream>

#include <json.hpp>

#include "loopcheck/errors.hpp"

namespace loopcheck::io {

namespace {

using nlohmann::json;
using namespace loopcheck::core;
using namespace loopcheck::scenario;

std::string format_real(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

Unit unit_from_name(const std::string& name) {
    for (Unit u : {Unit::kelvin, Unit::radian, Unit::radian_per_second, Unit::volt, Unit::metre,
                   Unit::dimensionless, Unit::bits}) {
        if (name == unit_name(u)) return u;
    }
    throw Error("unknown unit '" + name + "'");
}

json physical_to_json(const PhysicalState& p) {
    json quantities = json::object();
    for (const auto& [name, q] : p.quantities()) {
        json entry = {{"value", q.value}, {"unit", std::string(unit_name(q.unit))}};
        if (q.unit == Unit::bits) entry["width"] = q.bit_width;
        quantities[name] = std::move(entry);
    }
    return {{"time", p.time()}, {"quantities", std::move(quantities)}};
}

PhysicalState physical_from_json(const json& j) {
    PhysicalState p(j.at("time").get<double>());
    for (const auto& [name, entry] : j.at("quantities").items()) {
        const Unit unit = unit_from_name(entry.at("unit").get<std::string>());
        if (unit == Unit::bits) {
            p.set_bits(name, entry.at("value").get<std::uint32_t>(),
                       entry.at("width").get<int>());
        } else {
            p.set(name, entry.at("value").get<double>(), unit);
        }
    }
    return p;
}

json abstract_to_json(const AbstractState& m) {
    json values = json::object();
    for (const auto& [name, value] : m.values()) {
        if (std::holds_alternative<double>(value)) {
            values[name] = {{"kind", "real"}, {"value", std::get<double>(value)}};
        } else if (std::holds_alternative<bool>(value)) {
            values[name] = {{"kind", "bool"}, {"value", std::get<bool>(value)}};
        } else {
            const BitWord& w = std::get<BitWord>(value);
            values[name] = {{"kind", "bits"}, {"width", w.width}, {"value", w.value}};
        }
    }
    return values;
}

AbstractState abstract_from_json(const json& j) {
    AbstractState m;
    for (const auto& [name, entry] : j.items()) {
        const std::string kind = entry.at("kind").get<std::string>();
        if (kind == "real") {
            m.set_real(name, entry.at("value").get<double>());
        } else if (kind == "bool") {
            m.set_bool(name, entry.at("value").get<bool>());
        } else if (kind == "bits") {
            m.set_bits(name,
                       BitWord(entry.at("width").get<int>(), entry.at("value").get<std::uint32_t>()));
        } else {
            throw Error("unknown abstract value kind '" + kind + "'");
        }
    }
    return m;
}

json report_to_json(const CommutationReport& report) {
    return {{"residual", report.residual},
            {"epsilon", report.epsilon},
            {"commutes", report.commutes},
            {"corners",
             {{"initial_physical", physical_to_json(report.corners.initial_physical)},
              {"final_physical", physical_to_json(report.corners.final_physical)},
              {"initial_abstract", abstract_to_json(report.corners.initial_abstract)},
              {"abstract_outcome", abstract_to_json(report.corners.abstract_outcome)},
              {"represented_outcome", abstract_to_json(report.corners.represented_outcome)}}}};
}

CommutationReport report_from_json(const json& j) {
    CommutationReport report;
    report.residual = j.at("residual").get<double>();
    report.epsilon = j.at("epsilon").get<double>();
    report.commutes = j.at("commutes").get<bool>();
    const json& corners = j.at("corners");
    report.corners.initial_physical = physical_from_json(corners.at("initial_physical"));
    report.corners.final_physical = physical_from_json(corners.at("final_physical"));
    report.corners.initial_abstract = abstract_from_json(corners.at("initial_abstract"));
    report.corners.abstract_outcome = abstract_from_json(corners.at("abstract_outcome"));
    report.corners.represented_outcome = abstract_from_json(corners.at("represented_outcome"));
    return report;
}

}  // namespace

std::string trace_to_csv(const Trace& trace) {
    std::ostringstream out;
    out << "cycle,t,y,e_or_c,s,res_encode,res_controller,res_decode,res_plant\n";
    for (const CycleRecord& r : trace.records) {
        out << r.cycle << ',' << format_real(r.t) << ',' << format_real(r.y) << ','
            << format_real(r.e_or_c) << ',' << format_real(r.s);
        for (const CommutationReport& report : r.reports) out << ',' << format_real(report.residual);
        out << '\n';
    }
    return out.str();
}

std::string trace_to_json(const Trace& trace) {
    json records = json::array();
    for (const CycleRecord& r : trace.records) {
        json reports = json::object();
        for (std::size_t k = 0; k < 4; ++k) reports[kSquareNames[k]] = report_to_json(r.reports[k]);
        records.push_back({{"cycle", r.cycle},
                           {"t", r.t},
                           {"y", r.y},
                           {"e_or_c", r.e_or_c},
                           {"s", r.s},
                           {"plant_state", physical_to_json(r.plant_state)},
                           {"controller_state", physical_to_json(r.controller_state)},
                           {"reports", std::move(reports)}});
    }
    json j = {{"scenario_name", trace.scenario_name},
              {"scenario_hash", trace.scenario_hash},
              {"dt", trace.dt},
              {"cycles", trace.cycles},
              {"epsilon", trace.epsilon},
              {"pass", trace.pass},
              {"records", std::move(records)}};
    if (trace.first_failure) {
        j["first_failure"] = {{"cycle", trace.first_failure->cycle},
                              {"square", trace.first_failure->square}};
    } else {
        j["first_failure"] = nullptr;
    }
    return j.dump(2);
}

Trace trace_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(std::string("trace is not valid JSON: ") + e.what());
    }
    try {
        Trace trace;
        trace.scenario_name = j.at("scenario_name").get<std::string>();
        trace.scenario_hash = j.at("scenario_hash").get<std::string>();
        trace.dt = j.at("dt").get<double>();
        trace.cycles = j.at("cycles").get<long>();
        trace.epsilon = j.at("epsilon").get<std::map<std::string, double>>();
        trace.pass = j.at("pass").get<bool>();
        if (!j.at("first_failure").is_null()) {
            trace.first_failure = FirstFailure{j["first_failure"].at("cycle").get<long>(),
                                               j["first_failure"].at("square").get<std::string>()};
        }
        for (const json& rj : j.at("records")) {
            CycleRecord r;
            r.cycle = rj.at("cycle").get<long>();
            r.t = rj.at("t").get<double>();
            r.y = rj.at("y").get<double>();
            r.e_or_c = rj.at("e_or_c").get<double>();
            r.s = rj.at("s").get<double>();
            r.plant_state = physical_from_json(rj.at("plant_state"));
            r.controller_state = physical_from_json(rj.at("controller_state"));
            for (std::size_t k = 0; k < 4; ++k)
                r.reports[k] = report_from_json(rj.at("reports").at(kSquareNames[k]));
            trace.records.push_back(std::move(r));
        }
        return trace;
    } catch (const json::exception& e) {
        throw Error(std::string("trace JSON is missing fields: ") + e.what());
    }
}

}  // namespace loopcheck::io
