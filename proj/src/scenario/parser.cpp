#include "loopcheck/scenario/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <utility>

#include "loopcheck/errors.hpp"

namespace loopcheck::scenario {

namespace {

// ---------------------------------------------------------------------------
// key tables
// ---------------------------------------------------------------------------

const std::map<std::string, std::vector<std::string>> kPlantKeys = {
    {"thermal", {"T0", "T_amb", "C_th", "k_loss", "P_max"}},
    {"engine", {"omega0", "J", "tau_max", "tau_load"}},
    {"processor", {"words", "p_flip", "program_seed", "force_flip"}},
};

const std::map<std::string, std::vector<std::string>> kControllerKeys = {
    {"bangbang", {"T_re", "h", "u0"}},
    {"proportional", {"gain", "out_min", "out_max"}},
    {"bimetal", {"T_ref_cal", "x_at_cal", "alpha", "x_re"}},
    {"governor",
     {"l1", "beta", "g", "c0", "c1", "x_re", "valve_gain", "v0", "theta0", "theta_dot0"}},
    {"human", {"T_re", "k_h", "quantum", "delay", "phi0", "phi_max"}},
    {"parity", {}},
};

const std::vector<std::string> kRunKeys = {"dt", "cycles", "integrator", "seed", "s0"};
const std::vector<std::string> kEpsilonKeys = {"encode", "controller", "decode", "plant"};
const std::vector<std::string> kDisturbKeys = {"at", "set", "value"};

// Live coefficients a disturbance may step. Initial-state parameters (T0,
// omega0, words, program_seed) are consumed at construction and excluded.
const std::map<std::string, std::vector<std::string>> kDisturbableParams = {
    {"thermal", {"T_amb", "C_th", "k_loss", "P_max"}},
    {"engine", {"J", "tau_max", "tau_load"}},
    {"processor", {"p_flip", "force_flip"}},
};

bool contains(const std::vector<std::string>& keys, const std::string& k) {
    return std::find(keys.begin(), keys.end(), k) != keys.end();
}

// ---------------------------------------------------------------------------
// lexer
// ---------------------------------------------------------------------------

struct Token {
    enum class Type { ident, number, string, lbrace, rbrace, equals, end };
    Type type = Type::end;
    std::string text;
    int line = 0;
    int col = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    Token next() {
        skip_space_and_comments();
        Token tok;
        tok.line = line_;
        tok.col = col_;
        if (pos_ >= text_.size()) {
            tok.type = Token::Type::end;
            return tok;
        }
        const char c = text_[pos_];
        if (c == '{') { advance(); tok.type = Token::Type::lbrace; tok.text = "{"; return tok; }
        if (c == '}') { advance(); tok.type = Token::Type::rbrace; tok.text = "}"; return tok; }
        if (c == '=') { advance(); tok.type = Token::Type::equals; tok.text = "="; return tok; }
        if (c == '"') return lex_string(tok);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return lex_ident(tok);
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.')
            return lex_number(tok);
        throw ParseError(line_, col_, std::string("unexpected character '") + c + "'");
    }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space_and_comments() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    Token lex_string(Token tok) {
        advance();  // opening quote
        std::string out;
        while (pos_ < text_.size() && text_[pos_] != '"') {
            if (text_[pos_] == '\n')
                throw ParseError(tok.line, tok.col, "unterminated string");
            out.push_back(text_[pos_]);
            advance();
        }
        if (pos_ >= text_.size()) throw ParseError(tok.line, tok.col, "unterminated string");
        advance();  // closing quote
        tok.type = Token::Type::string;
        tok.text = std::move(out);
        return tok;
    }

    Token lex_ident(Token tok) {
        std::string out;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
                out.push_back(c);
                advance();
            } else {
                break;
            }
        }
        tok.type = Token::Type::ident;
        tok.text = std::move(out);
        return tok;
    }

    Token lex_number(Token tok) {
        std::string out;
        auto take = [&] { out.push_back(text_[pos_]); advance(); };
        if (text_[pos_] == '-' || text_[pos_] == '+') take();
        bool digits = false;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            digits = true;
            take();
        }
        if (pos_ < text_.size() && text_[pos_] == '.') {
            take();
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                digits = true;
                take();
            }
        }
        if (!digits) throw ParseError(tok.line, tok.col, "malformed number");
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            take();
            if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) take();
            bool exp_digits = false;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                exp_digits = true;
                take();
            }
            if (!exp_digits) throw ParseError(tok.line, tok.col, "malformed exponent");
        }
        tok.type = Token::Type::number;
        tok.text = std::move(out);
        return tok;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

// ---------------------------------------------------------------------------
// raw structure (pre-validation)
// ---------------------------------------------------------------------------

struct RawEntry {
    std::string value;
    bool is_number = false;
    int line = 0;
    int col = 0;
};

struct RawBlock {
    std::string kind;  // plant / controller variant name; empty otherwise
    int line = 0;
    int col = 0;
    std::vector<std::pair<std::string, RawEntry>> entries;

    const RawEntry* find(const std::string& key) const {
        for (const auto& [k, v] : entries) {
            if (k == key) return &v;
        }
        return nullptr;
    }

    void put(const std::string& key, RawEntry entry) {
        for (auto& [k, v] : entries) {
            if (k == key) {
                v = std::move(entry);
                return;
            }
        }
        entries.emplace_back(key, std::move(entry));
    }
};

struct RawScenario {
    std::optional<RawEntry> name;
    std::optional<RawEntry> topology;
    std::optional<RawEntry> reference;
    std::optional<RawBlock> plant, controller, run, epsilon;
    std::vector<RawBlock> disturbs;
};

class Parser {
public:
    explicit Parser(const std::string& text) : lexer_(text) { bump(); }

    RawScenario parse() {
        RawScenario raw;
        while (tok_.type != Token::Type::end) {
            if (tok_.type != Token::Type::ident)
                throw ParseError(tok_.line, tok_.col, "expected a statement keyword");
            const std::string kw = tok_.text;
            const int line = tok_.line, col = tok_.col;
            bump();
            if (kw == "scenario") {
                reject_duplicate(raw.name.has_value(), "scenario", line, col);
                raw.name = expect_string("scenario name");
            } else if (kw == "topology") {
                reject_duplicate(raw.topology.has_value(), "topology", line, col);
                RawEntry e = expect_ident("topology");
                if (e.value != "serial" && e.value != "parallel")
                    throw ParseError(e.line, e.col, "topology must be 'serial' or 'parallel'");
                raw.topology = std::move(e);
            } else if (kw == "reference") {
                reject_duplicate(raw.reference.has_value(), "reference", line, col);
                raw.reference = expect_number("reference");
            } else if (kw == "plant") {
                reject_duplicate(raw.plant.has_value(), "plant", line, col);
                raw.plant = parse_kinded_block(kPlantKeys, "plant");
            } else if (kw == "controller") {
                reject_duplicate(raw.controller.has_value(), "controller", line, col);
                raw.controller = parse_kinded_block(kControllerKeys, "controller");
            } else if (kw == "run") {
                reject_duplicate(raw.run.has_value(), "run", line, col);
                raw.run = parse_block(kRunKeys, "run");
            } else if (kw == "epsilon") {
                reject_duplicate(raw.epsilon.has_value(), "epsilon", line, col);
                raw.epsilon = parse_block(kEpsilonKeys, "epsilon");
            } else if (kw == "disturb") {
                raw.disturbs.push_back(parse_block(kDisturbKeys, "disturb"));
            } else {
                throw ParseError(line, col, "unknown statement '" + kw + "'");
            }
        }
        return raw;
    }

private:
    void bump() { tok_ = lexer_.next(); }

    static void reject_duplicate(bool present, const std::string& what, int line, int col) {
        if (present) throw ParseError(line, col, "duplicate " + what);
    }

    RawEntry expect_string(const std::string& what) {
        if (tok_.type != Token::Type::string)
            throw ParseError(tok_.line, tok_.col, "expected quoted " + what);
        RawEntry e{tok_.text, false, tok_.line, tok_.col};
        bump();
        return e;
    }

    RawEntry expect_ident(const std::string& what) {
        if (tok_.type != Token::Type::ident)
            throw ParseError(tok_.line, tok_.col, "expected identifier for " + what);
        RawEntry e{tok_.text, false, tok_.line, tok_.col};
        bump();
        return e;
    }

    RawEntry expect_number(const std::string& what) {
        if (tok_.type != Token::Type::number)
            throw ParseError(tok_.line, tok_.col, "expected number for " + what);
        RawEntry e{tok_.text, true, tok_.line, tok_.col};
        bump();
        return e;
    }

    RawBlock parse_kinded_block(const std::map<std::string, std::vector<std::string>>& kinds,
                                const std::string& what) {
        if (tok_.type != Token::Type::ident)
            throw ParseError(tok_.line, tok_.col, "expected " + what + " kind");
        auto it = kinds.find(tok_.text);
        if (it == kinds.end())
            throw ParseError(tok_.line, tok_.col, "unknown " + what + " kind '" + tok_.text + "'");
        const std::string kind = tok_.text;
        bump();
        RawBlock block = parse_block(it->second, what + " " + kind);
        block.kind = kind;
        return block;
    }

    RawBlock parse_block(const std::vector<std::string>& allowed_keys, const std::string& context) {
        RawBlock block;
        block.line = tok_.line;
        block.col = tok_.col;
        if (tok_.type != Token::Type::lbrace)
            throw ParseError(tok_.line, tok_.col, "expected '{' to open " + context + " block");
        bump();
        while (tok_.type != Token::Type::rbrace) {
            if (tok_.type == Token::Type::end)
                throw ParseError(block.line, block.col, "unclosed " + context + " block");
            if (tok_.type != Token::Type::ident)
                throw ParseError(tok_.line, tok_.col, "expected key in " + context + " block");
            const std::string key = tok_.text;
            const int kline = tok_.line, kcol = tok_.col;
            if (!contains(allowed_keys, key))
                throw ParseError(kline, kcol, "unknown key '" + key + "' in " + context + " block");
            if (block.find(key))
                throw ParseError(kline, kcol, "duplicate key '" + key + "'");
            bump();
            if (tok_.type != Token::Type::equals)
                throw ParseError(tok_.line, tok_.col, "expected '=' after '" + key + "'");
            bump();
            if (tok_.type == Token::Type::number) {
                block.entries.emplace_back(key, RawEntry{tok_.text, true, tok_.line, tok_.col});
            } else if (tok_.type == Token::Type::ident) {
                block.entries.emplace_back(key, RawEntry{tok_.text, false, tok_.line, tok_.col});
            } else {
                throw ParseError(tok_.line, tok_.col, "expected value for '" + key + "'");
            }
            bump();
        }
        bump();  // '}'
        return block;
    }

    Lexer lexer_;
    Token tok_;
};

// ---------------------------------------------------------------------------
// overrides
// ---------------------------------------------------------------------------

RawBlock* block_for_path(RawScenario& raw, const std::string& block) {
    if (block == "plant" && raw.plant) return &*raw.plant;
    if (block == "controller" && raw.controller) return &*raw.controller;
    if (block == "run" && raw.run) return &*raw.run;
    if (block == "epsilon" && raw.epsilon) return &*raw.epsilon;
    return nullptr;
}

const std::vector<std::string>& allowed_keys_for(const std::string& block,
                                                 const RawBlock& target) {
    if (block == "plant") return kPlantKeys.at(target.kind);
    if (block == "controller") return kControllerKeys.at(target.kind);
    if (block == "run") return kRunKeys;
    return kEpsilonKeys;
}

void apply_override(RawScenario& raw, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ParseError(0, 0, "override '" + assignment + "' is not key=value");
    const std::string path = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);
    if (value.empty()) throw ParseError(0, 0, "override '" + assignment + "' has an empty value");

    const bool numeric = (std::isdigit(static_cast<unsigned char>(value[0])) ||
                          value[0] == '-' || value[0] == '+' || value[0] == '.');
    RawEntry entry{value, numeric, 0, 0};

    const auto dot = path.find('.');
    if (dot == std::string::npos) {
        if (path == "topology") {
            if (value != "serial" && value != "parallel")
                throw ParseError(0, 0, "topology must be 'serial' or 'parallel'");
            raw.topology = entry;
        } else if (path == "reference") {
            raw.reference = entry;
        } else {
            throw ParseError(0, 0, "unknown override target '" + path + "'");
        }
        return;
    }
    const std::string block = path.substr(0, dot);
    const std::string key = path.substr(dot + 1);
    RawBlock* target = block_for_path(raw, block);
    if (!target) throw ParseError(0, 0, "unknown override block '" + block + "'");
    if (!contains(allowed_keys_for(block, *target), key))
        throw ParseError(0, 0, "unknown key '" + key + "' in " + block + " block");
    target->put(key, std::move(entry));
}

// ---------------------------------------------------------------------------
// validation
// ---------------------------------------------------------------------------

double to_number(const std::string& field, const RawEntry& entry) {
    if (!entry.is_number) throw ValidationError(field, "expected a number");
    double out = 0.0;
    const char* first = entry.value.data();
    const char* last = first + entry.value.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last) throw ValidationError(field, "malformed number");
    if (!std::isfinite(out)) throw ValidationError(field, "must be finite");
    return out;
}

long to_count(const std::string& field, double v) {
    if (v != std::floor(v) || std::abs(v) > 9e15)
        throw ValidationError(field, "must be an integer");
    return static_cast<long>(v);
}

std::map<std::string, double> block_numbers(const std::string& block_name, const RawBlock& block) {
    std::map<std::string, double> out;
    for (const auto& [key, entry] : block.entries)
        out[key] = to_number(block_name + "." + key, entry);
    return out;
}

void require_keys(const std::string& block_name, const std::map<std::string, double>& params,
                  const std::vector<std::string>& required) {
    for (const std::string& key : required) {
        if (!params.count(key))
            throw ValidationError(block_name + "." + key, "required key missing");
    }
}

void require(bool ok, const std::string& field, const std::string& reason) {
    if (!ok) throw ValidationError(field, reason);
}

void validate_plant(ControlScenario& sc) {
    auto& p = sc.plant_params;
    if (sc.plant_kind == "thermal") {
        require_keys("plant", p, {"T0", "T_amb", "C_th", "k_loss", "P_max"});
        require(p["C_th"] > 0.0, "plant.C_th", "must be > 0");
        require(p["k_loss"] >= 0.0, "plant.k_loss", "must be >= 0");
        require(p["P_max"] >= 0.0, "plant.P_max", "must be >= 0");
    } else if (sc.plant_kind == "engine") {
        require_keys("plant", p, {"omega0", "J", "tau_max", "tau_load"});
        require(p["J"] > 0.0, "plant.J", "must be > 0");
        require(p["omega0"] >= 0.0, "plant.omega0", "must be >= 0");
    } else {  // processor
        require_keys("plant", p, {"words", "p_flip", "program_seed"});
        if (!p.count("force_flip")) p["force_flip"] = 0.0;
        require(to_count("plant.words", p["words"]) >= 1, "plant.words", "must be >= 1");
        (void)to_count("plant.program_seed", p["program_seed"]);
        require(p["p_flip"] >= 0.0 && p["p_flip"] <= 1.0, "plant.p_flip", "must lie in [0,1]");
        require(p["force_flip"] == 0.0 || p["force_flip"] == 1.0, "plant.force_flip",
                "must be 0 or 1");
    }
}

void validate_controller(ControlScenario& sc) {
    auto& c = sc.controller_params;
    if (sc.controller_kind == "bangbang") {
        require_keys("controller", c, {"T_re", "h"});
        if (!c.count("u0")) c["u0"] = 0.0;
        require(c["h"] >= 0.0, "controller.h", "must be >= 0");
        require(c["u0"] == 0.0 || c["u0"] == 1.0, "controller.u0", "must be 0 or 1");
    } else if (sc.controller_kind == "proportional") {
        require_keys("controller", c, {"gain", "out_min", "out_max"});
        require(c["out_min"] <= c["out_max"], "controller.out_min", "must be <= out_max");
    } else if (sc.controller_kind == "bimetal") {
        require_keys("controller", c, {"T_ref_cal", "x_at_cal", "alpha", "x_re"});
        require(c["alpha"] > 0.0, "controller.alpha", "must be > 0");
    } else if (sc.controller_kind == "governor") {
        require_keys("controller", c,
                     {"l1", "beta", "c0", "c1", "x_re", "valve_gain", "v0", "theta0",
                      "theta_dot0"});
        if (!c.count("g")) c["g"] = 9.81;
        require(c["l1"] > 0.0, "controller.l1", "must be > 0");
        require(c["beta"] >= 0.0, "controller.beta", "must be >= 0");
        require(c["c1"] < 0.0, "controller.c1", "must be < 0");
        require(c["theta0"] >= 0.0 && c["theta0"] < 1.5707, "controller.theta0",
                "must lie in [0, pi/2)");
    } else if (sc.controller_kind == "human") {
        require_keys("controller", c, {"T_re", "k_h", "quantum", "delay", "phi0", "phi_max"});
        require(c["quantum"] > 0.0, "controller.quantum", "must be > 0");
        require(to_count("controller.delay", c["delay"]) >= 0, "controller.delay",
                "must be >= 0");
        require(c["phi_max"] > 0.0, "controller.phi_max", "must be > 0");
        require(c["phi0"] >= 0.0 && c["phi0"] <= c["phi_max"], "controller.phi0",
                "must lie in [0, phi_max]");
    }
    // parity: no parameters
}

struct Pairing {
    const char* plant;
    const char* controller;
    std::optional<controllers::Topology> forced_topology;
};

constexpr Pairing kPairings[] = {
    {"thermal", "bangbang", controllers::Topology::serial},
    {"thermal", "bimetal", controllers::Topology::parallel},
    {"thermal", "human", controllers::Topology::serial},
    {"thermal", "proportional", std::nullopt},
    {"engine", "governor", controllers::Topology::parallel},
    {"engine", "proportional", std::nullopt},
    {"processor", "parity", controllers::Topology::parallel},
};

void validate_pairing(const ControlScenario& sc) {
    for (const Pairing& pairing : kPairings) {
        if (sc.plant_kind != pairing.plant || sc.controller_kind != pairing.controller) continue;
        if (pairing.forced_topology && sc.topology != *pairing.forced_topology)
            throw ValidationError("topology", std::string("a ") + pairing.controller +
                                                  " controller runs in the " +
                                                  (*pairing.forced_topology ==
                                                           controllers::Topology::serial
                                                       ? "serial"
                                                       : "parallel") +
                                                  " topology");
        return;
    }
    throw ValidationError("controller",
                          "controller '" + sc.controller_kind + "' cannot drive plant '" +
                              sc.plant_kind + "'");
}

ControlScenario validate(RawScenario raw) {
    ControlScenario sc;
    if (!raw.name) throw ValidationError("scenario", "missing scenario name");
    sc.name = raw.name->value;
    if (!raw.topology) throw ValidationError("topology", "missing topology statement");
    if (raw.topology->value == "serial") {
        sc.topology = controllers::Topology::serial;
    } else if (raw.topology->value == "parallel") {
        sc.topology = controllers::Topology::parallel;
    } else {
        throw ValidationError("topology", "must be 'serial' or 'parallel'");
    }
    if (!raw.plant) throw ValidationError("plant", "missing plant block");
    if (!raw.controller) throw ValidationError("controller", "missing controller block");
    if (!raw.run) throw ValidationError("run", "missing run block");
    if (!raw.epsilon)
        throw ValidationError("epsilon", "missing epsilon block (no default tolerances)");

    sc.plant_kind = raw.plant->kind;
    sc.plant_params = block_numbers("plant", *raw.plant);
    sc.controller_kind = raw.controller->kind;
    sc.controller_params = block_numbers("controller", *raw.controller);

    if (raw.reference) sc.reference = to_number("reference", *raw.reference);

    // run block
    const RawBlock& run = *raw.run;
    const RawEntry* dt = run.find("dt");
    const RawEntry* cycles = run.find("cycles");
    const RawEntry* integrator = run.find("integrator");
    const RawEntry* seed = run.find("seed");
    if (!dt) throw ValidationError("run.dt", "required key missing");
    if (!cycles) throw ValidationError("run.cycles", "required key missing");
    if (!integrator) throw ValidationError("run.integrator", "required key missing");
    if (!seed) throw ValidationError("run.seed", "required key missing");
    sc.dt = to_number("run.dt", *dt);
    require(sc.dt > 0.0, "run.dt", "must be > 0");
    sc.cycles = to_count("run.cycles", to_number("run.cycles", *cycles));
    require(sc.cycles >= 1, "run.cycles", "must be >= 1");
    if (integrator->value == "euler") {
        sc.integrator = dynamics::StepMethod::explicit_euler;
    } else if (integrator->value == "rk4") {
        sc.integrator = dynamics::StepMethod::classical_rk4;
    } else {
        throw ValidationError("run.integrator", "must be 'euler' or 'rk4'");
    }
    const long seed_count = to_count("run.seed", to_number("run.seed", *seed));
    require(seed_count >= 0, "run.seed", "must be >= 0");
    sc.seed = static_cast<std::uint64_t>(seed_count);
    if (const RawEntry* s0 = run.find("s0")) sc.initial_signal = to_number("run.s0", *s0);

    // epsilon block: all four squares, no silent defaults
    for (const std::string& key : kEpsilonKeys) {
        const RawEntry* entry = raw.epsilon->find(key);
        if (!entry) throw ValidationError("epsilon." + key, "required key missing");
        const double eps = to_number("epsilon." + key, *entry);
        require(eps >= 0.0, "epsilon." + key, "must be >= 0");
        sc.epsilon[key] = eps;
    }

    validate_plant(sc);
    validate_controller(sc);
    validate_pairing(sc);

    if (sc.controller_kind == "proportional") {
        require(sc.reference.has_value(), "reference",
                "a proportional controller needs an explicit reference");
    } else {
        require(!sc.reference.has_value(), "reference",
                "only proportional controllers take an explicit reference");
    }
    if (sc.controller_kind == "proportional" && sc.plant_kind == "thermal") {
        require(sc.controller_params["out_min"] >= 0.0 && sc.controller_params["out_max"] <= 1.0,
                "controller.out_min", "thermal drive must stay in [0,1]");
    }

    // disturbances
    for (const RawBlock& block : raw.disturbs) {
        const RawEntry* at = block.find("at");
        const RawEntry* set = block.find("set");
        const RawEntry* value = block.find("value");
        if (!at) throw ValidationError("disturb.at", "required key missing");
        if (!set) throw ValidationError("disturb.set", "required key missing");
        if (!value) throw ValidationError("disturb.value", "required key missing");
        Disturbance d;
        d.cycle = to_count("disturb.at", to_number("disturb.at", *at));
        require(d.cycle >= 0 && d.cycle < sc.cycles, "disturb.at",
                "must lie in [0, cycles)");
        d.param = set->value;
        require(!set->is_number, "disturb.set", "expected a parameter name");
        require(contains(kDisturbableParams.at(sc.plant_kind), d.param), "disturb.set",
                "'" + d.param + "' is not a live parameter of the " + sc.plant_kind + " plant");
        d.value = to_number("disturb.value", *value);
        sc.disturbances.push_back(d);
    }
    std::stable_sort(sc.disturbances.begin(), sc.disturbances.end(),
                     [](const Disturbance& a, const Disturbance& b) { return a.cycle < b.cycle; });
    return sc;
}

// ---------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------

std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

void write_params(std::ostringstream& out, const std::vector<std::string>& order,
                  const std::map<std::string, double>& params) {
    bool first = true;
    for (const std::string& key : order) {
        auto it = params.find(key);
        if (it == params.end()) continue;
        if (!first) out << "  ";
        first = false;
        out << key << "=" << format_number(it->second);
    }
}

}  // namespace

ControlScenario parse_scenario(const std::string& text) {
    return validate(Parser(text).parse());
}

ControlScenario parse_scenario(const std::string& text,
                               const std::vector<std::string>& overrides) {
    RawScenario raw = Parser(text).parse();
    for (const std::string& assignment : overrides) apply_override(raw, assignment);
    return validate(std::move(raw));
}

std::string serialize_scenario(const ControlScenario& sc) {
    std::ostringstream out;
    out << "scenario \"" << sc.name << "\"\n";
    out << "topology "
        << (sc.topology == controllers::Topology::serial ? "serial" : "parallel") << "\n";
    if (sc.reference) out << "reference " << format_number(*sc.reference) << "\n";

    out << "plant " << sc.plant_kind << " { ";
    write_params(out, kPlantKeys.at(sc.plant_kind), sc.plant_params);
    out << " }\n";

    out << "controller " << sc.controller_kind << " {";
    if (!sc.controller_params.empty()) {
        out << " ";
        write_params(out, kControllerKeys.at(sc.controller_kind), sc.controller_params);
        out << " ";
    }
    out << "}\n";

    out << "run { dt=" << format_number(sc.dt) << "  cycles=" << sc.cycles << "  integrator="
        << (sc.integrator == dynamics::StepMethod::explicit_euler ? "euler" : "rk4")
        << "  seed=" << sc.seed;
    if (sc.initial_signal) out << "  s0=" << format_number(*sc.initial_signal);
    out << " }\n";

    out << "epsilon { ";
    write_params(out, kEpsilonKeys, sc.epsilon);
    out << " }\n";

    for (const Disturbance& d : sc.disturbances) {
        out << "disturb { at=" << d.cycle << "  set=" << d.param
            << "  value=" << format_number(d.value) << " }\n";
    }
    return out.str();
}

std::string scenario_hash(const ControlScenario& sc) {
    const std::string text = serialize_scenario(sc);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[hash & 0xf];
        hash >>= 4;
    }
    return out;
}

}  // namespace loopcheck::scenario
