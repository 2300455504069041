#pragma once

#include <stdexcept>
#include <string>

namespace loopcheck {

/// Base class for every domain error thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// --- state / representation ---

class MissingQuantity : public Error {
public:
    explicit MissingQuantity(const std::string& name)
        : Error("missing physical quantity: " + name), name_(name) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

class MissingValue : public Error {
public:
    explicit MissingValue(const std::string& name)
        : Error("missing abstract value: " + name), name_(name) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

class NonInvertible : public Error {
public:
    explicit NonInvertible(const std::string& tag)
        : Error("representation '" + tag + "' is declared one-way; no instantiation map") {}
};

// --- metrics ---

class ShapeMismatch : public Error {
public:
    explicit ShapeMismatch(const std::string& detail)
        : Error("state shapes differ: " + detail) {}
};

class KindMismatch : public Error {
public:
    explicit KindMismatch(const std::string& detail)
        : Error("value kinds differ: " + detail) {}
};

// --- squares / cubes ---

class CornerMismatch : public Error {
public:
    explicit CornerMismatch(const std::string& detail)
        : Error("cube corners disagree: " + detail) {}
};

// --- dynamics / plants ---

class NonFiniteState : public Error {
public:
    explicit NonFiniteState(const std::string& detail)
        : Error("state became non-finite: " + detail) {}
};

class HaltedProgram : public Error {
public:
    HaltedProgram() : Error("processor program has halted; no further steps") {}
};

// --- controllers / topology ---

class ZeroGain : public Error {
public:
    ZeroGain() : Error("cannot build a pre-filter for a zero-gain controller") {}
};

class Unsupported : public Error {
public:
    explicit Unsupported(const std::string& detail) : Error("unsupported: " + detail) {}
};

// --- scenario parsing ---

class ParseError : public Error {
public:
    ParseError(int line, int column, const std::string& message)
        : Error("parse error at " + std::to_string(line) + ":" + std::to_string(column) +
                ": " + message),
          line_(line), column_(column), message_(message) {}
    int line() const { return line_; }
    int column() const { return column_; }
    const std::string& message() const { return message_; }

private:
    int line_;
    int column_;
    std::string message_;
};

class ValidationError : public Error {
public:
    ValidationError(const std::string& field, const std::string& reason)
        : Error("invalid scenario: " + field + ": " + reason), field_(field), reason_(reason) {}
    const std::string& field() const { return field_; }
    const std::string& reason() const { return reason_; }

private:
    std::string field_;
    std::string reason_;
};

}  // namespace loopcheck
