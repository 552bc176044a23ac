#pragma once

#include <stdexcept>
#include <string>

namespace dmcis {

// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SchedulingInPast : public Error {
public:
    using Error::Error;
};

class KindMismatch : public Error {
public:
    using Error::Error;
};

class EmptyDeployment : public Error {
public:
    using Error::Error;
};

class SeverityTooLow : public Error {
public:
    using Error::Error;
};

class UnknownArea : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Scenario document problems. `field` is a JSON-pointer-like path, `line`
// is 1-based when known and 0 otherwise.
class ParseError : public Error {
public:
    ParseError(std::string message, std::string field = {}, int line = 0)
        : Error(format(message, field, line)), field_(std::move(field)), line_(line)
    {}

    const std::string& field() const noexcept { return field_; }
    int line() const noexcept { return line_; }

private:
    static std::string format(const std::string& message, const std::string& field, int line)
    {
        std::string out = message;
        if (!field.empty())
            out += " (field " + field + ")";
        if (line > 0)
            out += " (line " + std::to_string(line) + ")";
        return out;
    }

    std::string field_;
    int line_;
};

class MissingField : public ParseError {
public:
    explicit MissingField(const std::string& field)
        : ParseError("missing required field \"" + field + "\"", field)
    {}
};

class UnknownKey : public ParseError {
public:
    UnknownKey(const std::string& key, const std::string& where)
        : ParseError("unknown key \"" + key + "\"", where)
    {}
};

} // namespace dmcis
