#ifndef NETFLOW_ERRORS_HPP
#define NETFLOW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace netflow {

/// Base of every error raised by the library. `module()` names the
/// component that detected the problem so the CLI can report it.
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& message)
        : std::runtime_error(message), module_(std::move(module)) {}

    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

// Input has the wrong shape (lengths, indices) for the requested operation.
class MalformedInputError : public Error {
    using Error::Error;
};

// Input is well formed but outside what the construction supports.
class UnsupportedInputError : public Error {
    using Error::Error;
};

class DimensionError : public Error {
    using Error::Error;
};

class InvalidVelocityError : public Error {
    using Error::Error;
};

class ParameterError : public Error {
    using Error::Error;
};

/// Time not a multiple of the cell width for the exact evaluator.
class AlignmentError : public Error {
public:
    AlignmentError(const std::string& message, double lower, double upper)
        : Error("flow-semigroup", message), lower_(lower), upper_(upper) {}

    double nearest_below() const noexcept { return lower_; }
    double nearest_above() const noexcept { return upper_; }

private:
    double lower_;
    double upper_;
};

class ConsistencyError : public Error {
    using Error::Error;
};

/// Re(lambda) <= 0.
class ResolventSetError : public Error {
    using Error::Error;
};

/// 1 - B_{C,lambda} numerically singular.
class NearSingularError : public Error {
public:
    NearSingularError(const std::string& message, double condition)
        : Error("resolvent", message), condition_(condition) {}

    double condition_number() const noexcept { return condition_; }

private:
    double condition_;
};

class InvalidProbeError : public Error {
    using Error::Error;
};

class InsufficientDataError : public Error {
    using Error::Error;
};

/// Text input could not be parsed; line and column are 1-based (0 if unknown).
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : Error("io", format(message, line, column)), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string format(const std::string& message, std::size_t line, std::size_t column) {
        if (line == 0) return message;
        return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
    }

    std::size_t line_;
    std::size_t column_;
};

} // namespace netflow

#endif
