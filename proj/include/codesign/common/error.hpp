#ifndef CODESIGN_COMMON_ERROR_HPP
#define CODESIGN_COMMON_ERROR_HPP

#include <stdexcept>
#include <string>

namespace codesign {

/// Base of every error raised by the library. `kind()` is a stable tag used
/// in the CLI's machine-readable error output.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

/// A value fell outside its documented box. `field()` names the offender.
class BoundsError : public Error {
public:
    BoundsError(std::string field, const std::string& message)
        : Error("bounds", message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& message)
        : Error("config", message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& message) : Error("invalid-argument", message) {}
};

class FactorizationError : public Error {
public:
    explicit FactorizationError(const std::string& message) : Error("factorization", message) {}
};

class SimulationError : public Error {
public:
    explicit SimulationError(const std::string& message) : Error("simulation", message) {}
};

class SolverError : public Error {
public:
    explicit SolverError(const std::string& message) : Error("solver", message) {}
};

class CheckpointError : public Error {
public:
    CheckpointError(std::string prerequisite, const std::string& message)
        : Error("checkpoint", message), prerequisite_(std::move(prerequisite)) {}

    const std::string& prerequisite() const noexcept { return prerequisite_; }

private:
    std::string prerequisite_;
};

} // namespace codesign

#endif
