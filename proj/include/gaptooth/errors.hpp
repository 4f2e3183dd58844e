#pragma once

#include <stdexcept>
#include <string>

namespace gaptooth {

/// Invalid experiment parameter. `field()` names the offending input.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Teeth too narrow for the requested boundary condition (e.g. r' >= r).
class GeometryError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Mixed TBC whose edge value cannot be solved for (zero pivot).
class SingularTbcError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A micro value became non-finite.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(int tooth, int point, double time)
        : std::runtime_error("non-finite micro value at tooth " + std::to_string(tooth) +
                             ", point " + std::to_string(point) + ", t=" + std::to_string(time)),
          tooth_(tooth), point_(point), time_(time) {}

    int tooth() const noexcept { return tooth_; }
    int point() const noexcept { return point_; }
    double time() const noexcept { return time_; }

private:
    int tooth_;
    int point_;
    double time_;
};

/// The one-step map does not fix the zero state; the configuration is inconsistent.
class NonzeroFixedPointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace gaptooth
