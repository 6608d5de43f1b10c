// errors.hpp - Exception types shared by the library and the command-line front end

#pragma once

#include <stdexcept>
#include <string>

namespace xyotto {

// An integrator, propagator or root finder could not meet its tolerance.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent run configuration. `field` names the offending key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field.empty() ? message : field + ": " + message),
          field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace xyotto
