#pragma once

#include <stdexcept>
#include <string>

namespace phaselab {

/// An exhaustive routine was asked to handle an instance above its size guard.
class GuardError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed graph, tournament or core text.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid experiment configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace phaselab
