#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace swarmlead {

/// Invalid model or experiment configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A leader-only operation was requested for a follower.
class RoleError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A non-finite position or velocity was produced or found.
class NumericalDivergence : public std::runtime_error {
public:
    NumericalDivergence(std::size_t agent_id, long step)
        : std::runtime_error("non-finite state for agent " + std::to_string(agent_id) +
                             " at step " + std::to_string(step)),
          agent_id_(agent_id), step_(step) {}

    std::size_t agent_id() const noexcept { return agent_id_; }
    long step() const noexcept { return step_; }

private:
    std::size_t agent_id_;
    long step_;
};

/// Trajectory is too short for the requested history length.
class InsufficientHistory : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// No observations available to fit a density model.
class InsufficientData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace swarmlead
