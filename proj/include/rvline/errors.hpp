#pragma once

#include <stdexcept>
#include <string>

namespace rvline {

// Invalid scenario, generator spec, or input file.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Operation called outside its stated domain (e.g. cv_choice on equal inputs).
class PreconditionError : public std::invalid_argument {
public:
    explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

// A quantity was requested that cannot be materialized (tower(k) for k > 5).
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// A colouring run exceeded its round budget; signals an implementation bug.
class NonTerminationError : public std::runtime_error {
public:
    explicit NonTerminationError(const std::string& what) : std::runtime_error(what) {}
};

// An agent re-observed a position and saw a different label; signals a
// simulator/agent bug.
class InternalDesyncError : public std::runtime_error {
public:
    explicit InternalDesyncError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rvline
