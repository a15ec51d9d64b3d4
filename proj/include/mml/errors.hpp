#pragma once

#include <stdexcept>
#include <string>

namespace mml {

// Bad or inconsistent scenario input (config files, parameter validation,
// unreadable/unwritable paths). CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A requested closed-form quantity does not exist for the given parameters
// (e.g. the line is not metastable, or a log argument goes non-positive).
// CLI maps this to exit code 3.
class InfeasibleError : public std::runtime_error {
public:
    explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

// A solver detected a broken precondition at run time (lost diagonal
// dominance, non-positive pivot, non-finite state). CLI maps this to exit
// code 4.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace mml
