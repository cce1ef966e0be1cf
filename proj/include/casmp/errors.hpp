#pragma once

#include <stdexcept>
#include <string>

namespace casmp {

/// Numerical failure (eigensolver non-convergence, non-finite input,
/// failed cross-check). Maps to CLI exit code 2.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid run configuration (bad file, missing/contradictory fields).
/// Maps to CLI exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace casmp
