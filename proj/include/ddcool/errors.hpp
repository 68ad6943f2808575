#pragma once

#include <stdexcept>
#include <string>

namespace ddcool {

// Error taxonomy mirrored by the CLI exit codes:
//   ScenarioError  -> exit 2 (bad input, bad geometry, malformed scenario file)
//   SolverError    -> exit 3 (degenerate steady state, factorization failure)
//   InvariantError -> exit 4 (a computed quantity violated a contract bound)

struct ScenarioError : std::runtime_error {
    explicit ScenarioError(const std::string& what) : std::runtime_error(what) {}
};

struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

struct InvariantError : std::runtime_error {
    explicit InvariantError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ddcool
