#pragma once

#include <stdexcept>
#include <string>

namespace inls {

// Exit-code families used by the CLI: validation (2), solver (3), internal (4).

struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

struct NoBracketError : SolverError {
    explicit NoBracketError(const std::string& what) : SolverError(what) {}
};

struct NonConvergenceError : SolverError {
    explicit NonConvergenceError(const std::string& what) : SolverError(what) {}
};

struct AttainmentUnavailableError : SolverError {
    explicit AttainmentUnavailableError(const std::string& what) : SolverError(what) {}
};

struct MissingGroundStateError : SolverError {
    explicit MissingGroundStateError(const std::string& what) : SolverError(what) {}
};

struct ZeroFieldError : ValidationError {
    explicit ZeroFieldError(const std::string& what) : ValidationError(what) {}
};

struct IndefiniteKineticError : SolverError {
    explicit IndefiniteKineticError(const std::string& what) : SolverError(what) {}
};

struct BranchMismatchError : ValidationError {
    explicit BranchMismatchError(const std::string& what) : ValidationError(what) {}
};

// A closed-form property and its sampled counterpart disagreed, or an
// algebraic identity failed far beyond roundoff. Indicates a bug, not bad input.
struct InternalConsistencyError : std::logic_error {
    explicit InternalConsistencyError(const std::string& what) : std::logic_error(what) {}
};

} // namespace inls
