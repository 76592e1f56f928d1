#pragma once

#include <stdexcept>
#include <string>

namespace auditgame {

// Malformed input file (bad JSON, bad row layout, unknown code).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Structurally valid input that violates a model invariant; message names the field.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Solver-level failure (cap exceeded, enumeration too large, degenerate setup).
struct SolveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace auditgame
