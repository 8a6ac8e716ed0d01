#pragma once

#include <stdexcept>
#include <string>

namespace chordbench {

// Bad arguments to a metric or construction: non-positive coordinates where
// positive ones are required, horizontal distance to a horizontal segment, ...
struct domain_error : std::runtime_error {
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid parameters, malformed files, unsatisfiable preconditions.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// The comb oracle misbehaved (a reply inconsistent with earlier replies), or
// the recursion ran past its certified depth budget.
struct protocol_error : std::runtime_error {
    explicit protocol_error(const std::string& what) : std::runtime_error(what) {}
};

// An operation was issued against an object in the wrong state, e.g. querying
// an adversary after it was finalized.
struct state_error : std::runtime_error {
    explicit state_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace chordbench
