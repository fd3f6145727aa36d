#pragma once

#include <stdexcept>
#include <string>

namespace cumlab {

/// Invalid input: bad shapes, out-of-range parameters, mismatched spaces.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A configured size cap (lattice, state space, work) would be exceeded.
class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The model has zero variance where a standardization is required.
class DegenerateModel : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what)
{
    if (!cond)
        throw ValidationError(what);
}

} // namespace cumlab
