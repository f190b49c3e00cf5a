#pragma once

#include <stdexcept>
#include <string>

namespace relspine {

/// Malformed or out-of-range input (bad generator, inconsistent graph file, infeasible bound).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A computed object violates an invariant it was required to satisfy.
class VerificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace relspine
