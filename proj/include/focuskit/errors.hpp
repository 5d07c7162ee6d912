#pragma once

#include <stdexcept>
#include <string>

namespace focuskit {

/// Bad user input: malformed documents, out-of-domain parameters, unknown names.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A computation that cannot produce a finite answer for valid-looking input
/// (poles, negative discriminants, non-convergence, zero throughput).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace focuskit
