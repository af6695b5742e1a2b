#pragma once

#include <stdexcept>
#include <string>

namespace piopt {

// Argument outside the mathematical domain of an operation.
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Structural invariant of a type would be violated (e.g. quadrilateral bounds).
struct constraint_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A certified grid sweep could not establish its target inequality.
struct certification_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A bracketing/bisection precondition failed (no sign change).
struct bracket_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exact-mode enumeration would exceed the configured size cap.
struct size_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace piopt
