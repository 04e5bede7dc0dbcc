#pragma once

#include <stdexcept>
#include <string>

namespace mhh {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed presentation, monomial or rule.
struct InvalidInput : Error {
    using Error::Error;
};

// d o d != 0, or a differential leaving the cycle space.
struct InconsistentDifferential : Error {
    using Error::Error;
};

// A rule set that cannot evaluate a differential it is asked for.
struct InconsistentRules : Error {
    using Error::Error;
};

}  // namespace mhh
