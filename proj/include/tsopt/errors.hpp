#pragma once

#include <stdexcept>
#include <string>

namespace tsopt {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Closed-line graph is disconnected; Y is not invertible.
struct SingularTopology : Error {
    using Error::Error;
};

// Sensitivity query against a line that is open in the given topology.
struct LineOpen : Error {
    using Error::Error;
};

// Opening this line would island the network (self-PTDF at 1).
struct BridgeLine : Error {
    using Error::Error;
};

// A non-switchable line was offered as a free switching candidate.
struct InvalidCandidate : Error {
    using Error::Error;
};

// Case document is structurally malformed (missing field, wrong type).
struct SchemaError : Error {
    using Error::Error;
};

// Case document is well-formed but references something that does not exist
// or violates a model invariant.
struct IntegrityError : Error {
    using Error::Error;
};

// Breaker duty-curve query outside the tabulated current range.
struct OutOfRange : Error {
    using Error::Error;
};

// LP/MILP backend gave up.
struct IterationLimit : Error {
    using Error::Error;
};
struct NumericalFailure : Error {
    using Error::Error;
};

}  // namespace tsopt
