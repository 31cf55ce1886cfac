#pragma once

#include <stdexcept>
#include <string>

namespace hillspec {

// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define HILLSPEC_ERROR(Name)                              \
    class Name : public Error {                           \
    public:                                               \
        explicit Name(const std::string& what) : Error(what) {} \
    }

HILLSPEC_ERROR(InvalidSequence);
HILLSPEC_ERROR(InvalidWeight);
HILLSPEC_ERROR(DivergentSum);
HILLSPEC_ERROR(StripViolation);
HILLSPEC_ERROR(NearSingular);
HILLSPEC_ERROR(EigensolverError);
HILLSPEC_ERROR(TruncationError);
HILLSPEC_ERROR(SeparationError);
HILLSPEC_ERROR(ContractionFailure);
HILLSPEC_ERROR(ThresholdError);
HILLSPEC_ERROR(LocalizationError);
HILLSPEC_ERROR(RootError);
HILLSPEC_ERROR(PreconditionError);
HILLSPEC_ERROR(UnsupportedInput);
HILLSPEC_ERROR(InstabilityError);

#undef HILLSPEC_ERROR

}  // namespace hillspec
