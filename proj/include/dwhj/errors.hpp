#pragma once

#include <stdexcept>
#include <string>

namespace dwhj {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define DWHJ_DECLARE_ERROR(Name)                                 \
    class Name : public Error {                                  \
    public:                                                      \
        explicit Name(const std::string& what) : Error(what) {}  \
    }

DWHJ_DECLARE_ERROR(UnsupportedIntegrand);
DWHJ_DECLARE_ERROR(NonPeriodicInput);
DWHJ_DECLARE_ERROR(StabilityViolation);
DWHJ_DECLARE_ERROR(NotAMaxwellSolution);
DWHJ_DECLARE_ERROR(InadmissibleAnsatz);
DWHJ_DECLARE_ERROR(TimeMismatch);
DWHJ_DECLARE_ERROR(ParseError);

#undef DWHJ_DECLARE_ERROR

}  // namespace dwhj
