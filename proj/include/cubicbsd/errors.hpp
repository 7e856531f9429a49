#pragma once

#include <stdexcept>
#include <string>

namespace cubicbsd {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : Error { using Error::Error; };
struct UnsupportedModulus : Error { using Error::Error; };
struct UnsupportedPrime : Error { using Error::Error; };
struct ConfigurationError : Error { using Error::Error; };
struct LatticePointError : Error { using Error::Error; };

// Retryable: the caller should raise the working precision.
struct PrecisionExhausted : Error { using Error::Error; };
struct RecognitionFailure : PrecisionExhausted { using PrecisionExhausted::PrecisionExhausted; };

struct ConductorResolutionFailure : Error { using Error::Error; };
struct NeedsMoreEffort : Error { using Error::Error; };
struct ConsistencyFailure : Error { using Error::Error; };

struct ParseError : Error {
    ParseError(const std::string& msg, long line)
        : Error("line " + std::to_string(line) + ": " + msg), line(line) {}
    long line;
};

}  // namespace cubicbsd
