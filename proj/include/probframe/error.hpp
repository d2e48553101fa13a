#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace probframe {

enum class ErrorCode {
    NonSymmetric,
    Singular,
    BadWeights,
    DimMismatch,
    MissingImage,
    NotAFrame,
    MarginalMismatch,
    Unsupported,
    DeviationTooLarge,
    NotApproximate,
    SingularMixedOperator,
    SourceMismatch,
    NotExactDual,
    EtaNotFrame,
    TooFewSamples,
    ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline void require(bool condition, ErrorCode code, const std::string& what) {
    if (!condition) {
        throw Error(code, what);
    }
}

}  // namespace probframe
