#include "probframe/error.hpp"

namespace probframe {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NonSymmetric: return "NonSymmetric";
        case ErrorCode::Singular: return "Singular";
        case ErrorCode::BadWeights: return "BadWeights";
        case ErrorCode::DimMismatch: return "DimMismatch";
        case ErrorCode::MissingImage: return "MissingImage";
        case ErrorCode::NotAFrame: return "NotAFrame";
        case ErrorCode::MarginalMismatch: return "MarginalMismatch";
        case ErrorCode::Unsupported: return "Unsupported";
        case ErrorCode::DeviationTooLarge: return "DeviationTooLarge";
        case ErrorCode::NotApproximate: return "NotApproximate";
        case ErrorCode::SingularMixedOperator: return "SingularMixedOperator";
        case ErrorCode::SourceMismatch: return "SourceMismatch";
        case ErrorCode::NotExactDual: return "NotExactDual";
        case ErrorCode::EtaNotFrame: return "EtaNotFrame";
        case ErrorCode::TooFewSamples: return "TooFewSamples";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

}  // namespace probframe
