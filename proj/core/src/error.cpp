#include "rgsl/error.hpp"

namespace rgsl {

std::string_view error_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NonPositiveDimension: return "NonPositiveDimension";
        case ErrorCode::InvalidTemperature: return "InvalidTemperature";
        case ErrorCode::HorizonZero: return "HorizonZero";
        case ErrorCode::UnknownConfigKey: return "UnknownConfigKey";
        case ErrorCode::BadConfigValue: return "BadConfigValue";
        case ErrorCode::FileNotFound: return "FileNotFound";
        case ErrorCode::BadShape: return "BadShape";
        case ErrorCode::BadFormat: return "BadFormat";
        case ErrorCode::AllMissingColumn: return "AllMissingColumn";
        case ErrorCode::NodeIdOutOfRange: return "NodeIdOutOfRange";
        case ErrorCode::EmptyEdgeList: return "EmptyEdgeList";
        case ErrorCode::NegativeCost: return "NegativeCost";
        case ErrorCode::EmptyTrainSlice: return "EmptyTrainSlice";
        case ErrorCode::SeriesTooShort: return "SeriesTooShort";
        case ErrorCode::NonFiniteEmbedding: return "NonFiniteEmbedding";
        case ErrorCode::NegativeEntry: return "NegativeEntry";
        case ErrorCode::NonSquare: return "NonSquare";
        case ErrorCode::DimMismatch: return "DimMismatch";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::AllMasked: return "AllMasked";
        case ErrorCode::DivergedLoss: return "DivergedLoss";
        case ErrorCode::ConfigMismatch: return "ConfigMismatch";
        case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
        case ErrorCode::UnknownWhat: return "UnknownWhat";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

int exit_code_for(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::DivergedLoss: return 3;
        case ErrorCode::ConfigMismatch:
        case ErrorCode::UnsupportedVersion: return 4;
        default: return 2;
    }
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

}  // namespace rgsl
