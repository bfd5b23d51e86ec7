#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rgsl {

/// Named failure modes surfaced by the library. The CLI prints the name and
/// maps the category onto a process exit code.
enum class ErrorCode {
    // configuration
    NonPositiveDimension,
    InvalidTemperature,
    HorizonZero,
    UnknownConfigKey,
    BadConfigValue,
    // data ingestion
    FileNotFound,
    BadShape,
    BadFormat,
    AllMissingColumn,
    NodeIdOutOfRange,
    EmptyEdgeList,
    NegativeCost,
    EmptyTrainSlice,
    SeriesTooShort,
    // numerics
    NonFiniteEmbedding,
    NegativeEntry,
    NonSquare,
    DimMismatch,
    ShapeMismatch,
    AllMasked,
    // training / artifacts
    DivergedLoss,
    ConfigMismatch,
    UnsupportedVersion,
    UnknownWhat,
    IoError,
};

std::string_view error_name(ErrorCode code) noexcept;

/// Exit-code category: 2 input/config, 3 divergence, 4 artifact mismatch.
int exit_code_for(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail);

    ErrorCode code() const noexcept { return code_; }
    std::string_view name() const noexcept { return error_name(code_); }

private:
    ErrorCode code_;
};

}  // namespace rgsl
