#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace apicompose {

enum class ErrorCode {
    InvalidArgument,
    IoError,
    FormatError,
    VersionMismatch,
    // spec-model
    MalformedDocument,
    UnsupportedVersion,
    DuplicateEndpoint,
    DanglingReference,
    DepthExceeded,
    // chunking
    EmptySpec,
    // embedding / vector-index
    ProviderUnreachable,
    ProviderError,
    DimensionMismatch,
    DuplicateChunkId,
    // discovery
    UnknownEndpoint,
    EmptyExpectedSet,
    ModelMismatch,
    // prompt / llm-client
    BudgetExceeded,
    EmptyCompletion,
    NoCodeFound,
    ScriptExhausted,
    // harness
    BindError,
    RunnerTimeout,
    RunnerSpawnError,
    // benchgen
    InsufficientVocabulary,
    NotEnoughEndpoints,
};

/// Stable name used in machine-readable error objects, e.g. "DanglingReference".
std::string_view error_code_name(ErrorCode code) noexcept;

/// Provider and transport failures, as opposed to problems with user input.
bool is_transport_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string detail);

    ErrorCode code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

}  // namespace apicompose
