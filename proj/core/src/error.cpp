#include "apicompose/error.hpp"

namespace apicompose {

std::string_view error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::FormatError: return "FormatError";
        case ErrorCode::VersionMismatch: return "VersionMismatch";
        case ErrorCode::MalformedDocument: return "MalformedDocument";
        case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
        case ErrorCode::DuplicateEndpoint: return "DuplicateEndpoint";
        case ErrorCode::DanglingReference: return "DanglingReference";
        case ErrorCode::DepthExceeded: return "DepthExceeded";
        case ErrorCode::EmptySpec: return "EmptySpec";
        case ErrorCode::ProviderUnreachable: return "ProviderUnreachable";
        case ErrorCode::ProviderError: return "ProviderError";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::DuplicateChunkId: return "DuplicateChunkId";
        case ErrorCode::UnknownEndpoint: return "UnknownEndpoint";
        case ErrorCode::EmptyExpectedSet: return "EmptyExpectedSet";
        case ErrorCode::ModelMismatch: return "ModelMismatch";
        case ErrorCode::BudgetExceeded: return "BudgetExceeded";
        case ErrorCode::EmptyCompletion: return "EmptyCompletion";
        case ErrorCode::NoCodeFound: return "NoCodeFound";
        case ErrorCode::ScriptExhausted: return "ScriptExhausted";
        case ErrorCode::BindError: return "BindError";
        case ErrorCode::RunnerTimeout: return "RunnerTimeout";
        case ErrorCode::RunnerSpawnError: return "RunnerSpawnError";
        case ErrorCode::InsufficientVocabulary: return "InsufficientVocabulary";
        case ErrorCode::NotEnoughEndpoints: return "NotEnoughEndpoints";
    }
    return "Unknown";
}

bool is_transport_error(ErrorCode code) noexcept {
    return code == ErrorCode::ProviderUnreachable || code == ErrorCode::ProviderError ||
           code == ErrorCode::EmptyCompletion || code == ErrorCode::BindError;
}

Error::Error(ErrorCode code, std::string detail)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + detail),
      code_(code),
      detail_(std::move(detail)) {}

}  // namespace apicompose
