#pragma once

#include <cstddef>
#include <functional>
#include <string_view>

namespace apicompose {

/// Pluggable token estimator; swap in a model-specific tokenizer if needed.
using TokenCounter = std::function<std::size_t(std::string_view)>;

/// ceil(utf8 bytes / 4).
std::size_t count_tokens(std::string_view text) noexcept;

TokenCounter default_token_counter();

}  // namespace apicompose
