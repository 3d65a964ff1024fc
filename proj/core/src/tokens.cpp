#include "apicompose/tokens.hpp"

namespace apicompose {

std::size_t count_tokens(std::string_view text) noexcept { return (text.size() + 3) / 4; }

TokenCounter default_token_counter() {
    return [](std::string_view text) { return count_tokens(text); };
}

}  // namespace apicompose
