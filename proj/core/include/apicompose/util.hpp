#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace apicompose {

/// SHA-256 content digest.
class Digest256 {
public:
    Digest256() = default;
    explicit Digest256(const std::array<std::uint8_t, 32>& bytes) : bytes_(bytes) {}

    static Digest256 of(std::string_view data);

    const std::array<std::uint8_t, 32>& bytes() const noexcept { return bytes_; }
    std::string hex() const;

    friend bool operator==(const Digest256&, const Digest256&) = default;
    friend auto operator<=>(const Digest256&, const Digest256&) = default;

private:
    std::array<std::uint8_t, 32> bytes_{};
};

std::uint64_t fnv1a64(std::string_view data) noexcept;

std::string base64_encode(std::span<const std::uint8_t> data);
/// Throws FormatError on malformed input.
std::vector<std::uint8_t> base64_decode(std::string_view text);

/// Throws IoError.
std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temp file then renames over `path`. Throws IoError.
void atomic_write_file(const std::filesystem::path& path, std::string_view contents);

std::string to_lower_ascii(std::string_view text);
std::string to_upper_ascii(std::string_view text);

/// Lowercase, runs of non-alphanumerics collapsed to a single '-', trimmed.
/// Returns "service" when nothing alphanumeric remains.
std::string slugify(std::string_view text);

std::vector<std::string_view> split(std::string_view text, char sep);

/// Runs fn(i) for i in [0, count) on at most `max_threads` threads. The first
/// exception thrown by any invocation is rethrown after all workers join.
void parallel_for(std::size_t count, std::size_t max_threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace apicompose
