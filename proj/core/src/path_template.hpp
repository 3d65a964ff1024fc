#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace apicompose::detail {

// A concrete segment standing for "some value"; matches only whole-segment variables.
inline constexpr std::string_view kWildcardSegment = "\x01";

/// "/a/b?x=1" -> {"a", "b"}; "/" -> {}.
std::vector<std::string> split_concrete_path(std::string_view path);

class PathTemplate {
public:
    explicit PathTemplate(std::string_view path_template);

    bool matches(const std::vector<std::string>& concrete_segments) const;
    int literal_segments() const noexcept { return literal_segments_; }

private:
    struct Piece {
        bool is_var = false;
        std::string literal;
    };
    using Segment = std::vector<Piece>;

    static bool match_segment(const Segment& seg, std::string_view concrete);
    static bool match_pieces(const Segment& seg, std::size_t piece, std::string_view rest);

    std::vector<Segment> segments_;
    int literal_segments_ = 0;
};

}  // namespace apicompose::detail
