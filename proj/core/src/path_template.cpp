#include "path_template.hpp"

#include "apicompose/util.hpp"

namespace apicompose::detail {

std::vector<std::string> split_concrete_path(std::string_view path) {
    if (auto q = path.find_first_of("?#"); q != std::string_view::npos) path = path.substr(0, q);
    if (!path.empty() && path.front() == '/') path.remove_prefix(1);
    std::vector<std::string> out;
    if (path.empty()) return out;
    for (auto part : split(path, '/')) out.emplace_back(part);
    return out;
}

PathTemplate::PathTemplate(std::string_view path_template) {
    for (const auto& raw : split_concrete_path(path_template)) {
        Segment seg;
        std::size_t pos = 0;
        bool has_var = false;
        while (pos < raw.size()) {
            const auto open = raw.find('{', pos);
            if (open == std::string::npos) {
                seg.push_back({false, raw.substr(pos)});
                break;
            }
            if (open > pos) seg.push_back({false, raw.substr(pos, open - pos)});
            const auto close = raw.find('}', open);
            if (close == std::string::npos) {
                seg.push_back({false, raw.substr(open)});
                break;
            }
            seg.push_back({true, {}});
            has_var = true;
            pos = close + 1;
        }
        if (seg.empty()) seg.push_back({false, {}});
        if (!has_var) ++literal_segments_;
        segments_.push_back(std::move(seg));
    }
}

bool PathTemplate::matches(const std::vector<std::string>& concrete) const {
    if (concrete.size() != segments_.size()) return false;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        if (!match_segment(segments_[i], concrete[i])) return false;
    }
    return true;
}

bool PathTemplate::match_segment(const Segment& seg, std::string_view concrete) {
    if (concrete == kWildcardSegment) return seg.size() == 1 && seg.front().is_var;
    return match_pieces(seg, 0, concrete);
}

bool PathTemplate::match_pieces(const Segment& seg, std::size_t piece, std::string_view rest) {
    if (piece == seg.size()) return rest.empty();
    const auto& p = seg[piece];
    if (!p.is_var) {
        if (rest.substr(0, p.literal.size()) != p.literal) return false;
        return match_pieces(seg, piece + 1, rest.substr(p.literal.size()));
    }
    // Variables consume at least one character.
    for (std::size_t n = 1; n <= rest.size(); ++n) {
        if (match_pieces(seg, piece + 1, rest.substr(n))) return true;
    }
    return false;
}

}  // namespace apicompose::detail
