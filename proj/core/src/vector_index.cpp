#include "apicompose/vector_index.hpp"

#include <algorithm>
#include <bit>
#include <charconv>

#include "apicompose/error.hpp"

namespace apicompose {

Index build_index(std::vector<IndexEntry> entries, std::string model_id, ChunkStrategy strategy) {
    if (entries.empty()) throw Error(ErrorCode::InvalidArgument, "cannot build an empty index");
    const auto dims = entries.front().vector.dims();
    if (dims == 0) throw Error(ErrorCode::DimensionMismatch, "index vectors have zero dims");
    for (const auto& e : entries) {
        if (e.vector.dims() != dims) {
            throw Error(ErrorCode::DimensionMismatch, "entry " + e.chunk_id + " has " +
                                                          std::to_string(e.vector.dims()) + " dims, expected " +
                                                          std::to_string(dims));
        }
    }
    std::sort(entries.begin(), entries.end(),
              [](const IndexEntry& a, const IndexEntry& b) { return a.chunk_id < b.chunk_id; });
    auto dup = std::adjacent_find(entries.begin(), entries.end(),
                                  [](const IndexEntry& a, const IndexEntry& b) { return a.chunk_id == b.chunk_id; });
    if (dup != entries.end()) throw Error(ErrorCode::DuplicateChunkId, dup->chunk_id);

    Index index;
    index.dims_ = dims;
    index.entries_ = std::move(entries);
    index.model_id_ = std::move(model_id);
    index.strategy_ = strategy;
    return index;
}

std::vector<SearchHit> search_top_k(const Index& index, const EmbeddingVector& query, std::size_t k) {
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
    if (query.dims() != index.dims()) {
        throw Error(ErrorCode::DimensionMismatch, "query has " + std::to_string(query.dims()) +
                                                      " dims, index has " + std::to_string(index.dims()));
    }
    const auto& entries = index.entries();
    std::vector<std::pair<double, std::size_t>> scored;
    scored.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) scored.emplace_back(dot(entries[i].vector, query), i);

    // Entries are sorted by chunk_id, so the position is the tie-break key.
    auto better = [](const auto& a, const auto& b) { return a.first > b.first || (a.first == b.first && a.second < b.second); };
    const auto n = std::min(k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(n), scored.end(), better);

    std::vector<SearchHit> hits;
    hits.reserve(n);
    for (std::size_t r = 0; r < n; ++r) {
        const auto& e = entries[scored[r].second];
        hits.push_back({e.chunk_id, e.endpoint_id, e.service_id, scored[r].first});
    }
    return hits;
}

namespace {

constexpr std::string_view kMagic = "APICOMPOSE-INDEX";

std::vector<std::uint8_t> vector_bytes(const EmbeddingVector& v) {
    std::vector<std::uint8_t> bytes;
    bytes.reserve(4 * v.dims());
    for (float f : v.values) {
        const auto bits = std::bit_cast<std::uint32_t>(f);
        for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<std::uint8_t>((bits >> (8 * i)) & 0xFF));
    }
    return bytes;
}

EmbeddingVector vector_from_bytes(const std::vector<std::uint8_t>& bytes) {
    EmbeddingVector v;
    v.values.resize(bytes.size() / 4);
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        std::uint32_t bits = 0;
        for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(bytes[4 * i + b]) << (8 * b);
        v.values[i] = std::bit_cast<float>(bits);
    }
    return v;
}

std::string_view header_field(std::string_view header, std::string_view name, std::string_view next) {
    const auto key = std::string(" ") + std::string(name) + "=";
    const auto start = header.find(key);
    if (start == std::string_view::npos) {
        throw Error(ErrorCode::FormatError, "index header lacks '" + std::string(name) + "'");
    }
    const auto value_start = start + key.size();
    auto end = next.empty() ? header.size() : header.rfind(" " + std::string(next) + "=");
    if (end == std::string_view::npos || end < value_start) end = header.size();
    return header.substr(value_start, end - value_start);
}

}  // namespace

std::string serialize_index(const Index& index) {
    std::string out;
    out += kMagic;
    out += " v" + std::to_string(kIndexFormatVersion);
    out += " dims=" + std::to_string(index.dims());
    out += " model=" + index.model_id();
    out += " strategy=" + std::string(to_string(index.strategy()));
    out += '\n';
    for (const auto& e : index.entries()) {
        Json j = Json::object();
        j["chunk_id"] = e.chunk_id;
        j["endpoint_id"] = e.endpoint_id ? Json(*e.endpoint_id) : Json(nullptr);
        j["service_id"] = e.service_id;
        j["vector"] = base64_encode(vector_bytes(e.vector));
        out += j.dump();
        out += '\n';
    }
    return out;
}

Index deserialize_index(std::string_view text) {
    const auto header_end = text.find('\n');
    const auto header = text.substr(0, header_end);
    if (header.rfind(kMagic, 0) != 0 || header.size() <= kMagic.size() || header[kMagic.size()] != ' ') {
        throw Error(ErrorCode::FormatError, "missing APICOMPOSE-INDEX header");
    }
    const auto rest = header.substr(kMagic.size() + 1);
    if (rest.empty() || rest.front() != 'v') throw Error(ErrorCode::FormatError, "missing index format version");
    const auto version_end = rest.find(' ');
    const auto version_text = rest.substr(1, version_end == std::string_view::npos ? rest.size() - 1 : version_end - 1);
    int version = 0;
    auto [vp, vec] = std::from_chars(version_text.data(), version_text.data() + version_text.size(), version);
    if (vec != std::errc() || vp != version_text.data() + version_text.size()) {
        throw Error(ErrorCode::FormatError, "unreadable index format version");
    }
    if (version != kIndexFormatVersion) {
        throw Error(ErrorCode::VersionMismatch, "index format v" + std::to_string(version) + ", expected v" +
                                                    std::to_string(kIndexFormatVersion));
    }
    const auto dims_text = header_field(header, "dims", "model");
    std::size_t dims = 0;
    auto [dp, dec] = std::from_chars(dims_text.data(), dims_text.data() + dims_text.size(), dims);
    if (dec != std::errc() || dp != dims_text.data() + dims_text.size() || dims == 0) {
        throw Error(ErrorCode::FormatError, "bad dims in index header");
    }
    const std::string model(header_field(header, "model", "strategy"));
    ChunkStrategy strategy;
    try {
        strategy = parse_chunk_strategy(header_field(header, "strategy", ""));
    } catch (const Error& e) {
        throw Error(ErrorCode::FormatError, e.detail());
    }

    std::vector<IndexEntry> entries;
    const auto body = header_end == std::string_view::npos ? std::string_view{} : text.substr(header_end + 1);
    std::size_t line_no = 1;
    for (auto line : split(body, '\n')) {
        ++line_no;
        if (line.empty()) continue;
        try {
            const auto j = Json::parse(line);
            IndexEntry e;
            e.chunk_id = j.at("chunk_id").get<std::string>();
            if (const auto& ep = j.at("endpoint_id"); !ep.is_null()) e.endpoint_id = ep.get<std::string>();
            e.service_id = j.at("service_id").get<std::string>();
            const auto bytes = base64_decode(j.at("vector").get<std::string>());
            if (bytes.size() != 4 * dims) {
                throw Error(ErrorCode::FormatError, "vector length mismatch");
            }
            e.vector = vector_from_bytes(bytes);
            entries.push_back(std::move(e));
        } catch (const Json::exception& ex) {
            throw Error(ErrorCode::FormatError, "line " + std::to_string(line_no) + ": " + ex.what());
        } catch (const Error& ex) {
            throw Error(ErrorCode::FormatError, "line " + std::to_string(line_no) + ": " + ex.detail());
        }
    }
    if (entries.empty()) throw Error(ErrorCode::FormatError, "index file has no entries");
    try {
        return build_index(std::move(entries), model, strategy);
    } catch (const Error& ex) {
        throw Error(ErrorCode::FormatError, ex.detail());
    }
}

void persist_index(const Index& index, const std::filesystem::path& path) {
    atomic_write_file(path, serialize_index(index));
}

Index load_index(const std::filesystem::path& path) { return deserialize_index(read_file(path)); }

}  // namespace apicompose
