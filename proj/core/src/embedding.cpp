#include "apicompose/embedding.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <unordered_map>

#include "apicompose/error.hpp"
#include "http_transport.hpp"

namespace apicompose {

double EmbeddingVector::norm() const noexcept {
    double sum = 0.0;
    for (float v : values) sum += static_cast<double>(v) * v;
    return std::sqrt(sum);
}

bool EmbeddingVector::is_zero() const noexcept {
    return std::all_of(values.begin(), values.end(), [](float v) { return v == 0.0f; });
}

EmbeddingVector normalized(std::vector<float> values) {
    double sum = 0.0;
    for (float v : values) sum += static_cast<double>(v) * v;
    if (sum > 0.0) {
        const double inv = 1.0 / std::sqrt(sum);
        for (auto& v : values) v = static_cast<float>(v * inv);
    }
    return EmbeddingVector{std::move(values)};
}

double dot(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dims() != b.dims()) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::to_string(a.dims()) + " vs " + std::to_string(b.dims()) + " dims");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        sum += static_cast<double>(a.values[i]) * static_cast<double>(b.values[i]);
    }
    return sum;
}

std::string_view to_string(ProviderKind kind) noexcept {
    return kind == ProviderKind::remote ? "remote" : "hashing";
}

void validate(const EmbeddingProviderConfig& config) {
    if (config.dims == 0) throw Error(ErrorCode::InvalidArgument, "embedding dims must be positive");
    if (config.model_id.empty()) throw Error(ErrorCode::InvalidArgument, "embedding model_id is empty");
    if (config.batch_size == 0) throw Error(ErrorCode::InvalidArgument, "batch_size must be >= 1");
    if (config.max_parallel_batches == 0) {
        throw Error(ErrorCode::InvalidArgument, "max_parallel_batches must be >= 1");
    }
    if (config.retries < 0) throw Error(ErrorCode::InvalidArgument, "retries must be >= 0");
    if (config.kind == ProviderKind::remote && (!config.base_url || config.base_url->empty())) {
        throw Error(ErrorCode::InvalidArgument, "remote embedding provider requires base_url");
    }
    if (config.kind == ProviderKind::hashing && config.dims < 8) {
        throw Error(ErrorCode::InvalidArgument, "hashing embedder requires dims >= 8");
    }
}

EmbeddingProviderConfig embedding_config_from_json(const Json& j) {
    EmbeddingProviderConfig c;
    try {
        if (auto kind = j.value("kind", std::string("hashing")); kind == "remote") {
            c.kind = ProviderKind::remote;
        } else if (kind == "hashing") {
            c.kind = ProviderKind::hashing;
        } else {
            throw Error(ErrorCode::InvalidArgument, "unknown embedding provider kind '" + kind + "'");
        }
        c.model_id = j.value("model_id", c.model_id);
        c.dims = j.value("dims", c.dims);
        if (j.contains("base_url") && !j["base_url"].is_null()) c.base_url = j["base_url"].get<std::string>();
        c.api_key_env = j.value("api_key_env", c.api_key_env);
        c.batch_size = j.value("batch_size", c.batch_size);
        c.max_parallel_batches = j.value("max_parallel_batches", c.max_parallel_batches);
        c.timeout_ms = j.value("timeout_ms", c.timeout_ms);
        c.retries = j.value("retries", c.retries);
        c.backoff_base_ms = j.value("backoff_base_ms", c.backoff_base_ms);
        c.query_prefix = j.value("query_prefix", c.query_prefix);
        c.passage_prefix = j.value("passage_prefix", c.passage_prefix);
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("bad embedding config: ") + e.what());
    }
    validate(c);
    return c;
}

Json to_json(const EmbeddingProviderConfig& c) {
    Json j = Json::object();
    j["kind"] = std::string(to_string(c.kind));
    j["model_id"] = c.model_id;
    j["dims"] = c.dims;
    j["base_url"] = c.base_url ? Json(*c.base_url) : Json(nullptr);
    j["api_key_env"] = c.api_key_env;
    j["batch_size"] = c.batch_size;
    j["max_parallel_batches"] = c.max_parallel_batches;
    j["timeout_ms"] = c.timeout_ms;
    j["retries"] = c.retries;
    j["query_prefix"] = c.query_prefix;
    j["passage_prefix"] = c.passage_prefix;
    return j;
}

// ---------------------------------------------------------------------------
// Cache

namespace {

void append_u32_le(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t read_u32_le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

std::string encode_cache_record(const EmbeddingVector& vector) {
    std::string out;
    out.reserve(4 + 4 * vector.dims());
    append_u32_le(out, static_cast<std::uint32_t>(vector.dims()));
    for (float f : vector.values) append_u32_le(out, std::bit_cast<std::uint32_t>(f));
    return out;
}

EmbeddingVector decode_cache_record(std::string_view bytes) {
    if (bytes.size() < 4) throw Error(ErrorCode::FormatError, "cache record too short");
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    const auto dims = read_u32_le(p);
    if (bytes.size() != 4 + 4 * static_cast<std::size_t>(dims)) {
        throw Error(ErrorCode::FormatError, "cache record length does not match its dims");
    }
    EmbeddingVector v;
    v.values.resize(dims);
    for (std::uint32_t i = 0; i < dims; ++i) v.values[i] = std::bit_cast<float>(read_u32_le(p + 4 + 4 * i));
    return v;
}

EmbeddingCache::EmbeddingCache(std::filesystem::path directory) : directory_(std::move(directory)) {
    std::error_code ec;
    std::filesystem::create_directories(*directory_, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create cache directory " + directory_->string());
}

std::string EmbeddingCache::key(std::string_view model_id, std::size_t dims, std::string_view text) {
    std::string material(model_id);
    material += '\n';
    material += std::to_string(dims);
    material += '\n';
    material += Digest256::of(text).hex();
    return Digest256::of(material).hex();
}

std::optional<EmbeddingVector> EmbeddingCache::get(std::string_view model_id, std::size_t dims,
                                                   std::string_view text) {
    const auto k = key(model_id, dims, text);
    std::lock_guard lock(mutex_);
    if (auto it = memory_.find(k); it != memory_.end()) {
        ++stats_.hits;
        return it->second;
    }
    if (directory_) {
        const auto file = *directory_ / (k + ".vec");
        std::error_code ec;
        if (std::filesystem::exists(file, ec)) {
            try {
                auto v = decode_cache_record(read_file(file));
                if (v.dims() == dims) {
                    ++stats_.hits;
                    memory_.emplace(k, v);
                    return v;
                }
            } catch (const Error&) {
                // Unreadable or stale entries are treated as misses and rewritten.
            }
        }
    }
    ++stats_.misses;
    return std::nullopt;
}

void EmbeddingCache::put(std::string_view model_id, std::size_t dims, std::string_view text,
                         const EmbeddingVector& vector) {
    const auto k = key(model_id, dims, text);
    {
        std::lock_guard lock(mutex_);
        memory_.insert_or_assign(k, vector);
    }
    if (directory_) atomic_write_file(*directory_ / (k + ".vec"), encode_cache_record(vector));
}

EmbeddingCache::Stats EmbeddingCache::stats() const {
    std::lock_guard lock(mutex_);
    return stats_;
}

void EmbeddingCache::record_hit() {
    std::lock_guard lock(mutex_);
    ++stats_.hits;
}

// ---------------------------------------------------------------------------
// Embedders

namespace {

bool is_token_byte(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c >= 0x80;
}

}  // namespace

EmbeddingVector hash_embed(std::string_view text, std::size_t dims) {
    if (dims < 8) throw Error(ErrorCode::InvalidArgument, "hash_embed requires dims >= 8");
    const auto lowered = to_lower_ascii(text);

    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < lowered.size()) {
        while (i < lowered.size() && !is_token_byte(static_cast<unsigned char>(lowered[i]))) ++i;
        const auto start = i;
        while (i < lowered.size() && is_token_byte(static_cast<unsigned char>(lowered[i]))) ++i;
        if (i > start) tokens.emplace_back(lowered.data() + start, i - start);
    }

    std::vector<double> acc(dims, 0.0);
    auto add_feature = [&](std::string_view feature) {
        const auto h = fnv1a64(feature);
        acc[h % dims] += (h >> 63) ? -1.0 : 1.0;
    };
    std::string bigram;
    for (std::size_t t = 0; t < tokens.size(); ++t) {
        add_feature(tokens[t]);
        if (t + 1 < tokens.size()) {
            bigram.assign(tokens[t]);
            bigram += '_';
            bigram.append(tokens[t + 1]);
            add_feature(bigram);
        }
    }

    double sum = 0.0;
    for (double v : acc) sum += v * v;
    EmbeddingVector out;
    out.values.resize(dims, 0.0f);
    if (sum > 0.0) {
        const double inv = 1.0 / std::sqrt(sum);
        for (std::size_t d = 0; d < dims; ++d) out.values[d] = static_cast<float>(acc[d] * inv);
    }
    return out;
}

namespace {

std::vector<EmbeddingVector> fetch_remote(const std::vector<std::string>& texts,
                                          const EmbeddingProviderConfig& config) {
    Json body = Json::object();
    body["model"] = config.model_id;
    body["input"] = texts;
    const auto response = detail::post_json(*config.base_url, body.dump(), detail::env_token(config.api_key_env),
                                            config.timeout_ms, config.retries, config.backoff_base_ms);
    if (response.status < 200 || response.status >= 300) {
        throw Error(ErrorCode::ProviderError,
                    "HTTP " + std::to_string(response.status) + ": " + detail::snippet(response.body));
    }
    std::vector<std::optional<EmbeddingVector>> slots(texts.size());
    try {
        const auto parsed = Json::parse(response.body);
        const auto& data = parsed.at("data");
        for (std::size_t pos = 0; pos < data.size(); ++pos) {
            const auto& item = data[pos];
            const auto index = item.contains("index") ? item["index"].get<std::size_t>() : pos;
            if (index >= slots.size()) {
                throw Error(ErrorCode::ProviderError, "embedding index " + std::to_string(index) + " out of range");
            }
            auto values = item.at("embedding").get<std::vector<float>>();
            if (values.size() != config.dims) {
                throw Error(ErrorCode::DimensionMismatch, "provider returned " + std::to_string(values.size()) +
                                                              " dims, expected " + std::to_string(config.dims));
            }
            slots[index] = normalized(std::move(values));
        }
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::ProviderError, std::string("unexpected embeddings response: ") + e.what() +
                                                  " body: " + detail::snippet(response.body));
    }
    std::vector<EmbeddingVector> out;
    out.reserve(slots.size());
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (!slots[i]) throw Error(ErrorCode::ProviderError, "no embedding returned for input " + std::to_string(i));
        out.push_back(std::move(*slots[i]));
    }
    return out;
}

}  // namespace

std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts,
                                         const EmbeddingProviderConfig& config, EmbeddingCache& cache,
                                         TextRole role) {
    validate(config);
    if (texts.empty()) throw Error(ErrorCode::InvalidArgument, "embed_batch needs at least one text");
    const auto& prefix = role == TextRole::query ? config.query_prefix : config.passage_prefix;

    std::vector<std::optional<EmbeddingVector>> results(texts.size());
    std::vector<std::string> missing;                  // unique effective texts to compute
    std::vector<std::vector<std::size_t>> missing_at;  // result slots per missing text
    std::unordered_map<std::string, std::size_t> pending;

    for (std::size_t i = 0; i < texts.size(); ++i) {
        std::string effective = prefix + texts[i];
        if (auto it = pending.find(effective); it != pending.end()) {
            cache.record_hit();
            missing_at[it->second].push_back(i);
            continue;
        }
        if (auto hit = cache.get(config.model_id, config.dims, effective)) {
            results[i] = std::move(*hit);
            continue;
        }
        pending.emplace(effective, missing.size());
        missing.push_back(std::move(effective));
        missing_at.push_back({i});
    }

    std::vector<EmbeddingVector> computed(missing.size());
    if (config.kind == ProviderKind::hashing) {
        for (std::size_t m = 0; m < missing.size(); ++m) computed[m] = hash_embed(missing[m], config.dims);
    } else if (!missing.empty()) {
        const auto batches = (missing.size() + config.batch_size - 1) / config.batch_size;
        parallel_for(batches, config.max_parallel_batches, [&](std::size_t b) {
            const auto begin = b * config.batch_size;
            const auto end = std::min(missing.size(), begin + config.batch_size);
            std::vector<std::string> batch(missing.begin() + static_cast<std::ptrdiff_t>(begin),
                                           missing.begin() + static_cast<std::ptrdiff_t>(end));
            auto vectors = fetch_remote(batch, config);
            for (std::size_t j = 0; j < vectors.size(); ++j) computed[begin + j] = std::move(vectors[j]);
        });
    }

    for (std::size_t m = 0; m < missing.size(); ++m) {
        cache.put(config.model_id, config.dims, missing[m], computed[m]);
        for (auto slot : missing_at[m]) results[slot] = computed[m];
    }

    std::vector<EmbeddingVector> out;
    out.reserve(results.size());
    for (auto& r : results) out.push_back(std::move(*r));
    return out;
}

}  // namespace apicompose
