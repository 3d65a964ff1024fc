#include <gtest/gtest.h>

#include <atomic>
#include <stdexcept>

#include "apicompose/error.hpp"
#include "apicompose/tokens.hpp"
#include "apicompose/util.hpp"
#include "test_support.hpp"

using namespace apicompose;

TEST(Digest, KnownSha256Vectors) {
    EXPECT_EQ(Digest256::of("").hex(), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    EXPECT_EQ(Digest256::of("abc").hex(), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Fnv1a64, KnownVectors) {
    EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
    EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(Base64, RoundTripAndKnownText) {
    const std::string text = "hello";
    std::vector<std::uint8_t> bytes(text.begin(), text.end());
    EXPECT_EQ(base64_encode(bytes), "aGVsbG8=");
    EXPECT_EQ(base64_decode("aGVsbG8="), bytes);
    EXPECT_TRUE(base64_decode("").empty());
    for (std::size_t n = 0; n < 40; ++n) {
        std::vector<std::uint8_t> data(n);
        for (std::size_t i = 0; i < n; ++i) data[i] = static_cast<std::uint8_t>(i * 37 + 11);
        EXPECT_EQ(base64_decode(base64_encode(data)), data) << n;
    }
}

TEST(Base64, RejectsGarbage) {
    try {
        base64_decode("@@@@");
        FAIL() << "expected FormatError";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::FormatError);
    }
}

TEST(Slugify, CollapsesAndTrims) {
    EXPECT_EQ(slugify("Pet Store"), "pet-store");
    EXPECT_EQ(slugify("  Weather -- API v2 "), "weather-api-v2");
    EXPECT_EQ(slugify("!!!"), "service");
}

TEST(Files, AtomicWriteThenRead) {
    test::ScratchDir dir;
    atomic_write_file(dir / "a.txt", "one");
    atomic_write_file(dir / "a.txt", "two");
    EXPECT_EQ(read_file(dir / "a.txt"), "two");
    try {
        read_file(dir / "missing.txt");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::IoError);
    }
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
    std::vector<std::atomic<int>> seen(257);
    parallel_for(seen.size(), 8, [&](std::size_t i) { seen[i]++; });
    for (const auto& s : seen) EXPECT_EQ(s.load(), 1);
}

TEST(ParallelFor, RethrowsWorkerException) {
    EXPECT_THROW(parallel_for(50, 4, [](std::size_t i) {
                     if (i == 17) throw std::runtime_error("boom");
                 }),
                 std::runtime_error);
}

TEST(Tokens, HeuristicCounts) {
    EXPECT_EQ(count_tokens(""), 0u);
    EXPECT_EQ(count_tokens("abcdefgh"), 2u);
    EXPECT_EQ(count_tokens("abcdefghij"), 3u);
    EXPECT_EQ(default_token_counter()("abcde"), 2u);
}

TEST(Errors, NamesAndTransportClass) {
    EXPECT_EQ(error_code_name(ErrorCode::DanglingReference), "DanglingReference");
    EXPECT_TRUE(is_transport_error(ErrorCode::ProviderUnreachable));
    EXPECT_FALSE(is_transport_error(ErrorCode::FormatError));
}
