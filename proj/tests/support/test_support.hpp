#pragma once

#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <system_error>

#include "apicompose/util.hpp"

namespace apicompose::test {

inline std::filesystem::path fixture(const std::string& name) {
    return std::filesystem::path(APICOMPOSE_FIXTURE_DIR) / name;
}

inline std::string fixture_text(const std::string& name) { return read_file(fixture(name)); }

inline std::string python_interpreter() { return APICOMPOSE_PYTHON; }

/// Scratch directory removed on destruction.
class ScratchDir {
public:
    ScratchDir() {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("apicompose-test-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~ScratchDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

}  // namespace apicompose::test
