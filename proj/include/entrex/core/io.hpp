#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace entrex {

// Error classes map to CLI exit codes; see tools/entrex.cpp.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MissingArtifactError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InputParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnknownUriError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InternalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Line-oriented reader over a plain or gzip-compressed file (detected by
// the 1f 8b magic). Strips a trailing \r.
class LineReader {
public:
    explicit LineReader(const std::filesystem::path& path);
    ~LineReader();
    LineReader(LineReader&&) noexcept;
    LineReader& operator=(LineReader&&) noexcept;

    // Returns false at end of input.
    bool next(std::string& line);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);
std::vector<std::string> split_tabs(const std::string& line);

// Creates the directory if needed; errors if the path exists as a file.
void ensure_dir(const std::filesystem::path& dir);

// Throws MissingArtifactError naming the producing stage if path is absent.
void require_artifact(const std::filesystem::path& path, const std::string& stage);

}  // namespace entrex
