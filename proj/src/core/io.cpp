#include "entrex/core/io.hpp"

#include <zlib.h>

#include <cstring>
#include <sstream>

namespace entrex {

namespace {

std::string inflate_gzip(const std::filesystem::path& path) {
    gzFile f = gzopen(path.string().c_str(), "rb");
    if (!f) throw InputParseError("cannot open " + path.string());
    std::string out;
    char buf[1 << 16];
    int n;
    while ((n = gzread(f, buf, sizeof(buf))) > 0) out.append(buf, static_cast<size_t>(n));
    if (n < 0) {
        int errnum = 0;
        const char* msg = gzerror(f, &errnum);
        std::string err = msg ? msg : "gzip read error";
        gzclose(f);
        throw InputParseError(path.string() + ": " + err);
    }
    gzclose(f);
    return out;
}

bool is_gzip(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    unsigned char magic[2] = {0, 0};
    in.read(reinterpret_cast<char*>(magic), 2);
    return in.gcount() == 2 && magic[0] == 0x1f && magic[1] == 0x8b;
}

}  // namespace

struct LineReader::Impl {
    std::ifstream file;
    std::string buffer;  // whole decompressed content for gzip inputs
    size_t pos = 0;
    bool gz = false;
};

LineReader::LineReader(const std::filesystem::path& path) : impl_(std::make_unique<Impl>()) {
    if (!std::filesystem::exists(path)) throw InputParseError("no such file: " + path.string());
    if (is_gzip(path)) {
        impl_->gz = true;
        impl_->buffer = inflate_gzip(path);
    } else {
        impl_->file.open(path, std::ios::binary);
        if (!impl_->file) throw InputParseError("cannot open " + path.string());
    }
}

LineReader::~LineReader() = default;
LineReader::LineReader(LineReader&&) noexcept = default;
LineReader& LineReader::operator=(LineReader&&) noexcept = default;

bool LineReader::next(std::string& line) {
    if (impl_->gz) {
        if (impl_->pos >= impl_->buffer.size()) return false;
        const size_t nl = impl_->buffer.find('\n', impl_->pos);
        if (nl == std::string::npos) {
            line.assign(impl_->buffer, impl_->pos, impl_->buffer.size() - impl_->pos);
            impl_->pos = impl_->buffer.size();
        } else {
            line.assign(impl_->buffer, impl_->pos, nl - impl_->pos);
            impl_->pos = nl + 1;
        }
    } else {
        if (!std::getline(impl_->file, line)) return false;
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputParseError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InternalError("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw InternalError("short write to " + path.string());
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    size_t start = 0;
    while (true) {
        const size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

void ensure_dir(const std::filesystem::path& dir) {
    if (std::filesystem::exists(dir) && !std::filesystem::is_directory(dir))
        throw ConfigError(dir.string() + " exists and is not a directory");
    std::filesystem::create_directories(dir);
}

void require_artifact(const std::filesystem::path& path, const std::string& stage) {
    if (!std::filesystem::exists(path))
        throw MissingArtifactError("missing " + path.string() + " (run the `" + stage +
                                   "` stage first)");
}

}  // namespace entrex
