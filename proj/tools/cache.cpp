#include "cache.hpp"

#include <openssl/evp.h>
#include <unistd.h>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "zvdl/error.hpp"

namespace zvdl::cli {

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw Error(Errc::io_failure, "sha256 failed");
    }
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", md[i]);
        hex += buf;
    }
    return hex;
}

std::string canonical(const nlohmann::json& manifest) { return manifest.dump(); }

void write_atomic(const std::filesystem::path& path, const std::string& bytes) {
    static std::atomic<unsigned> serial{0};
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(serial++);
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw Error(Errc::io_failure, "cannot open " + tmp.string());
        os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!os) throw Error(Errc::io_failure, "write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error(Errc::io_failure, "cannot rename into " + path.string());
    }
}

std::optional<std::string> read_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) return std::nullopt;
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::filesystem::path default_cache_dir() {
    const char* env = std::getenv("ZVDL_CACHE");
    if (env && *env) return env;
    return ".cache";
}

std::filesystem::path Cache::path_for(const nlohmann::json& manifest, const std::string& ext) const {
    return dir_ / (sha256_hex(canonical(manifest)) + ext);
}

std::optional<std::string> Cache::load(const nlohmann::json& manifest, const std::string& ext) const {
    return read_file(path_for(manifest, ext));
}

void Cache::store(const nlohmann::json& manifest, const std::string& ext, const std::string& bytes) const {
    write_atomic(path_for(manifest, ext), bytes);
}

}  // namespace zvdl::cli
