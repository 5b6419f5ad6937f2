#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

namespace zvdl::cli {

/// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(const std::string& bytes);

/// Canonical form of a manifest: sorted keys, no whitespace.
std::string canonical(const nlohmann::json& manifest);

/// Writes to a sibling temp file, then renames over path. Throws Errc::io_failure.
void write_atomic(const std::filesystem::path& path, const std::string& bytes);

/// Reads a whole file; nullopt when it does not exist or cannot be opened.
std::optional<std::string> read_file(const std::filesystem::path& path);

/// ZVDL_CACHE when set and non-empty, else ./.cache.
std::filesystem::path default_cache_dir();

class Cache {
public:
    explicit Cache(std::filesystem::path dir) : dir_(std::move(dir)) {}

    std::filesystem::path path_for(const nlohmann::json& manifest, const std::string& ext) const;
    std::optional<std::string> load(const nlohmann::json& manifest, const std::string& ext) const;
    void store(const nlohmann::json& manifest, const std::string& ext, const std::string& bytes) const;

private:
    std::filesystem::path dir_;
};

}  // namespace zvdl::cli
