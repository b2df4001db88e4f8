#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

namespace pmf {

/// Content-addressed JSON store: one file per key, named by an FNV-1a hash
/// of the key string, written via temp file + atomic rename.
class DiskCache {
public:
    explicit DiskCache(std::filesystem::path dir);

    std::optional<nlohmann::json> get(const std::string& key) const;
    void put(const std::string& key, const nlohmann::json& value) const;

    long clear() const; // number of entries removed
    struct Stat {
        long entries = 0;
        unsigned long long bytes = 0;
    };
    Stat stat() const;

    const std::filesystem::path& dir() const { return dir_; }
    static std::string hash_key(const std::string& key);

private:
    std::filesystem::path entry_path(const std::string& key) const;
    std::filesystem::path dir_;
};

/// Resolves the cache directory: explicit path, else $PMF_CACHE_DIR,
/// else .pmf-cache in the working directory.
std::filesystem::path default_cache_dir(const std::string& cli_value);

} // namespace pmf
