#include "pmf/cache.hpp"

#include <cstdint>
#include <cstdlib>
#include <fstream>

#include <unistd.h>

namespace pmf {

namespace fs = std::filesystem;

DiskCache::DiskCache(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

std::string DiskCache::hash_key(const std::string& key) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : key) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
    return buf;
}

fs::path DiskCache::entry_path(const std::string& key) const {
    return dir_ / (hash_key(key) + ".json");
}

std::optional<nlohmann::json> DiskCache::get(const std::string& key) const {
    std::ifstream in(entry_path(key));
    if (!in) return std::nullopt;
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) return std::nullopt;
    if (!j.contains("key") || j["key"].get<std::string>() != key) return std::nullopt;
    return j["value"];
}

void DiskCache::put(const std::string& key, const nlohmann::json& value) const {
    nlohmann::json j{{"key", key}, {"value", value}};
    fs::path final = entry_path(key);
    fs::path tmp = final;
    tmp += ".tmp." + std::to_string((unsigned long)getpid());
    {
        std::ofstream out(tmp);
        out << j.dump();
    }
    fs::rename(tmp, final);
}

long DiskCache::clear() const {
    long n = 0;
    for (const auto& e : fs::directory_iterator(dir_)) {
        if (e.path().extension() == ".json") {
            fs::remove(e.path());
            ++n;
        }
    }
    return n;
}

DiskCache::Stat DiskCache::stat() const {
    Stat s;
    for (const auto& e : fs::directory_iterator(dir_)) {
        if (e.path().extension() != ".json") continue;
        ++s.entries;
        s.bytes += (unsigned long long)fs::file_size(e.path());
    }
    return s;
}

fs::path default_cache_dir(const std::string& cli_value) {
    if (!cli_value.empty()) return cli_value;
    if (const char* env = std::getenv("PMF_CACHE_DIR")) return env;
    return ".pmf-cache";
}

} // namespace pmf
