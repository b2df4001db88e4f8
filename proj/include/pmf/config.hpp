#pragma once

#include <map>
#include <string>
#include <vector>

namespace pmf {

/// Flat TOML subset: `key = value` lines, [section] headers flattening to
/// section.key, integers, quoted strings, booleans, and one-line arrays.
/// Enough for run configs; not a general TOML reader.
struct TomlValue {
    enum Kind { Int, Str, Bool, IntList, StrList } kind = Int;
    long i = 0;
    bool b = false;
    std::string s;
    std::vector<long> ints;
    std::vector<std::string> strs;
};

std::map<std::string, TomlValue> parse_toml_file(const std::string& path);
std::map<std::string, TomlValue> parse_toml_text(const std::string& text);

struct RunConfig {
    long p = 5;
    long N = 3;
    std::string chi = "3:quad";
    std::vector<long> c_set{2, 3};
    long K = 8;
    long Q = 16;
    long M = 5;
    long D = 8;
    long r_max = 3;
    std::string cache_dir;
    std::vector<std::string> basis_files;
    std::string out;
};

RunConfig run_config_from_toml(const std::map<std::string, TomlValue>& kv);

} // namespace pmf
