#include "pmf/config.hpp"

#include <fstream>
#include <sstream>

#include "pmf/errors.hpp"

namespace pmf {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool parse_long(const std::string& s, long& out) {
    if (s.empty()) return false;
    size_t pos = 0;
    try {
        out = std::stol(s, &pos);
    } catch (...) {
        return false;
    }
    return pos == s.size();
}

TomlValue parse_value(const std::string& raw) {
    TomlValue v;
    std::string s = trim(raw);
    if (s.empty()) throw ParameterError("empty TOML value");
    if (s.front() == '"') {
        if (s.size() < 2 || s.back() != '"') throw ParameterError("unterminated string: " + s);
        v.kind = TomlValue::Str;
        v.s = s.substr(1, s.size() - 2);
        return v;
    }
    if (s == "true" || s == "false") {
        v.kind = TomlValue::Bool;
        v.b = (s == "true");
        return v;
    }
    if (s.front() == '[') {
        if (s.back() != ']') throw ParameterError("unterminated array: " + s);
        std::string body = s.substr(1, s.size() - 2);
        std::vector<std::string> items;
        std::string cur;
        for (char ch : body) {
            if (ch == ',') {
                items.push_back(trim(cur));
                cur.clear();
            } else {
                cur += ch;
            }
        }
        if (!trim(cur).empty()) items.push_back(trim(cur));
        bool all_int = !items.empty();
        for (const auto& it : items) {
            long dummy;
            if (!parse_long(it, dummy)) all_int = false;
        }
        if (all_int) {
            v.kind = TomlValue::IntList;
            for (const auto& it : items) {
                long x;
                parse_long(it, x);
                v.ints.push_back(x);
            }
        } else {
            v.kind = TomlValue::StrList;
            for (const auto& it : items) {
                if (it.size() >= 2 && it.front() == '"' && it.back() == '"')
                    v.strs.push_back(it.substr(1, it.size() - 2));
                else
                    v.strs.push_back(it);
            }
        }
        return v;
    }
    long x;
    if (!parse_long(s, x)) throw ParameterError("unrecognized TOML value: " + s);
    v.kind = TomlValue::Int;
    v.i = x;
    return v;
}

} // namespace

std::map<std::string, TomlValue> parse_toml_text(const std::string& text) {
    std::map<std::string, TomlValue> kv;
    std::istringstream in(text);
    std::string line, section;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            // keep # inside quotes
            bool quoted = false;
            for (size_t i = 0; i < hash; ++i)
                if (line[i] == '"') quoted = !quoted;
            if (!quoted) line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParameterError("bad section header: " + line);
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ParameterError("expected key = value: " + line);
        std::string key = trim(line.substr(0, eq));
        if (!section.empty()) key = section + "." + key;
        kv[key] = parse_value(line.substr(eq + 1));
    }
    return kv;
}

std::map<std::string, TomlValue> parse_toml_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_toml_text(buf.str());
}

RunConfig run_config_from_toml(const std::map<std::string, TomlValue>& kv) {
    RunConfig rc;
    auto geti = [&](const char* k, long& slot) {
        auto it = kv.find(k);
        if (it == kv.end()) return;
        if (it->second.kind != TomlValue::Int) throw ParameterError(std::string(k) + " must be an integer");
        slot = it->second.i;
    };
    auto gets = [&](const char* k, std::string& slot) {
        auto it = kv.find(k);
        if (it == kv.end()) return;
        if (it->second.kind != TomlValue::Str) throw ParameterError(std::string(k) + " must be a string");
        slot = it->second.s;
    };
    geti("p", rc.p);
    geti("N", rc.N);
    gets("chi", rc.chi);
    geti("K", rc.K);
    geti("Q", rc.Q);
    geti("M", rc.M);
    geti("D", rc.D);
    geti("rmax", rc.r_max);
    geti("r_max", rc.r_max);
    gets("cache_dir", rc.cache_dir);
    gets("out", rc.out);
    if (auto it = kv.find("c"); it != kv.end()) {
        if (it->second.kind == TomlValue::Int)
            rc.c_set = {it->second.i};
        else if (it->second.kind == TomlValue::IntList)
            rc.c_set = it->second.ints;
        else
            throw ParameterError("c must be an integer or integer list");
    }
    if (auto it = kv.find("basis"); it != kv.end()) {
        if (it->second.kind == TomlValue::Str)
            rc.basis_files = {it->second.s};
        else if (it->second.kind == TomlValue::StrList)
            rc.basis_files = it->second.strs;
        else
            throw ParameterError("basis must be a path or list of paths");
    }
    return rc;
}

} // namespace pmf
