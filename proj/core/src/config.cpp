#include "membrane/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "membrane/errors.hpp"

namespace membrane {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str());
}

Config Config::parse_string(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw PreconditionError("config: line " + std::to_string(lineno) + " has no '='");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw PreconditionError("config: empty key at line " + std::to_string(lineno));
        cfg.kv_[key] = val;
    }
    return cfg;
}

std::string Config::get_string(const std::string& key) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) throw PreconditionError("config: missing key '" + key + "'");
    return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

int64_t Config::get_int(const std::string& key) const {
    const std::string v = get_string(key);
    char* end = nullptr;
    const long long r = std::strtoll(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw PreconditionError("config: key '" + key + "' is not an integer: " + v);
    return r;
}

int64_t Config::get_int(const std::string& key, int64_t fallback) const {
    return has(key) ? get_int(key) : fallback;
}

uint64_t Config::get_u64(const std::string& key, uint64_t fallback) const {
    if (!has(key)) return fallback;
    const std::string v = get_string(key);
    char* end = nullptr;
    const unsigned long long r = std::strtoull(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw PreconditionError("config: key '" + key + "' is not a u64: " + v);
    return r;
}

double Config::get_real(const std::string& key) const {
    const std::string v = get_string(key);
    char* end = nullptr;
    const double r = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw PreconditionError("config: key '" + key + "' is not a real: " + v);
    return r;
}

double Config::get_real(const std::string& key, double fallback) const {
    return has(key) ? get_real(key) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = get_string(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw PreconditionError("config: key '" + key + "' is not a bool: " + v);
}

std::vector<double> Config::get_real_list(const std::string& key) const {
    const std::string v = get_string(key);
    std::vector<double> out;
    std::istringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        char* end = nullptr;
        const double r = std::strtod(item.c_str(), &end);
        if (end == item.c_str())
            throw PreconditionError("config: key '" + key + "' has a non-real element: " + item);
        out.push_back(r);
    }
    if (out.empty()) throw PreconditionError("config: key '" + key + "' is an empty list");
    return out;
}

uint64_t Config::hash() const {
    uint64_t h = 1469598103934665603ULL;
    const auto feed = [&h](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ULL;
        }
    };
    for (const auto& [k, v] : kv_) {
        feed(k);
        feed("=");
        feed(v);
        feed("\n");
    }
    return h;
}

}  // namespace membrane
