#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace membrane {

// Experiment configuration: UTF-8 key=value lines, '#' comments, dotted keys
// for nesting (e.g. sweep.h_min). Values are kept as strings and converted
// on access so that the config hash is a pure function of the text content.
class Config {
public:
    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text);

    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    int64_t get_int(const std::string& key) const;
    int64_t get_int(const std::string& key, int64_t fallback) const;
    uint64_t get_u64(const std::string& key, uint64_t fallback) const;
    double get_real(const std::string& key) const;
    double get_real(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    // Comma-separated list of reals.
    std::vector<double> get_real_list(const std::string& key) const;

    void set(const std::string& key, const std::string& value) { kv_[key] = value; }

    // FNV-1a over the canonicalized (sorted key=value) content; stamped into
    // every output row so a row can be regenerated in isolation.
    uint64_t hash() const;

    const std::map<std::string, std::string>& items() const { return kv_; }

private:
    std::map<std::string, std::string> kv_;
};

}  // namespace membrane
