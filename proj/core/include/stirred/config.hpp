#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace stirred::io {

struct KeySpec {
    std::string name;
    std::string default_value;  ///< ignored when required
    bool required = false;
    std::string doc;
};

/// Keys accepted by every subcommand: seed, output_dir, threads.
std::vector<KeySpec> global_keys();

/// Flat `key = value` configuration. '#' starts a comment; blank lines are
/// skipped; section headers are rejected.
class ConfigMap {
public:
    static ConfigMap parse(const std::string& text);
    static ConfigMap load(const std::string& path);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const { return values_.count(key) != 0; }

    /// Reject keys outside `schema` (global keys always allowed), fail on a
    /// missing required key, then fill defaults. Throws ConfigError.
    void check(const std::vector<KeySpec>& schema);

    std::string str(const std::string& key) const;
    double num(const std::string& key) const;
    long integer(const std::string& key) const;
    std::uint64_t u64(const std::string& key) const;
    bool flag(const std::string& key) const;

    /// 64-bit FNV-1a of the sorted `key=value` lines, as 16 hex digits.
    std::string hash() const;
    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

/// Parse a list of doubles separated by commas or spaces.
std::vector<double> parse_list(const std::string& text);

}  // namespace stirred::io
