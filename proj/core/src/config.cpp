#include "stirred/config.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "stirred/errors.hpp"

namespace stirred::io {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<KeySpec> global_keys() {
    return {{"seed", "1", false, "base seed; STIRRED_SEED overrides it"},
            {"output_dir", ".", false, "directory for CSV and SVG outputs"},
            {"threads", "1", false, "worker threads for replica loops"}};
}

ConfigMap ConfigMap::parse(const std::string& text) {
    ConfigMap cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') throw ConfigError("line " + std::to_string(lineno) + ": sections are not supported");
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        if (cfg.has(key)) throw ConfigError("duplicate key '" + key + "'");
        cfg.values_[key] = trim(line.substr(eq + 1));
    }
    return cfg;
}

ConfigMap ConfigMap::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

void ConfigMap::set(const std::string& key, const std::string& value) { values_[key] = value; }

void ConfigMap::check(const std::vector<KeySpec>& schema) {
    std::vector<KeySpec> all = global_keys();
    all.insert(all.end(), schema.begin(), schema.end());
    std::set<std::string> known;
    for (const auto& k : all) known.insert(k.name);
    for (const auto& [k, v] : values_)
        if (!known.count(k)) throw ConfigError("unknown key '" + k + "'");
    for (const auto& k : all) {
        if (has(k.name)) continue;
        if (k.required) throw ConfigError("missing required key '" + k.name + "'");
        values_[k.name] = k.default_value;
    }
}

std::string ConfigMap::str(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing key '" + key + "'");
    return it->second;
}

double ConfigMap::num(const std::string& key) const {
    const std::string s = str(key);
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw ConfigError("key '" + key + "' expects a number, got '" + s + "'");
    return v;
}

long ConfigMap::integer(const std::string& key) const {
    const std::string s = str(key);
    long v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw ConfigError("key '" + key + "' expects an integer, got '" + s + "'");
    return v;
}

std::uint64_t ConfigMap::u64(const std::string& key) const {
    const std::string s = str(key);
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw ConfigError("key '" + key + "' expects an unsigned integer, got '" + s + "'");
    return v;
}

bool ConfigMap::flag(const std::string& key) const {
    const std::string s = str(key);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigError("key '" + key + "' expects true or false, got '" + s + "'");
}

std::string ConfigMap::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& [k, v] : values_) {
        for (const char ch : k + "=" + v + "\n") {
            h ^= static_cast<unsigned char>(ch);
            h *= 0x100000001b3ULL;
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::string tok;
    auto flush = [&] {
        if (tok.empty()) return;
        double v = 0.0;
        const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || p != tok.data() + tok.size()) throw ConfigError("bad number '" + tok + "' in list");
        out.push_back(v);
        tok.clear();
    };
    for (char ch : text) {
        if (ch == ',' || ch == ' ' || ch == '\t') flush();
        else tok += ch;
    }
    flush();
    return out;
}

}  // namespace stirred::io
