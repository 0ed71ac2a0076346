#include "hj1d/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace hj1d {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// strip an unquoted trailing comment
std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
    return s;
}

bool valid_key(const std::string& key) {
    if (key.empty()) return false;
    for (char c : key)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.') return false;
    return true;
}

double parse_number(const std::string& raw, const std::string& key) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(raw, &pos);
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' is not a number: '" + raw + "'");
    }
    if (pos != raw.size())
        throw ConfigError("config: trailing characters after number in '" + key + "': '" + raw +
                          "'");
    return v;
}

}  // namespace

Config Config::parse_string(const std::string& text, const std::string& origin) {
    Config cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string body = trim(strip_comment(line));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (!valid_key(key))
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": bad key '" + key + "'");
        if (cfg.entries_.count(key))
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key +
                              "'");
        cfg.entries_[key] = value;
        cfg.consumed_[key] = false;
    }
    return cfg;
}

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str(), path);
}

bool Config::has(const std::string& key) const { return entries_.count(key) != 0; }

std::string Config::raw(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError("config: missing required key '" + key + "'");
    consumed_[key] = true;
    return it->second;
}

std::string Config::get_string(const std::string& key) const { return unquote(raw(key)); }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
}

double Config::get_number(const std::string& key) const { return parse_number(raw(key), key); }

double Config::get_number(const std::string& key, double fallback) const {
    return has(key) ? get_number(key) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = get_string(key);
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError("config: key '" + key + "' must be true or false");
}

std::vector<double> Config::get_number_list(const std::string& key) const {
    std::string v = trim(raw(key));
    if (v.size() < 2 || v.front() != '[' || v.back() != ']')
        throw ConfigError("config: key '" + key + "' must be a [list]");
    v = v.substr(1, v.size() - 2);
    std::vector<double> out;
    std::string item;
    std::istringstream in(v);
    while (std::getline(in, item, ',')) {
        const std::string t = trim(item);
        if (t.empty()) throw ConfigError("config: empty element in list '" + key + "'");
        out.push_back(parse_number(t, key));
    }
    if (out.empty()) throw ConfigError("config: list '" + key + "' is empty");
    return out;
}

std::vector<double> Config::get_number_list(const std::string& key,
                                            std::vector<double> fallback) const {
    return has(key) ? get_number_list(key) : fallback;
}

void Config::require_all_consumed() const {
    std::string stray;
    for (const auto& [key, used] : consumed_)
        if (!used) stray += (stray.empty() ? "" : ", ") + key;
    if (!stray.empty()) throw ConfigError("config: unknown key(s): " + stray);
}

std::uint64_t Config::hash() const {
    // FNV-1a over the canonical sorted key=value listing
    std::uint64_t h = 14695981039346656037ull;
    auto feed = [&](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
    };
    for (const auto& [key, value] : entries_) {
        feed(key);
        feed("=");
        feed(value);
        feed("\n");
    }
    return h;
}

}  // namespace hj1d
