#pragma once

// Flat key-value experiment configs with dotted sections:
//
//     # commentary
//     problem.hamiltonian.kind = quadratic
//     problem.potential.b = "cos2pi_minus1"
//     epsilon = [0.125, 0.0625, 0.03125]
//
// One entry per line. Values are numbers, bare or quoted strings, booleans,
// or [comma, separated, lists]. '#' starts a comment outside quotes. Unknown
// keys are rejected after parsing so typos fail loudly. The canonical hash
// (FNV-1a over sorted key=value lines) is echoed into every report row.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace hj1d {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Config {
public:
    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& key) const;

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_number(const std::string& key) const;
    double get_number(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_number_list(const std::string& key) const;
    std::vector<double> get_number_list(const std::string& key,
                                        std::vector<double> fallback) const;

    // Throws listing every key that was never read.
    void require_all_consumed() const;

    std::uint64_t hash() const;
    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::string raw(const std::string& key) const;
    std::map<std::string, std::string> entries_;
    mutable std::map<std::string, bool> consumed_;
    std::string origin_;
};

}  // namespace hj1d
