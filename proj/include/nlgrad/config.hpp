#pragma once

#include <map>
#include <string>
#include <vector>

namespace nlgrad {

// Minimal TOML-subset reader: [table] / [table.sub] headers, key = value lines,
// strings, numbers, booleans, flat arrays, and # comments. Keys are flattened
// to "table.key".
struct ConfigValue {
    enum class Kind { String, Number, Boolean, Array };
    Kind kind = Kind::Number;
    std::string str;
    double num = 0.0;
    bool boolean = false;
    bool is_integer = false;
    std::vector<ConfigValue> array;
};

class ConfigFile {
public:
    static ConfigFile parse_file(const std::string& path);
    static ConfigFile parse_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& key) const { return kv_.count(key) != 0; }
    const std::map<std::string, ConfigValue>& entries() const { return kv_; }

    // throwing accessors (ConfigParse on missing key or wrong type)
    std::string get_string(const std::string& key) const;
    double get_double(const std::string& key) const;
    long long get_int(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    std::vector<double> get_double_array(const std::string& key) const;
    std::vector<std::string> get_string_array(const std::string& key) const;

    // defaulted accessors
    std::string get_string_or(const std::string& key, const std::string& def) const;
    double get_double_or(const std::string& key, double def) const;
    long long get_int_or(const std::string& key, long long def) const;

private:
    const ConfigValue& require(const std::string& key) const;
    std::map<std::string, ConfigValue> kv_;
};

} // namespace nlgrad
