#include "nlgrad/config.hpp"

#include "nlgrad/errors.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace nlgrad {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// strip an unquoted # comment
std::string strip_comment(const std::string& line) {
    bool in_str = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_str = !in_str;
        if (line[i] == '#' && !in_str) return line.substr(0, i);
    }
    return line;
}

ConfigValue parse_scalar(const std::string& tok, const std::string& where) {
    ConfigValue v;
    if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"') {
        v.kind = ConfigValue::Kind::String;
        v.str = tok.substr(1, tok.size() - 2);
        return v;
    }
    if (tok == "true" || tok == "false") {
        v.kind = ConfigValue::Kind::Boolean;
        v.boolean = tok == "true";
        return v;
    }
    char* end = nullptr;
    const double d = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
        fail(ErrorKind::ConfigParse, where + ": cannot parse value '" + tok + "'");
    v.kind = ConfigValue::Kind::Number;
    v.num = d;
    v.is_integer = tok.find_first_of(".eE") == std::string::npos;
    return v;
}

ConfigValue parse_value(const std::string& tok, const std::string& where) {
    if (!tok.empty() && tok.front() == '[') {
        if (tok.back() != ']') fail(ErrorKind::ConfigParse, where + ": unterminated array");
        ConfigValue v;
        v.kind = ConfigValue::Kind::Array;
        std::string inner = tok.substr(1, tok.size() - 2);
        std::string cur;
        bool in_str = false;
        for (char c : inner) {
            if (c == '"') in_str = !in_str;
            if (c == ',' && !in_str) {
                if (!trim(cur).empty()) v.array.push_back(parse_scalar(trim(cur), where));
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (!trim(cur).empty()) v.array.push_back(parse_scalar(trim(cur), where));
        return v;
    }
    return parse_scalar(tok, where);
}

} // namespace

ConfigFile ConfigFile::parse_string(const std::string& text, const std::string& origin) {
    ConfigFile cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = origin + ":" + std::to_string(lineno);
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(ErrorKind::ConfigParse, where + ": unterminated table header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) fail(ErrorKind::ConfigParse, where + ": empty table name");
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail(ErrorKind::ConfigParse, where + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty()) fail(ErrorKind::ConfigParse, where + ": empty key or value");
        const std::string full = section.empty() ? key : section + "." + key;
        if (cfg.kv_.count(full)) fail(ErrorKind::ConfigParse, where + ": duplicate key '" + full + "'");
        cfg.kv_[full] = parse_value(val, where);
    }
    return cfg;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::ConfigParse, "cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str(), path);
}

const ConfigValue& ConfigFile::require(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) fail(ErrorKind::ConfigParse, "missing required key '" + key + "'");
    return it->second;
}

std::string ConfigFile::get_string(const std::string& key) const {
    const auto& v = require(key);
    if (v.kind != ConfigValue::Kind::String) fail(ErrorKind::ConfigParse, "key '" + key + "' must be a string");
    return v.str;
}

double ConfigFile::get_double(const std::string& key) const {
    const auto& v = require(key);
    if (v.kind != ConfigValue::Kind::Number) fail(ErrorKind::ConfigParse, "key '" + key + "' must be a number");
    return v.num;
}

long long ConfigFile::get_int(const std::string& key) const {
    const auto& v = require(key);
    if (v.kind != ConfigValue::Kind::Number || !v.is_integer)
        fail(ErrorKind::ConfigParse, "key '" + key + "' must be an integer");
    return static_cast<long long>(v.num);
}

bool ConfigFile::get_bool(const std::string& key) const {
    const auto& v = require(key);
    if (v.kind != ConfigValue::Kind::Boolean) fail(ErrorKind::ConfigParse, "key '" + key + "' must be a boolean");
    return v.boolean;
}

std::vector<double> ConfigFile::get_double_array(const std::string& key) const {
    const auto& v = require(key);
    if (v.kind != ConfigValue::Kind::Array)
        fail(ErrorKind::ConfigParse, "key '" + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : v.array) {
        if (e.kind != ConfigValue::Kind::Number)
            fail(ErrorKind::ConfigParse, "key '" + key + "' must contain numbers only");
        out.push_back(e.num);
    }
    return out;
}

std::vector<std::string> ConfigFile::get_string_array(const std::string& key) const {
    const auto& v = require(key);
    if (v.kind != ConfigValue::Kind::Array)
        fail(ErrorKind::ConfigParse, "key '" + key + "' must be an array of strings");
    std::vector<std::string> out;
    for (const auto& e : v.array) {
        if (e.kind != ConfigValue::Kind::String)
            fail(ErrorKind::ConfigParse, "key '" + key + "' must contain strings only");
        out.push_back(e.str);
    }
    return out;
}

std::string ConfigFile::get_string_or(const std::string& key, const std::string& def) const {
    return has(key) ? get_string(key) : def;
}

double ConfigFile::get_double_or(const std::string& key, double def) const {
    return has(key) ? get_double(key) : def;
}

long long ConfigFile::get_int_or(const std::string& key, long long def) const {
    return has(key) ? get_int(key) : def;
}

} // namespace nlgrad
