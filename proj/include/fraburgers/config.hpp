#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fraburgers/errors.hpp"

namespace fraburgers {

// key = value configuration file. '#' starts a comment, blank lines are
// skipped, keys are validated against the known schema, and the raw text is
// retained so manifests can echo the input verbatim.
class Config {
  public:
    static Config parse_text(const std::string& text,
                             const std::set<std::string>& known_keys) {
        Config cfg;
        cfg.raw_text_ = text;
        std::istringstream in(text);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const std::string stripped = strip(strip_comment(line));
            if (stripped.empty()) continue;
            const auto eq = stripped.find('=');
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(line_no) +
                                  ": expected key = value");
            const std::string key = strip(stripped.substr(0, eq));
            const std::string value = strip(stripped.substr(eq + 1));
            if (key.empty())
                throw ConfigError("line " + std::to_string(line_no) +
                                  ": empty key");
            if (!known_keys.count(key))
                throw ConfigError("unknown key '" + key + "' on line " +
                                  std::to_string(line_no));
            if (cfg.values_.count(key))
                throw ConfigError("duplicate key '" + key + "' on line " +
                                  std::to_string(line_no));
            cfg.values_[key] = value;
        }
        return cfg;
    }

    static Config parse_file(const std::string& path,
                             const std::set<std::string>& known_keys) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ConfigError("cannot open config file " + path);
        std::ostringstream text;
        text << in.rdbuf();
        return parse_text(text.str(), known_keys);
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get_string(const std::string& key,
                           const std::string& fallback) const {
        auto it = values_.find(key);
        return it != values_.end() ? it->second : fallback;
    }

    std::string require_string(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end())
            throw ConfigError("missing required key '" + key + "'");
        return it->second;
    }

    double get_double(const std::string& key, double fallback) const {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        return to_double(key, it->second);
    }

    long long get_int(const std::string& key, long long fallback) const {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        return to_int(key, it->second);
    }

    const std::string& raw_text() const { return raw_text_; }
    const std::map<std::string, std::string>& values() const { return values_; }

  private:
    static std::string strip_comment(const std::string& s) {
        const auto pos = s.find('#');
        return pos == std::string::npos ? s : s.substr(0, pos);
    }

    static std::string strip(const std::string& s) {
        std::size_t b = 0, e = s.size();
        while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
        return s.substr(b, e - b);
    }

    static double to_double(const std::string& key, const std::string& v) {
        try {
            std::size_t used = 0;
            const double d = std::stod(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            return d;
        } catch (const std::exception&) {
            throw ConfigError("key '" + key + "': cannot parse '" + v +
                              "' as a number");
        }
    }

    static long long to_int(const std::string& key, const std::string& v) {
        try {
            std::size_t used = 0;
            const long long i = std::stoll(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            return i;
        } catch (const std::exception&) {
            throw ConfigError("key '" + key + "': cannot parse '" + v +
                              "' as an integer");
        }
    }

    std::string raw_text_;
    std::map<std::string, std::string> values_;
};

}  // namespace fraburgers
