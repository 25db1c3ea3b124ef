#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "fraburgers/errors.hpp"
#include "fraburgers/version.hpp"

namespace fraburgers {

// Ordered key/value run record. Written once when a run starts (status
// "initialized") and rewritten with the full set of checks and timings when
// it finishes (status "finalized"). Insertion order is preserved so repeated
// runs produce identical files apart from timing values.
class RunManifest {
  public:
    explicit RunManifest(std::string subcommand)
        : subcommand_(std::move(subcommand)) {
        set("artifact_version", std::string(kVersion));
        set("subcommand", subcommand_);
        set("status", "initialized");
    }

    void set(const std::string& key, const std::string& value) {
        for (auto& kv : entries_) {
            if (kv.first == key) {
                kv.second = value;
                return;
            }
        }
        entries_.emplace_back(key, value);
    }

    // keeps string literals away from the bool overload
    void set(const std::string& key, const char* value) {
        set(key, std::string(value));
    }

    void set(const std::string& key, double value) {
        set(key, format_full(value));
    }

    void set(const std::string& key, bool value) {
        set(key, value ? std::string("true") : std::string("false"));
    }

    void set_config_echo(const std::string& raw) { config_echo_ = raw; }

    void finalize() { set("status", "finalized"); }

    void write(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("cannot open " + path + " for writing");
        for (const auto& kv : entries_)
            out << kv.first << ": " << kv.second << '\n';
        if (!config_echo_.empty()) {
            out << "config_echo_begin:\n";
            out << config_echo_;
            if (config_echo_.back() != '\n') out << '\n';
            out << "config_echo_end:\n";
        }
    }

  private:
    static std::string format_full(double v) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return buf;
    }

    std::string subcommand_;
    std::vector<std::pair<std::string, std::string>> entries_;
    std::string config_echo_;
};

}  // namespace fraburgers
