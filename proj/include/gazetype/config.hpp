#pragma once

#include <fstream>
#include <map>
#include <string>

#include "gazetype/error.hpp"
#include "gazetype/pipeline.hpp"

namespace gazetype {

/// Flat key=value config files; '#' starts a comment. CLI flags override
/// whatever the file sets.
inline std::map<std::string, std::string> parse_config_text(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t");
        line = line.substr(first, last - first + 1);
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ParseError("expected key=value", line_no);
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
        while (!value.empty() && (value.front() == ' ' || value.front() == '\t'))
            value.erase(value.begin());
        kv[key] = value;
    }
    return kv;
}

inline void apply_config_entry(PipelineConfig& cfg, const std::string& key,
                               const std::string& value) {
    try {
        if (key == "stability_window")
            cfg.stability_window = std::stoi(value);
        else if (key == "s_t") {
            if (value == "estimate")
                cfg.estimate_s_t = true;
            else {
                cfg.s_t = std::stod(value);
                cfg.estimate_s_t = false;
            }
        } else if (key == "sigma_pitch")
            cfg.sigma_pitch = std::stod(value);
        else if (key == "top_k")
            cfg.top_k = std::stoi(value);
        else if (key == "tol_ms")
            cfg.tol_ms = std::stod(value);
        else if (key == "max_attempts")
            cfg.max_attempts = std::stoi(value);
        else if (key == "max_passcode_guesses")
            cfg.max_passcode_guesses = std::stoul(value);
        else if (key == "pin_pitch_plane")
            cfg.pin_pitch_plane = std::stod(value);
        else if (key == "seed")
            cfg.seed = std::stoull(value);
        else if (key == "dict")
            cfg.dictionary_path = value;
        else if (key == "layout")
            cfg.layout = value;
        else if (key == "model")
            cfg.model_path = value;
        else
            throw ConfigError("unknown config key '" + key + "'");
    } catch (const std::invalid_argument&) {
        throw ConfigError("bad value for config key '" + key + "'");
    } catch (const std::out_of_range&) {
        throw ConfigError("bad value for config key '" + key + "'");
    }
}

inline PipelineConfig load_config_file(const std::string& path, PipelineConfig base = {}) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    for (const auto& [k, v] : parse_config_text(in)) apply_config_entry(base, k, v);
    return base;
}

}  // namespace gazetype
