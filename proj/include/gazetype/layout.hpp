#pragma once

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "gazetype/error.hpp"

namespace gazetype {

/// One key: identifier, center and rectangular extent, all in key-pitch
/// units. Multi-character identifiers name special keys (SPACE, RETURN,
/// BACKSPACE, SHIFT, NUM, ABC, SYM, COMMA).
struct KeyInfo {
    std::string id;
    double cy = 0.0;  ///< center, horizontal (right positive)
    double cz = 0.0;  ///< center, vertical (up positive; lower rows negative)
    double w = 0.9;
    double h = 0.9;

    double y_lo() const { return cy - 0.5 * w; }
    double y_hi() const { return cy + 0.5 * w; }
    double z_lo() const { return cz - 0.5 * h; }
    double z_hi() const { return cz + 0.5 * h; }
};

/// Keyboard geometry plus the anchor box used by boundary estimation:
/// the rectangle through the extreme key centers that typing is assumed
/// to span (Q..P columns and top..space rows on the letter board).
struct KeyboardLayout {
    std::string name;
    std::vector<KeyInfo> keys;
    double anchor_y_lo = 0.0, anchor_y_hi = 0.0;
    double anchor_z_lo = 0.0, anchor_z_hi = 0.0;

    int index_of(const std::string& id) const {
        for (std::size_t i = 0; i < keys.size(); ++i)
            if (keys[i].id == id) return static_cast<int>(i);
        return -1;
    }

    const KeyInfo* find(const std::string& id) const {
        const int i = index_of(id);
        return i >= 0 ? &keys[i] : nullptr;
    }

    bool is_pin() const { return name == "pin"; }
};

namespace layouts {

namespace detail {

inline void add_row(KeyboardLayout& kb, const std::string& row_keys, double y0, double z) {
    for (std::size_t i = 0; i < row_keys.size(); ++i)
        kb.keys.push_back({std::string(1, row_keys[i]), y0 + double(i), z, 0.9, 0.9});
}

}  // namespace detail

/// The default letter board. Rows staggered by 0.25/0.75 pitch; Space is
/// five pitches wide. Anchor box: Q..P centers by top-row..space-row.
inline KeyboardLayout qwerty() {
    KeyboardLayout kb;
    kb.name = "qwerty";
    detail::add_row(kb, "qwertyuiop", 0.0, 0.0);
    detail::add_row(kb, "asdfghjkl", 0.25, -1.0);
    kb.keys.push_back({"SHIFT", -0.45, -2.0, 1.4, 0.9});
    detail::add_row(kb, "zxcvbnm", 0.75, -2.0);
    kb.keys.push_back({"BACKSPACE", 8.05, -2.0, 1.4, 0.9});
    kb.keys.push_back({"NUM", 0.45, -3.0, 1.8, 0.9});
    kb.keys.push_back({"SPACE", 4.5, -3.0, 5.0, 0.9});
    kb.keys.push_back({"RETURN", 8.2, -3.0, 2.2, 0.9});
    kb.anchor_y_lo = 0.0;
    kb.anchor_y_hi = 9.0;
    kb.anchor_z_lo = -3.0;
    kb.anchor_z_hi = 0.0;
    return kb;
}

/// Number and symbol board; same footprint as the letter board.
inline KeyboardLayout numberspace() {
    KeyboardLayout kb;
    kb.name = "numberspace";
    detail::add_row(kb, "1234567890", 0.0, 0.0);
    detail::add_row(kb, "-/:;()$&@", 0.25, -1.0);
    kb.keys.push_back({"SYM", -0.45, -2.0, 1.4, 0.9});
    detail::add_row(kb, ".", 0.75, -2.0);
    kb.keys.push_back({"COMMA", 1.75, -2.0, 0.9, 0.9});
    detail::add_row(kb, "?!'", 2.75, -2.0);
    kb.keys.push_back({"BACKSPACE", 8.05, -2.0, 1.4, 0.9});
    kb.keys.push_back({"ABC", 0.45, -3.0, 1.8, 0.9});
    kb.keys.push_back({"SPACE", 4.5, -3.0, 5.0, 0.9});
    kb.keys.push_back({"RETURN", 8.2, -3.0, 2.2, 0.9});
    kb.anchor_y_lo = 0.0;
    kb.anchor_y_hi = 9.0;
    kb.anchor_z_lo = -3.0;
    kb.anchor_z_hi = 0.0;
    return kb;
}

/// Passcode keypad: 3x4 digit grid, "0" centered on the bottom row.
inline KeyboardLayout pin() {
    KeyboardLayout kb;
    kb.name = "pin";
    detail::add_row(kb, "123", 0.0, 0.0);
    detail::add_row(kb, "456", 0.0, -1.0);
    detail::add_row(kb, "789", 0.0, -2.0);
    kb.keys.push_back({"0", 1.0, -3.0, 0.9, 0.9});
    kb.anchor_y_lo = 0.0;
    kb.anchor_y_hi = 2.0;
    kb.anchor_z_lo = -3.0;
    kb.anchor_z_hi = 0.0;
    return kb;
}

}  // namespace layouts

inline std::vector<KeyboardLayout> builtin_layouts() {
    return {layouts::qwerty(), layouts::numberspace(), layouts::pin()};
}

/// Layout file: header `key,center_y,center_z,w,h`, one key per line,
/// key-pitch units. The anchor box of a loaded layout is the bounding box
/// of its key centers.
inline KeyboardLayout load_layout(std::istream& in, const std::string& name) {
    std::string line;
    long line_no = 0;
    if (!std::getline(in, line)) throw ParseError("empty layout file", 1);
    ++line_no;
    // Tolerate a trailing \r from CRLF files.
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "key,center_y,center_z,w,h")
        throw ParseError("bad layout header '" + line + "'", line_no);

    KeyboardLayout kb;
    kb.name = name;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        KeyInfo k;
        std::size_t pos = 0;
        auto next_field = [&]() {
            const std::size_t comma = line.find(',', pos);
            if (comma == std::string::npos) throw ParseError("expected 5 fields", line_no);
            std::string f = line.substr(pos, comma - pos);
            pos = comma + 1;
            return f;
        };
        k.id = next_field();
        if (k.id.empty()) throw ParseError("empty key id", line_no);
        try {
            k.cy = std::stod(next_field());
            k.cz = std::stod(next_field());
            k.w = std::stod(next_field());
            k.h = std::stod(line.substr(pos));
        } catch (const std::exception&) {
            throw ParseError("bad numeric field", line_no);
        }
        if (!(k.w > 0.0) || !(k.h > 0.0)) throw ParseError("key extent must be positive", line_no);
        kb.keys.push_back(k);
    }
    if (kb.keys.empty()) throw ParseError("layout has no keys", line_no);
    kb.anchor_y_lo = kb.anchor_y_hi = kb.keys[0].cy;
    kb.anchor_z_lo = kb.anchor_z_hi = kb.keys[0].cz;
    for (const auto& k : kb.keys) {
        kb.anchor_y_lo = std::min(kb.anchor_y_lo, k.cy);
        kb.anchor_y_hi = std::max(kb.anchor_y_hi, k.cy);
        kb.anchor_z_lo = std::min(kb.anchor_z_lo, k.cz);
        kb.anchor_z_hi = std::max(kb.anchor_z_hi, k.cz);
    }
    return kb;
}

inline void save_layout(const KeyboardLayout& kb, std::ostream& out) {
    out << "key,center_y,center_z,w,h\n";
    for (const auto& k : kb.keys)
        out << k.id << ',' << k.cy << ',' << k.cz << ',' << k.w << ',' << k.h << '\n';
}

/// Resolve a --layout argument: a builtin name or a path to a layout file.
inline KeyboardLayout resolve_layout(const std::string& spec) {
    for (auto& kb : builtin_layouts())
        if (kb.name == spec) return kb;
    std::ifstream in(spec);
    if (!in) throw ConfigError("unknown layout '" + spec + "' (not a builtin, not a file)");
    std::string name = spec;
    const std::size_t slash = name.find_last_of('/');
    if (slash != std::string::npos) name = name.substr(slash + 1);
    const std::size_t dot = name.find_last_of('.');
    if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
    return load_layout(in, name);
}

}  // namespace gazetype
