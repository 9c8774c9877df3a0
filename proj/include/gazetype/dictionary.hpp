#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <string>
#include <unordered_map>
#include <vector>

#include "gazetype/error.hpp"

namespace gazetype {

/// Frequency-ordered word list. Rank 0 is the most frequent word; word
/// guesses are always emitted in rank order.
///
/// The variant table maps run-collapsed spellings ("beter", "wek") back to
/// their originals ("better", "week"), covering words whose repeated
/// letters produce a single fixation when gaze-typed.
class Dictionary {
public:
    struct Entry {
        std::string spelling;  ///< what the keystrokes look like
        int rank;              ///< rank of the original word
        std::string word;      ///< the word to report
    };

    Dictionary() = default;

    explicit Dictionary(std::vector<std::string> words) {
        for (auto& w : words) add_word(std::move(w));
        rebuild_index();
    }

    /// Plain-text format: one lowercase word per line, most frequent first.
    static Dictionary load(std::istream& in) {
        std::vector<std::string> words;
        std::string line;
        long line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            for (char c : line)
                if (!(std::islower(static_cast<unsigned char>(c))))
                    throw ParseError("dictionary words must be lowercase ASCII", line_no);
            words.push_back(line);
        }
        if (words.empty()) throw ParseError("dictionary is empty");
        return Dictionary(std::move(words));
    }

    static Dictionary load_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ParseError("cannot open dictionary '" + path + "'");
        return load(in);
    }

    std::size_t size() const { return words_.size(); }
    int max_word_length() const { return lmax_; }
    const std::vector<std::string>& words() const { return words_; }

    bool contains(const std::string& w) const { return rank_.count(w) > 0; }

    int rank_of(const std::string& w) const {
        auto it = rank_.find(w);
        return it == rank_.end() ? -1 : it->second;
    }

    /// All spellings (words and, when enabled, variants) of a given length.
    const std::vector<Entry>& entries_of_length(int len) const {
        static const std::vector<Entry> empty;
        if (len < 1 || len > static_cast<int>(by_length_.size())) return empty;
        return by_length_[len - 1];
    }

    bool has_variants() const { return variants_enabled_; }

private:
    friend Dictionary expand_identical_keystrokes(const Dictionary&);

    void add_word(std::string w) {
        if (w.empty() || rank_.count(w)) return;
        rank_[w] = static_cast<int>(words_.size());
        words_.push_back(std::move(w));
    }

    static std::string collapse_runs(const std::string& w) {
        std::string out;
        for (char c : w)
            if (out.empty() || out.back() != c) out += c;
        return out;
    }

    void rebuild_index() {
        lmax_ = 0;
        for (const auto& w : words_) lmax_ = std::max(lmax_, static_cast<int>(w.size()));
        by_length_.assign(lmax_, {});
        for (const auto& w : words_)
            by_length_[w.size() - 1].push_back({w, rank_.at(w), w});
        if (variants_enabled_) {
            for (const auto& w : words_) {
                const std::string v = collapse_runs(w);
                if (v != w) by_length_[v.size() - 1].push_back({v, rank_.at(w), w});
            }
        }
        for (auto& bucket : by_length_)
            std::sort(bucket.begin(), bucket.end(),
                      [](const Entry& a, const Entry& b) { return a.rank < b.rank; });
    }

    std::vector<std::string> words_;
    std::unordered_map<std::string, int> rank_;
    std::vector<std::vector<Entry>> by_length_;
    int lmax_ = 0;
    bool variants_enabled_ = false;
};

/// Copy of the dictionary with run-collapsed variants enabled, so
/// consecutive identical keystrokes that merge into one fixation still
/// resolve to the original word.
inline Dictionary expand_identical_keystrokes(const Dictionary& dict) {
    Dictionary out = dict;
    out.variants_enabled_ = true;
    out.rebuild_index();
    return out;
}

}  // namespace gazetype
