#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gazetype/dictionary.hpp"
#include "gazetype/error.hpp"
#include "gazetype/layout.hpp"
#include "gazetype/passcode.hpp"
#include "gazetype/posterior.hpp"

namespace gazetype {

enum class Scenario { Message, Password, UrlEmail, Passcode };

inline const char* to_string(Scenario s) {
    switch (s) {
        case Scenario::Message: return "message";
        case Scenario::Password: return "password";
        case Scenario::UrlEmail: return "url_email";
        case Scenario::Passcode: return "passcode";
    }
    return "?";
}

/// Top-K candidates for one keystroke as (key id, probability), rank order.
using KeyCandidates = std::vector<std::pair<std::string, double>>;
using CandidateSeq = std::vector<KeyCandidates>;

inline CandidateSeq to_candidates(const std::vector<KeyPosterior>& posteriors,
                                  const KeyboardLayout& layout) {
    CandidateSeq seq;
    seq.reserve(posteriors.size());
    for (const auto& post : posteriors) {
        KeyCandidates c;
        for (const auto& [idx, p] : post.top) c.emplace_back(layout.keys[idx].id, p);
        seq.push_back(std::move(c));
    }
    return seq;
}

/// A BACKSPACE candidate below this mass is treated as geometric spillover
/// from a neighboring key, not as a possible typo correction.
inline constexpr double kBackspaceCandidateMinProb = 0.02;

namespace textdetail {

inline bool has_key(const KeyCandidates& c, const std::string& id) {
    for (const auto& [k, p] : c)
        if (k == id) return true;
    return false;
}

inline bool has_key_with_mass(const KeyCandidates& c, const std::string& id, double min_p) {
    for (const auto& [k, p] : c)
        if (k == id && p >= min_p) return true;
    return false;
}

inline bool is_letter_id(const std::string& id) {
    return id.size() == 1 && std::islower(static_cast<unsigned char>(id[0]));
}

inline bool is_digit_id(const std::string& id) {
    return id.size() == 1 && std::isdigit(static_cast<unsigned char>(id[0]));
}

/// Candidate letter sets for a keystroke range, for dictionary matching.
inline std::vector<std::string> letter_sets(const CandidateSeq& seq, std::size_t lo,
                                            std::size_t hi) {
    std::vector<std::string> sets;
    sets.reserve(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) {
        std::string s;
        for (const auto& [k, p] : seq[i])
            if (is_letter_id(k)) s += k[0];
        sets.push_back(std::move(s));
    }
    return sets;
}

inline bool spelling_matches(const std::string& spelling,
                             const std::vector<std::string>& sets) {
    if (spelling.size() != sets.size()) return false;
    for (std::size_t i = 0; i < spelling.size(); ++i)
        if (sets[i].find(spelling[i]) == std::string::npos) return false;
    return true;
}

}  // namespace textdetail

/// One ranked word guess; attempt is its 1-based position in the guess order.
struct WordGuess {
    std::string word;
    int rank = 0;
    int attempt = 0;
};

/// Dictionary words consistent with the segment's top-K letter sets, in
/// frequency order, truncated to max_attempts. Variant spellings resolve
/// to their original words.
inline std::vector<WordGuess> infer_words(const CandidateSeq& seq, std::size_t lo, std::size_t hi,
                                          const Dictionary& dict, int max_attempts = 5) {
    std::vector<WordGuess> out;
    const int len = static_cast<int>(hi - lo);
    if (len < 1 || len > dict.max_word_length()) return out;
    const auto sets = textdetail::letter_sets(seq, lo, hi);
    int last_rank = -1;
    for (const auto& entry : dict.entries_of_length(len)) {
        if (static_cast<int>(out.size()) >= max_attempts) break;
        if (entry.rank == last_rank) continue;  // word + variant of the same original
        if (textdetail::spelling_matches(entry.spelling, sets)) {
            out.push_back({entry.word, entry.rank, static_cast<int>(out.size()) + 1});
            last_rank = entry.rank;
        }
    }
    return out;
}

inline std::vector<WordGuess> infer_words(const CandidateSeq& seq, const Dictionary& dict,
                                          int max_attempts = 5) {
    return infer_words(seq, 0, seq.size(), dict, max_attempts);
}

inline bool segment_has_word(const CandidateSeq& seq, std::size_t lo, std::size_t hi,
                             const Dictionary& dict) {
    return !infer_words(seq, lo, hi, dict, 1).empty();
}

/// Scenario routing rules, applied to the top-K candidate sequence plus
/// which keyboard the session used:
///   - the passcode keypad implies a passcode;
///   - '@' anywhere in top-K, or a trailing ".com/.edu/.net/.us" spellable
///     from the top-K sets, implies a URL or email address;
///   - otherwise, no SPACE in any top-K plus any non-letter key implies a
///     password;
///   - everything else is a message.
inline Scenario classify_scenario(const CandidateSeq& seq, const KeyboardLayout& layout) {
    if (seq.empty()) return Scenario::Message;
    if (layout.is_pin()) return Scenario::Passcode;

    for (const auto& c : seq)
        if (textdetail::has_key(c, "@")) return Scenario::UrlEmail;
    for (const std::string suffix : {".com", ".edu", ".net", ".us"}) {
        if (seq.size() < suffix.size()) continue;
        bool match = true;
        for (std::size_t i = 0; i < suffix.size(); ++i) {
            const auto& c = seq[seq.size() - suffix.size() + i];
            if (!textdetail::has_key(c, std::string(1, suffix[i]))) {
                match = false;
                break;
            }
        }
        if (match) return Scenario::UrlEmail;
    }

    bool any_space = false;
    bool any_non_letter = false;
    for (const auto& c : seq) {
        if (textdetail::has_key(c, "SPACE")) any_space = true;
        const std::string& top1 = c.front().first;
        if (!textdetail::is_letter_id(top1)) any_non_letter = true;
    }
    if (!any_space && any_non_letter) return Scenario::Password;
    return Scenario::Message;
}

/// Apply typo corrections: a BACKSPACE in the top-K candidates is treated
/// as a real correction when deleting it together with its preceding
/// keystroke leaves a segment that still spells a dictionary word;
/// otherwise the BACKSPACE candidate is dropped and decoding continues
/// with the remaining letters.
inline CandidateSeq infer_typo_corrections(const CandidateSeq& input, const Dictionary& dict) {
    CandidateSeq seq = input;
    std::size_t i = 0;
    while (i < seq.size()) {
        if (i == 0 ||
            !textdetail::has_key_with_mass(seq[i], "BACKSPACE", kBackspaceCandidateMinProb)) {
            ++i;
            continue;
        }
        // Provisional segment around i, delimited by SPACE candidates. The
        // deleted predecessor must be a letter inside the same segment;
        // deleting a separator would merge words instead of fixing one.
        std::size_t lo = i;
        while (lo > 0 && !textdetail::has_key(seq[lo - 1], "SPACE")) --lo;
        if (lo == i) {
            ++i;
            continue;
        }
        std::size_t hi = i + 1;
        while (hi < seq.size() && !textdetail::has_key(seq[hi], "SPACE")) ++hi;

        CandidateSeq trimmed;
        for (std::size_t j = lo; j < hi; ++j)
            if (j != i && j != i - 1) trimmed.push_back(seq[j]);
        if (!trimmed.empty() && segment_has_word(trimmed, 0, trimmed.size(), dict)) {
            seq.erase(seq.begin() + i - 1, seq.begin() + i + 1);
            i = i > 1 ? i - 1 : 0;
        } else {
            auto& cands = seq[i];
            cands.erase(std::remove_if(cands.begin(), cands.end(),
                                       [](const auto& kp) { return kp.first == "BACKSPACE"; }),
                        cands.end());
            ++i;
        }
    }
    return seq;
}

/// One candidate sentence segmentation: boundary keystroke indices (each
/// consumed as a SPACE), per-segment spans, and unknown flags for spans
/// that could not be matched against the dictionary.
struct SegmentationCandidate {
    std::vector<std::size_t> boundaries;
    struct Span {
        std::size_t lo, hi;  ///< keystroke range [lo, hi)
        bool unknown;
    };
    std::vector<Span> segments;
    double score = 0.0;  ///< log-likelihood of the boundary on/off choices
};

namespace textdetail {

inline double space_log_prob(const KeyCandidates& c, bool as_space) {
    double p = 0.0;
    for (const auto& [k, pr] : c)
        if (k == "SPACE") p = pr;
    p = std::clamp(p, 1e-6, 1.0 - 1e-6);
    return std::log(as_space ? p : 1.0 - p);
}

struct SegmentationSearch {
    const CandidateSeq& seq;
    const Dictionary& dict;
    std::vector<std::size_t> space_positions;
    std::vector<SegmentationCandidate> results;
    std::size_t max_results;

    void run() {
        std::vector<std::size_t> chosen;
        dfs(0, 0, 0.0, chosen);
        std::sort(results.begin(), results.end(),
                  [](const SegmentationCandidate& a, const SegmentationCandidate& b) {
                      return a.score > b.score;
                  });
        if (results.size() > max_results) results.resize(max_results);
    }

    // Enumerate boundary subsets left to right; prune any prefix whose
    // closed segment cannot spell a dictionary word.
    void dfs(std::size_t seg_start, std::size_t cand_idx, double score,
             std::vector<std::size_t>& chosen) {
        if (results.size() >= 4 * max_results) return;  // plenty to rank
        if (cand_idx == space_positions.size()) {
            if (seg_start < seq.size() &&
                !segment_has_word(seq, seg_start, seq.size(), dict))
                return;
            SegmentationCandidate out;
            out.boundaries = chosen;
            out.score = score;
            std::size_t lo = 0;
            for (std::size_t b : chosen) {
                out.segments.push_back({lo, b, false});
                lo = b + 1;
            }
            if (lo < seq.size()) out.segments.push_back({lo, seq.size(), false});
            results.push_back(std::move(out));
            return;
        }
        const std::size_t pos = space_positions[cand_idx];
        const double lp_space = space_log_prob(seq[pos], true);
        const double lp_letter = space_log_prob(seq[pos], false);
        auto as_letter = [&] { dfs(seg_start, cand_idx + 1, score + lp_letter, chosen); };
        auto as_boundary = [&] {
            if (pos > seg_start && segment_has_word(seq, seg_start, pos, dict)) {
                chosen.push_back(pos);
                dfs(pos + 1, cand_idx + 1, score + lp_space, chosen);
                chosen.pop_back();
            }
        };
        // Explore the likelier branch first so the result cap fills with
        // high-scoring segmentations.
        if (lp_space > lp_letter) {
            as_boundary();
            as_letter();
        } else {
            as_letter();
            as_boundary();
        }
    }
};

}  // namespace textdetail

/// Enumerate valid sentence segmentations: boundaries may sit only where
/// SPACE reaches the top-K candidates, and every resulting segment must
/// spell at least one dictionary word. When no fully valid segmentation
/// exists, a single greedy candidate is returned in which unmatched
/// stretches are flagged unknown and skipped at the next potential
/// boundary.
inline std::vector<SegmentationCandidate> segment_sentence(const CandidateSeq& seq,
                                                           const Dictionary& dict,
                                                           std::size_t max_candidates = 16) {
    std::vector<SegmentationCandidate> out;
    if (seq.empty()) return out;

    std::vector<std::size_t> spaces;
    for (std::size_t i = 0; i < seq.size(); ++i)
        if (textdetail::has_key(seq[i], "SPACE")) spaces.push_back(i);

    if (spaces.size() <= 20) {
        textdetail::SegmentationSearch search{seq, dict, spaces, {}, max_candidates};
        search.run();
        if (!search.results.empty()) return std::move(search.results);
    }

    // Skip rule: walk greedily, flagging unmatchable stretches unknown.
    SegmentationCandidate greedy;
    std::size_t lo = 0;
    while (lo < seq.size()) {
        // Best boundary reachable from lo: prefer the most space-like
        // candidate whose closed segment spells a word.
        std::optional<std::size_t> best;
        double best_score = -std::numeric_limits<double>::infinity();
        for (std::size_t b : spaces) {
            if (b <= lo || b - lo > static_cast<std::size_t>(dict.max_word_length())) continue;
            if (!segment_has_word(seq, lo, b, dict)) continue;
            const double s = textdetail::space_log_prob(seq[b], true);
            if (s > best_score) {
                best_score = s;
                best = b;
            }
        }
        const bool tail_fits = seq.size() - lo <= static_cast<std::size_t>(dict.max_word_length()) &&
                               segment_has_word(seq, lo, seq.size(), dict);
        if (tail_fits && !best) {
            greedy.segments.push_back({lo, seq.size(), false});
            break;
        }
        if (best) {
            greedy.segments.push_back({lo, *best, false});
            greedy.boundaries.push_back(*best);
            lo = *best + 1;
            continue;
        }
        // No valid word from here: skip to the next potential boundary.
        std::size_t next = seq.size();
        for (std::size_t b : spaces)
            if (b > lo) {
                next = b;
                break;
            }
        greedy.segments.push_back({lo, next, true});
        if (next < seq.size()) greedy.boundaries.push_back(next);
        lo = next + 1;
    }
    out.push_back(std::move(greedy));
    return out;
}

/// A recovered token: a dictionary word with ranked guesses, an unknown
/// span, or a literal keystroke lattice (passwords, URLs, passcodes).
struct RecoveredToken {
    enum class Kind { Word, Unknown, Literal };
    Kind kind = Kind::Word;
    std::size_t first_key = 0;
    std::size_t last_key = 0;  ///< exclusive
    std::vector<WordGuess> guesses;
    CandidateSeq lattice;  ///< literal tokens only

    std::string best_text() const {
        if (kind == Kind::Word) return guesses.empty() ? std::string("?") : guesses[0].word;
        if (kind == Kind::Unknown) return "?";
        std::string s;
        for (const auto& c : lattice) {
            const std::string& id = c.empty() ? std::string("?") : c.front().first;
            s += id.size() == 1 ? id : (id == "SPACE" ? " " : "<" + id + ">");
        }
        return s;
    }
};

struct RecoveredText {
    Scenario scenario = Scenario::Message;
    std::vector<RecoveredToken> tokens;
    std::vector<PasscodeGuess> passcode_guesses;
    std::vector<std::string> diagnostics;

    std::string best_text() const {
        if (scenario == Scenario::Passcode)
            return passcode_guesses.empty() ? std::string() : passcode_guesses[0].digits;
        std::string s;
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (i) s += ' ';
            s += tokens[i].best_text();
        }
        return s;
    }
};

struct RecoverConfig {
    int max_attempts = 5;
    std::size_t max_passcode_guesses = 32;
    std::size_t max_segmentations = 16;
};

/// Turn per-keystroke candidates into text. Messages run through typo
/// correction, sentence segmentation, and dictionary word inference;
/// passwords and URLs come back as literal candidate lattices; passcode
/// sessions are ranked separately from their plane points.
inline RecoveredText recover_text(const CandidateSeq& input, const Dictionary& dict,
                                  const KeyboardLayout& layout, const RecoverConfig& cfg = {},
                                  const std::vector<std::vector<PlanePoint>>* pin_groups = nullptr) {
    RecoveredText out;
    if (input.empty()) return out;
    out.scenario = classify_scenario(input, layout);

    if (out.scenario == Scenario::Passcode) {
        if (pin_groups)
            out.passcode_guesses =
                rank_passcodes(*pin_groups, layout, cfg.max_passcode_guesses);
        else
            out.diagnostics.push_back("passcode scenario without plane-point groups");
        RecoveredToken tok;
        tok.kind = RecoveredToken::Kind::Literal;
        tok.first_key = 0;
        tok.last_key = input.size();
        tok.lattice = input;
        out.tokens.push_back(std::move(tok));
        return out;
    }

    if (out.scenario == Scenario::Password || out.scenario == Scenario::UrlEmail) {
        RecoveredToken tok;
        tok.kind = RecoveredToken::Kind::Literal;
        tok.first_key = 0;
        tok.last_key = input.size();
        tok.lattice = input;
        out.tokens.push_back(std::move(tok));
        return out;
    }

    const CandidateSeq seq = infer_typo_corrections(input, dict);
    auto candidates = segment_sentence(seq, dict, cfg.max_segmentations);
    if (candidates.empty()) {
        out.diagnostics.push_back("no segmentation candidates");
        return out;
    }
    const SegmentationCandidate& best = candidates.front();
    for (const auto& span : best.segments) {
        RecoveredToken tok;
        tok.first_key = span.lo;
        tok.last_key = span.hi;
        if (span.unknown) {
            tok.kind = RecoveredToken::Kind::Unknown;
            out.diagnostics.push_back("unrecovered span of " +
                                      std::to_string(span.hi - span.lo) + " keystrokes");
        } else {
            tok.kind = RecoveredToken::Kind::Word;
            tok.guesses = infer_words(seq, span.lo, span.hi, dict, cfg.max_attempts);
            if (tok.guesses.empty()) tok.kind = RecoveredToken::Kind::Unknown;
        }
        out.tokens.push_back(std::move(tok));
    }
    return out;
}

}  // namespace gazetype
