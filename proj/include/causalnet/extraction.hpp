#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "causalnet/message.hpp"

namespace causalnet {

enum class connective { due_to, because_of, caused_by };

inline std::string_view connective_token(connective c) {
    switch (c) {
        case connective::due_to: return "due_to";
        case connective::because_of: return "because_of";
        case connective::caused_by: return "caused_by";
    }
    return "";
}

inline std::optional<connective> connective_from_token(std::string_view s) {
    for (connective c : {connective::due_to, connective::because_of, connective::caused_by})
        if (connective_token(c) == s)
            return c;
    return std::nullopt;
}

struct connective_match {
    connective kind;
    std::size_t begin = 0;  // byte offsets into the original text
    std::size_t end = 0;
};

enum class skip_reason { no_connective, sentence_initial, empty_subpart };

inline std::string_view skip_reason_token(skip_reason r) {
    switch (r) {
        case skip_reason::no_connective: return "no_connective";
        case skip_reason::sentence_initial: return "sentence_initial";
        case skip_reason::empty_subpart: return "empty_subpart";
    }
    return "";
}

// One causal assertion split out of a message. effect_text and cause_text
// are the raw substrings on each side of the connective, so
// effect_text + connective_literal + cause_text reconstructs the message.
struct causal_unit {
    std::string message_id;
    connective kind = connective::due_to;
    std::string cause_text;
    std::string effect_text;
    std::size_t connective_offset = 0;
    std::string connective_literal;  // as it appeared, original case and spacing
    bool multi_connective = false;
};

namespace detail {

// Word characters for boundary checks: ASCII alphanumerics, underscore,
// and any non-ASCII byte (we never split inside a multi-byte character).
inline bool is_word_byte(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c >= 0x80;
}

inline bool is_space_byte(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline char ascii_lower(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

// Matches `first` + whitespace + `second` at position i, case-insensitive,
// with word boundaries on both ends. Returns one-past-the-end or npos.
inline std::size_t match_phrase(std::string_view text, std::size_t i, std::string_view first,
                                std::string_view second) {
    if (i > 0 && is_word_byte(static_cast<unsigned char>(text[i - 1])))
        return std::string_view::npos;
    std::size_t p = i;
    for (char c : first) {
        if (p >= text.size() || ascii_lower(text[p]) != c)
            return std::string_view::npos;
        ++p;
    }
    std::size_t ws = 0;
    while (p < text.size() && is_space_byte(static_cast<unsigned char>(text[p]))) {
        ++p;
        ++ws;
    }
    if (ws == 0)
        return std::string_view::npos;
    for (char c : second) {
        if (p >= text.size() || ascii_lower(text[p]) != c)
            return std::string_view::npos;
        ++p;
    }
    if (p < text.size() && is_word_byte(static_cast<unsigned char>(text[p])))
        return std::string_view::npos;
    return p;
}

// Closing punctuation that may sit between a sentence terminator and the
// next sentence: ASCII quotes/brackets plus typographic right quotes.
inline std::size_t closing_mark_len(std::string_view text, std::size_t end) {
    if (end == 0)
        return 0;
    const char c = text[end - 1];
    if (c == '"' || c == '\'' || c == ')' || c == ']' || c == '}')
        return 1;
    if (end >= 3) {
        const std::string_view tail = text.substr(end - 3, 3);
        if (tail == "\xe2\x80\x9d" || tail == "\xe2\x80\x99")  // ” ’
            return 3;
    }
    return 0;
}

}  // namespace detail

// All case-insensitive whole-word occurrences of the three causal phrases,
// left to right. Spans are byte ranges in the original text; any run of
// whitespace is accepted between the two words of a phrase.
inline std::vector<connective_match> find_connectives(std::string_view text) {
    std::vector<connective_match> out;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = detail::ascii_lower(text[i]);
        std::size_t end = std::string_view::npos;
        connective kind{};
        if (c == 'd') {
            end = detail::match_phrase(text, i, "due", "to");
            kind = connective::due_to;
        } else if (c == 'b') {
            end = detail::match_phrase(text, i, "because", "of");
            kind = connective::because_of;
        } else if (c == 'c') {
            end = detail::match_phrase(text, i, "caused", "by");
            kind = connective::caused_by;
        }
        if (end != std::string_view::npos) {
            out.push_back({kind, i, end});
            i = end - 1;  // next scan position; matches never overlap
        }
    }
    return out;
}

// True when the connective starting at `pos` opens a sentence: at text
// start, or preceded (ignoring whitespace and closing quotes/brackets)
// by '.', '!' or '?'.
inline bool is_sentence_initial(std::string_view text, std::size_t pos) {
    std::size_t end = pos;
    for (;;) {
        while (end > 0 && detail::is_space_byte(static_cast<unsigned char>(text[end - 1])))
            --end;
        const std::size_t mark = detail::closing_mark_len(text, end);
        if (mark == 0)
            break;
        end -= mark;
    }
    if (end == 0)
        return true;
    const char c = text[end - 1];
    return c == '.' || c == '!' || c == '?';
}

inline std::string trim_copy(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && detail::is_space_byte(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && detail::is_space_byte(static_cast<unsigned char>(s[e - 1])))
        --e;
    return std::string(s.substr(b, e - b));
}

// Splits a message into a causal unit: the text before the connective is
// the effect subpart, the text after is the cause subpart. Sentence-initial
// connectives never qualify; when several connectives occur the first
// eligible one is used and the unit is flagged.
inline std::variant<causal_unit, skip_reason> extract_unit(const message& msg) {
    const auto matches = find_connectives(msg.text);
    if (matches.empty())
        return skip_reason::no_connective;
    const connective_match* chosen = nullptr;
    for (const auto& m : matches) {
        if (!is_sentence_initial(msg.text, m.begin)) {
            chosen = &m;
            break;
        }
    }
    if (!chosen)
        return skip_reason::sentence_initial;
    causal_unit unit;
    unit.message_id = msg.id;
    unit.kind = chosen->kind;
    unit.effect_text = msg.text.substr(0, chosen->begin);
    unit.cause_text = msg.text.substr(chosen->end);
    unit.connective_offset = chosen->begin;
    unit.connective_literal = msg.text.substr(chosen->begin, chosen->end - chosen->begin);
    unit.multi_connective = matches.size() > 1;
    if (trim_copy(unit.cause_text).empty() || trim_copy(unit.effect_text).empty())
        return skip_reason::empty_subpart;
    return unit;
}

struct extraction_skip {
    std::string message_id;
    skip_reason reason;
};

struct extraction_result {
    std::vector<causal_unit> units;  // corpus order
    std::vector<extraction_skip> skips;
};

inline extraction_result extract_all(const message_set& set) {
    extraction_result out;
    for (const auto& msg : set.messages()) {
        auto r = extract_unit(msg);
        if (auto* unit = std::get_if<causal_unit>(&r))
            out.units.push_back(std::move(*unit));
        else
            out.skips.push_back({msg.id, std::get<skip_reason>(r)});
    }
    return out;
}

struct extraction_report {
    std::size_t total_messages = 0;
    std::size_t units = 0;
    std::map<connective, std::size_t> by_connective;
    std::map<skip_reason, std::size_t> by_skip_reason;
    std::size_t multi_connective = 0;
};

inline extraction_report make_extraction_report(const message_set& set) {
    extraction_report rep;
    rep.total_messages = set.size();
    for (const auto& msg : set.messages()) {
        auto r = extract_unit(msg);
        if (auto* unit = std::get_if<causal_unit>(&r)) {
            ++rep.units;
            ++rep.by_connective[unit->kind];
            if (unit->multi_connective)
                ++rep.multi_connective;
        } else {
            ++rep.by_skip_reason[std::get<skip_reason>(r)];
        }
    }
    return rep;
}

}  // namespace causalnet
