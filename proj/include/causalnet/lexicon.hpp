#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "causalnet/errors.hpp"
#include "causalnet/extraction.hpp"
#include "causalnet/rng.hpp"

namespace causalnet {

enum class rule_side { cause, effect, both };

inline std::string_view rule_side_token(rule_side s) {
    switch (s) {
        case rule_side::cause: return "cause";
        case rule_side::effect: return "effect";
        case rule_side::both: return "both";
    }
    return "";
}

struct lexicon_rule {
    std::string pattern;  // case-insensitive regular expression
    std::string concept_name;
    rule_side side = rule_side::both;
    int priority = 0;  // smaller value is tried first; defaults to file position
    std::size_t file_index = 0;
    std::regex re;
};

struct lexicon {
    std::vector<lexicon_rule> rules;  // sorted by (priority, file_index)
    std::vector<std::string> concepts;  // node order for every network built from this lexicon
    std::map<std::string, std::string> theme_map;
    std::vector<std::string> themes;  // distinct, in declaration order
    std::string cause_reference_theme;
    std::string effect_reference_theme;

    const std::string& theme_of(const std::string& concept_name) const {
        auto it = theme_map.find(concept_name);
        if (it == theme_map.end())
            throw data_error("lexicon: unmapped concept " + concept_name);
        return it->second;
    }

    int concept_index(const std::string& concept_name) const {
        for (std::size_t i = 0; i < concepts.size(); ++i)
            if (concepts[i] == concept_name)
                return static_cast<int>(i);
        return -1;
    }
};

namespace detail {

inline std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find("::", start);
        if (pos == std::string::npos) {
            out.push_back(trim_copy(line.substr(start)));
            return out;
        }
        out.push_back(trim_copy(line.substr(start, pos - start)));
        start = pos + 2;
    }
}

}  // namespace detail

// Lexicon file format: '#' lines are comments, sections are [rules],
// [themes] and [reference_themes]. Rule lines are
//   pattern :: concept :: side(cause|effect|both) [:: priority]
// theme lines are `concept :: theme`, reference lines are
// `cause :: theme` / `effect :: theme`. Patterns that need a leading '#'
// (hashtags) write it as \# so the line is not read as a comment.
inline lexicon parse_lexicon(std::istream& in) {
    lexicon lex;
    std::string section;
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> declared_order;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim_copy(line);
        if (t.empty() || t[0] == '#')
            continue;
        if (t.front() == '[' && t.back() == ']') {
            section = t.substr(1, t.size() - 2);
            if (section != "rules" && section != "themes" && section != "reference_themes")
                throw data_error("lexicon line " + std::to_string(line_no) +
                                 ": unknown section [" + section + "]");
            continue;
        }
        const auto fields = detail::split_fields(t);
        if (section == "rules") {
            if (fields.size() < 3 || fields.size() > 4)
                throw data_error("lexicon line " + std::to_string(line_no) +
                                 ": rule needs pattern :: concept :: side [:: priority]");
            lexicon_rule rule;
            rule.pattern = fields[0];
            rule.concept_name = fields[1];
            if (rule.concept_name.empty())
                throw data_error("lexicon line " + std::to_string(line_no) + ": empty concept");
            if (fields[2] == "cause")
                rule.side = rule_side::cause;
            else if (fields[2] == "effect")
                rule.side = rule_side::effect;
            else if (fields[2] == "both")
                rule.side = rule_side::both;
            else
                throw data_error("lexicon line " + std::to_string(line_no) + ": bad side '" +
                                 fields[2] + "'");
            rule.file_index = lex.rules.size();
            rule.priority = static_cast<int>(rule.file_index);
            if (fields.size() == 4) {
                try {
                    rule.priority = std::stoi(fields[3]);
                } catch (const std::exception&) {
                    throw data_error("lexicon line " + std::to_string(line_no) +
                                     ": bad priority '" + fields[3] + "'");
                }
            }
            try {
                rule.re = std::regex(rule.pattern,
                                     std::regex::ECMAScript | std::regex::icase);
            } catch (const std::regex_error& e) {
                throw data_error("lexicon line " + std::to_string(line_no) +
                                 ": invalid pattern '" + rule.pattern + "': " + e.what());
            }
            lex.rules.push_back(std::move(rule));
        } else if (section == "themes") {
            if (fields.size() != 2)
                throw data_error("lexicon line " + std::to_string(line_no) +
                                 ": theme line needs concept :: theme");
            if (lex.theme_map.count(fields[0]))
                throw data_error("lexicon line " + std::to_string(line_no) +
                                 ": concept mapped twice: " + fields[0]);
            lex.theme_map.emplace(fields[0], fields[1]);
            declared_order.push_back(fields[0]);
            if (std::find(lex.themes.begin(), lex.themes.end(), fields[1]) == lex.themes.end())
                lex.themes.push_back(fields[1]);
        } else if (section == "reference_themes") {
            if (fields.size() != 2 || (fields[0] != "cause" && fields[0] != "effect"))
                throw data_error("lexicon line " + std::to_string(line_no) +
                                 ": reference line needs cause|effect :: theme");
            (fields[0] == "cause" ? lex.cause_reference_theme : lex.effect_reference_theme) =
                fields[1];
        } else {
            throw data_error("lexicon line " + std::to_string(line_no) +
                             ": content before any section header");
        }
    }

    lex.concepts = std::move(declared_order);
    for (const auto& rule : lex.rules)
        if (!lex.theme_map.count(rule.concept_name))
            throw data_error("lexicon: unmapped concept " + rule.concept_name);
    std::map<std::pair<std::string, rule_side>, std::size_t> seen;
    for (const auto& rule : lex.rules)
        if (!seen.emplace(std::make_pair(rule.pattern, rule.side), rule.file_index).second)
            throw data_error("lexicon: duplicate (pattern, side): " + rule.pattern);
    if (lex.cause_reference_theme.empty())
        lex.cause_reference_theme = "Secondary Threats";
    if (lex.effect_reference_theme.empty())
        lex.effect_reference_theme = "Disruptions";
    for (const std::string* ref : {&lex.cause_reference_theme, &lex.effect_reference_theme})
        if (std::find(lex.themes.begin(), lex.themes.end(), *ref) == lex.themes.end())
            throw data_error("lexicon: reference theme '" + *ref +
                             "' is not a declared theme; add a [reference_themes] section");
    std::stable_sort(lex.rules.begin(), lex.rules.end(),
                     [](const lexicon_rule& a, const lexicon_rule& b) {
                         return a.priority != b.priority ? a.priority < b.priority
                                                         : a.file_index < b.file_index;
                     });
    return lex;
}

inline lexicon load_lexicon(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw data_error("cannot open lexicon file: " + path);
    return parse_lexicon(in);
}

// First matching rule in priority order whose side covers `side` wins.
inline std::optional<std::string> code_subpart(const std::string& text, const lexicon& lex,
                                               rule_side side) {
    for (const auto& rule : lex.rules) {
        if (rule.side != rule_side::both && rule.side != side)
            continue;
        if (std::regex_search(text, rule.re))
            return rule.concept_name;
    }
    return std::nullopt;
}

struct coded_unit {
    causal_unit unit;
    std::string cause_concept;
    std::string effect_concept;
    std::string cause_theme;
    std::string effect_theme;
};

struct uncoded_unit {
    causal_unit unit;
    bool cause_uncoded = false;
    bool effect_uncoded = false;
};

inline std::variant<coded_unit, uncoded_unit> code_unit(const causal_unit& unit,
                                                        const lexicon& lex) {
    const auto cause = code_subpart(unit.cause_text, lex, rule_side::cause);
    const auto effect = code_subpart(unit.effect_text, lex, rule_side::effect);
    if (!cause || !effect)
        return uncoded_unit{unit, !cause, !effect};
    coded_unit coded;
    coded.unit = unit;
    coded.cause_concept = *cause;
    coded.effect_concept = *effect;
    coded.cause_theme = lex.theme_of(*cause);
    coded.effect_theme = lex.theme_of(*effect);
    return coded;
}

struct coding_result {
    std::vector<coded_unit> coded;
    std::vector<uncoded_unit> uncoded;
};

inline coding_result code_all(const std::vector<causal_unit>& units, const lexicon& lex) {
    coding_result out;
    for (const auto& u : units) {
        auto r = code_unit(u, lex);
        if (auto* c = std::get_if<coded_unit>(&r))
            out.coded.push_back(std::move(*c));
        else
            out.uncoded.push_back(std::move(std::get<uncoded_unit>(r)));
    }
    return out;
}

struct uncoded_subpart {
    std::string message_id;
    rule_side side = rule_side::cause;
    std::string text;
};

struct uncoded_sample {
    std::vector<uncoded_subpart> subparts;  // in seeded order
    bool truncated = false;                 // n exceeded the pool
};

// Uniform sample without replacement of subparts the lexicon fails to
// code; feeds the manual keyword-discovery loop.
inline uncoded_sample sample_uncoded(const std::vector<causal_unit>& units, const lexicon& lex,
                                     std::size_t n, std::uint64_t seed) {
    std::vector<uncoded_subpart> pool;
    for (const auto& u : units) {
        if (!code_subpart(u.cause_text, lex, rule_side::cause))
            pool.push_back({u.message_id, rule_side::cause, trim_copy(u.cause_text)});
        if (!code_subpart(u.effect_text, lex, rule_side::effect))
            pool.push_back({u.message_id, rule_side::effect, trim_copy(u.effect_text)});
    }
    uncoded_sample out;
    out.truncated = n > pool.size();
    rng_t rng(seed);
    for (std::size_t i : rng.sample_indices(pool.size(), n))
        out.subparts.push_back(pool[i]);
    return out;
}

struct concept_counts {
    std::size_t as_cause = 0;
    std::size_t as_effect = 0;
};

struct coding_report {
    std::map<std::string, concept_counts> by_concept;
    std::size_t total_units = 0;
    std::size_t coded_units = 0;
    std::optional<double> coverage;  // empty input leaves this unset
};

inline coding_report make_coding_report(const std::vector<causal_unit>& units,
                                        const lexicon& lex) {
    coding_report rep;
    rep.total_units = units.size();
    for (const auto& u : units) {
        auto r = code_unit(u, lex);
        if (auto* c = std::get_if<coded_unit>(&r)) {
            ++rep.coded_units;
            ++rep.by_concept[c->cause_concept].as_cause;
            ++rep.by_concept[c->effect_concept].as_effect;
        }
    }
    if (rep.total_units > 0)
        rep.coverage = static_cast<double>(rep.coded_units) / static_cast<double>(rep.total_units);
    return rep;
}

}  // namespace causalnet
