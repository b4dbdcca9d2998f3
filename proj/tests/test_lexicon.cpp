#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <sstream>

#include "causalnet/lexicon.hpp"
#include "test_util.hpp"

using namespace causalnet;

static lexicon tiny_lexicon() {
    std::istringstream in(
        "[rules]\n"
        "social distancing :: Actions/Efficacy :: both\n"
        "\\bcovid :: Primary Threat :: both\n"
        "\\bclosed :: Disruptions :: effect\n"
        "[themes]\n"
        "Primary Threat :: Primary Threat\n"
        "Actions/Efficacy :: Primary Threat Measures\n"
        "Disruptions :: Transitions and Shifts\n"
        "Secondary Threats Concept :: Secondary Threats\n"
        "[reference_themes]\n"
        "cause :: Secondary Threats\n"
        "effect :: Transitions and Shifts\n");
    return parse_lexicon(in);
}

TEST_CASE("lexicon parses rules, themes and references") {
    const auto lex = tiny_lexicon();
    CHECK(lex.rules.size() == 3);
    CHECK(lex.concepts.size() == 4);
    CHECK(lex.concepts[0] == "Primary Threat");  // theme declaration order
    CHECK(lex.themes.size() == 4);
    CHECK(lex.cause_reference_theme == "Secondary Threats");
    CHECK(lex.effect_reference_theme == "Transitions and Shifts");
    CHECK(lex.theme_of("Actions/Efficacy") == "Primary Threat Measures");
}

TEST_CASE("lexicon validation errors") {
    std::istringstream bad_regex(
        "[rules]\n( :: Foo :: both\n[themes]\nFoo :: T\n[reference_themes]\ncause :: T\neffect :: T\n");
    CHECK_THROWS_WITH(parse_lexicon(bad_regex), Catch::Matchers::ContainsSubstring("invalid pattern"));

    std::istringstream unmapped(
        "[rules]\nx :: Foo :: both\n[themes]\nBar :: T\n[reference_themes]\ncause :: T\neffect :: T\n");
    CHECK_THROWS_WITH(parse_lexicon(unmapped),
                      Catch::Matchers::ContainsSubstring("unmapped concept Foo"));

    std::istringstream dup(
        "[rules]\nx :: A :: both\nx :: A :: both\n[themes]\nA :: T\n"
        "[reference_themes]\ncause :: T\neffect :: T\n");
    CHECK_THROWS_WITH(parse_lexicon(dup), Catch::Matchers::ContainsSubstring("duplicate"));

    std::istringstream bad_ref(
        "[rules]\nx :: A :: both\n[themes]\nA :: T\n[reference_themes]\ncause :: Nope\neffect :: T\n");
    CHECK_THROWS_WITH(parse_lexicon(bad_ref),
                      Catch::Matchers::ContainsSubstring("reference theme"));
}

TEST_CASE("code_subpart picks the first matching rule in priority order") {
    const auto lex = tiny_lexicon();
    CHECK(*code_subpart("We ask you to practice social distancing", lex, rule_side::effect) ==
          "Actions/Efficacy");
    CHECK_FALSE(code_subpart("xyzzy", lex, rule_side::cause));
    // matches both "social distancing" and "covid": the earlier rule wins
    CHECK(*code_subpart("social distancing and covid", lex, rule_side::cause) ==
          "Actions/Efficacy");
    // side-specific rule only applies on its side
    CHECK(*code_subpart("offices closed", lex, rule_side::effect) == "Disruptions");
    CHECK_FALSE(code_subpart("offices closed", lex, rule_side::cause));
}

TEST_CASE("explicit priorities override file order") {
    std::istringstream in(
        "[rules]\n"
        "alpha :: A :: both :: 10\n"
        "alph :: B :: both :: 5\n"
        "[themes]\nA :: T\nB :: T\n[reference_themes]\ncause :: T\neffect :: T\n");
    const auto lex = parse_lexicon(in);
    CHECK(*code_subpart("alphabet", lex, rule_side::cause) == "B");
}

TEST_CASE("priority monotonicity: a prepended non-matching rule changes nothing") {
    const auto lex = tiny_lexicon();
    std::istringstream in(
        "[rules]\n"
        "zzznevermatches :: Disruptions :: both :: -1\n"
        "social distancing :: Actions/Efficacy :: both\n"
        "\\bcovid :: Primary Threat :: both\n"
        "\\bclosed :: Disruptions :: effect\n"
        "[themes]\n"
        "Primary Threat :: Primary Threat\n"
        "Actions/Efficacy :: Primary Threat Measures\n"
        "Disruptions :: Transitions and Shifts\n"
        "Secondary Threats Concept :: Secondary Threats\n"
        "[reference_themes]\n"
        "cause :: Secondary Threats\n"
        "effect :: Transitions and Shifts\n");
    const auto lex2 = parse_lexicon(in);
    for (const char* text : {"practice social distancing", "covid cases", "offices closed",
                             "nothing to see"}) {
        for (auto side : {rule_side::cause, rule_side::effect}) {
            const auto a = code_subpart(text, lex, side);
            const auto b = code_subpart(text, lex2, side);
            CHECK(a == b);
        }
    }
}

TEST_CASE("code_unit requires both sides and reports which failed") {
    const auto lex = tiny_lexicon();
    causal_unit u;
    u.message_id = "m1";
    u.cause_text = "covid";
    u.effect_text = "shelters closed";
    const auto coded = code_unit(u, lex);
    const auto* c = std::get_if<coded_unit>(&coded);
    REQUIRE(c != nullptr);
    CHECK(c->cause_concept == "Primary Threat");
    CHECK(c->effect_concept == "Disruptions");
    CHECK(c->cause_theme == "Primary Threat");
    CHECK(c->effect_theme == "Transitions and Shifts");

    u.effect_text = "xyzzy";
    const auto half = code_unit(u, lex);
    const auto* un = std::get_if<uncoded_unit>(&half);
    REQUIRE(un != nullptr);
    CHECK_FALSE(un->cause_uncoded);
    CHECK(un->effect_uncoded);

    u.cause_text = "qwerty";
    const auto none = code_unit(u, lex);
    const auto* un2 = std::get_if<uncoded_unit>(&none);
    REQUIRE(un2 != nullptr);
    CHECK(un2->cause_uncoded);
    CHECK(un2->effect_uncoded);
}

TEST_CASE("coding a corpus twice gives identical results") {
    const auto lex = load_lexicon(testutil::demo_lexicon_path());
    std::vector<causal_unit> units;
    for (int i = 0; i < 20; ++i) {
        causal_unit u;
        u.message_id = "m" + std::to_string(i);
        u.cause_text = i % 2 ? "heavy rains" : "COVID-19";
        u.effect_text = i % 3 ? "city offices remain closed" : "we mourn 18 new deaths";
        units.push_back(u);
    }
    const auto a = code_all(units, lex);
    const auto b = code_all(units, lex);
    REQUIRE(a.coded.size() == b.coded.size());
    for (std::size_t i = 0; i < a.coded.size(); ++i) {
        CHECK(a.coded[i].cause_concept == b.coded[i].cause_concept);
        CHECK(a.coded[i].effect_concept == b.coded[i].effect_concept);
    }
}

TEST_CASE("sample_uncoded is seeded and without replacement") {
    const auto lex = tiny_lexicon();
    std::vector<causal_unit> units;
    for (int i = 0; i < 10; ++i) {
        causal_unit u;
        u.message_id = "m" + std::to_string(i);
        u.cause_text = "unknown cause " + std::to_string(i);
        u.effect_text = "shelters closed";
        units.push_back(u);
    }
    const auto all = sample_uncoded(units, lex, 10, 99);
    CHECK(all.subparts.size() == 10);
    CHECK_FALSE(all.truncated);
    std::set<std::string> distinct;
    for (const auto& s : all.subparts)
        distinct.insert(s.message_id + "/" + std::string(rule_side_token(s.side)));
    CHECK(distinct.size() == 10);

    CHECK(sample_uncoded(units, lex, 0, 99).subparts.empty());
    CHECK(sample_uncoded(units, lex, 50, 99).truncated);

    const auto again = sample_uncoded(units, lex, 10, 99);
    for (std::size_t i = 0; i < 10; ++i)
        CHECK(again.subparts[i].message_id == all.subparts[i].message_id);

    const auto other_seed = sample_uncoded(units, lex, 10, 100);
    bool same_order = true;
    for (std::size_t i = 0; i < 10; ++i)
        same_order &= other_seed.subparts[i].message_id == all.subparts[i].message_id;
    CHECK_FALSE(same_order);
}

TEST_CASE("coding_report coverage and counts") {
    const auto lex = tiny_lexicon();
    std::vector<causal_unit> units(4);
    for (int i = 0; i < 4; ++i) {
        units[i].message_id = "m" + std::to_string(i);
        units[i].cause_text = "covid";
        units[i].effect_text = i == 3 ? "xyzzy" : "offices closed";
    }
    const auto rep = make_coding_report(units, lex);
    CHECK(rep.total_units == 4);
    CHECK(rep.coded_units == 3);
    REQUIRE(rep.coverage.has_value());
    CHECK(*rep.coverage == Catch::Approx(0.75));
    CHECK(rep.by_concept.at("Primary Threat").as_cause == 3);
    CHECK(rep.by_concept.at("Disruptions").as_effect == 3);

    CHECK_FALSE(make_coding_report({}, lex).coverage.has_value());
}

TEST_CASE("hashtag patterns escape the comment prefix") {
    std::istringstream in(
        "[rules]\n"
        "\\#covid19 :: Primary Threat :: both\n"
        "[themes]\nPrimary Threat :: Primary Threat\nX :: Secondary Threats\nY :: Disruptions\n"
        "[reference_themes]\ncause :: Secondary Threats\neffect :: Disruptions\n");
    const auto lex = parse_lexicon(in);
    CHECK(*code_subpart("spread of #COVID19 downtown", lex, rule_side::cause) ==
          "Primary Threat");
}
