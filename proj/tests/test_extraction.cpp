#include <catch2/catch_amalgamated.hpp>

#include "causalnet/corpus.hpp"
#include "causalnet/extraction.hpp"
#include "causalnet/rng.hpp"
#include "test_util.hpp"

using namespace causalnet;
using testutil::make_message;

TEST_CASE("find_connectives basics") {
    const auto one = find_connectives("Site closed due to weather");
    REQUIRE(one.size() == 1);
    CHECK(one[0].kind == connective::due_to);
    CHECK(one[0].begin == 12);
    CHECK(one[0].end == 18);

    CHECK(find_connectives("Overdue topics").empty());
    CHECK(find_connectives("Overdue to a fault").empty());  // word boundary on the left
    CHECK(find_connectives("due tomorrow").empty());        // boundary on the right

    const auto two = find_connectives("closed because of snow caused by the storm");
    REQUIRE(two.size() == 2);
    CHECK(two[0].kind == connective::because_of);
    CHECK(two[1].kind == connective::caused_by);
    CHECK(two[0].begin < two[1].begin);
}

TEST_CASE("find_connectives is case-insensitive and whitespace-tolerant") {
    CHECK(find_connectives("closed DUE TO snow").size() == 1);
    CHECK(find_connectives("closed Because Of snow").size() == 1);
    const auto spread = find_connectives("closed due  to snow");
    REQUIRE(spread.size() == 1);
    CHECK(spread[0].end - spread[0].begin == 7);  // literal includes both spaces
    CHECK(find_connectives("closed dueto snow").empty());
}

TEST_CASE("extract_unit splits effect before and cause after") {
    const auto r = extract_unit(make_message(
        "m1", "Square Toe County shelters are closed until further notice due to COVID-19"));
    const auto* unit = std::get_if<causal_unit>(&r);
    REQUIRE(unit != nullptr);
    CHECK(trim_copy(unit->effect_text) ==
          "Square Toe County shelters are closed until further notice");
    CHECK(trim_copy(unit->cause_text) == "COVID-19");
    CHECK(unit->kind == connective::due_to);
    CHECK(unit->connective_offset > 0);
    CHECK_FALSE(unit->multi_connective);
}

TEST_CASE("sentence-initial connectives are excluded") {
    const auto r = extract_unit(make_message("m1", "Due to COVID-19, shelters are closed"));
    REQUIRE(std::holds_alternative<skip_reason>(r));
    CHECK(std::get<skip_reason>(r) == skip_reason::sentence_initial);

    // also after a sentence break, with closing punctuation in between
    const auto r2 = extract_unit(make_message("m2", "Stay home. Due to snow, roads are bad"));
    REQUIRE(std::holds_alternative<skip_reason>(r2));
    CHECK(std::get<skip_reason>(r2) == skip_reason::sentence_initial);

    const auto r3 =
        extract_unit(make_message("m3", "\"Stay home!\" Because of snow, roads are bad"));
    REQUIRE(std::holds_alternative<skip_reason>(r3));
    CHECK(std::get<skip_reason>(r3) == skip_reason::sentence_initial);
}

TEST_CASE("no connective and empty subparts are reported as skips") {
    const auto r = extract_unit(make_message("m1", "Stay safe this weekend!"));
    REQUIRE(std::holds_alternative<skip_reason>(r));
    CHECK(std::get<skip_reason>(r) == skip_reason::no_connective);

    const auto r2 = extract_unit(make_message("m2", "Roads are closed due to   "));
    REQUIRE(std::holds_alternative<skip_reason>(r2));
    CHECK(std::get<skip_reason>(r2) == skip_reason::empty_subpart);
}

TEST_CASE("multiple connectives use the first eligible one and flag the unit") {
    const auto r = extract_unit(
        make_message("m1", "Clinic closed due to flooding caused by heavy rain"));
    const auto* unit = std::get_if<causal_unit>(&r);
    REQUIRE(unit != nullptr);
    CHECK(unit->kind == connective::due_to);
    CHECK(unit->multi_connective);
    CHECK(trim_copy(unit->effect_text) == "Clinic closed");
    CHECK(trim_copy(unit->cause_text) == "flooding caused by heavy rain");

    // a sentence-initial first connective defers to the next eligible one
    const auto r2 = extract_unit(
        make_message("m2", "Due to the storm. Roads closed because of flooding"));
    const auto* unit2 = std::get_if<causal_unit>(&r2);
    REQUIRE(unit2 != nullptr);
    CHECK(unit2->kind == connective::because_of);
    CHECK(unit2->multi_connective);
}

TEST_CASE("reconstruction invariant: effect + literal + cause equals the text") {
    rng_t rng(3);
    const std::vector<std::string> effects = {"Shelters are closed", "Service was halted",
                                              "Expect delays on Main St"};
    const std::vector<std::string> connectives = {"due to", "Due  To", "because of",
                                                  "caused BY"};
    const std::vector<std::string> causes = {"COVID-19", "heavy rain", "a water main break"};
    for (int i = 0; i < 60; ++i) {
        const std::string text = effects[rng.below(effects.size())] + " " +
                                 connectives[rng.below(connectives.size())] + " " +
                                 causes[rng.below(causes.size())];
        const auto r = extract_unit(make_message("m", text));
        const auto* unit = std::get_if<causal_unit>(&r);
        REQUIRE(unit != nullptr);
        CHECK(unit->effect_text + unit->connective_literal + unit->cause_text == text);
        CHECK_FALSE(is_sentence_initial(text, unit->connective_offset));
    }
}

TEST_CASE("reconstruction holds across the bundled corpus") {
    const auto loaded =
        load_corpus(testutil::source_path("data/synthetic/corpus.jsonl"), corpus_format::jsonl);
    std::size_t units = 0;
    for (const auto& msg : loaded.set.messages()) {
        const auto r = extract_unit(msg);
        const auto* unit = std::get_if<causal_unit>(&r);
        if (!unit)
            continue;
        ++units;
        CHECK(unit->effect_text + unit->connective_literal + unit->cause_text == msg.text);
        CHECK(unit->connective_offset > 0);
        CHECK_FALSE(is_sentence_initial(msg.text, unit->connective_offset));
    }
    CHECK(units > 1000);
}

TEST_CASE("extraction_report counts partition the corpus") {
    message_set set({make_message("a", "Closed due to snow"),
                     make_message("b", "Stay safe out there"),
                     make_message("c", "Have a great weekend")});
    const auto rep = make_extraction_report(set);
    CHECK(rep.total_messages == 3);
    CHECK(rep.units == 1);
    CHECK(rep.by_skip_reason.at(skip_reason::no_connective) == 2);
    std::size_t total = rep.units;
    for (const auto& [reason, count] : rep.by_skip_reason)
        total += count;
    CHECK(total == set.size());

    CHECK(make_extraction_report(message_set{}).units == 0);

    std::vector<message> all;
    for (int i = 0; i < 5; ++i)
        all.push_back(make_message("m" + std::to_string(i), "X closed due to Y storm"));
    const auto rep2 = make_extraction_report(message_set(all));
    CHECK(rep2.units == 5);
    CHECK(rep2.by_connective.at(connective::due_to) == 5);

    std::size_t by_conn = 0;
    for (const auto& [kind, count] : rep2.by_connective)
        by_conn += count;
    CHECK(by_conn == rep2.units);
}
