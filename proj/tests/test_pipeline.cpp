#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <map>
#include <set>
#include <sstream>

#include "causalnet/pipeline.hpp"
#include "causalnet/synthetic.hpp"
#include "test_util.hpp"

using namespace causalnet;
namespace fs = std::filesystem;

namespace {

std::string bundled_corpus() { return testutil::source_path("data/synthetic/corpus.jsonl"); }

pipeline_config test_config(const std::string& out_dir) {
    pipeline_config cfg;
    cfg.corpus_path = bundled_corpus();
    cfg.lexicon_path = testutil::demo_lexicon_path();
    cfg.out_dir = out_dir;
    return cfg;
}

std::string fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("causalnet_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir.string();
}

std::map<std::string, std::string> slurp_dir(const std::string& dir) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file())
            files[entry.path().filename().string()] = read_text_file(entry.path().string());
    return files;
}

}  // namespace

TEST_CASE("synthetic generator is deterministic and spans the window") {
    const auto a = generate_synthetic_corpus();
    const auto b = generate_synthetic_corpus();
    CHECK(corpus_to_jsonl(a) == corpus_to_jsonl(b));

    std::set<int> months;
    std::set<account_role> roles;
    for (const auto& m : a.messages()) {
        months.insert(month_bin(m.timestamp));
        roles.insert(m.role);
    }
    CHECK(months.size() == 15);
    CHECK(*months.rbegin() == 15);
    CHECK(roles.size() == 5);

    synth_options other;
    other.seed = 43;
    CHECK(corpus_to_jsonl(generate_synthetic_corpus(other)) != corpus_to_jsonl(a));
}

TEST_CASE("bundled corpus file matches the generator output") {
    const std::string bundled = read_text_file(bundled_corpus());
    CHECK(bundled == corpus_to_jsonl(generate_synthetic_corpus()));
}

TEST_CASE("every synthetic phrase codes to its intended concept") {
    const auto lex = load_lexicon(testutil::demo_lexicon_path());
    for (const auto& pool : synth_detail::pools()) {
        for (const char* phrase : pool.cause) {
            const auto got = code_subpart(phrase, lex, rule_side::cause);
            INFO("cause phrase: " << phrase);
            REQUIRE(got.has_value());
            CHECK(*got == pool.concept_name);
        }
        for (const char* phrase : pool.effect) {
            const auto got = code_subpart(phrase, lex, rule_side::effect);
            INFO("effect phrase: " << phrase);
            REQUIRE(got.has_value());
            CHECK(*got == pool.concept_name);
        }
    }
}

TEST_CASE("a voting-reminder message codes to primary threat causing disruptions") {
    const auto lex = load_lexicon(testutil::demo_lexicon_path());
    const auto msg = testutil::make_message(
        "m1",
        "Check your voting location + requirements in advance because they may have changed "
        "due to #COVID19.");
    const auto extracted = extract_unit(msg);
    const auto* unit = std::get_if<causal_unit>(&extracted);
    REQUIRE(unit != nullptr);
    CHECK(unit->kind == connective::due_to);
    const auto coded = code_unit(*unit, lex);
    const auto* c = std::get_if<coded_unit>(&coded);
    REQUIRE(c != nullptr);
    CHECK(c->cause_concept == "Primary Threat");
    CHECK(c->effect_concept == "Disruptions");
}

TEST_CASE("pipeline `all` is byte-deterministic across runs") {
    const auto dir_a = fresh_dir("all_a");
    const auto dir_b = fresh_dir("all_b");
    REQUIRE(run_pipeline(pipeline_stage::all, test_config(dir_a)) == 0);
    REQUIRE(run_pipeline(pipeline_stage::all, test_config(dir_b)) == 0);
    const auto a = slurp_dir(dir_a);
    const auto b = slurp_dir(dir_b);
    REQUIRE(!a.empty());
    REQUIRE(a.size() == b.size());
    for (const auto& [name, content] : a) {
        INFO("artifact: " << name);
        REQUIRE(b.count(name) == 1);
        CHECK(content == b.at(name));
    }
}

TEST_CASE("running stages separately equals running `all`") {
    const auto dir_all = fresh_dir("stage_all");
    const auto dir_sep = fresh_dir("stage_sep");
    REQUIRE(run_pipeline(pipeline_stage::all, test_config(dir_all)) == 0);
    const auto cfg = test_config(dir_sep);
    for (auto stage : {pipeline_stage::extract, pipeline_stage::code, pipeline_stage::network,
                       pipeline_stage::stats, pipeline_stage::cug, pipeline_stage::pca,
                       pipeline_stage::regress, pipeline_stage::report})
        REQUIRE(run_pipeline(stage, cfg) == 0);

    const auto all_files = slurp_dir(dir_all);
    const auto sep_files = slurp_dir(dir_sep);
    for (const auto& [name, content] : all_files) {
        if (name == "manifest.json")
            continue;  // written by `all` only
        INFO("artifact: " << name);
        REQUIRE(sep_files.count(name) == 1);
        CHECK(content == sep_files.at(name));
    }
}

TEST_CASE("downstream stages demand their upstream artifacts") {
    const auto dir = fresh_dir("missing_upstream");
    const auto cfg = test_config(dir);
    CHECK_THROWS_WITH(run_pipeline(pipeline_stage::cug, cfg),
                      Catch::Matchers::ContainsSubstring("run `network` first"));
    CHECK_THROWS_WITH(run_pipeline(pipeline_stage::code, cfg),
                      Catch::Matchers::ContainsSubstring("run `extract` first"));
    CHECK_THROWS_WITH(run_pipeline(pipeline_stage::report, cfg),
                      Catch::Matchers::ContainsSubstring("first"));
}

TEST_CASE("emitted networks csv parses back to the same strata") {
    const auto dir = fresh_dir("csv_roundtrip");
    const auto cfg = test_config(dir);
    REQUIRE(run_pipeline(pipeline_stage::extract, cfg) == 0);
    REQUIRE(run_pipeline(pipeline_stage::code, cfg) == 0);
    REQUIRE(run_pipeline(pipeline_stage::network, cfg) == 0);
    std::istringstream nodes_in(read_text_file(dir + "/nodes.csv"));
    const auto nodes = read_nodes_csv(nodes_in);
    CHECK(nodes.size() == 39);
    std::istringstream in(read_text_file(dir + "/networks_month.csv"));
    const auto monthly = read_edge_list_csv(in, nodes);
    CHECK(monthly.size() == 15);
    std::istringstream in_roles(read_text_file(dir + "/networks_role.csv"));
    CHECK(read_edge_list_csv(in_roles, nodes).size() == 5);
}

TEST_CASE("golden outputs match") {
    const std::string golden_dir = testutil::source_path("tests/golden/synthetic_all");
    REQUIRE(fs::exists(golden_dir));
    const auto dir = fresh_dir("golden_check");
    REQUIRE(run_pipeline(pipeline_stage::all, test_config(dir)) == 0);
    const auto fresh = slurp_dir(dir);
    const auto golden = slurp_dir(golden_dir);
    REQUIRE(!golden.empty());
    REQUIRE(fresh.size() == golden.size());
    for (const auto& [name, content] : golden) {
        INFO("artifact: " << name);
        REQUIRE(fresh.count(name) == 1);
        CHECK(fresh.at(name) == content);
    }
}

TEST_CASE("every emitted csv parses back with a consistent column count") {
    const auto dir = fresh_dir("csv_schema");
    REQUIRE(run_pipeline(pipeline_stage::all, test_config(dir)) == 0);
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() != ".csv")
            continue;
        INFO("file: " << entry.path().filename().string());
        std::istringstream in(read_text_file(entry.path().string()));
        std::vector<std::string> fields;
        std::size_t line_no = 1;
        REQUIRE(detail::read_csv_record(in, fields, line_no));
        const std::size_t width = fields.size();
        REQUIRE(width >= 2);
        std::size_t records = 0;
        while (detail::read_csv_record(in, fields, line_no)) {
            if (fields.size() == 1 && fields[0].empty())
                continue;
            CHECK(fields.size() == width);
            ++records;
        }
        CHECK(records > 0);
    }
}

TEST_CASE("markdown and csv regression tables carry the same numbers") {
    const auto dir = fresh_dir("table_consistency");
    REQUIRE(run_pipeline(pipeline_stage::all, test_config(dir)) == 0);
    const std::string md = read_text_file(dir + "/table.md");
    std::istringstream csv(read_text_file(dir + "/table.csv"));
    std::vector<std::string> fields;
    std::size_t line_no = 1;
    REQUIRE(detail::read_csv_record(csv, fields, line_no));  // header
    std::size_t checked = 0;
    while (detail::read_csv_record(csv, fields, line_no)) {
        if (fields.size() != 5)
            continue;
        // the markdown cell is the csv estimate rounded to three decimals
        char rounded[32];
        std::snprintf(rounded, sizeof rounded, "%.3f", std::atof(fields[1].c_str()));
        INFO("term: " << fields[0]);
        CHECK(md.find("| " + fields[0] + " | " + rounded) != std::string::npos);
        ++checked;
    }
    CHECK(checked > 10);
}

TEST_CASE("format selection narrows the report artifacts") {
    const auto dir = fresh_dir("format_json");
    auto cfg = test_config(dir);
    for (auto stage : {pipeline_stage::extract, pipeline_stage::code, pipeline_stage::network,
                       pipeline_stage::stats, pipeline_stage::cug, pipeline_stage::pca,
                       pipeline_stage::regress})
        REQUIRE(run_pipeline(stage, cfg) == 0);
    cfg.format_selection = report_format_kind::json;
    REQUIRE(run_pipeline(pipeline_stage::report, cfg) == 0);
    CHECK(fs::exists(dir + "/report.json"));
    CHECK_FALSE(fs::exists(dir + "/report.md"));
    CHECK(fs::exists(dir + "/narrative_trends.csv"));

    cfg.format_selection = report_format_kind::md;
    REQUIRE(run_pipeline(pipeline_stage::report, cfg) == 0);
    CHECK(fs::exists(dir + "/report.md"));
    CHECK_THROWS_AS(parse_report_format("yaml"), usage_error);
}

TEST_CASE("reference theme overrides reach the design matrix") {
    const auto dir = fresh_dir("ref_override");
    auto cfg = test_config(dir);
    for (auto stage : {pipeline_stage::extract, pipeline_stage::code, pipeline_stage::network})
        REQUIRE(run_pipeline(stage, cfg) == 0);
    cfg.regression.effect_reference = "Primary Threat Measures";
    REQUIRE(run_pipeline(pipeline_stage::regress, cfg) == 0);
    const std::string table = read_text_file(dir + "/table.csv");
    CHECK(table.find("Effect Theme: Primary Threat Measures") == std::string::npos);
    CHECK(table.find("Effect Theme: Transitions and Shifts") != std::string::npos);

    cfg.regression.effect_reference = "Not A Theme";
    CHECK_THROWS_AS(run_pipeline(pipeline_stage::regress, cfg), usage_error);
}

TEST_CASE("cug plan from config is the statistics x conditionings product") {
    const auto dir = fresh_dir("cug_plan");
    const std::string path = dir + "/config.json";
    write_text_file(path,
                    "{\"statistics\":[\"transitivity\",\"density\"],"
                    "\"conditionings\":[\"Edges\",\"Dyad Census\"]}\n");
    const auto cfg = load_pipeline_config(path);
    REQUIRE(cfg.cug.plan.size() == 4);
    CHECK(cfg.cug.plan[0].statistic == "transitivity");
    CHECK(cfg.cug.plan[0].conditioning == cug_conditioning::edges);
    CHECK(cfg.cug.plan[3].statistic == "density");
    CHECK(cfg.cug.plan[3].conditioning == cug_conditioning::dyad_census);

    write_text_file(path, "{\"statistics\":[\"nope\"],\"conditionings\":[\"Edges\"]}\n");
    CHECK_THROWS_AS(load_pipeline_config(path), usage_error);
}

TEST_CASE("config conflicts error before any work") {
    const auto dir = fresh_dir("conflicts");
    auto cfg = test_config(dir);
    cfg.regression.formula = "nonsense";
    CHECK_THROWS_AS(run_pipeline(pipeline_stage::all, cfg), usage_error);
    CHECK(slurp_dir(dir).empty());  // nothing was written

    cfg = test_config(dir);
    cfg.epoch.month = 13;
    CHECK_THROWS_AS(run_pipeline(pipeline_stage::extract, cfg), usage_error);
    cfg = test_config(dir);
    cfg.cug.replicates = 0;
    CHECK_THROWS_AS(run_pipeline(pipeline_stage::stats, cfg), usage_error);
    cfg = test_config(dir);
    cfg.pca.components = 0;
    CHECK_THROWS_AS(run_pipeline(pipeline_stage::pca, cfg), usage_error);
}

TEST_CASE("csv corpora run through the pipeline by extension") {
    const auto dir = fresh_dir("csv_corpus");
    const std::string csv_path = dir + "/tiny.csv";
    write_text_file(
        csv_path,
        "id,text,timestamp,account_id,account_role,follower_count,retransmission_count,"
        "is_retransmission\n"
        "c1,Offices closed due to heavy rains,2020-02-03T12:00:00Z,a1,mayor,10,0,false\n"
        "c2,Stay safe!,2020-02-04T12:00:00Z,a1,mayor,10,0,false\n");
    pipeline_config cfg;
    cfg.corpus_path = csv_path;
    cfg.lexicon_path = testutil::demo_lexicon_path();
    cfg.out_dir = dir;
    REQUIRE(cfg.format() == corpus_format::csv);
    REQUIRE(run_pipeline(pipeline_stage::extract, cfg) == 0);
    const auto rep = nlohmann::json::parse(read_text_file(dir + "/extract_report.json"));
    CHECK(rep["messages"] == 2);
    CHECK(rep["units"] == 1);
}

TEST_CASE("role3 stratification flows through networks and pca") {
    const auto dir = fresh_dir("role3");
    auto cfg = test_config(dir);
    cfg.stratifiers = {stratifier::total, stratifier::month, stratifier::role,
                       stratifier::role_group};
    cfg.pca.over = stratifier::role_group;
    for (auto stage : {pipeline_stage::extract, pipeline_stage::code, pipeline_stage::network,
                       pipeline_stage::pca})
        REQUIRE(run_pipeline(stage, cfg) == 0);
    std::istringstream nodes_in(read_text_file(dir + "/nodes.csv"));
    const auto nodes = read_nodes_csv(nodes_in);
    std::istringstream in(read_text_file(dir + "/networks_role3.csv"));
    const auto groups = read_edge_list_csv(in, nodes);
    REQUIRE(groups.size() == 3);
    std::set<std::string> labels;
    for (const auto& g : groups)
        labels.insert(g.stratum.label());
    CHECK(labels == std::set<std::string>{"health", "em", "electeds"});
    // pca over the three group graphs: loadings csv has three rows
    const std::string loadings = read_text_file(dir + "/pca_loadings.csv");
    CHECK(loadings.find("health") != std::string::npos);
    CHECK(loadings.find("electeds") != std::string::npos);
}

TEST_CASE("config file round trip") {
    const auto dir = fresh_dir("config");
    const std::string path = dir + "/config.json";
    write_text_file(path,
                    "{\"corpus\":\"c.jsonl\",\"lexicon\":\"l.clex\",\"out\":\"o\","
                    "\"epoch\":\"2019-11\",\"replicates\":77,\"seed\":5,\"components\":3,"
                    "\"formula\":\"structure+controls\",\"originals_only\":false,"
                    "\"cum_window\":\"through\",\"stratify\":\"total,month\"}\n");
    const auto cfg = load_pipeline_config(path);
    CHECK(cfg.corpus_path == "c.jsonl");
    CHECK(cfg.lexicon_path == "l.clex");
    CHECK(cfg.out_dir == "o");
    CHECK(cfg.epoch.year == 2019);
    CHECK(cfg.epoch.month == 11);
    CHECK(cfg.cug.replicates == 77);
    CHECK(cfg.cug.seed == 5);
    CHECK(cfg.pca.components == 3);
    CHECK(cfg.regression.formula == "structure+controls");
    CHECK_FALSE(cfg.regression.originals_only);
    CHECK(cfg.regression.window == cumulative_window::through);
    CHECK(cfg.stratifiers.size() == 2);
}
