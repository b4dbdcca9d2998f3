#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "causalnet/corpus.hpp"
#include "causalnet/cug.hpp"
#include "causalnet/export.hpp"
#include "causalnet/extraction.hpp"
#include "causalnet/features.hpp"
#include "causalnet/graph_stats.hpp"
#include "causalnet/lexicon.hpp"
#include "causalnet/nb_model.hpp"
#include "causalnet/pca.hpp"
#include "causalnet/report.hpp"

namespace causalnet {

inline constexpr const char* causalnet_version = "0.1.0";

enum class pipeline_stage { extract, code, network, stats, cug, pca, regress, report, all };

inline const char* stage_name(pipeline_stage s) {
    switch (s) {
        case pipeline_stage::extract: return "extract";
        case pipeline_stage::code: return "code";
        case pipeline_stage::network: return "network";
        case pipeline_stage::stats: return "stats";
        case pipeline_stage::cug: return "cug";
        case pipeline_stage::pca: return "pca";
        case pipeline_stage::regress: return "regress";
        case pipeline_stage::report: return "report";
        case pipeline_stage::all: return "all";
    }
    return "";
}

inline std::optional<pipeline_stage> stage_from_name(const std::string& s) {
    for (auto st : {pipeline_stage::extract, pipeline_stage::code, pipeline_stage::network,
                    pipeline_stage::stats, pipeline_stage::cug, pipeline_stage::pca,
                    pipeline_stage::regress, pipeline_stage::report, pipeline_stage::all})
        if (stage_name(st) == s)
            return st;
    return std::nullopt;
}

inline std::optional<stratifier> stratifier_from_name(const std::string& s) {
    if (s == "total")
        return stratifier::total;
    if (s == "month")
        return stratifier::month;
    if (s == "role")
        return stratifier::role;
    if (s == "role3")
        return stratifier::role_group;
    return std::nullopt;
}

// comma-separated stratifier names, e.g. "total,month,role"
inline std::vector<stratifier> parse_stratifier_list(const std::string& text) {
    std::vector<stratifier> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t pos = text.find(',', start);
        if (pos == std::string::npos)
            pos = text.size();
        const std::string tok = trim_copy(text.substr(start, pos - start));
        if (!tok.empty()) {
            const auto s = stratifier_from_name(tok);
            if (!s)
                throw usage_error("unknown stratifier: " + tok);
            out.push_back(*s);
        }
        start = pos + 1;
    }
    if (out.empty())
        throw usage_error("empty stratifier list");
    return out;
}

enum class report_format_kind { all, json, md, csv };

inline report_format_kind parse_report_format(const std::string& s) {
    if (s == "all")
        return report_format_kind::all;
    if (s == "json")
        return report_format_kind::json;
    if (s == "md")
        return report_format_kind::md;
    if (s == "csv")
        return report_format_kind::csv;
    throw usage_error("format must be one of all, json, md, csv");
}

struct pipeline_config {
    std::string corpus_path;
    std::string lexicon_path;
    std::string out_dir = "out";
    year_month epoch{2020, 1};
    std::vector<stratifier> stratifiers = {stratifier::total, stratifier::month,
                                           stratifier::role};

    struct cug_config {
        std::size_t replicates = 1000;
        std::uint64_t seed = 42;
        std::vector<stats_plan_entry> plan = default_stats_plan();
    } cug;

    struct pca_config {
        std::size_t components = 2;
        bool centered_scores = false;
        bool scale_loadings = false;
        stratifier over = stratifier::role;  // which stratification feeds the PCA
    } pca;

    struct regression_config {
        std::string formula = "all";
        bool originals_only = true;
        cumulative_window window = cumulative_window::before;
        std::string cause_reference;  // empty: take the lexicon's declaration
        std::string effect_reference;
    } regression;

    report_format_kind format_selection = report_format_kind::all;

    corpus_format format() const {
        return corpus_path.size() >= 4 &&
                       corpus_path.compare(corpus_path.size() - 4, 4, ".csv") == 0
                   ? corpus_format::csv
                   : corpus_format::jsonl;
    }
};

// JSON config file with the same keys as the CLI flags
inline pipeline_config load_pipeline_config(const std::string& path) {
    nlohmann::json j = nlohmann::json::parse(read_text_file(path), nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw usage_error("config file is not a JSON object: " + path);
    pipeline_config cfg;
    cfg.corpus_path = j.value("corpus", "");
    cfg.lexicon_path = j.value("lexicon", "");
    cfg.out_dir = j.value("out", cfg.out_dir);
    if (j.contains("epoch")) {
        const std::string e = j["epoch"].get<std::string>();
        if (e.size() != 7 || e[4] != '-')
            throw usage_error("config: epoch must be YYYY-MM");
        cfg.epoch.year = std::atoi(e.substr(0, 4).c_str());
        cfg.epoch.month = std::atoi(e.substr(5).c_str());
    }
    if (j.contains("replicates"))
        cfg.cug.replicates = j["replicates"].get<std::size_t>();
    if (j.contains("seed"))
        cfg.cug.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("components"))
        cfg.pca.components = j["components"].get<std::size_t>();
    if (j.contains("centered_scores"))
        cfg.pca.centered_scores = j["centered_scores"].get<bool>();
    if (j.contains("scale_loadings"))
        cfg.pca.scale_loadings = j["scale_loadings"].get<bool>();
    if (j.contains("formula"))
        cfg.regression.formula = j["formula"].get<std::string>();
    if (j.contains("originals_only"))
        cfg.regression.originals_only = j["originals_only"].get<bool>();
    if (j.contains("cum_window")) {
        const std::string w = j["cum_window"].get<std::string>();
        if (w == "before")
            cfg.regression.window = cumulative_window::before;
        else if (w == "through")
            cfg.regression.window = cumulative_window::through;
        else
            throw usage_error("config: cum_window must be 'before' or 'through'");
    }
    if (j.contains("stratify"))
        cfg.stratifiers = parse_stratifier_list(j["stratify"].get<std::string>());
    if (j.contains("pca_over")) {
        const auto s = stratifier_from_name(j["pca_over"].get<std::string>());
        if (!s || *s == stratifier::total)
            throw usage_error("config: pca_over must be month, role or role3");
        cfg.pca.over = *s;
    }
    if (j.contains("cause_reference"))
        cfg.regression.cause_reference = j["cause_reference"].get<std::string>();
    if (j.contains("effect_reference"))
        cfg.regression.effect_reference = j["effect_reference"].get<std::string>();
    if (j.contains("format"))
        cfg.format_selection = parse_report_format(j["format"].get<std::string>());
    if (j.contains("statistics") || j.contains("conditionings")) {
        if (!j.contains("statistics") || !j.contains("conditionings"))
            throw usage_error("config: statistics and conditionings go together");
        cfg.cug.plan.clear();
        for (const auto& s : j["statistics"]) {
            statistic_by_name(s.get<std::string>());  // validate early
            for (const auto& c : j["conditionings"]) {
                const std::string cond = c.get<std::string>();
                if (cond != "Edges" && cond != "Dyad Census")
                    throw usage_error("config: conditioning must be Edges or Dyad Census");
                cfg.cug.plan.push_back({s.get<std::string>(),
                                        cond == "Edges" ? cug_conditioning::edges
                                                        : cug_conditioning::dyad_census});
            }
        }
        if (cfg.cug.plan.empty())
            throw usage_error("config: empty CUG plan");
    }
    return cfg;
}

namespace detail {

inline std::string artifact(const pipeline_config& cfg, const char* name) {
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

inline void require_artifact(const pipeline_config& cfg, const char* name,
                             const char* producing_stage) {
    if (!std::filesystem::exists(artifact(cfg, name)))
        throw data_error(std::string("missing artifact ") + name + ": run `" + producing_stage +
                         "` first");
}

inline message_set load_configured_corpus(const pipeline_config& cfg,
                                          std::vector<record_rejection>* rejected = nullptr) {
    if (cfg.corpus_path.empty())
        throw usage_error("no corpus path configured");
    auto loaded = load_corpus(cfg.corpus_path, cfg.format());
    if (rejected)
        *rejected = loaded.rejected;
    return std::move(loaded.set);
}

inline std::string dump_json(const nlohmann::ordered_json& j) {
    return j.dump(2) + "\n";
}

}  // namespace detail

// --- stages -----------------------------------------------------------------

inline void run_extract(const pipeline_config& cfg) {
    std::vector<record_rejection> rejected;
    const message_set corpus = detail::load_configured_corpus(cfg, &rejected);
    const auto extracted = extract_all(corpus);

    std::ostringstream units;
    write_units_jsonl(extracted.units, units);
    write_text_file(detail::artifact(cfg, "units.jsonl"), units.str());

    std::ostringstream skips;
    for (const auto& s : extracted.skips) {
        nlohmann::ordered_json j;
        j["message_id"] = s.message_id;
        j["reason"] = std::string(skip_reason_token(s.reason));
        skips << j.dump() << '\n';
    }
    write_text_file(detail::artifact(cfg, "extract_skips.jsonl"), skips.str());

    std::ostringstream rej;
    for (const auto& r : rejected) {
        nlohmann::ordered_json j;
        j["line"] = r.line;
        j["reason"] = r.reason;
        rej << j.dump() << '\n';
    }
    write_text_file(detail::artifact(cfg, "rejected_records.jsonl"), rej.str());

    const auto rep = make_extraction_report(corpus);
    nlohmann::ordered_json j;
    j["messages"] = rep.total_messages;
    j["rejected_records"] = rejected.size();
    j["units"] = rep.units;
    nlohmann::ordered_json by_conn;
    for (auto c : {connective::due_to, connective::because_of, connective::caused_by}) {
        const auto it = rep.by_connective.find(c);
        by_conn[std::string(connective_token(c))] = it == rep.by_connective.end() ? 0 : it->second;
    }
    j["by_connective"] = by_conn;
    nlohmann::ordered_json by_skip;
    for (auto r : {skip_reason::no_connective, skip_reason::sentence_initial,
                   skip_reason::empty_subpart}) {
        const auto it = rep.by_skip_reason.find(r);
        by_skip[std::string(skip_reason_token(r))] =
            it == rep.by_skip_reason.end() ? 0 : it->second;
    }
    j["by_skip_reason"] = by_skip;
    j["multi_connective_units"] = rep.multi_connective;
    write_text_file(detail::artifact(cfg, "extract_report.json"), detail::dump_json(j));
}

inline void run_code(const pipeline_config& cfg) {
    detail::require_artifact(cfg, "units.jsonl", "extract");
    if (cfg.lexicon_path.empty())
        throw usage_error("no lexicon path configured");
    const lexicon lex = load_lexicon(cfg.lexicon_path);
    std::istringstream units_in(read_text_file(detail::artifact(cfg, "units.jsonl")));
    const auto units = read_units_jsonl(units_in);
    const auto coded = code_all(units, lex);

    std::ostringstream coded_out;
    write_coded_units_jsonl(coded.coded, coded_out);
    write_text_file(detail::artifact(cfg, "coded_units.jsonl"), coded_out.str());

    std::ostringstream uncoded_out;
    for (const auto& u : coded.uncoded) {
        nlohmann::ordered_json j;
        j["message_id"] = u.unit.message_id;
        j["cause_uncoded"] = u.cause_uncoded;
        j["effect_uncoded"] = u.effect_uncoded;
        j["cause_text"] = trim_copy(u.unit.cause_text);
        j["effect_text"] = trim_copy(u.unit.effect_text);
        uncoded_out << j.dump() << '\n';
    }
    write_text_file(detail::artifact(cfg, "uncoded.jsonl"), uncoded_out.str());

    const auto rep = make_coding_report(units, lex);
    nlohmann::ordered_json j;
    j["total_units"] = rep.total_units;
    j["coded_units"] = rep.coded_units;
    if (rep.coverage)
        j["coverage"] = *rep.coverage;
    else
        j["coverage"] = "N/A";
    nlohmann::ordered_json concepts = nlohmann::ordered_json::array();
    for (const auto& c : lex.concepts) {
        const auto it = rep.by_concept.find(c);
        nlohmann::ordered_json row;
        row["concept"] = c;
        row["as_cause"] = it == rep.by_concept.end() ? 0 : it->second.as_cause;
        row["as_effect"] = it == rep.by_concept.end() ? 0 : it->second.as_effect;
        concepts.push_back(row);
    }
    j["concepts"] = concepts;
    write_text_file(detail::artifact(cfg, "coding_report.json"), detail::dump_json(j));
}

inline void run_network(const pipeline_config& cfg) {
    detail::require_artifact(cfg, "coded_units.jsonl", "code");
    const lexicon lex = load_lexicon(cfg.lexicon_path);
    const message_set corpus = detail::load_configured_corpus(cfg);
    std::istringstream coded_in(read_text_file(detail::artifact(cfg, "coded_units.jsonl")));
    const auto coded = read_coded_units_jsonl(coded_in);

    std::ostringstream nodes;
    write_nodes_csv(lex.concepts, nodes);
    write_text_file(detail::artifact(cfg, "nodes.csv"), nodes.str());

    for (stratifier s : cfg.stratifiers) {
        const char* file = nullptr;
        switch (s) {
            case stratifier::total: file = "networks_total.csv"; break;
            case stratifier::month: file = "networks_month.csv"; break;
            case stratifier::role: file = "networks_role.csv"; break;
            case stratifier::role_group: file = "networks_role3.csv"; break;
        }
        const auto nets = build_networks(coded, corpus, s, lex.concepts, cfg.epoch);
        std::ostringstream os;
        write_edge_list_csv(nets, os);
        write_text_file(detail::artifact(cfg, file), os.str());
        if (s == stratifier::total) {
            std::ostringstream dot;
            write_dot(nets.at(0), dot);
            write_text_file(detail::artifact(cfg, "network_total.dot"), dot.str());
            std::ostringstream deg;
            write_degree_csv(degree_table(nets.at(0)), deg);
            write_text_file(detail::artifact(cfg, "degree_table.csv"), deg.str());
            // per-concept strongest-effects / strongest-causes subgraphs
            const auto top_out =
                top_k_edges(nets.at(0), 3, top_k_direction::strongest_out_per_node);
            const auto top_in =
                top_k_edges(nets.at(0), 3, top_k_direction::strongest_in_per_node);
            for (const auto& [net, file] :
                 {std::make_pair(&top_out, "network_top3_effects"),
                  std::make_pair(&top_in, "network_top3_causes")}) {
                std::ostringstream sub_dot, sub_csv;
                write_dot(*net, sub_dot);
                write_edge_list_csv({*net}, sub_csv);
                write_text_file(detail::artifact(cfg, (std::string(file) + ".dot").c_str()),
                                sub_dot.str());
                write_text_file(detail::artifact(cfg, (std::string(file) + ".csv").c_str()),
                                sub_csv.str());
            }
        }
    }
}

namespace detail {

inline std::vector<concept_net> load_networks(const pipeline_config& cfg, const char* file) {
    require_artifact(cfg, "nodes.csv", "network");
    require_artifact(cfg, file, "network");
    std::istringstream nodes_in(read_text_file(artifact(cfg, "nodes.csv")));
    const auto nodes = read_nodes_csv(nodes_in);
    std::istringstream in(read_text_file(artifact(cfg, file)));
    return read_edge_list_csv(in, nodes);
}

inline nlohmann::ordered_json stats_table_json(const concept_net& dichot,
                                               const pipeline_config& cfg) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& entry : cfg.cug.plan) {
        const auto r = cug_test(dichot, entry.statistic, entry.conditioning,
                                cfg.cug.replicates, cfg.cug.seed);
        rows.push_back(cug_result_json(r));
    }
    return rows;
}

}  // namespace detail

inline void run_stats(const pipeline_config& cfg) {
    const auto total = detail::load_networks(cfg, "networks_total.csv");
    const concept_net dichot = dichotomize(total.at(0));
    nlohmann::ordered_json j;
    j["order"] = dichot.order();
    j["arcs"] = dichot.arc_count();
    j["density"] = density(dichot);
    const auto census = dyad_census(dichot);
    nlohmann::ordered_json cj;
    cj["mutual"] = census.mutual;
    cj["asymmetric"] = census.asymmetric;
    cj["null"] = census.null_dyads;
    j["dyad_census"] = cj;
    j["reciprocity_lift"] = reciprocity_lift(dichot);
    j["table"] = detail::stats_table_json(dichot, cfg);
    write_text_file(detail::artifact(cfg, "stats.json"), detail::dump_json(j));
}

inline void run_cug(const pipeline_config& cfg) {
    const auto total = detail::load_networks(cfg, "networks_total.csv");
    const concept_net dichot = dichotomize(total.at(0));
    nlohmann::ordered_json j;
    j["replicates"] = cfg.cug.replicates;
    j["seed"] = cfg.cug.seed;
    j["table"] = detail::stats_table_json(dichot, cfg);
    write_text_file(detail::artifact(cfg, "cug.json"), detail::dump_json(j));
}

inline void run_pca(const pipeline_config& cfg) {
    const char* file = cfg.pca.over == stratifier::month
                           ? "networks_month.csv"
                           : (cfg.pca.over == stratifier::role_group ? "networks_role3.csv"
                                                                     : "networks_role.csv");
    const auto nets = detail::load_networks(cfg, file);
    pca_options opt;
    opt.components = cfg.pca.components;
    opt.centered_scores = cfg.pca.centered_scores;
    opt.scale_loadings = cfg.pca.scale_loadings;
    const auto res = network_pca(nets, opt);

    std::ostringstream cov;
    write_matrix_csv(res.covariance, res.graph_labels, res.graph_labels, cov);
    write_text_file(detail::artifact(cfg, "pca_covariance.csv"), cov.str());

    std::ostringstream eig;
    write_eigenvalues_csv(res.eigenvalues, eig);
    write_text_file(detail::artifact(cfg, "pca_eigenvalues.csv"), eig.str());

    std::vector<std::string> comp_labels;
    for (std::size_t k = 0; k < res.eigenvalues.size(); ++k)
        comp_labels.push_back("pc" + std::to_string(k + 1));
    std::ostringstream load;
    write_matrix_csv(opt.scale_loadings ? res.scaled_loadings() : res.loadings,
                     res.graph_labels, comp_labels, load);
    write_text_file(detail::artifact(cfg, "pca_loadings.csv"), load.str());

    for (const auto& sg : res.score_graphs) {
        std::ostringstream csv, dot;
        write_score_graph_csv(sg, csv);
        write_score_graph_dot(sg, dot);
        write_text_file(detail::artifact(cfg, ("pca_score_" + sg.label + ".csv").c_str()),
                        csv.str());
        write_text_file(detail::artifact(cfg, ("pca_score_" + sg.label + ".dot").c_str()),
                        dot.str());
    }
}

inline int run_regress(const pipeline_config& cfg) {
    detail::require_artifact(cfg, "coded_units.jsonl", "code");
    const auto total = detail::load_networks(cfg, "networks_total.csv");
    const auto monthly = detail::load_networks(cfg, "networks_month.csv");
    lexicon lex = load_lexicon(cfg.lexicon_path);
    for (const auto& [override_ref, slot] :
         {std::make_pair(&cfg.regression.cause_reference, &lex.cause_reference_theme),
          std::make_pair(&cfg.regression.effect_reference, &lex.effect_reference_theme)}) {
        if (override_ref->empty())
            continue;
        if (std::find(lex.themes.begin(), lex.themes.end(), *override_ref) ==
            lex.themes.end())
            throw usage_error("reference theme '" + *override_ref +
                              "' is not declared by the lexicon");
        *slot = *override_ref;
    }
    const message_set corpus = detail::load_configured_corpus(cfg);
    std::istringstream coded_in(read_text_file(detail::artifact(cfg, "coded_units.jsonl")));
    const auto coded = read_coded_units_jsonl(coded_in);

    feature_build_options fopt;
    fopt.originals_only = cfg.regression.originals_only;
    fopt.window = cfg.regression.window;
    fopt.epoch = cfg.epoch;
    const auto table =
        build_features(coded, corpus, dichotomize(total.at(0)), monthly, lex, fopt);

    std::ostringstream feat;
    write_features_csv(table, feat);
    write_text_file(detail::artifact(cfg, "features.csv"), feat.str());

    nlohmann::ordered_json funnel;
    funnel["coded_units"] = table.funnel.coded_units;
    funnel["dropped_retransmissions"] = table.funnel.dropped_retransmissions;
    funnel["dropped_pre_epoch"] = table.funnel.dropped_pre_epoch;
    funnel["rows"] = table.funnel.rows;
    write_text_file(detail::artifact(cfg, "funnel.json"), detail::dump_json(funnel));

    const auto d = build_design(table, parse_formula(cfg.regression.formula));
    const auto fit = fit_nb(d.X, d.y, d.names);
    write_text_file(detail::artifact(cfg, "fit.json"), detail::dump_json(fit_json(fit)));
    write_text_file(detail::artifact(cfg, "table.md"), regression_table_markdown(fit));
    write_text_file(detail::artifact(cfg, "table.csv"), regression_table_csv(fit));
    return fit.converged ? 0 : 3;
}

inline void run_report(const pipeline_config& cfg) {
    detail::require_artifact(cfg, "stats.json", "stats");
    detail::require_artifact(cfg, "pca_eigenvalues.csv", "pca");
    detail::require_artifact(cfg, "fit.json", "regress");
    const auto total = detail::load_networks(cfg, "networks_total.csv");
    const auto monthly = detail::load_networks(cfg, "networks_month.csv");
    const auto roles = detail::load_networks(cfg, "networks_role.csv");

    const auto narratives = top_narratives(total.at(0), 5);
    write_text_file(detail::artifact(cfg, "narrative_trends.csv"),
                    narrative_trends_csv(monthly, narratives));
    const bool want_json = cfg.format_selection == report_format_kind::all ||
                           cfg.format_selection == report_format_kind::json;
    const bool want_md = cfg.format_selection == report_format_kind::all ||
                         cfg.format_selection == report_format_kind::md;

    nlohmann::ordered_json j;
    j["version"] = causalnet_version;
    j["stats"] = nlohmann::ordered_json::parse(
        read_text_file(detail::artifact(cfg, "stats.json")));
    nlohmann::ordered_json deg = nlohmann::ordered_json::array();
    for (const auto& row : degree_table(total.at(0))) {
        nlohmann::ordered_json r;
        r["concept"] = row.concept_name;
        r["out_degree"] = row.out_degree;
        r["in_degree"] = row.in_degree;
        r["net_degree"] = row.net_degree;
        deg.push_back(r);
    }
    j["degree_table"] = deg;
    nlohmann::ordered_json narr = nlohmann::ordered_json::array();
    for (const auto& n : narratives) {
        nlohmann::ordered_json r;
        r["cause"] = n.cause;
        r["effect"] = n.effect;
        r["count"] = n.count;
        r["share_percent"] = 100.0 * n.share;
        narr.push_back(r);
    }
    j["top_narratives"] = narr;
    j["monthly_networks"] = monthly.size();
    j["role_networks"] = roles.size();
    j["narrative_trends_csv"] = "narrative_trends.csv";
    j["pca"] = nlohmann::ordered_json::object();
    j["pca"]["eigenvalues_csv"] = "pca_eigenvalues.csv";
    j["pca"]["loadings_csv"] = "pca_loadings.csv";
    j["regression"] = nlohmann::ordered_json::parse(
        read_text_file(detail::artifact(cfg, "fit.json")));
    if (want_json)
        write_text_file(detail::artifact(cfg, "report.json"), detail::dump_json(j));
    if (!want_md)
        return;

    std::ostringstream md;
    md << "# Causal discourse report\n\n";
    md << "## Network statistics\n\n";
    md << "| Statistic | Conditioned On | Obs. Value | Pr(X>=Obs) | Pr(X<=Obs) |\n";
    md << "|---|---|---:|---:|---:|\n";
    for (const auto& row : j["stats"]["table"])
        md << "| " << row["statistic"].get<std::string>() << " | "
           << row["conditioning"].get<std::string>() << " | "
           << detail::num3(row["observed"].get<double>()) << " | "
           << detail::num3(row["p_ge"].get<double>()) << " | "
           << detail::num3(row["p_le"].get<double>()) << " |\n";
    md << "\nDensity: " << detail::num3(j["stats"]["density"].get<double>()) << "\n";
    md << "\n## Top narratives\n\n";
    md << "| Cause | Effect | Count | Share |\n|---|---|---:|---:|\n";
    for (const auto& n : narratives)
        md << "| " << n.cause << " | " << n.effect << " | " << n.count << " | "
           << detail::num3(100.0 * n.share) << "% |\n";
    md << "\n## Degree table\n\n";
    md << "| Concept | Out-Degree | In-Degree | Net Degree |\n|---|---:|---:|---:|\n";
    for (const auto& row : degree_table(total.at(0)))
        md << "| " << row.concept_name << " | " << row.out_degree << " | " << row.in_degree
           << " | " << row.net_degree << " |\n";
    md << "\n## Retransmission model\n\n";
    md << read_text_file(detail::artifact(cfg, "table.md"));
    write_text_file(detail::artifact(cfg, "report.md"), md.str());
}

inline void write_manifest(const pipeline_config& cfg) {
    nlohmann::ordered_json j;
    j["version"] = causalnet_version;
    j["corpus"] = std::filesystem::path(cfg.corpus_path).filename().string();
    j["lexicon"] = std::filesystem::path(cfg.lexicon_path).filename().string();
    char epoch[8];
    std::snprintf(epoch, sizeof epoch, "%04d-%02d", cfg.epoch.year, cfg.epoch.month);
    j["epoch"] = epoch;
    j["seed"] = cfg.cug.seed;
    j["replicates"] = cfg.cug.replicates;
    j["pca_components"] = cfg.pca.components;
    j["formula"] = cfg.regression.formula;
    j["originals_only"] = cfg.regression.originals_only;
    j["cum_window"] =
        cfg.regression.window == cumulative_window::before ? "before" : "through";
    write_text_file(detail::artifact(cfg, "manifest.json"), detail::dump_json(j));
}

// config conflicts surface here, before any stage writes anything
inline void validate_config(const pipeline_config& cfg) {
    parse_formula(cfg.regression.formula);
    if (cfg.epoch.month < 1 || cfg.epoch.month > 12)
        throw usage_error("epoch month must be 1..12");
    if (cfg.cug.replicates < 1)
        throw usage_error("replicates must be >= 1");
    if (cfg.cug.plan.empty())
        throw usage_error("empty CUG plan");
    for (const auto& entry : cfg.cug.plan)
        statistic_by_name(entry.statistic);
    if (cfg.pca.components < 1)
        throw usage_error("components must be >= 1");
    if (cfg.pca.over == stratifier::total)
        throw usage_error("pca_over must name a stratification with several graphs");
    if (cfg.stratifiers.empty())
        throw usage_error("empty stratifier list");
    if (cfg.out_dir.empty())
        throw usage_error("no output directory configured");
}

// Runs one stage (or every stage, in order). Returns the process exit
// status: 0 ok, 3 when the regression failed to converge.
inline int run_pipeline(pipeline_stage stage, const pipeline_config& cfg) {
    validate_config(cfg);
    std::filesystem::create_directories(cfg.out_dir);
    int status = 0;
    switch (stage) {
        case pipeline_stage::extract: run_extract(cfg); break;
        case pipeline_stage::code: run_code(cfg); break;
        case pipeline_stage::network: run_network(cfg); break;
        case pipeline_stage::stats: run_stats(cfg); break;
        case pipeline_stage::cug: run_cug(cfg); break;
        case pipeline_stage::pca: run_pca(cfg); break;
        case pipeline_stage::regress: status = run_regress(cfg); break;
        case pipeline_stage::report: run_report(cfg); break;
        case pipeline_stage::all:
            write_manifest(cfg);
            run_extract(cfg);
            run_code(cfg);
            run_network(cfg);
            run_stats(cfg);
            run_cug(cfg);
            run_pca(cfg);
            status = run_regress(cfg);
            run_report(cfg);
            break;
    }
    return status;
}

}  // namespace causalnet
