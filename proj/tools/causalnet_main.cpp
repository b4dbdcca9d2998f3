// causal discourse analysis pipeline CLI
//
// usage: causalnet <stage> [options]
// stages: extract code network stats cug pca regress report all
// exit codes: 0 ok, 1 usage error, 2 data error, 3 non-convergence

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "causalnet/pipeline.hpp"

using namespace causalnet;

int main(int argc, char** argv) {
    CLI::App app{"causal discourse networks from terse public-agency messages"};
    app.require_subcommand(1);

    std::string config_path, corpus, lexicon_path, out_dir, stratify, cum_window, formula,
                format;
    std::uint64_t seed = 0;
    std::size_t replicates = 0, components = 0;
    bool originals_only = false, retweets_too = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file (flags override it)");
        sub->add_option("--corpus", corpus, "corpus file (.jsonl or .csv)");
        sub->add_option("--lexicon", lexicon_path, "lexicon rule file");
        sub->add_option("--out", out_dir, "output directory (default $CAUSALNET_OUT or ./out)");
        sub->add_option("--seed", seed, "root seed for Monte Carlo stages");
        sub->add_option("--replicates", replicates, "CUG replicates (default 1000)");
        sub->add_option("--stratify", stratify,
                        "network stratifiers, comma list of total,month,role,role3");
        sub->add_option("--components", components, "retained principal components");
        sub->add_flag("--originals-only", originals_only,
                      "regression rows use original messages only (default)");
        sub->add_flag("--with-retransmissions", retweets_too,
                      "keep retransmitted messages as regression rows");
        sub->add_option("--cum-window", cum_window,
                        "cumulative usage window: before (default) or through");
        sub->add_option("--formula", formula,
                        "predictor groups, e.g. all or structure+usage+themes+controls");
        sub->add_option("--format", format,
                        "report rendering: all (default), json, md or csv");
    };
    for (const char* name : {"extract", "code", "network", "stats", "cug", "pca", "regress",
                             "report", "all"})
        add_common(app.add_subcommand(name));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);  // prints help or the parse error
        return rc == 0 ? 0 : 1;
    }

    try {
        pipeline_config cfg;
        if (!config_path.empty())
            cfg = load_pipeline_config(config_path);
        if (const char* env_out = std::getenv("CAUSALNET_OUT"); env_out && cfg.out_dir == "out")
            cfg.out_dir = env_out;
        if (!corpus.empty())
            cfg.corpus_path = corpus;
        if (!lexicon_path.empty())
            cfg.lexicon_path = lexicon_path;
        if (!out_dir.empty())
            cfg.out_dir = out_dir;
        if (seed != 0)
            cfg.cug.seed = seed;
        if (replicates != 0)
            cfg.cug.replicates = replicates;
        if (!stratify.empty())
            cfg.stratifiers = parse_stratifier_list(stratify);
        if (components != 0)
            cfg.pca.components = components;
        if (originals_only)
            cfg.regression.originals_only = true;
        if (retweets_too)
            cfg.regression.originals_only = false;
        if (!cum_window.empty()) {
            if (cum_window == "before")
                cfg.regression.window = cumulative_window::before;
            else if (cum_window == "through")
                cfg.regression.window = cumulative_window::through;
            else
                throw usage_error("--cum-window must be before or through");
        }
        if (!formula.empty())
            cfg.regression.formula = formula;
        if (!format.empty())
            cfg.format_selection = parse_report_format(format);

        const auto stage = stage_from_name(app.get_subcommands().at(0)->get_name());
        if (!stage)
            throw usage_error("unknown stage");
        const int status = run_pipeline(*stage, cfg);
        if (status == 3)
            std::cerr << "warning: regression did not converge (see fit.json)\n";
        return status;
    } catch (const usage_error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const data_error& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const convergence_error& e) {
        std::cerr << "convergence error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
