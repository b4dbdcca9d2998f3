// seeded synthetic-corpus generator for demos and golden tests

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "causalnet/corpus.hpp"
#include "causalnet/synthetic.hpp"

using namespace causalnet;

int main(int argc, char** argv) {
    CLI::App app{"generate a synthetic terse-message corpus (JSONL)"};
    std::string out_path = "synthetic_corpus.jsonl";
    synth_options opt;
    app.add_option("--out", out_path, "output JSONL path");
    app.add_option("--seed", opt.seed, "generator seed (default 42)");
    app.add_option("--messages", opt.n_messages, "number of messages (default 2000)");
    app.add_option("--months", opt.months, "window length in months (default 15)");
    app.add_option("--theta", opt.theta, "planted NB dispersion (default 0.6)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        const message_set corpus = generate_synthetic_corpus(opt);
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            std::cerr << "cannot write " << out_path << '\n';
            return 2;
        }
        write_corpus_jsonl(corpus, out);
        std::cerr << "wrote " << corpus.size() << " messages to " << out_path << '\n';
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
