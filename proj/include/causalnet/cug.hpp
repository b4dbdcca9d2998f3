#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "causalnet/errors.hpp"
#include "causalnet/graph_stats.hpp"
#include "causalnet/rng.hpp"

namespace causalnet {

enum class cug_conditioning { edges, dyad_census };

inline std::string_view conditioning_label(cug_conditioning c) {
    return c == cug_conditioning::edges ? "Edges" : "Dyad Census";
}

using graph_statistic = std::function<double(const concept_net&)>;

struct named_statistic {
    std::string name;
    graph_statistic fn;
};

// Registry of the statistics reported for discourse networks.
inline const std::vector<named_statistic>& statistic_registry() {
    static const std::vector<named_statistic> all = {
        {"density", [](const concept_net& g) { return density(g); }},
        {"edgewise_reciprocity", [](const concept_net& g) { return edgewise_reciprocity(g); }},
        {"reciprocity_lift", [](const concept_net& g) { return reciprocity_lift(g); }},
        {"transitivity", [](const concept_net& g) { return transitivity(g); }},
        {"indegree_centralization",
         [](const concept_net& g) { return degree_centralization(g, degree_mode::in); }},
        {"outdegree_centralization",
         [](const concept_net& g) { return degree_centralization(g, degree_mode::out); }},
        {"betweenness_centralization",
         [](const concept_net& g) { return betweenness_centralization(g); }},
        {"mutual_dyads",
         [](const concept_net& g) { return static_cast<double>(dyad_census(g).mutual); }},
    };
    return all;
}

inline graph_statistic statistic_by_name(const std::string& name) {
    for (const auto& s : statistic_registry())
        if (s.name == name)
            return s.fn;
    throw usage_error("unknown statistic: " + name);
}

// Uniform draw from loopless digraphs with the given order and arc count.
inline concept_net sample_edges_conditioned(rng_t& rng, const std::vector<std::string>& nodes,
                                            std::size_t m) {
    const std::size_t n = nodes.size();
    const std::size_t positions = n * (n - 1);
    if (m > positions)
        throw usage_error("sample_edges_conditioned: arc count exceeds n(n-1)");
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    slots.reserve(positions);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j)
                slots.emplace_back(i, j);
    concept_net g(nodes);
    for (std::size_t idx : rng.sample_indices(positions, m))
        g.at(slots[idx].first, slots[idx].second) = 1;
    return g;
}

// Uniform draw from loopless digraphs with the given dyad census: the
// multiset of dyad states is shuffled over the unordered pairs, and each
// asymmetric dyad is oriented by a fair coin.
inline concept_net sample_dyad_census_conditioned(rng_t& rng,
                                                  const std::vector<std::string>& nodes,
                                                  dyad_census_counts census) {
    const std::size_t n = nodes.size();
    const std::size_t pairs = n * (n - 1) / 2;
    if (census.mutual + census.asymmetric + census.null_dyads != pairs)
        throw usage_error("sample_dyad_census_conditioned: census does not cover all pairs");
    std::vector<int> states;
    states.reserve(pairs);
    states.insert(states.end(), census.mutual, 2);
    states.insert(states.end(), census.asymmetric, 1);
    states.insert(states.end(), census.null_dyads, 0);
    rng.shuffle(states);
    concept_net g(nodes);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j, ++k) {
            if (states[k] == 2) {
                g.at(i, j) = 1;
                g.at(j, i) = 1;
            } else if (states[k] == 1) {
                if (rng.below(2) == 0)
                    g.at(i, j) = 1;
                else
                    g.at(j, i) = 1;
            }
        }
    return g;
}

struct cug_result {
    std::string statistic_name;
    double observed = 0.0;
    cug_conditioning conditioning = cug_conditioning::edges;
    std::size_t replicates = 0;  // retained draws, equals null_draws.size()
    double p_ge = 1.0;
    double p_le = 1.0;
    std::vector<double> null_draws;  // in replicate order
    std::uint64_t seed = 0;
    std::size_t undefined_draws = 0;
};

// Monte Carlo conditional uniform graph test. Replicate k always uses the
// substream seeded by substream_seed(seed, k), so results do not depend on
// execution order. Draws where the statistic is undefined are dropped and
// counted; p-values carry the +1 correction and so never reach 0.
inline cug_result cug_test(const concept_net& net, const std::string& statistic_name,
                           const graph_statistic& stat, cug_conditioning conditioning,
                           std::size_t replicates, std::uint64_t seed) {
    if (replicates < 1)
        throw usage_error("cug_test: replicates must be >= 1");
    cug_result res;
    res.statistic_name = statistic_name;
    res.conditioning = conditioning;
    res.seed = seed;
    res.observed = stat(net);

    const std::size_t m = net.arc_count();
    const auto census = dyad_census(net);
    res.null_draws.reserve(replicates);
    for (std::size_t k = 0; k < replicates; ++k) {
        rng_t rng(substream_seed(seed, k));
        const concept_net draw =
            conditioning == cug_conditioning::edges
                ? sample_edges_conditioned(rng, net.nodes, m)
                : sample_dyad_census_conditioned(rng, net.nodes, census);
        try {
            res.null_draws.push_back(stat(draw));
        } catch (const stat_undefined&) {
            ++res.undefined_draws;
        }
    }
    res.replicates = res.null_draws.size();
    std::size_t ge = 0, le = 0;
    for (double v : res.null_draws) {
        if (v >= res.observed)
            ++ge;
        if (v <= res.observed)
            ++le;
    }
    res.p_ge = static_cast<double>(1 + ge) / static_cast<double>(res.replicates + 1);
    res.p_le = static_cast<double>(1 + le) / static_cast<double>(res.replicates + 1);
    return res;
}

inline cug_result cug_test(const concept_net& net, const std::string& statistic_name,
                           cug_conditioning conditioning, std::size_t replicates,
                           std::uint64_t seed) {
    return cug_test(net, statistic_name, statistic_by_name(statistic_name), conditioning,
                    replicates, seed);
}

}  // namespace causalnet
