#pragma once

#include <algorithm>
#include <cstdint>
#include <array>
#include <deque>
#include <string>
#include <vector>

#include "causalnet/concept_net.hpp"
#include "causalnet/errors.hpp"

namespace causalnet {

// All statistics below read the dichotomized structure (cell > 0 means an
// arc) and ignore self-loops.

inline double density(const concept_net& net) {
    const std::size_t n = net.order();
    if (n < 2)
        throw stat_undefined("density: degenerate graph (order < 2)");
    return static_cast<double>(net.arc_count()) / static_cast<double>(n * (n - 1));
}

struct dyad_census_counts {
    std::size_t mutual = 0;
    std::size_t asymmetric = 0;
    std::size_t null_dyads = 0;
};

inline dyad_census_counts dyad_census(const concept_net& net) {
    dyad_census_counts c;
    const std::size_t n = net.order();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool ab = net.arc(i, j), ba = net.arc(j, i);
            if (ab && ba)
                ++c.mutual;
            else if (ab || ba)
                ++c.asymmetric;
            else
                ++c.null_dyads;
        }
    return c;
}

// fraction of arcs whose reverse arc is also present
inline double edgewise_reciprocity(const concept_net& net) {
    const std::size_t m = net.arc_count();
    if (m == 0)
        throw stat_undefined("edgewise_reciprocity: undefined on a graph with no arcs");
    return 2.0 * static_cast<double>(dyad_census(net).mutual) / static_cast<double>(m);
}

// Pr(A->B | B->A) / Pr(A->B): how much more likely an assertion is given
// that its reverse was asserted
inline double reciprocity_lift(const concept_net& net) {
    const std::size_t m = net.arc_count();
    if (m == 0)
        throw stat_undefined("reciprocity_lift: undefined conditional (no arcs)");
    const double conditional =
        2.0 * static_cast<double>(dyad_census(net).mutual) / static_cast<double>(m);
    return conditional / density(net);
}

// fraction of ordered two-paths i->j->k (distinct) closed by i->k
inline double transitivity(const concept_net& net) {
    const std::size_t n = net.order();
    std::size_t paths = 0, closed = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j || !net.arc(i, j))
                continue;
            for (std::size_t k = 0; k < n; ++k) {
                if (k == i || k == j || !net.arc(j, k))
                    continue;
                ++paths;
                if (net.arc(i, k))
                    ++closed;
            }
        }
    if (paths == 0)
        throw stat_undefined("transitivity: no two-paths");
    return static_cast<double>(closed) / static_cast<double>(paths);
}

enum class degree_mode { in, out };

// Freeman centralization of in- or out-degree; the normalizer (n-1)^2 is
// attained by the star with every arc pointing one way.
inline double degree_centralization(const concept_net& net, degree_mode mode) {
    const std::size_t n = net.order();
    if (n < 3)
        throw stat_undefined("degree_centralization: order < 3");
    std::vector<std::size_t> deg(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j || !net.arc(i, j))
                continue;
            ++deg[mode == degree_mode::out ? i : j];
        }
    const std::size_t dmax = *std::max_element(deg.begin(), deg.end());
    double sum = 0.0;
    for (std::size_t d : deg)
        sum += static_cast<double>(dmax - d);
    return sum / static_cast<double>((n - 1) * (n - 1));
}

// Directed geodesic betweenness (Brandes); unreachable pairs contribute 0.
inline std::vector<double> betweenness_scores(const concept_net& net) {
    const std::size_t n = net.order();
    std::vector<double> bc(n, 0.0);
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && net.arc(i, j))
                adj[i].push_back(j);

    std::vector<std::int64_t> dist(n);
    std::vector<double> sigma(n), delta(n);
    std::vector<std::vector<std::size_t>> pred(n);
    std::vector<std::size_t> order;
    order.reserve(n);
    for (std::size_t s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        for (auto& p : pred)
            p.clear();
        order.clear();
        dist[s] = 0;
        sigma[s] = 1.0;
        std::deque<std::size_t> queue{s};
        while (!queue.empty()) {
            const std::size_t v = queue.front();
            queue.pop_front();
            order.push_back(v);
            for (std::size_t w : adj[v]) {
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if (dist[w] == dist[v] + 1) {
                    sigma[w] += sigma[v];
                    pred[w].push_back(v);
                }
            }
        }
        for (std::size_t idx = order.size(); idx-- > 0;) {
            const std::size_t w = order[idx];
            for (std::size_t v : pred[w])
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            if (w != s)
                bc[w] += delta[w];
        }
    }
    return bc;
}

namespace detail {

// Max of sum(c_max - c_i) of betweenness over all loopless digraphs of
// order n, by exhaustive enumeration. Used to cross-check the analytic
// bound; feasible for n <= 5 (2^20 graphs).
inline double betweenness_normalizer_exhaustive(std::size_t n) {
    const std::size_t positions = n * (n - 1);
    const std::uint64_t total = 1ULL << positions;
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j)
                slots.emplace_back(i, j);
    double best = 0.0;
    concept_net g(std::vector<std::string>(n, ""));
    for (std::uint64_t code = 0; code < total; ++code) {
        for (std::size_t b = 0; b < positions; ++b)
            g.at(slots[b].first, slots[b].second) = (code >> b) & 1ULL;
        const auto bc = betweenness_scores(g);
        const double mx = *std::max_element(bc.begin(), bc.end());
        double sum = 0.0;
        for (double c : bc)
            sum += mx - c;
        best = std::max(best, sum);
    }
    return best;
}

}  // namespace detail

// Normalizer for Freeman betweenness centralization on loopless digraphs:
// exhaustive search for n <= 5, the analytic star bound (n-1)^2(n-2)
// beyond (the two agree on the overlap; the suite checks this). The small
// table is built once, so concurrent statistic evaluation stays safe.
inline double betweenness_normalizer(std::size_t n) {
    if (n <= 5) {
        static const std::array<double, 6> table = [] {
            std::array<double, 6> t{};
            for (std::size_t k = 3; k <= 5; ++k)
                t[k] = detail::betweenness_normalizer_exhaustive(k);
            return t;
        }();
        return table[n];
    }
    return static_cast<double>((n - 1) * (n - 1) * (n - 2));
}

inline double betweenness_centralization(const concept_net& net) {
    const std::size_t n = net.order();
    if (n < 3)
        throw stat_undefined("betweenness_centralization: order < 3");
    const auto bc = betweenness_scores(net);
    const double mx = *std::max_element(bc.begin(), bc.end());
    double sum = 0.0;
    for (double c : bc)
        sum += mx - c;
    return sum / betweenness_normalizer(n);
}

}  // namespace causalnet
