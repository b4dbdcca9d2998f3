#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "causalnet/errors.hpp"
#include "causalnet/lexicon.hpp"
#include "causalnet/message.hpp"

namespace causalnet {

enum class stratum_kind { total, month, role, role_group };

struct stratum_id {
    stratum_kind kind = stratum_kind::total;
    int month = 0;                                  // for stratum_kind::month
    account_role role = account_role::public_health;  // for stratum_kind::role
    std::string group;                              // for stratum_kind::role_group

    static stratum_id total() { return {}; }
    static stratum_id for_month(int m) {
        stratum_id id;
        id.kind = stratum_kind::month;
        id.month = m;
        return id;
    }
    static stratum_id for_role(account_role r) {
        stratum_id id;
        id.kind = stratum_kind::role;
        id.role = r;
        return id;
    }
    static stratum_id for_group(std::string g) {
        stratum_id id;
        id.kind = stratum_kind::role_group;
        id.group = std::move(g);
        return id;
    }

    std::string label() const {
        switch (kind) {
            case stratum_kind::total: return "total";
            case stratum_kind::month: {
                char buf[16];
                std::snprintf(buf, sizeof buf, "month_%02d", month);
                return buf;
            }
            case stratum_kind::role: return std::string(role_token(role));
            case stratum_kind::role_group: return group;
        }
        return "";
    }
};

// Valued digraph over the lexicon's concept list; cell (i, j) counts
// assertions "concept i caused concept j". Self-loops are stored (they
// occur in real discourse) but every statistic downstream ignores them.
struct concept_net {
    std::vector<std::string> nodes;
    std::vector<std::int64_t> weights;  // row-major, size nodes^2
    stratum_id stratum;

    concept_net() = default;
    concept_net(std::vector<std::string> node_list, stratum_id s = {})
        : nodes(std::move(node_list)), weights(nodes.size() * nodes.size(), 0), stratum(s) {}

    std::size_t order() const { return nodes.size(); }

    std::int64_t& at(std::size_t i, std::size_t j) { return weights[i * nodes.size() + j]; }
    std::int64_t at(std::size_t i, std::size_t j) const { return weights[i * nodes.size() + j]; }

    bool arc(std::size_t i, std::size_t j) const { return at(i, j) > 0; }

    std::int64_t total_weight() const {
        std::int64_t s = 0;
        for (auto w : weights)
            s += w;
        return s;
    }

    // arcs excluding self-loops
    std::size_t arc_count() const {
        std::size_t m = 0;
        const std::size_t n = order();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j && arc(i, j))
                    ++m;
        return m;
    }
};

enum class stratifier { total, month, role, role_group };

inline std::string_view role_group_of(account_role r) {
    switch (r) {
        case account_role::public_health: return "health";
        case account_role::state_fed_em:
        case account_role::local_em: return "em";
        case account_role::governor:
        case account_role::mayor: return "electeds";
    }
    return "";
}

// Aggregates coded units into one valued digraph per stratum. Month strata
// run contiguously from 1 to the latest observed month; role strata cover
// the roles present in the corpus, in enum order.
inline std::vector<concept_net> build_networks(const std::vector<coded_unit>& units,
                                               const message_set& messages,
                                               stratifier strat,
                                               const std::vector<std::string>& nodes,
                                               year_month epoch = {2020, 1}) {
    std::map<std::string, std::size_t> node_index;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        node_index.emplace(nodes[i], i);

    struct placed_unit {
        std::size_t cause, effect;
        const message* msg;
    };
    std::vector<placed_unit> placed;
    placed.reserve(units.size());
    int max_month = 0;
    for (const auto& u : units) {
        const message* msg = messages.find(u.unit.message_id);
        if (!msg)
            throw data_error("build_networks: unknown message id " + u.unit.message_id);
        const auto ci = node_index.find(u.cause_concept);
        const auto ei = node_index.find(u.effect_concept);
        if (ci == node_index.end())
            throw data_error("build_networks: concept not in node list: " + u.cause_concept);
        if (ei == node_index.end())
            throw data_error("build_networks: concept not in node list: " + u.effect_concept);
        placed.push_back({ci->second, ei->second, msg});
        if (strat == stratifier::month)
            max_month = std::max(max_month, month_bin(msg->timestamp, epoch));
    }

    std::vector<concept_net> nets;
    auto stratum_slot = [&](stratum_id id) -> concept_net& {
        for (auto& n : nets)
            if (n.stratum.label() == id.label())
                return n;
        nets.emplace_back(nodes, id);
        return nets.back();
    };

    switch (strat) {
        case stratifier::total:
            stratum_slot(stratum_id::total());
            break;
        case stratifier::month:
            for (int m = 1; m <= max_month; ++m)
                stratum_slot(stratum_id::for_month(m));
            break;
        case stratifier::role:
            for (account_role r : all_account_roles) {
                bool present = false;
                for (const auto& msg : messages.messages())
                    if (msg.role == r) {
                        present = true;
                        break;
                    }
                if (present)
                    stratum_slot(stratum_id::for_role(r));
            }
            break;
        case stratifier::role_group:
            for (const char* g : {"health", "em", "electeds"}) {
                bool present = false;
                for (const auto& msg : messages.messages())
                    if (role_group_of(msg.role) == g) {
                        present = true;
                        break;
                    }
                if (present)
                    stratum_slot(stratum_id::for_group(g));
            }
            break;
    }

    for (const auto& p : placed) {
        stratum_id id;
        switch (strat) {
            case stratifier::total:
                id = stratum_id::total();
                break;
            case stratifier::month:
                id = stratum_id::for_month(month_bin(p.msg->timestamp, epoch));
                break;
            case stratifier::role:
                id = stratum_id::for_role(p.msg->role);
                break;
            case stratifier::role_group:
                id = stratum_id::for_group(std::string(role_group_of(p.msg->role)));
                break;
        }
        ++stratum_slot(id).at(p.cause, p.effect);
    }
    return nets;
}

// cell = 1 iff original cell >= threshold
inline concept_net dichotomize(const concept_net& net, std::int64_t threshold = 1) {
    if (threshold < 1)
        throw usage_error("dichotomize: threshold must be >= 1");
    concept_net out(net.nodes, net.stratum);
    for (std::size_t k = 0; k < net.weights.size(); ++k)
        out.weights[k] = net.weights[k] >= threshold ? 1 : 0;
    return out;
}

struct degree_row {
    std::string concept_name;
    std::int64_t out_degree = 0;  // row sum: mentions as a cause
    std::int64_t in_degree = 0;   // column sum: mentions as an effect
    std::int64_t net_degree = 0;
};

// Valued degree accounting, sorted by |net degree| descending.
inline std::vector<degree_row> degree_table(const concept_net& net) {
    const std::size_t n = net.order();
    std::vector<degree_row> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        rows[i].concept_name = net.nodes[i];
        for (std::size_t j = 0; j < n; ++j) {
            rows[i].out_degree += net.at(i, j);
            rows[i].in_degree += net.at(j, i);
        }
        rows[i].net_degree = rows[i].out_degree - rows[i].in_degree;
    }
    std::stable_sort(rows.begin(), rows.end(), [](const degree_row& a, const degree_row& b) {
        return std::llabs(a.net_degree) > std::llabs(b.net_degree);
    });
    return rows;
}

enum class top_k_direction { strongest_out_per_node, strongest_in_per_node };

// Keeps each node's k highest-weight outgoing (or incoming) edges; ties
// resolved toward the earlier concept in node order.
inline concept_net top_k_edges(const concept_net& net, std::size_t k, top_k_direction dir) {
    if (k < 1)
        throw usage_error("top_k_edges: k must be >= 1");
    const std::size_t n = net.order();
    concept_net out(net.nodes, net.stratum);
    for (std::size_t a = 0; a < n; ++a) {
        std::vector<std::size_t> others;
        for (std::size_t b = 0; b < n; ++b) {
            const std::int64_t w =
                dir == top_k_direction::strongest_out_per_node ? net.at(a, b) : net.at(b, a);
            if (w > 0)
                others.push_back(b);
        }
        std::stable_sort(others.begin(), others.end(), [&](std::size_t x, std::size_t y) {
            const std::int64_t wx =
                dir == top_k_direction::strongest_out_per_node ? net.at(a, x) : net.at(x, a);
            const std::int64_t wy =
                dir == top_k_direction::strongest_out_per_node ? net.at(a, y) : net.at(y, a);
            return wx > wy;
        });
        for (std::size_t idx = 0; idx < others.size() && idx < k; ++idx) {
            const std::size_t b = others[idx];
            if (dir == top_k_direction::strongest_out_per_node)
                out.at(a, b) = net.at(a, b);
            else
                out.at(b, a) = net.at(b, a);
        }
    }
    return out;
}

}  // namespace causalnet
