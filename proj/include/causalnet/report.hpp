#pragma once

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "causalnet/concept_net.hpp"
#include "causalnet/cug.hpp"
#include "causalnet/export.hpp"
#include "causalnet/graph_stats.hpp"
#include "causalnet/nb_model.hpp"

namespace causalnet {

inline nlohmann::ordered_json cug_result_json(const cug_result& r) {
    nlohmann::ordered_json j;
    j["statistic"] = r.statistic_name;
    j["conditioning"] = std::string(conditioning_label(r.conditioning));
    j["observed"] = r.observed;
    j["p_ge"] = r.p_ge;
    j["p_le"] = r.p_le;
    j["replicates"] = r.replicates;
    j["undefined_draws"] = r.undefined_draws;
    j["seed"] = r.seed;
    return j;
}

// the five headline rows reported for the combined dichotomized discourse
// network: statistic x conditioning
struct stats_plan_entry {
    std::string statistic;
    cug_conditioning conditioning;
};

inline std::vector<stats_plan_entry> default_stats_plan() {
    return {
        {"edgewise_reciprocity", cug_conditioning::edges},
        {"transitivity", cug_conditioning::dyad_census},
        {"indegree_centralization", cug_conditioning::dyad_census},
        {"outdegree_centralization", cug_conditioning::dyad_census},
        {"betweenness_centralization", cug_conditioning::dyad_census},
    };
}

inline std::string significance_stars(double p) {
    if (p < 0.001)
        return "***";
    if (p < 0.01)
        return "**";
    if (p < 0.05)
        return "*";
    return "";
}

namespace detail {

inline std::string num3(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

inline bool is_control_term(const std::string& name) {
    return name.rfind("Day: ", 0) == 0 || name.rfind("Hour: ", 0) == 0 ||
           name == "Num. of Months";
}

}  // namespace detail

// Coefficient table as markdown: main effects first, period controls in a
// separate block, stars at 0.05 / 0.01 / 0.001. An unconverged fit prints
// diagnostics instead of estimates.
inline std::string regression_table_markdown(const nb_fit& fit) {
    std::ostringstream out;
    if (!fit.converged) {
        out << "**Model did not converge.** Table suppressed.\n\n";
        out << "- outer iterations: " << fit.outer_iterations << "\n";
        out << "- last log-likelihood: " << format_double(fit.log_likelihood) << "\n";
        out << "- last theta: " << format_double(fit.theta) << "\n";
        if (!fit.note.empty())
            out << "- note: " << fit.note << "\n";
        return out.str();
    }
    auto block = [&](bool controls) {
        out << "| Term | Estimate | Std. Error | Pr(>\\|z\\|) |\n";
        out << "|---|---:|---:|---:|\n";
        for (std::size_t j = 0; j < fit.names.size(); ++j) {
            if (detail::is_control_term(fit.names[j]) != controls)
                continue;
            out << "| " << fit.names[j] << " | " << detail::num3(fit.beta[j])
                << significance_stars(fit.p[j]) << " | " << detail::num3(fit.se[j]) << " | "
                << detail::num3(fit.p[j]) << " |\n";
        }
    };
    bool any_controls = false;
    for (const auto& n : fit.names)
        any_controls |= detail::is_control_term(n);
    out << "### Retransmission model\n\n";
    block(false);
    if (any_controls) {
        out << "\n### Period controls\n\n";
        block(true);
    }
    out << "\nObservations: " << fit.n_obs << "; AIC: " << detail::num3(fit.aic)
        << "; log-likelihood: " << detail::num3(fit.log_likelihood)
        << "; dispersion parameter (theta): " << detail::num3(fit.theta)
        << " (alpha = 1/theta: " << detail::num3(1.0 / fit.theta)
        << "); std. error of theta: " << detail::num3(fit.se_theta) << ".\n";
    out << "Stars: * p<0.05, ** p<0.01, *** p<0.001.\n";
    return out.str();
}

inline std::string regression_table_csv(const nb_fit& fit) {
    std::ostringstream out;
    out << "term,estimate,std_error,z,p\n";
    if (!fit.converged)
        return out.str();
    for (std::size_t j = 0; j < fit.names.size(); ++j)
        out << csv_escape(fit.names[j]) << ',' << format_double(fit.beta[j]) << ','
            << format_double(fit.se[j]) << ',' << format_double(fit.z[j]) << ','
            << format_double(fit.p[j]) << '\n';
    return out.str();
}

inline nlohmann::ordered_json fit_json(const nb_fit& fit) {
    nlohmann::ordered_json j;
    j["converged"] = fit.converged;
    j["n_obs"] = fit.n_obs;
    j["theta"] = fit.theta;
    j["alpha"] = fit.theta > 0.0 ? 1.0 / fit.theta : 0.0;
    j["se_theta"] = fit.se_theta;
    j["log_likelihood"] = fit.log_likelihood;
    j["aic"] = fit.aic;
    j["outer_iterations"] = fit.outer_iterations;
    if (!fit.note.empty())
        j["note"] = fit.note;
    nlohmann::ordered_json coefs = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < fit.names.size(); ++k) {
        nlohmann::ordered_json c;
        c["term"] = fit.names[k];
        c["estimate"] = fit.beta[k];
        c["std_error"] = fit.se[k];
        c["z"] = fit.z[k];
        c["p"] = fit.p[k];
        coefs.push_back(c);
    }
    j["coefficients"] = coefs;
    return j;
}

// --- narrative tables -------------------------------------------------------

struct narrative_row {
    std::string cause;
    std::string effect;
    std::int64_t count = 0;
    double share = 0.0;  // fraction of all coded assertions
};

// the k most-used cause -> effect cells of a valued network, ties broken
// by node order
inline std::vector<narrative_row> top_narratives(const concept_net& valued, std::size_t k) {
    struct cell {
        std::size_t i, j;
        std::int64_t w;
    };
    std::vector<cell> cells;
    const std::size_t n = valued.order();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (valued.at(i, j) > 0)
                cells.push_back({i, j, valued.at(i, j)});
    std::stable_sort(cells.begin(), cells.end(),
                     [](const cell& a, const cell& b) { return a.w > b.w; });
    const double total = static_cast<double>(valued.total_weight());
    std::vector<narrative_row> rows;
    for (std::size_t idx = 0; idx < cells.size() && idx < k; ++idx)
        rows.push_back({valued.nodes[cells[idx].i], valued.nodes[cells[idx].j], cells[idx].w,
                        total > 0.0 ? static_cast<double>(cells[idx].w) / total : 0.0});
    return rows;
}

// long-format monthly counts for the given narratives: month,cause,effect,count
inline std::string narrative_trends_csv(const std::vector<concept_net>& monthly,
                                        const std::vector<narrative_row>& narratives) {
    std::ostringstream out;
    out << "month,cause,effect,count\n";
    for (const auto& net : monthly) {
        for (const auto& nr : narratives) {
            const int ci = [&] {
                for (std::size_t i = 0; i < net.nodes.size(); ++i)
                    if (net.nodes[i] == nr.cause)
                        return static_cast<int>(i);
                return -1;
            }();
            const int ei = [&] {
                for (std::size_t i = 0; i < net.nodes.size(); ++i)
                    if (net.nodes[i] == nr.effect)
                        return static_cast<int>(i);
                return -1;
            }();
            if (ci < 0 || ei < 0)
                continue;
            out << net.stratum.month << ',' << csv_escape(nr.cause) << ','
                << csv_escape(nr.effect) << ','
                << net.at(static_cast<std::size_t>(ci), static_cast<std::size_t>(ei)) << '\n';
        }
    }
    return out.str();
}

}  // namespace causalnet
