#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "causalnet/concept_net.hpp"
#include "causalnet/errors.hpp"
#include "causalnet/lexicon.hpp"
#include "causalnet/linalg.hpp"
#include "causalnet/message.hpp"

namespace causalnet {

// One retransmission-regression observation. Structural covariates come
// from the loopless dichotomized total network; the usage covariates from
// the valued monthly networks.
struct feature_row {
    std::string message_id;
    std::int64_t y = 0;  // retransmission count
    int cause_in_degree = 0;
    int effect_out_degree = 0;
    int transitive_closure = 0;  // 1 iff some third concept also bridges cause -> effect
    double log_cum_cause_usage = 0.0;
    double log_cum_effect_usage = 0.0;
    std::string cause_theme;
    std::string effect_theme;
    double log_follower_count = 0.0;
    int day_of_week = 0;  // 0 = Sunday
    int hour_utc = 0;
    int months_elapsed = 1;
};

enum class cumulative_window { before, through };

struct feature_build_options {
    bool originals_only = true;
    cumulative_window window = cumulative_window::before;
    year_month epoch{2020, 1};
};

struct feature_funnel {
    std::size_t coded_units = 0;
    std::size_t dropped_retransmissions = 0;
    std::size_t dropped_pre_epoch = 0;
    std::size_t rows = 0;
};

struct feature_table {
    std::vector<feature_row> rows;
    std::vector<std::string> themes;  // declared order, drives dummy expansion
    std::string cause_reference_theme;
    std::string effect_reference_theme;
    feature_funnel funnel;
};

inline feature_table build_features(const std::vector<coded_unit>& units,
                                    const message_set& messages,
                                    const concept_net& total_dichotomized,
                                    const std::vector<concept_net>& monthly_valued,
                                    const lexicon& lex, feature_build_options opt = {}) {
    const std::size_t n = total_dichotomized.order();
    std::map<std::string, std::size_t> node_index;
    for (std::size_t i = 0; i < n; ++i)
        node_index.emplace(total_dichotomized.nodes[i], i);

    int max_month = 0;
    for (const auto& net : monthly_valued) {
        if (net.stratum.kind != stratum_kind::month)
            throw usage_error("build_features: monthly networks required");
        if (net.nodes != total_dichotomized.nodes)
            throw data_error("build_features: node set mismatch in stratum " +
                             net.stratum.label());
        max_month = std::max(max_month, net.stratum.month);
    }
    if (max_month == 0)
        throw usage_error("build_features: no monthly networks given");

    // cumulative concept usage by month: cum[m][c] = uses in months 1..m
    std::vector<std::vector<double>> cum_cause(max_month + 1, std::vector<double>(n, 0.0));
    std::vector<std::vector<double>> cum_effect(max_month + 1, std::vector<double>(n, 0.0));
    for (int m = 1; m <= max_month; ++m) {
        cum_cause[m] = cum_cause[m - 1];
        cum_effect[m] = cum_effect[m - 1];
        for (const auto& net : monthly_valued) {
            if (net.stratum.month != m)
                continue;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    cum_cause[m][i] += static_cast<double>(net.at(i, j));
                    cum_effect[m][j] += static_cast<double>(net.at(i, j));
                }
        }
    }

    std::vector<int> in_degree(n, 0), out_degree(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && total_dichotomized.arc(i, j)) {
                ++out_degree[i];
                ++in_degree[j];
            }

    feature_table table;
    table.themes = lex.themes;
    table.cause_reference_theme = lex.cause_reference_theme;
    table.effect_reference_theme = lex.effect_reference_theme;
    table.funnel.coded_units = units.size();

    for (const auto& u : units) {
        const message* msg = messages.find(u.unit.message_id);
        if (!msg)
            throw data_error("build_features: unknown message id " + u.unit.message_id);
        if (opt.originals_only && msg->is_retransmission) {
            ++table.funnel.dropped_retransmissions;
            continue;
        }
        int month;
        try {
            month = month_bin(msg->timestamp, opt.epoch);
        } catch (const data_error&) {
            ++table.funnel.dropped_pre_epoch;
            continue;
        }
        if (month > max_month)
            throw data_error("build_features: message month " + std::to_string(month) +
                             " outside network range (max " + std::to_string(max_month) + ")");
        const std::size_t ci = node_index.at(u.cause_concept);
        const std::size_t ei = node_index.at(u.effect_concept);

        feature_row row;
        row.message_id = msg->id;
        row.y = msg->retransmission_count;
        row.cause_in_degree = in_degree[ci];
        row.effect_out_degree = out_degree[ei];
        for (std::size_t k = 0; k < n; ++k) {
            if (k == ci || k == ei)
                continue;
            if (total_dichotomized.arc(ci, k) && total_dichotomized.arc(k, ei)) {
                row.transitive_closure = 1;
                break;
            }
        }
        const int window_end = opt.window == cumulative_window::before ? month - 1 : month;
        row.log_cum_cause_usage = std::log1p(cum_cause[window_end][ci]);
        row.log_cum_effect_usage = std::log1p(cum_effect[window_end][ei]);
        row.cause_theme = u.cause_theme;
        row.effect_theme = u.effect_theme;
        row.log_follower_count = std::log1p(static_cast<double>(msg->follower_count));
        row.day_of_week = msg->timestamp.weekday();
        row.hour_utc = msg->timestamp.hour();
        row.months_elapsed = month;
        table.rows.push_back(std::move(row));
    }
    table.funnel.rows = table.rows.size();
    return table;
}

// predictor-group selection for fit_nb
struct formula {
    bool structure = true;    // degrees and transitive closure
    bool usage = true;        // cumulative usage terms
    bool cause_themes = true;
    bool effect_themes = true;
    bool follower = true;
    bool day_of_week = true;
    bool hour = true;
    bool months = true;
};

// "all" | "controls" | '+'-joined group names
// (structure, usage, cause_themes, effect_themes, follower, day, hour, months)
inline formula parse_formula(const std::string& text) {
    if (text.empty() || text == "all")
        return formula{};
    formula f;
    f.structure = f.usage = f.cause_themes = f.effect_themes = false;
    f.follower = f.day_of_week = f.hour = f.months = false;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t pos = text.find('+', start);
        if (pos == std::string::npos)
            pos = text.size();
        const std::string tok = trim_copy(text.substr(start, pos - start));
        if (tok == "structure")
            f.structure = true;
        else if (tok == "usage")
            f.usage = true;
        else if (tok == "themes")
            f.cause_themes = f.effect_themes = true;
        else if (tok == "cause_themes")
            f.cause_themes = true;
        else if (tok == "effect_themes")
            f.effect_themes = true;
        else if (tok == "follower")
            f.follower = true;
        else if (tok == "day")
            f.day_of_week = true;
        else if (tok == "hour")
            f.hour = true;
        else if (tok == "months")
            f.months = true;
        else if (tok == "controls")
            f.follower = f.day_of_week = f.hour = f.months = true;
        else if (!tok.empty())
            throw usage_error("formula: unknown term '" + tok + "'");
        start = pos + 1;
    }
    return f;
}

struct design {
    dense_matrix X;
    std::vector<double> y;
    std::vector<std::string> names;
};

namespace detail {

inline const char* weekday_name(int d) {
    static const char* names[7] = {"Sunday", "Monday",   "Tuesday", "Wednesday",
                                   "Thursday", "Friday", "Saturday"};
    return names[d];
}

}  // namespace detail

// Expands the feature table into a numeric design matrix. Factor levels
// absent from the data are dropped (their dummy would be all zero);
// reference levels come from the lexicon plus the Sunday / 00 UTC
// convention.
inline design build_design(const feature_table& table, const formula& f) {
    if (table.rows.empty())
        throw data_error("build_design: empty feature table");

    std::vector<std::string> cause_levels, effect_levels;
    std::vector<bool> day_seen(7, false);
    std::vector<bool> hour_seen(24, false);
    for (const auto& theme : table.themes) {
        bool used_cause = false, used_effect = false;
        for (const auto& r : table.rows) {
            used_cause |= r.cause_theme == theme;
            used_effect |= r.effect_theme == theme;
        }
        if (used_cause && theme != table.cause_reference_theme)
            cause_levels.push_back(theme);
        if (used_effect && theme != table.effect_reference_theme)
            effect_levels.push_back(theme);
    }
    for (const auto& r : table.rows) {
        day_seen[r.day_of_week] = true;
        hour_seen[r.hour_utc] = true;
    }

    std::vector<std::string> names{"(Intercept)"};
    if (f.structure) {
        names.push_back("Cause In-Degree");
        names.push_back("Effect Out-Degree");
    }
    if (f.follower)
        names.push_back("Log Follower Count");
    if (f.structure)
        names.push_back("Transitive Closure");
    if (f.usage) {
        names.push_back("Log of Cumulative Cause Usage");
        names.push_back("Log of Cumulative Effect Usage");
    }
    if (f.cause_themes)
        for (const auto& t : cause_levels)
            names.push_back("Cause Theme: " + t);
    if (f.effect_themes)
        for (const auto& t : effect_levels)
            names.push_back("Effect Theme: " + t);
    if (f.day_of_week)
        for (int d = 1; d < 7; ++d)
            if (day_seen[d])
                names.push_back(std::string("Day: ") + detail::weekday_name(d));
    if (f.hour)
        for (int h = 1; h < 24; ++h)
            if (hour_seen[h]) {
                char buf[16];
                std::snprintf(buf, sizeof buf, "Hour: %02d UTC", h);
                names.push_back(buf);
            }
    if (f.months)
        names.push_back("Num. of Months");

    design d;
    d.names = names;
    d.X = dense_matrix(table.rows.size(), names.size());
    d.y.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& r = table.rows[i];
        d.y.push_back(static_cast<double>(r.y));
        std::size_t c = 0;
        d.X(i, c++) = 1.0;
        if (f.structure) {
            d.X(i, c++) = static_cast<double>(r.cause_in_degree);
            d.X(i, c++) = static_cast<double>(r.effect_out_degree);
        }
        if (f.follower)
            d.X(i, c++) = r.log_follower_count;
        if (f.structure)
            d.X(i, c++) = static_cast<double>(r.transitive_closure);
        if (f.usage) {
            d.X(i, c++) = r.log_cum_cause_usage;
            d.X(i, c++) = r.log_cum_effect_usage;
        }
        if (f.cause_themes)
            for (const auto& t : cause_levels)
                d.X(i, c++) = r.cause_theme == t ? 1.0 : 0.0;
        if (f.effect_themes)
            for (const auto& t : effect_levels)
                d.X(i, c++) = r.effect_theme == t ? 1.0 : 0.0;
        if (f.day_of_week)
            for (int day = 1; day < 7; ++day)
                if (day_seen[day])
                    d.X(i, c++) = r.day_of_week == day ? 1.0 : 0.0;
        if (f.hour)
            for (int h = 1; h < 24; ++h)
                if (hour_seen[h])
                    d.X(i, c++) = r.hour_utc == h ? 1.0 : 0.0;
        if (f.months)
            d.X(i, c++) = static_cast<double>(r.months_elapsed);
    }
    return d;
}

}  // namespace causalnet
