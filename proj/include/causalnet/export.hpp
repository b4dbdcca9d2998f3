#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "causalnet/concept_net.hpp"
#include "causalnet/corpus.hpp"
#include "causalnet/errors.hpp"
#include "causalnet/extraction.hpp"
#include "causalnet/features.hpp"
#include "causalnet/lexicon.hpp"
#include "causalnet/pca.hpp"

namespace causalnet {

// All writers here are byte-stable: fixed field order, fixed float
// formatting, no locale dependence.

inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos)
        return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// --- concept networks ----------------------------------------------------

// A stratum with no assertions still gets one zero-weight row so it
// survives the round trip (months or roles without coded units happen).
inline void write_edge_list_csv(const std::vector<concept_net>& nets, std::ostream& out) {
    out << "stratum,cause,effect,weight\n";
    for (const auto& net : nets) {
        const std::string label = net.stratum.label();
        const std::size_t n = net.order();
        bool any = false;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (net.at(i, j) != 0) {
                    out << csv_escape(label) << ',' << csv_escape(net.nodes[i]) << ','
                        << csv_escape(net.nodes[j]) << ',' << net.at(i, j) << '\n';
                    any = true;
                }
        if (!any && n > 0)
            out << csv_escape(label) << ',' << csv_escape(net.nodes[0]) << ','
                << csv_escape(net.nodes[0]) << ",0\n";
    }
}

inline void write_nodes_csv(const std::vector<std::string>& nodes, std::ostream& out) {
    out << "index,concept\n";
    for (std::size_t i = 0; i < nodes.size(); ++i)
        out << i << ',' << csv_escape(nodes[i]) << '\n';
}

inline void write_degree_csv(const std::vector<degree_row>& rows, std::ostream& out) {
    out << "concept,out_degree,in_degree,net_degree\n";
    for (const auto& r : rows)
        out << csv_escape(r.concept_name) << ',' << r.out_degree << ',' << r.in_degree << ','
            << r.net_degree << '\n';
}

// DOT rendering with edge width proportional to weight.
inline void write_dot(const concept_net& net, std::ostream& out) {
    out << "digraph \"" << net.stratum.label() << "\" {\n";
    out << "  rankdir=LR;\n  node [shape=box, style=rounded];\n";
    const std::size_t n = net.order();
    std::int64_t wmax = 1;
    for (auto w : net.weights)
        wmax = std::max(wmax, w);
    for (std::size_t i = 0; i < n; ++i)
        out << "  n" << i << " [label=\"" << net.nodes[i] << "\"];\n";
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (net.at(i, j) != 0) {
                const double pen =
                    0.5 + 4.5 * static_cast<double>(net.at(i, j)) / static_cast<double>(wmax);
                char penbuf[24];
                std::snprintf(penbuf, sizeof penbuf, "%.3f", pen);
                out << "  n" << i << " -> n" << j << " [label=\"" << net.at(i, j)
                    << "\", penwidth=" << penbuf << "];\n";
            }
    out << "}\n";
}

// stratum label -> stratum_id (inverse of stratum_id::label)
inline stratum_id parse_stratum_label(const std::string& label) {
    stratum_id id;
    if (label == "total") {
        id.kind = stratum_kind::total;
        return id;
    }
    if (label.rfind("month_", 0) == 0) {
        id.kind = stratum_kind::month;
        id.month = std::atoi(label.c_str() + 6);
        if (id.month < 1)
            throw data_error("bad month stratum label: " + label);
        return id;
    }
    if (auto r = role_from_token(label)) {
        id.kind = stratum_kind::role;
        id.role = *r;
        return id;
    }
    id.kind = stratum_kind::role_group;
    id.group = label;
    return id;
}

// Reads networks back from the edge-list CSV; `nodes` supplies the full
// concept list so isolates survive the round trip.
inline std::vector<concept_net> read_edge_list_csv(std::istream& in,
                                                   const std::vector<std::string>& nodes) {
    std::map<std::string, std::size_t> node_index;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        node_index.emplace(nodes[i], i);
    std::vector<concept_net> nets;
    std::vector<std::string> fields;
    std::size_t line_no = 1;
    if (!detail::read_csv_record(in, fields, line_no) || fields.size() != 4 ||
        fields[0] != "stratum")
        throw data_error("edge list csv: bad header");
    while (detail::read_csv_record(in, fields, line_no)) {
        if (fields.size() == 1 && fields[0].empty())
            continue;
        if (fields.size() != 4)
            throw data_error("edge list csv: bad record near line " + std::to_string(line_no));
        concept_net* net = nullptr;
        for (auto& g : nets)
            if (g.stratum.label() == fields[0])
                net = &g;
        if (!net) {
            nets.emplace_back(nodes, parse_stratum_label(fields[0]));
            net = &nets.back();
        }
        const auto ci = node_index.find(fields[1]);
        const auto ei = node_index.find(fields[2]);
        if (ci == node_index.end() || ei == node_index.end())
            throw data_error("edge list csv: unknown concept near line " +
                             std::to_string(line_no));
        std::int64_t w = 0;
        if (!detail::parse_int64(fields[3], w))
            throw data_error("edge list csv: bad weight near line " + std::to_string(line_no));
        net->at(ci->second, ei->second) = w;
    }
    return nets;
}

inline std::vector<std::string> read_nodes_csv(std::istream& in) {
    std::vector<std::string> nodes;
    std::vector<std::string> fields;
    std::size_t line_no = 1;
    if (!detail::read_csv_record(in, fields, line_no) || fields.size() != 2 ||
        fields[1] != "concept")
        throw data_error("nodes csv: bad header");
    while (detail::read_csv_record(in, fields, line_no)) {
        if (fields.size() == 1 && fields[0].empty())
            continue;
        if (fields.size() != 2)
            throw data_error("nodes csv: bad record");
        nodes.push_back(fields[1]);
    }
    return nodes;
}

// --- causal units ---------------------------------------------------------

inline void write_units_jsonl(const std::vector<causal_unit>& units, std::ostream& out) {
    for (const auto& u : units) {
        nlohmann::ordered_json j;
        j["message_id"] = u.message_id;
        j["connective"] = std::string(connective_token(u.kind));
        j["cause_text"] = u.cause_text;
        j["effect_text"] = u.effect_text;
        j["connective_offset"] = u.connective_offset;
        j["connective_literal"] = u.connective_literal;
        nlohmann::ordered_json flags = nlohmann::ordered_json::array();
        if (u.multi_connective)
            flags.push_back("multi_connective");
        j["flags"] = flags;
        out << j.dump() << '\n';
    }
}

inline std::vector<causal_unit> read_units_jsonl(std::istream& in) {
    std::vector<causal_unit> units;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw data_error("units jsonl: malformed json on line " + std::to_string(line_no));
        causal_unit u;
        u.message_id = j.at("message_id").get<std::string>();
        const auto kind = connective_from_token(j.at("connective").get<std::string>());
        if (!kind)
            throw data_error("units jsonl: unknown connective on line " +
                             std::to_string(line_no));
        u.kind = *kind;
        u.cause_text = j.at("cause_text").get<std::string>();
        u.effect_text = j.at("effect_text").get<std::string>();
        u.connective_offset = j.value("connective_offset", std::size_t{0});
        u.connective_literal = j.value("connective_literal", std::string{});
        if (j.contains("flags"))
            for (const auto& f : j["flags"])
                if (f == "multi_connective")
                    u.multi_connective = true;
        units.push_back(std::move(u));
    }
    return units;
}

inline void write_coded_units_jsonl(const std::vector<coded_unit>& units, std::ostream& out) {
    for (const auto& c : units) {
        nlohmann::ordered_json j;
        j["message_id"] = c.unit.message_id;
        j["connective"] = std::string(connective_token(c.unit.kind));
        j["cause_text"] = c.unit.cause_text;
        j["effect_text"] = c.unit.effect_text;
        j["connective_offset"] = c.unit.connective_offset;
        j["connective_literal"] = c.unit.connective_literal;
        j["cause_concept"] = c.cause_concept;
        j["effect_concept"] = c.effect_concept;
        j["cause_theme"] = c.cause_theme;
        j["effect_theme"] = c.effect_theme;
        nlohmann::ordered_json flags = nlohmann::ordered_json::array();
        if (c.unit.multi_connective)
            flags.push_back("multi_connective");
        j["flags"] = flags;
        out << j.dump() << '\n';
    }
}

inline std::vector<coded_unit> read_coded_units_jsonl(std::istream& in) {
    std::vector<coded_unit> out_units;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw data_error("coded units jsonl: malformed json on line " +
                             std::to_string(line_no));
        coded_unit c;
        c.unit.message_id = j.at("message_id").get<std::string>();
        const auto kind = connective_from_token(j.at("connective").get<std::string>());
        if (!kind)
            throw data_error("coded units jsonl: unknown connective on line " +
                             std::to_string(line_no));
        c.unit.kind = *kind;
        c.unit.cause_text = j.at("cause_text").get<std::string>();
        c.unit.effect_text = j.at("effect_text").get<std::string>();
        c.unit.connective_offset = j.value("connective_offset", std::size_t{0});
        c.unit.connective_literal = j.value("connective_literal", std::string{});
        if (j.contains("flags"))
            for (const auto& f : j["flags"])
                if (f == "multi_connective")
                    c.unit.multi_connective = true;
        c.cause_concept = j.at("cause_concept").get<std::string>();
        c.effect_concept = j.at("effect_concept").get<std::string>();
        c.cause_theme = j.at("cause_theme").get<std::string>();
        c.effect_theme = j.at("effect_theme").get<std::string>();
        out_units.push_back(std::move(c));
    }
    return out_units;
}

// --- PCA ------------------------------------------------------------------

inline void write_matrix_csv(const dense_matrix& m, const std::vector<std::string>& row_labels,
                             const std::vector<std::string>& col_labels, std::ostream& out) {
    out << "";
    for (const auto& c : col_labels)
        out << ',' << csv_escape(c);
    out << '\n';
    for (std::size_t i = 0; i < m.rows; ++i) {
        out << csv_escape(row_labels[i]);
        for (std::size_t j = 0; j < m.cols; ++j)
            out << ',' << format_double(m(i, j));
        out << '\n';
    }
}

inline void write_eigenvalues_csv(const std::vector<double>& values, std::ostream& out) {
    out << "component,eigenvalue\n";
    for (std::size_t k = 0; k < values.size(); ++k)
        out << (k + 1) << ',' << format_double(values[k]) << '\n';
}

inline void write_score_graph_csv(const score_graph& sg, std::ostream& out) {
    out << "cause,effect,weight\n";
    const std::size_t n = sg.nodes.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (sg.weights(i, j) != 0.0)
                out << csv_escape(sg.nodes[i]) << ',' << csv_escape(sg.nodes[j]) << ','
                    << format_double(sg.weights(i, j)) << '\n';
}

inline void write_score_graph_dot(const score_graph& sg, std::ostream& out) {
    out << "digraph \"" << sg.label << "\" {\n";
    out << "  rankdir=LR;\n  node [shape=box, style=rounded];\n";
    const std::size_t n = sg.nodes.size();
    double wmax = 0.0;
    for (double w : sg.weights.a)
        wmax = std::max(wmax, std::fabs(w));
    if (wmax == 0.0)
        wmax = 1.0;
    for (std::size_t i = 0; i < n; ++i)
        out << "  n" << i << " [label=\"" << sg.nodes[i] << "\"];\n";
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double w = sg.weights(i, j);
            if (w == 0.0)
                continue;
            char penbuf[24];
            std::snprintf(penbuf, sizeof penbuf, "%.3f", 0.5 + 4.5 * std::fabs(w) / wmax);
            out << "  n" << i << " -> n" << j << " [label=\"" << format_double(w)
                << "\", penwidth=" << penbuf << (w < 0.0 ? ", style=dashed" : "") << "];\n";
        }
    out << "}\n";
}

// --- features ---------------------------------------------------------------

inline void write_features_csv(const feature_table& table, std::ostream& out) {
    out << "message_id,y,cause_in_degree,effect_out_degree,transitive_closure,"
           "log_cum_cause_usage,log_cum_effect_usage,cause_theme,effect_theme,"
           "log_follower_count,day_of_week,hour_utc,months_elapsed\n";
    for (const auto& r : table.rows)
        out << csv_escape(r.message_id) << ',' << r.y << ',' << r.cause_in_degree << ','
            << r.effect_out_degree << ',' << r.transitive_closure << ','
            << format_double(r.log_cum_cause_usage) << ','
            << format_double(r.log_cum_effect_usage) << ',' << csv_escape(r.cause_theme) << ','
            << csv_escape(r.effect_theme) << ',' << format_double(r.log_follower_count) << ','
            << r.day_of_week << ',' << r.hour_utc << ',' << r.months_elapsed << '\n';
}

// --- small file helpers -----------------------------------------------------

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw data_error("cannot write file: " + path);
    out << content;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw data_error("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace causalnet
