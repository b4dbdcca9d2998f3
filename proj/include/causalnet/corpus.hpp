#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "causalnet/errors.hpp"
#include "causalnet/message.hpp"

namespace causalnet {

enum class corpus_format { jsonl, csv };

struct record_rejection {
    std::size_t line = 0;
    std::string reason;
};

struct load_result {
    message_set set;
    std::vector<record_rejection> rejected;
};

namespace detail {

// RFC 4180 record reader; handles quoted fields, escaped quotes and
// newlines inside quotes. Returns false at end of input.
inline bool read_csv_record(std::istream& in, std::vector<std::string>& fields,
                            std::size_t& line_no) {
    fields.clear();
    int c = in.get();
    if (c == EOF)
        return false;
    std::string field;
    bool quoted = false;
    for (;;) {
        if (c == EOF) {
            fields.push_back(field);
            return true;
        }
        if (quoted) {
            if (c == '"') {
                const int next = in.peek();
                if (next == '"') {
                    field.push_back('"');
                    in.get();
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n')
                    ++line_no;
                field.push_back(static_cast<char>(c));
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else if (c == '\n') {
            ++line_no;
            if (!field.empty() && field.back() == '\r')
                field.pop_back();
            fields.push_back(field);
            return true;
        } else {
            field.push_back(static_cast<char>(c));
        }
        c = in.get();
    }
}

inline bool parse_int64(const std::string& s, std::int64_t& out) {
    const char* b = s.data();
    const char* e = b + s.size();
    auto r = std::from_chars(b, e, out);
    return r.ec == std::errc() && r.ptr == e;
}

struct message_builder {
    // all raw strings; validation shared between jsonl and csv paths
    std::string id, text, timestamp, account_id, role, follower, retrans, is_retrans;
    bool has_id = false, has_text = false, has_timestamp = false, has_account_id = false,
         has_role = false, has_follower = false, has_retrans = false, has_is_retrans = false;

    // returns an error string, or empty on success
    std::string build(message& out) const {
        if (!has_id) return "missing field id";
        if (!has_text) return "missing field text";
        if (!has_timestamp) return "missing field timestamp";
        if (!has_account_id) return "missing field account_id";
        if (!has_role) return "missing field account_role";
        if (!has_follower) return "missing field follower_count";
        if (!has_retrans) return "missing field retransmission_count";
        if (!has_is_retrans) return "missing field is_retransmission";
        if (id.empty()) return "empty id";
        out.id = id;
        out.text = text;
        const auto ts = parse_iso8601(timestamp);
        if (!ts) return "invalid timestamp '" + timestamp + "'";
        out.timestamp = *ts;
        out.account_id = account_id;
        const auto r = role_from_token(role);
        if (!r) return "unknown account_role '" + role + "'";
        out.role = *r;
        if (!parse_int64(follower, out.follower_count) || out.follower_count < 0)
            return "invalid follower_count '" + follower + "'";
        if (!parse_int64(retrans, out.retransmission_count) || out.retransmission_count < 0)
            return "invalid retransmission_count '" + retrans + "'";
        if (is_retrans == "true" || is_retrans == "1")
            out.is_retransmission = true;
        else if (is_retrans == "false" || is_retrans == "0")
            out.is_retransmission = false;
        else
            return "invalid is_retransmission '" + is_retrans + "'";
        return {};
    }
};

}  // namespace detail

inline load_result load_corpus_jsonl(std::istream& in) {
    load_result out;
    std::vector<message> msgs;
    std::unordered_map<std::string, std::size_t> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            out.rejected.push_back({line_no, "malformed json"});
            continue;
        }
        detail::message_builder b;
        auto grab = [&](const char* key, std::string& dst, bool& flag) {
            auto it = j.find(key);
            if (it == j.end())
                return;
            flag = true;
            dst = it->is_string() ? it->get<std::string>() : it->dump();
        };
        grab("id", b.id, b.has_id);
        grab("text", b.text, b.has_text);
        grab("timestamp", b.timestamp, b.has_timestamp);
        grab("account_id", b.account_id, b.has_account_id);
        grab("account_role", b.role, b.has_role);
        grab("follower_count", b.follower, b.has_follower);
        grab("retransmission_count", b.retrans, b.has_retrans);
        grab("is_retransmission", b.is_retrans, b.has_is_retrans);
        message m;
        if (auto err = b.build(m); !err.empty()) {
            out.rejected.push_back({line_no, err});
            continue;
        }
        if (seen.count(m.id)) {
            out.rejected.push_back({line_no, "duplicate id"});
            continue;
        }
        seen.emplace(m.id, msgs.size());
        msgs.push_back(std::move(m));
    }
    out.set = message_set(std::move(msgs));
    return out;
}

inline load_result load_corpus_csv(std::istream& in) {
    static const char* names[8] = {"id",             "text",
                                   "timestamp",      "account_id",
                                   "account_role",   "follower_count",
                                   "retransmission_count", "is_retransmission"};
    load_result out;
    std::vector<std::string> fields;
    std::size_t line_no = 1;
    if (!detail::read_csv_record(in, fields, line_no))
        throw data_error("csv corpus: empty file");
    int col[8];
    for (int k = 0; k < 8; ++k) {
        col[k] = -1;
        for (std::size_t i = 0; i < fields.size(); ++i)
            if (fields[i] == names[k])
                col[k] = static_cast<int>(i);
        if (col[k] < 0)
            throw data_error(std::string("csv corpus: header missing column ") + names[k]);
    }
    std::vector<message> msgs;
    std::unordered_map<std::string, std::size_t> seen;
    while (true) {
        const std::size_t record_line = line_no;
        if (!detail::read_csv_record(in, fields, line_no))
            break;
        if (fields.size() == 1 && fields[0].empty())
            continue;
        detail::message_builder b;
        std::string* dst[8] = {&b.id, &b.text, &b.timestamp, &b.account_id,
                               &b.role, &b.follower, &b.retrans, &b.is_retrans};
        bool* flag[8] = {&b.has_id, &b.has_text, &b.has_timestamp, &b.has_account_id,
                         &b.has_role, &b.has_follower, &b.has_retrans, &b.has_is_retrans};
        bool short_record = false;
        for (int k = 0; k < 8; ++k) {
            if (static_cast<std::size_t>(col[k]) >= fields.size()) {
                out.rejected.push_back({record_line, std::string("missing field ") + names[k]});
                short_record = true;
                break;
            }
            *dst[k] = fields[col[k]];
            *flag[k] = true;
        }
        if (short_record)
            continue;
        message m;
        if (auto err = b.build(m); !err.empty()) {
            out.rejected.push_back({record_line, err});
            continue;
        }
        if (seen.count(m.id)) {
            out.rejected.push_back({record_line, "duplicate id"});
            continue;
        }
        seen.emplace(m.id, msgs.size());
        msgs.push_back(std::move(m));
    }
    out.set = message_set(std::move(msgs));
    return out;
}

inline load_result load_corpus(const std::string& path, corpus_format format) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw data_error("cannot open corpus file: " + path);
    return format == corpus_format::jsonl ? load_corpus_jsonl(in) : load_corpus_csv(in);
}

// Canonical JSONL serialization; fixed key order so load -> write -> load
// round-trips byte-identically.
inline void write_corpus_jsonl(const message_set& set, std::ostream& out) {
    for (const auto& m : set.messages()) {
        nlohmann::ordered_json j;
        j["id"] = m.id;
        j["text"] = m.text;
        j["timestamp"] = format_iso8601(m.timestamp);
        j["account_id"] = m.account_id;
        j["account_role"] = std::string(role_token(m.role));
        j["follower_count"] = m.follower_count;
        j["retransmission_count"] = m.retransmission_count;
        j["is_retransmission"] = m.is_retransmission;
        out << j.dump() << '\n';
    }
}

inline std::string corpus_to_jsonl(const message_set& set) {
    std::ostringstream os;
    write_corpus_jsonl(set, os);
    return os.str();
}

}  // namespace causalnet
