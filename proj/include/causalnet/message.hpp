#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "causalnet/errors.hpp"
#include "causalnet/time.hpp"

namespace causalnet {

enum class account_role { public_health, state_fed_em, local_em, governor, mayor };

inline constexpr int n_account_roles = 5;

inline constexpr account_role all_account_roles[n_account_roles] = {
    account_role::public_health, account_role::state_fed_em, account_role::local_em,
    account_role::governor, account_role::mayor};

inline std::string_view role_token(account_role r) {
    switch (r) {
        case account_role::public_health: return "public_health";
        case account_role::state_fed_em: return "state_fed_em";
        case account_role::local_em: return "local_em";
        case account_role::governor: return "governor";
        case account_role::mayor: return "mayor";
    }
    return "";
}

inline std::string_view role_label(account_role r) {
    switch (r) {
        case account_role::public_health: return "Public Health";
        case account_role::state_fed_em: return "State/Federal EM";
        case account_role::local_em: return "Local EM";
        case account_role::governor: return "Governor";
        case account_role::mayor: return "Mayor";
    }
    return "";
}

inline std::optional<account_role> role_from_token(std::string_view s) {
    for (account_role r : all_account_roles)
        if (role_token(r) == s)
            return r;
    return std::nullopt;
}

struct message {
    std::string id;
    std::string text;
    utc_time timestamp;
    std::string account_id;
    account_role role = account_role::public_health;
    std::int64_t follower_count = 0;
    std::int64_t retransmission_count = 0;
    bool is_retransmission = false;
};

// Immutable after load; ids are unique.
class message_set {
public:
    message_set() = default;
    explicit message_set(std::vector<message> msgs) : messages_(std::move(msgs)) {
        for (std::size_t i = 0; i < messages_.size(); ++i)
            index_.emplace(messages_[i].id, i);
        if (index_.size() != messages_.size())
            throw data_error("message_set: duplicate message id");
    }

    const std::vector<message>& messages() const { return messages_; }
    std::size_t size() const { return messages_.size(); }
    bool empty() const { return messages_.empty(); }

    const message* find(std::string_view id) const {
        auto it = index_.find(std::string(id));
        return it == index_.end() ? nullptr : &messages_[it->second];
    }

private:
    std::vector<message> messages_;
    std::unordered_map<std::string, std::size_t> index_;
};

struct year_month {
    int year = 2020;
    int month = 1;
};

// 1-based month offset from the epoch (default epoch: January 2020).
inline int month_bin(utc_time t, year_month epoch = {2020, 1}) {
    int y, m, d, hh, mm, ss;
    t.civil(y, m, d, hh, mm, ss);
    const int idx = 12 * (y - epoch.year) + (m - epoch.month) + 1;
    if (idx < 1)
        throw data_error("pre-epoch message: " + format_iso8601(t));
    return idx;
}

inline message_set filter_originals(const message_set& set) {
    std::vector<message> kept;
    for (const auto& m : set.messages())
        if (!m.is_retransmission)
            kept.push_back(m);
    return message_set(std::move(kept));
}

}  // namespace causalnet
