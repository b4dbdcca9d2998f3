#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "causalnet/message.hpp"
#include "causalnet/rng.hpp"

namespace causalnet {

// Seeded synthetic-corpus generator for tests and demos. Narrative
// frequencies, account roles, the 15-month window and the NB
// retransmission process are all planted; texts are built from phrase
// pools that the bundled demo lexicon codes deterministically.

struct synth_options {
    std::uint64_t seed = 42;
    std::size_t n_messages = 2000;
    int months = 15;  // January 2020 onward
    double theta = 0.6;
    double retweet_share = 0.20;
    double no_connective_share = 0.12;
    double sentence_initial_share = 0.05;
    double multi_connective_share = 0.04;
    double uncodable_share = 0.05;
};

namespace synth_detail {

struct phrase_pool {
    const char* concept_name;
    std::vector<const char*> cause;   // phrases that code to this concept on the cause side
    std::vector<const char*> effect;  // ... on the effect side
};

inline const std::vector<phrase_pool>& pools() {
    static const std::vector<phrase_pool> p = {
        {"Primary Threat",
         {"COVID-19", "#COVID19", "the coronavirus", "the ongoing pandemic"},
         {"COVID-19 concerns remain", "the pandemic continues"}},
        {"Susceptibility",
         {"the increased risk of infection for seniors"},
         {"older residents are at risk", "nursing home residents are at risk"}},
        {"Severity/Impact",
         {"rising hospitalizations", "case rates three times higher than average"},
         {"case rates are climbing fast", "hospitalizations are rising"}},
        {"Testing",
         {"limitations in testing opportunities", "limited testing capacity"},
         {"testing capacity is stretched thin"}},
        {"Deaths",
         {},
         {"we mourn 18 new deaths", "additional deaths were reported today",
          "the county reported more deaths"}},
        {"Losses",
         {},
         {"many residents are losing their livelihoods", "families lost so much this year"}},
        {"Actions/Efficacy",
         {"the #COVID19 response"},
         {"please practice social distancing", "we ask everyone to wear masks",
          "wash your hands and keep your distance"}},
        {"Vaccination",
         {"limited vaccine supply"},
         {"vaccination appointments are filling up"}},
        {"Travel", {}, {"travel will be very difficult this weekend"}},
        {"Restrictions",
         {"new restrictions on indoor dining"},
         {"restrictions on gatherings remain in place"}},
        {"Isolate",
         {"crowded informal gatherings"},
         {"please avoid informal gatherings", "quarantine is required after arrival"}},
        {"Spread",
         {"known exposure to a positive case", "community transmission"},
         {"further spread is likely"}},
        {"Economic Impacts",
         {"the economic downturn", "an economic crisis"},
         {"the local economy is still reeling"}},
        {"Financial Struggle",
         {"mounting financial hardship"},
         {"many residents are struggling to pay rent or utilities",
          "families face financial hardship"}},
        {"Need Assistance",
         {},
         {"call 211 if you need help", "apply to our assistance programs"}},
        {"Provide Assistance",
         {},
         {"additional counties were approved for disaster relief"}},
        {"Data",
         {"a backlog of 2,000 test results", "a data reporting outage"},
         {"test results are arriving slowly"}},
        {"Disruptions",
         {"widespread closures"},
         {"the community center will be closed tomorrow", "city offices remain closed",
          "trash pickup is delayed this week", "the council meeting is postponed",
          "tomorrow's clinic hours have changed"}},
        {"Change of Mode",
         {},
         {"this year we met virtually", "court hearings moved to an online format"}},
        {"Official Response",
         {"the statewide mandates"},
         {"the governor declared a state of emergency", "a new executive order takes effect"}},
        {"Mental",
         {"pandemic stress"},
         {"coping with the stress can be hard", "anxiety is rising in our community"}},
        {"Food",
         {"food insecurity"},
         {"food banks are seeing record demand"}},
        {"Blood",
         {"the regional blood shortage"},
         {"there continues to be a shortage of blood"}},
        {"Weather",
         {"severe weather", "the incoming storm", "heavy rains", "freezing temperatures",
          "weather conditions"},
         {"flash flooding is expected downtown", "severe weather is expected overnight"}},
        {"Infrastructure",
         {"widespread power outages", "burst water pipes"},
         {"power outages continue across the county"}},
        {"Preparedness",
         {},
         {"make an emergency plan today", "prepare your go-kit now"}},
        {"Traffic",
         {"a serious collision on I-95", "icy roadways"},
         {"expect heavy traffic on the east side"}},
        {"Illness/Injury",
         {"seasonal flu", "a broken bone or severe injury"},
         {"injuries were reported at the scene"}},
        {"Non-COVID Deaths",
         {"a non-COVID related death investigation"},
         {}},
        {"Drugs",
         {"a spike in opioid overdoses"},
         {"overdoses are rising regionally"}},
        {"Other Secondary Threats",
         {"a sewage spill", "hazardous conditions near the port"},
         {"hazardous conditions persist downtown"}},
        {"Gratitude",
         {"the generosity of our supporters"},
         {"we are grateful beyond words"}},
        {"Resilience",
         {},
         {"our community is resilient", "our state is a better place"}},
        {"Challenges",
         {"unprecedented challenges"},
         {"restaurants faced unprecedented challenges"}},
        {"Demographics",
         {"their sexual orientation and/or gender identity"},
         {}},
        {"You", {"you and your family"}, {}},
        {"Other Actors", {"neighbors helping them"}, {}},
        {"Events",
         {"protests downtown", "the Independence Day holiday"},
         {}},
        {"Off-Topic",
         {"improper firework disposal"},
         {"fireworks are prohibited in city parks"}},
    };
    return p;
}

struct narrative {
    const char* cause;
    const char* effect;
    int weight;
};

// Planted narrative mix; the five heaviest pairs mirror the shares found
// in crisis-agency discourse (weather/threat-driven disruptions on top).
inline const std::vector<narrative>& narrative_pool() {
    static const std::vector<narrative> p = {
        {"Weather", "Disruptions", 133},
        {"Primary Threat", "Disruptions", 83},
        {"Primary Threat", "Financial Struggle", 50},
        {"Weather", "Weather", 45},
        {"Primary Threat", "Deaths", 42},
        {"Primary Threat", "Actions/Efficacy", 25},
        {"Primary Threat", "Severity/Impact", 22},
        {"Primary Threat", "Mental", 20},
        {"Primary Threat", "Economic Impacts", 20},
        {"Primary Threat", "Need Assistance", 18},
        {"Primary Threat", "Official Response", 16},
        {"Weather", "Infrastructure", 15},
        {"Illness/Injury", "Disruptions", 14},
        {"Primary Threat", "Travel", 12},
        {"Primary Threat", "Losses", 12},
        {"Primary Threat", "Isolate", 12},
        {"Weather", "Traffic", 12},
        {"Primary Threat", "Change of Mode", 10},
        {"Primary Threat", "Challenges", 10},
        {"Traffic", "Disruptions", 10},
        {"Primary Threat", "Blood", 8},
        {"Testing", "Disruptions", 8},
        {"Illness/Injury", "Susceptibility", 8},
        {"Infrastructure", "Disruptions", 8},
        {"Events", "Disruptions", 8},
        {"Weather", "Preparedness", 6},
        {"Spread", "Isolate", 6},
        {"Economic Impacts", "Financial Struggle", 6},
        {"Financial Struggle", "Need Assistance", 6},
        {"Severity/Impact", "Official Response", 6},
        {"Primary Threat", "Restrictions", 6},
        {"Other Secondary Threats", "Disruptions", 6},
        {"Data", "Disruptions", 6},
        {"Spread", "Official Response", 5},
        {"Isolate", "Spread", 4},
        {"Financial Struggle", "Economic Impacts", 4},
        {"Mental", "Losses", 3},
        {"Drugs", "Losses", 5},
        {"Food", "Need Assistance", 5},
        {"Restrictions", "Economic Impacts", 5},
        {"Vaccination", "Actions/Efficacy", 5},
        {"Challenges", "Resilience", 5},
        {"Demographics", "Susceptibility", 5},
        {"Susceptibility", "Actions/Efficacy", 5},
        {"Events", "Traffic", 5},
        {"Losses", "Mental", 4},
        {"Disruptions", "Challenges", 4},
        {"Gratitude", "Resilience", 4},
        {"You", "Resilience", 4},
        {"Other Actors", "Provide Assistance", 4},
        {"Non-COVID Deaths", "Losses", 3},
        {"Blood", "Need Assistance", 3},
        {"Mental", "Challenges", 3},
        {"Off-Topic", "Disruptions", 3},
        {"Travel", "Spread", 3},
    };
    return p;
}

// pre-pandemic months re-draw from the weather / everyday-hazard subset
inline const std::vector<narrative>& early_pool() {
    static const std::vector<narrative> p = {
        {"Weather", "Disruptions", 40},
        {"Weather", "Weather", 12},
        {"Weather", "Traffic", 10},
        {"Illness/Injury", "Disruptions", 12},
        {"Illness/Injury", "Susceptibility", 6},
        {"Traffic", "Disruptions", 8},
        {"Infrastructure", "Disruptions", 5},
        {"Events", "Disruptions", 5},
    };
    return p;
}

inline const std::vector<const char*>& cause_phrases(const std::string& concept_name) {
    for (const auto& pool : pools())
        if (concept_name == pool.concept_name)
            return pool.cause;
    throw std::logic_error("synthetic: no cause phrases for " + concept_name);
}

inline const std::vector<const char*>& effect_phrases(const std::string& concept_name) {
    for (const auto& pool : pools())
        if (concept_name == pool.concept_name)
            return pool.effect;
    throw std::logic_error("synthetic: no effect phrases for " + concept_name);
}

inline const narrative& pick_narrative(rng_t& rng, const std::vector<narrative>& pool) {
    std::int64_t total = 0;
    for (const auto& n : pool)
        total += n.weight;
    std::int64_t r = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(total)));
    for (const auto& n : pool) {
        r -= n.weight;
        if (r < 0)
            return n;
    }
    return pool.back();
}

// mild planted engagement bumps by concept, in log-mean units
inline double planted_bump(const std::string& cause, const std::string& effect) {
    double b = 0.0;
    if (effect == "Resilience" || effect == "Challenges")
        b += 1.0;
    if (effect == "Official Response")
        b += 0.5;
    if (effect == "Financial Struggle" || effect == "Need Assistance")
        b += 0.3;
    if (cause == "Primary Threat")
        b += 0.2;
    if (effect == "Data")
        b -= 0.8;
    return b;
}

}  // namespace synth_detail

inline message_set generate_synthetic_corpus(const synth_options& opt = {}) {
    using namespace synth_detail;
    rng_t rng(opt.seed);

    struct account {
        std::string id;
        account_role role;
        std::int64_t followers;
    };
    std::vector<account> accounts;
    const char* prefixes[n_account_roles] = {"ph", "sfem", "lem", "gov", "mayor"};
    const double follower_scale[n_account_roles] = {9.0, 9.5, 8.0, 11.0, 10.0};
    for (int r = 0; r < n_account_roles; ++r)
        for (int k = 0; k < 8; ++k) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%s%02d", prefixes[r], k + 1);
            const double lf = follower_scale[r] + 0.8 * rng.normal();
            accounts.push_back({buf, all_account_roles[r],
                                static_cast<std::int64_t>(std::floor(std::exp(lf)))});
        }

    static const std::vector<const char*> fillers = {
        "Stay safe this weekend!",
        "Visit our website for the latest updates.",
        "Join us for tomorrow's community call.",
        "Thank you to all of our frontline workers.",
        "Reminder: our phone lines are open weekdays.",
    };
    static const std::vector<const char*> tails = {
        "", "", " More info at example.org/updates.", " Please share.", " Updates to follow.",
    };

    std::vector<message> msgs;
    msgs.reserve(opt.n_messages);
    for (std::size_t i = 0; i < opt.n_messages; ++i) {
        const account& acct = accounts[rng.below(accounts.size())];
        const int month0 = static_cast<int>(rng.below(static_cast<std::uint64_t>(opt.months)));
        const int year = 2020 + month0 / 12;
        const int month = 1 + month0 % 12;
        const int day = 1 + static_cast<int>(rng.below(28));
        const int hour = static_cast<int>(rng.below(24));
        const int minute = static_cast<int>(rng.below(60));
        const int second = static_cast<int>(rng.below(60));

        message m;
        char idbuf[24];
        std::snprintf(idbuf, sizeof idbuf, "m%06zu", i + 1);
        m.id = idbuf;
        m.timestamp = make_utc(year, month, day, hour, minute, second);
        m.account_id = acct.id;
        m.role = acct.role;
        m.follower_count = acct.followers;
        m.is_retransmission = rng.real01() < opt.retweet_share;

        const double kind = rng.real01();
        double bump = 0.0;
        if (kind < opt.no_connective_share) {
            m.text = fillers[rng.below(fillers.size())];
        } else {
            const auto& pool = month0 < 2 ? early_pool() : narrative_pool();
            const narrative& narr = pick_narrative(rng, pool);
            const char* connectives[3] = {"due to", "because of", "caused by"};
            const double cr = rng.real01();
            const char* conn = connectives[cr < 0.70 ? 0 : (cr < 0.90 ? 1 : 2)];
            std::string cause = cause_phrases(narr.cause).empty()
                                    ? "COVID-19"
                                    : cause_phrases(narr.cause)[rng.below(
                                          cause_phrases(narr.cause).size())];
            std::string effect = effect_phrases(narr.effect).empty()
                                     ? "city offices remain closed"
                                     : effect_phrases(narr.effect)[rng.below(
                                           effect_phrases(narr.effect).size())];
            const double shape = rng.real01();
            if (kind < opt.no_connective_share + opt.sentence_initial_share) {
                std::string conn_cap(conn);
                conn_cap[0] = static_cast<char>(conn_cap[0] - 'a' + 'A');
                m.text = conn_cap + " " + cause + ", " + effect + ".";
            } else if (shape < opt.multi_connective_share /
                                   (1.0 - opt.no_connective_share - opt.sentence_initial_share)) {
                const auto& alts = cause_phrases(narr.cause);
                const std::string cause2 =
                    alts.size() > 1 ? alts[(rng.below(alts.size() - 1) + 1)] : cause;
                m.text = effect + " " + conn + " " + cause + " because of " + cause2 + ".";
            } else {
                bool uncodable = rng.real01() < opt.uncodable_share;
                if (uncodable && rng.below(2) == 0)
                    cause = "the quarterly frobnicator review";
                else if (uncodable)
                    effect = "the xyzzy committee will reconvene";
                m.text = effect + " " + conn + " " + cause + tails[rng.below(tails.size())];
            }
            bump = planted_bump(narr.cause, narr.effect);
        }
        if (m.is_retransmission)
            m.text = "RT @" + acct.id + ": " + m.text;

        const double log_mu = -4.2 + 0.75 * std::log1p(static_cast<double>(m.follower_count)) +
                              bump - 0.05 * static_cast<double>(month0);
        const double mu = std::exp(std::min(log_mu, 9.0));
        m.retransmission_count = rng.negative_binomial(mu, opt.theta);
        msgs.push_back(std::move(m));
    }
    return message_set(std::move(msgs));
}

}  // namespace causalnet
