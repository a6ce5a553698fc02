#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "verivote/group.hpp"
#include "verivote/hash.hpp"
#include "verivote/shamir.hpp"

namespace verivote::election {

// One eligible voter as published: the display identity (real name or
// pseudonym) and a digest of the credential that authorizes casting.
struct RosterEntry {
    std::string identity;
    std::string credential_digest;

    bool operator==(const RosterEntry&) const = default;
};

struct ElectionConfig {
    std::string election_id;
    std::string group_name = "toy";
    std::vector<std::string> candidates;
    unsigned max_selections = 1;
    shamir::SharingPolicy policy{1, 1};
    bool pseudonyms = false;
    std::vector<RosterEntry> roster;
};

inline std::string pseudonym(const std::string& election_id,
                             const std::string& identity) {
    Bytes buf;
    append_field(buf, "pseudonym");
    append_field(buf, election_id);
    append_field(buf, identity);
    return "P" + sha256_hex(buf).substr(0, 16);
}

inline std::string display_identity(bool pseudonyms,
                                    const std::string& election_id,
                                    const std::string& identity) {
    return pseudonyms ? pseudonym(election_id, identity) : identity;
}

// Digest binds the credential to this election and this voter, so a
// leaked digest can't be replayed for another entry.
inline std::string credential_digest(const std::string& election_id,
                                     const std::string& display_id,
                                     const std::string& credential) {
    Bytes buf;
    append_field(buf, "credential");
    append_field(buf, election_id);
    append_field(buf, display_id);
    append_field(buf, credential);
    return sha256_hex(buf);
}

inline std::string roster_digest(const std::vector<RosterEntry>& roster) {
    Bytes buf;
    append_field(buf, "roster");
    for (const auto& entry : roster) {
        append_field(buf, entry.identity);
        append_field(buf, entry.credential_digest);
    }
    return sha256_hex(buf);
}

inline const RosterEntry* find_roster(const std::vector<RosterEntry>& roster,
                                      const std::string& display_id) {
    auto it = std::find_if(
        roster.begin(), roster.end(),
        [&](const RosterEntry& e) { return e.identity == display_id; });
    return it == roster.end() ? nullptr : &*it;
}

inline void validate_config(const ElectionConfig& config) {
    if (config.election_id.empty())
        throw std::invalid_argument("election id empty");
    if (config.candidates.empty())
        throw std::invalid_argument("no candidates");
    std::set<std::string> names(config.candidates.begin(),
                                config.candidates.end());
    if (names.size() != config.candidates.size())
        throw std::invalid_argument("duplicate candidate");
    if (config.max_selections < 1 ||
        config.max_selections > config.candidates.size())
        throw std::invalid_argument("max_selections out of range");
    shamir::check_policy(config.policy);
    std::set<std::string> ids;
    for (const auto& entry : config.roster)
        if (!ids.insert(entry.identity).second)
            throw std::invalid_argument("duplicate roster identity: " +
                                        entry.identity);
    group_by_name(config.group_name);
}

}  // namespace verivote::election
