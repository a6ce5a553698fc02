#pragma once

#include <json.hpp>

#include "verivote/board.hpp"

// JSON wire formats. Everything numeric that can exceed 64 bits travels
// as a decimal string. nlohmann objects keep keys sorted, so dump() of
// equal values is byte-identical; the board file relies on that.
namespace verivote::serde {

using nlohmann::json;

inline std::string num(const mpz_class& v) { return to_decimal(v); }
inline mpz_class num(const json& j) { return from_decimal(j.get<std::string>()); }

// ---- group ----

inline json encode(const GroupParams& p) {
    return json{{"p", num(p.p)}, {"q", num(p.q)}, {"g", num(p.g)}};
}

inline GroupParams decode_group(const json& j) {
    return GroupParams{num(j.at("p")), num(j.at("q")), num(j.at("g"))};
}

// ---- elgamal / proofs ----

inline json encode(const elgamal::Ciphertext& ct) {
    return json{{"a", num(ct.a.v)}, {"b", num(ct.b.v)}};
}

inline elgamal::Ciphertext decode_ciphertext(const json& j) {
    return elgamal::Ciphertext{GroupElement{num(j.at("a"))},
                               GroupElement{num(j.at("b"))}};
}

inline json encode(const proofs::ZeroOneProof& pf) {
    return json{{"a0", num(pf.a0.v)}, {"b0", num(pf.b0.v)},
                {"a1", num(pf.a1.v)}, {"b1", num(pf.b1.v)},
                {"c0", num(pf.c0.v)}, {"c1", num(pf.c1.v)},
                {"f0", num(pf.f0.v)}, {"f1", num(pf.f1.v)}};
}

inline proofs::ZeroOneProof decode_zero_one_proof(const json& j) {
    proofs::ZeroOneProof pf;
    pf.a0.v = num(j.at("a0"));
    pf.b0.v = num(j.at("b0"));
    pf.a1.v = num(j.at("a1"));
    pf.b1.v = num(j.at("b1"));
    pf.c0.v = num(j.at("c0"));
    pf.c1.v = num(j.at("c1"));
    pf.f0.v = num(j.at("f0"));
    pf.f1.v = num(j.at("f1"));
    return pf;
}

inline json encode(const proofs::DecryptionProof& pf) {
    return json{{"t_g", num(pf.t_g.v)},
                {"t_a", num(pf.t_a.v)},
                {"c", num(pf.c.v)},
                {"f", num(pf.f.v)}};
}

inline proofs::DecryptionProof decode_decryption_proof(const json& j) {
    proofs::DecryptionProof pf;
    pf.t_g.v = num(j.at("t_g"));
    pf.t_a.v = num(j.at("t_a"));
    pf.c.v = num(j.at("c"));
    pf.f.v = num(j.at("f"));
    return pf;
}

// ---- trustees ----

inline json encode(const trustees::VerificationKey& k) {
    return json{{"index", k.index}, {"v", num(k.v.v)}};
}

inline trustees::VerificationKey decode_verification_key(const json& j) {
    return trustees::VerificationKey{j.at("index").get<unsigned>(),
                                     GroupElement{num(j.at("v"))}};
}

inline json encode(const shamir::SharingPolicy& p) {
    return json{{"k", p.k}, {"n", p.n}};
}

inline shamir::SharingPolicy decode_policy(const json& j) {
    return shamir::SharingPolicy{j.at("k").get<unsigned>(),
                                 j.at("n").get<unsigned>()};
}

// Trustee key file: the one secret-bearing artifact in an election dir.
inline json encode_trustee_key(const std::string& election_id,
                               const trustees::TrusteeKey& key) {
    return json{{"election_id", election_id},
                {"index", key.index},
                {"x", num(key.x.v)},
                {"v", num(key.v.v)}};
}

inline trustees::TrusteeKey decode_trustee_key(const json& j) {
    trustees::TrusteeKey key;
    key.index = j.at("index").get<unsigned>();
    key.x.v = num(j.at("x"));
    key.v.v = num(j.at("v"));
    return key;
}

inline json encode(const trustees::DecryptionShare& s) {
    return json{{"index", s.index},
                {"share", num(s.share.v)},
                {"proof", encode(s.proof)}};
}

inline trustees::DecryptionShare decode_share(const json& j) {
    trustees::DecryptionShare s;
    s.index = j.at("index").get<unsigned>();
    s.share.v = num(j.at("share"));
    s.proof = decode_decryption_proof(j.at("proof"));
    return s;
}

// ---- roster / public record ----

inline json encode(const election::RosterEntry& e) {
    return json{{"identity", e.identity},
                {"credential_digest", e.credential_digest}};
}

inline election::RosterEntry decode_roster_entry(const json& j) {
    return election::RosterEntry{j.at("identity").get<std::string>(),
                                 j.at("credential_digest").get<std::string>()};
}

inline json encode(const board::PublicRecord& rec) {
    json vkeys = json::array();
    for (const auto& k : rec.verification_keys) vkeys.push_back(encode(k));
    json roster = json::array();
    for (const auto& e : rec.config.roster) roster.push_back(encode(e));
    return json{{"election_id", rec.config.election_id},
                {"group_name", rec.config.group_name},
                {"group", encode(rec.group)},
                {"h", num(rec.h.v)},
                {"verification_keys", vkeys},
                {"policy", encode(rec.config.policy)},
                {"candidates", rec.config.candidates},
                {"max_selections", rec.config.max_selections},
                {"pseudonyms", rec.config.pseudonyms},
                {"roster", roster},
                {"roster_digest", rec.roster_digest}};
}

inline board::PublicRecord decode_public_record(const json& j) {
    board::PublicRecord rec;
    rec.config.election_id = j.at("election_id").get<std::string>();
    rec.config.group_name = j.at("group_name").get<std::string>();
    rec.group = decode_group(j.at("group"));
    rec.h.v = num(j.at("h"));
    for (const auto& k : j.at("verification_keys"))
        rec.verification_keys.push_back(decode_verification_key(k));
    rec.config.policy = decode_policy(j.at("policy"));
    rec.config.candidates =
        j.at("candidates").get<std::vector<std::string>>();
    rec.config.max_selections = j.at("max_selections").get<unsigned>();
    rec.config.pseudonyms = j.at("pseudonyms").get<bool>();
    for (const auto& e : j.at("roster"))
        rec.config.roster.push_back(decode_roster_entry(e));
    rec.roster_digest = j.at("roster_digest").get<std::string>();
    return rec;
}

// ---- board records (one JSON object per JSONL line) ----

inline json encode_header_record(const board::BoardHeader& h) {
    json vkeys = json::array();
    for (const auto& k : h.verification_keys) vkeys.push_back(encode(k));
    return json{{"type", "header"},
                {"election_id", h.election_id},
                {"group", encode(h.group)},
                {"h", num(h.h.v)},
                {"verification_keys", vkeys},
                {"policy", encode(h.policy)},
                {"candidates", h.candidates},
                {"max_selections", h.max_selections},
                {"pseudonyms", h.pseudonyms},
                {"roster_digest", h.roster_digest},
                {"seed", h.seed}};
}

inline board::BoardHeader decode_header_record(const json& j) {
    board::BoardHeader h;
    h.election_id = j.at("election_id").get<std::string>();
    h.group = decode_group(j.at("group"));
    h.h.v = num(j.at("h"));
    for (const auto& k : j.at("verification_keys"))
        h.verification_keys.push_back(decode_verification_key(k));
    h.policy = decode_policy(j.at("policy"));
    h.candidates = j.at("candidates").get<std::vector<std::string>>();
    h.max_selections = j.at("max_selections").get<unsigned>();
    h.pseudonyms = j.at("pseudonyms").get<bool>();
    h.roster_digest = j.at("roster_digest").get<std::string>();
    h.seed = j.at("seed").get<std::string>();
    return h;
}

inline json encode_entry_record(const board::BoardEntry& e) {
    json cts = json::array();
    for (const auto& ct : e.ciphertexts) cts.push_back(encode(ct));
    json pfs = json::array();
    for (const auto& pf : e.proofs) pfs.push_back(encode(pf));
    json j{{"type", "entry"},
           {"sequence", e.sequence},
           {"identity", e.identity},
           {"ciphertexts", cts},
           {"proofs", pfs},
           {"commitment", e.commitment}};
    j["supersedes"] = e.supersedes ? json(*e.supersedes) : json(nullptr);
    return j;
}

inline board::BoardEntry decode_entry_record(const json& j) {
    board::BoardEntry e;
    e.sequence = j.at("sequence").get<uint64_t>();
    e.identity = j.at("identity").get<std::string>();
    for (const auto& ct : j.at("ciphertexts"))
        e.ciphertexts.push_back(decode_ciphertext(ct));
    for (const auto& pf : j.at("proofs"))
        e.proofs.push_back(decode_zero_one_proof(pf));
    e.commitment = j.at("commitment").get<std::string>();
    if (!j.at("supersedes").is_null())
        e.supersedes = j.at("supersedes").get<uint64_t>();
    return e;
}

inline std::string board_line(const json& record) { return record.dump(); }

inline std::vector<std::string> board_to_lines(const board::Board& b) {
    std::vector<std::string> lines;
    lines.push_back(board_line(encode_header_record(b.header)));
    for (const auto& e : b.entries)
        lines.push_back(board_line(encode_entry_record(e)));
    if (b.closed) lines.push_back(board_line(json{{"type", "close"}}));
    return lines;
}

inline board::Board board_from_lines(const std::vector<std::string>& lines) {
    if (lines.empty()) throw std::invalid_argument("board file empty");
    board::Board b;
    bool first = true;
    for (const auto& line : lines) {
        json j = json::parse(line);
        std::string type = j.at("type").get<std::string>();
        if (first) {
            if (type != "header")
                throw std::invalid_argument("board must start with header");
            b.header = decode_header_record(j);
            first = false;
            continue;
        }
        if (b.closed)
            throw std::invalid_argument("record after close marker");
        if (type == "entry")
            b.entries.push_back(decode_entry_record(j));
        else if (type == "close")
            b.closed = true;
        else if (type == "header")
            throw std::invalid_argument("second header record");
        else
            throw std::invalid_argument("unknown record type: " + type);
    }
    return b;
}

// ---- tally ----

inline json encode(const board::TallyRecord& t) {
    json results = json::array();
    for (const auto& r : t.results) {
        json shares = json::array();
        for (const auto& s : r.shares) shares.push_back(encode(s));
        results.push_back(json{{"name", r.name},
                               {"product", encode(r.product)},
                               {"shares", shares},
                               {"count", r.count}});
    }
    return json{{"election_id", t.election_id},
                {"bound", t.bound},
                {"policy", encode(t.policy)},
                {"trustees", t.trustee_indices},
                {"results", results}};
}

inline board::TallyRecord decode_tally(const json& j) {
    board::TallyRecord t;
    t.election_id = j.at("election_id").get<std::string>();
    t.bound = j.at("bound").get<uint64_t>();
    t.policy = decode_policy(j.at("policy"));
    t.trustee_indices = j.at("trustees").get<std::vector<unsigned>>();
    for (const auto& r : j.at("results")) {
        board::CandidateResult res;
        res.name = r.at("name").get<std::string>();
        res.product = decode_ciphertext(r.at("product"));
        for (const auto& s : r.at("shares"))
            res.shares.push_back(decode_share(s));
        res.count = r.at("count").get<uint64_t>();
        t.results.push_back(std::move(res));
    }
    return t;
}

// ---- voter-side artifacts ----

inline json encode(const ballot::Receipt& r) {
    return json{{"election_id", r.election_id},
                {"identity", r.identity},
                {"commitment", r.commitment},
                {"sequence", r.sequence}};
}

inline ballot::Receipt decode_receipt(const json& j) {
    return ballot::Receipt{j.at("election_id").get<std::string>(),
                           j.at("identity").get<std::string>(),
                           j.at("commitment").get<std::string>(),
                           j.at("sequence").get<uint64_t>()};
}

inline json encode(const ballot::AuditPackage& p) {
    json randomness = json::array();
    for (const auto& r : p.randomness) randomness.push_back(num(r.v));
    json cts = json::array();
    for (const auto& ct : p.ciphertexts) cts.push_back(encode(ct));
    return json{{"election_id", p.election_id},
                {"choices", p.choices},
                {"randomness", randomness},
                {"ciphertexts", cts},
                {"commitment", p.commitment}};
}

inline ballot::AuditPackage decode_audit_package(const json& j) {
    ballot::AuditPackage p;
    p.election_id = j.at("election_id").get<std::string>();
    p.choices = j.at("choices").get<std::vector<unsigned>>();
    for (const auto& r : j.at("randomness")) p.randomness.push_back(Scalar{num(r)});
    for (const auto& ct : j.at("ciphertexts"))
        p.ciphertexts.push_back(decode_ciphertext(ct));
    p.commitment = j.at("commitment").get<std::string>();
    return p;
}

inline json encode(const ballot::CoercionExport& e) {
    return json{{"destination", e.destination}, {"package", encode(e.package)}};
}

inline ballot::CoercionExport decode_coercion_export(const json& j) {
    return ballot::CoercionExport{
        j.at("destination").get<std::string>(),
        decode_audit_package(j.at("package"))};
}

}  // namespace verivote::serde
