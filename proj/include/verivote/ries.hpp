#pragma once

#ifndef OPENSSL_SUPPRESS_DEPRECATED
#define OPENSSL_SUPPRESS_DEPRECATED
#endif

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <openssl/des.h>

#include "verivote/bytes.hpp"
#include "verivote/entropy.hpp"
#include "verivote/hash.hpp"

// Desk-scale reconstruction of the RIES vote-code scheme and its three
// classic breaks: vote-code forgery, the master-key registry attack, and
// the millisecond-seeded SMS token search.
namespace verivote::ries {

// Master key material for one election. Toy widths (16..28 bits) swap the
// legacy cipher for a reduced-width keyed permutation so that exhaustive
// search fits on a desk; width 112 is the nominal two-key 3DES setup.
struct RiesParams {
    unsigned key_bits = 20;
    Bytes master_key;  // 8 bytes (toy, big-endian value) or 16 bytes (112)
    std::string el_id;
    std::string par_gp;
};

inline bool is_toy_width(unsigned bits) { return bits >= 16 && bits <= 28; }

inline void validate_params(const RiesParams& p) {
    if (!is_toy_width(p.key_bits) && p.key_bits != 112)
        throw std::invalid_argument("key width must be 16..28 or 112");
    if (p.el_id.empty()) throw std::invalid_argument("ElID empty");
    size_t want = p.key_bits == 112 ? 16 : 8;
    if (p.master_key.size() != want)
        throw std::invalid_argument("master key length mismatch");
}

// The derived per-voter key. Toy elections keep the master width; the
// nominal path derives a 56-bit single-DES key, exactly the asymmetry
// the original scheme had (112-bit master, 56-bit vote-code key).
struct VoterKey {
    unsigned bits = 0;
    uint64_t key = 0;  // toy: value < 2^bits; 56: DES key material bytes
};

namespace detail {

inline uint64_t mix64(uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

// 16-round balanced Feistel over 64-bit blocks, keyed by up to 28 bits.
// Stands in for DES at searchable widths; fixed here, platform-free.
inline uint64_t feistel_encrypt(uint64_t key, uint64_t block) {
    uint32_t l = uint32_t(block >> 32);
    uint32_t r = uint32_t(block);
    for (unsigned i = 0; i < 16; ++i) {
        uint64_t rk = mix64(key + 0x9e3779b97f4a7c15ULL * (i + 1));
        uint32_t t = l ^ uint32_t(mix64(rk ^ r));
        l = r;
        r = t;
    }
    return (uint64_t(l) << 32) | r;
}

inline uint64_t load_be64(const uint8_t* p) {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | p[i];
    return v;
}

inline void store_be64(uint64_t v, uint8_t* p) {
    for (int i = 7; i >= 0; --i) {
        p[i] = uint8_t(v);
        v >>= 8;
    }
}

inline void des_schedule(uint64_t key_material, DES_key_schedule& ks) {
    DES_cblock kb;
    store_be64(key_material, kb);
    DES_set_key_unchecked(&kb, &ks);
}

// Zero-IV CBC-MAC, final block kept. Single-block inputs coincide with a
// plain encryption of the block, which is how the scheme's one-shot
// "encrypt the concatenation" reads.
template <typename BlockCipher>
uint64_t cbc_mac(const Bytes& data, BlockCipher&& enc) {
    uint64_t state = 0;
    for (size_t off = 0; off < data.size(); off += 8) {
        uint8_t blk[8] = {0};
        size_t take = std::min<size_t>(8, data.size() - off);
        std::memcpy(blk, data.data() + off, take);
        state = enc(state ^ load_be64(blk));
    }
    if (data.empty()) state = enc(0);
    return state;
}

inline uint64_t mac_master(const RiesParams& p, const Bytes& data) {
    if (p.key_bits == 112) {
        DES_key_schedule ks1, ks2;
        des_schedule(load_be64(p.master_key.data()), ks1);
        des_schedule(load_be64(p.master_key.data() + 8), ks2);
        return cbc_mac(data, [&](uint64_t block) {
            DES_cblock in, out;
            store_be64(block, in);
            DES_ecb2_encrypt(&in, &out, &ks1, &ks2, DES_ENCRYPT);
            return load_be64(out);
        });
    }
    uint64_t key = load_be64(p.master_key.data());
    return cbc_mac(data,
                   [&](uint64_t block) { return feistel_encrypt(key, block); });
}

}  // namespace detail

// MAC under a voter key; every attack in this module counts these.
inline uint64_t mac_voter(const VoterKey& vk, const Bytes& data) {
    if (vk.bits == 56) {
        DES_key_schedule ks;
        detail::des_schedule(vk.key, ks);
        return detail::cbc_mac(data, [&](uint64_t block) {
            DES_cblock in, out;
            detail::store_be64(block, in);
            DES_ecb_encrypt(&in, &out, &ks, DES_ENCRYPT);
            return detail::load_be64(out);
        });
    }
    return detail::cbc_mac(data, [&](uint64_t block) {
        return detail::feistel_encrypt(vk.key, block);
    });
}

// MDC: one-way compression of a MAC block, realized as the first 8 bytes
// of SHA-256 over the big-endian block.
inline uint64_t mdc(uint64_t mac) {
    Bytes buf(8);
    detail::store_be64(mac, buf.data());
    Digest d = sha256(buf);
    return detail::load_be64(d.data());
}

// Kp = PRF_master(VnID || ParGp || ElID), truncated to the vote-code key
// width. Key diversity depends only on the public identity, which is the
// root of every attack below.
inline VoterKey derive_voter_key(const RiesParams& p, const std::string& vnid) {
    Bytes buf;
    append_field(buf, vnid);
    append_field(buf, p.par_gp);
    append_field(buf, p.el_id);
    uint64_t m = detail::mac_master(p, buf);
    VoterKey vk;
    if (p.key_bits == 112) {
        vk.bits = 56;
        vk.key = m;  // 8 bytes of DES key material, parity bits ignored
    } else {
        vk.bits = p.key_bits;
        vk.key = m & ((uint64_t(1) << p.key_bits) - 1);
    }
    return vk;
}

// Pre-election pseudo-identity, also derived from Kp alone: checking a
// candidate key against the published registry costs exactly one MAC.
inline uint64_t pseudo_identity(const std::string& el_id, const VoterKey& vk) {
    Bytes buf;
    append_field(buf, "pid");
    append_field(buf, el_id);
    return mdc(mac_voter(vk, buf));
}

struct VoteCode {
    uint64_t rnpid = 0;
    std::string choice;
    std::string el_id;
    unsigned birthyear = 0;
};

inline uint64_t rnpid_for(const VoterKey& vk, const std::string& choice,
                          const std::string& el_id, unsigned birthyear) {
    Bytes buf;
    append_field(buf, choice);
    append_field(buf, el_id);
    append_field(buf, std::to_string(birthyear));
    return mdc(mac_voter(vk, buf));
}

// RnPID = MDC(MAC_Kp(choice || ElID || birthyear))
inline VoteCode make_vote_code(const VoterKey& vk, const std::string& el_id,
                               const std::vector<std::string>& candidates,
                               const std::string& choice, unsigned birthyear) {
    if (std::find(candidates.begin(), candidates.end(), choice) ==
        candidates.end())
        throw std::invalid_argument("unknown choice: " + choice);
    return VoteCode{rnpid_for(vk, choice, el_id, birthyear), choice, el_id,
                    birthyear};
}

inline bool verify_vote_code(const RiesParams& p, const std::string& vnid,
                             const VoteCode& code) {
    VoterKey vk = derive_voter_key(p, vnid);
    return rnpid_for(vk, code.choice, code.el_id, code.birthyear) ==
           code.rnpid;
}

// ---- simulation ----

struct SimulatedVoter {
    std::string vnid;
    unsigned birthyear = 0;
    bool voted = false;
    std::string choice;  // ground truth, empty for abstainers
};

struct TableRow {
    uint64_t pseudo_identity = 0;
    uint64_t rnpid = 0;
};

// Everything the attacks get to see without the master key.
struct PublishedElection {
    std::string el_id;
    std::string par_gp;
    unsigned key_bits = 0;
    std::vector<std::string> candidates;
    std::vector<uint64_t> registry;  // pre-election pseudo-identities
    std::vector<TableRow> table;     // post-election (pseudo-identity, RnPID)
};

struct RiesElection {
    RiesParams params;
    std::vector<std::string> candidates;
    std::vector<SimulatedVoter> voters;
    PublishedElection published;
};

namespace detail {
inline uint64_t uniform_below(EntropySource& rng, uint64_t bound) {
    // rejection sampling over the smallest power-of-two cover
    unsigned bits = 0;
    while ((uint64_t(1) << bits) < bound) ++bits;
    for (;;) {
        uint8_t raw[8] = {0};
        rng.fill(raw, 8);
        uint64_t v = load_be64(raw);
        if (bits < 64) v &= (uint64_t(1) << bits) - 1;
        if (v < bound) return v;
    }
}
}  // namespace detail

inline RiesParams random_params(unsigned key_bits, const std::string& el_id,
                                const std::string& par_gp,
                                EntropySource& rng) {
    RiesParams p;
    p.key_bits = key_bits;
    p.el_id = el_id;
    p.par_gp = par_gp;
    if (key_bits == 112) {
        p.master_key = rng.bytes(16);
    } else {
        uint64_t key =
            detail::uniform_below(rng, uint64_t(1) << key_bits);
        p.master_key.resize(8);
        detail::store_be64(key, p.master_key.data());
    }
    validate_params(p);
    return p;
}

// Builds a toy election with ground truth: BSN-style voter ids, random
// birthyears and choices, roughly one abstainer in eight.
inline RiesElection simulate(const RiesParams& params,
                             const std::vector<std::string>& candidates,
                             unsigned n_voters, EntropySource& rng) {
    validate_params(params);
    if (candidates.empty()) throw std::invalid_argument("no candidates");
    RiesElection e;
    e.params = params;
    e.candidates = candidates;
    e.published.el_id = params.el_id;
    e.published.par_gp = params.par_gp;
    e.published.key_bits = params.key_bits;
    e.published.candidates = candidates;
    for (unsigned i = 0; i < n_voters; ++i) {
        SimulatedVoter v;
        v.vnid = std::to_string(100000000 + i);  // BSN-like 9-digit id
        v.birthyear = 1930 + unsigned(detail::uniform_below(rng, 76));
        v.voted = detail::uniform_below(rng, 8) != 0;
        VoterKey vk = derive_voter_key(params, v.vnid);
        e.published.registry.push_back(pseudo_identity(params.el_id, vk));
        if (v.voted) {
            v.choice =
                candidates[detail::uniform_below(rng, candidates.size())];
            VoteCode code = make_vote_code(vk, params.el_id, candidates,
                                           v.choice, v.birthyear);
            e.published.table.push_back(
                TableRow{e.published.registry.back(), code.rnpid});
        }
        e.voters.push_back(std::move(v));
    }
    return e;
}

// ---- attack 1: vote-code forgery ----

struct ForgeResult {
    bool found = false;
    uint64_t kp = 0;                // the recovered voter key
    uint64_t pseudo_identity = 0;   // the registry row it unlocks
    VoteCode code;                  // a forged, verifying vote code
    uint64_t keys_tried = 0;        // MAC evaluations spent searching
    uint64_t keyspace = 0;
    double seconds = 0;
    double keys_per_second = 0;
};

// Brute force over the Kp space: one MAC per candidate key, hit when the
// derived pseudo-identity appears in the published registry. The search
// needs nothing secret. Workers take contiguous stripes and the lowest
// hit index wins, so the found key is deterministic.
inline ForgeResult forge_vote_code(const PublishedElection& pub,
                                   uint64_t budget = 0, unsigned workers = 0) {
    if (!is_toy_width(pub.key_bits))
        throw std::invalid_argument("forgery demo needs a toy key width");
    if (pub.candidates.empty())
        throw std::invalid_argument("candidate set empty");

    uint64_t keyspace = uint64_t(1) << pub.key_bits;
    uint64_t limit = budget == 0 ? keyspace : std::min(budget, keyspace);
    std::set<uint64_t> registry(pub.registry.begin(), pub.registry.end());
    if (workers == 0)
        workers = std::max(1u, std::thread::hardware_concurrency());
    uint64_t chunk = (limit + workers - 1) / workers;

    std::atomic<uint64_t> best{UINT64_MAX};
    std::vector<uint64_t> counts(workers, 0);
    auto t0 = std::chrono::steady_clock::now();

    auto scan = [&](unsigned t) {
        uint64_t lo = t * chunk;
        uint64_t hi = std::min(limit, lo + chunk);
        VoterKey vk{pub.key_bits, 0};
        for (uint64_t k = lo; k < hi; ++k) {
            if (k > best.load(std::memory_order_relaxed)) break;
            vk.key = k;
            ++counts[t];
            if (registry.count(pseudo_identity(pub.el_id, vk))) {
                uint64_t cur = best.load(std::memory_order_relaxed);
                while (k < cur &&
                       !best.compare_exchange_weak(cur, k,
                                                   std::memory_order_relaxed))
                    ;
                break;
            }
        }
    };

    if (workers == 1) {
        scan(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(scan, t);
        for (auto& th : pool) th.join();
    }

    auto t1 = std::chrono::steady_clock::now();
    ForgeResult res;
    res.keyspace = keyspace;
    for (uint64_t c : counts) res.keys_tried += c;
    res.seconds = std::chrono::duration<double>(t1 - t0).count();
    res.keys_per_second =
        res.seconds > 0 ? double(res.keys_tried) / res.seconds : 0;

    uint64_t hit = best.load();
    if (hit != UINT64_MAX) {
        res.found = true;
        res.kp = hit;
        VoterKey vk{pub.key_bits, hit};
        res.pseudo_identity = pseudo_identity(pub.el_id, vk);
        res.code = make_vote_code(vk, pub.el_id, pub.candidates,
                                  pub.candidates.front(), 1970);
    }
    return res;
}

// Scales the measured rate to the original numbers: 2^36 keys for a hit
// in the real election, claimed at about 19 hours on a PC of the day and
// about 4 seconds on dedicated hardware.
inline std::string forge_extrapolation(const ForgeResult& res) {
    std::ostringstream out;
    out << "searched " << res.keys_tried << " of " << res.keyspace
        << " keys in " << res.seconds << " s ("
        << uint64_t(res.keys_per_second) << " keys/s)\n";
    if (res.keys_per_second > 0) {
        double t36 = double(uint64_t(1) << 36) / res.keys_per_second;
        out << "at that rate 2^36 MACs take " << t36 << " s ("
            << t36 / 3600.0 << " h); the original claims were about 19 h "
        << "on a 2008 PC and about 4 s on dedicated hardware\n";
        out << "ratio to the 19 h claim: " << t36 / (19.0 * 3600.0) << "x\n";
    }
    return out.str();
}

// ---- attack 2: master key compromise ----

struct RegistryFinding {
    std::string vnid;
    bool eligible = false;
    bool voted = false;
    bool attributed = false;  // choice and birthyear recovered
    std::string choice;
    unsigned birthyear = 0;
};

// Whoever holds the master key replays the derivation for any public
// identity and reads eligibility, turnout and the actual choice straight
// off the published artifacts.
inline std::vector<RegistryFinding> registry_attack(
    const RiesParams& params, const std::vector<std::string>& probe_vnids,
    const PublishedElection& pub, unsigned birthyear_lo = 1900,
    unsigned birthyear_hi = 2010) {
    validate_params(params);
    std::set<uint64_t> registry(pub.registry.begin(), pub.registry.end());
    std::map<uint64_t, uint64_t> votes;  // pseudo-identity -> RnPID
    for (const auto& row : pub.table)
        votes.emplace(row.pseudo_identity, row.rnpid);

    std::vector<RegistryFinding> findings;
    for (const auto& vnid : probe_vnids) {
        RegistryFinding f;
        f.vnid = vnid;
        VoterKey vk = derive_voter_key(params, vnid);
        uint64_t pid = pseudo_identity(params.el_id, vk);
        f.eligible = registry.count(pid) > 0;
        auto it = votes.find(pid);
        f.voted = f.eligible && it != votes.end();
        if (f.voted) {
            for (const auto& choice : pub.candidates) {
                for (unsigned y = birthyear_lo;
                     y <= birthyear_hi && !f.attributed; ++y) {
                    if (rnpid_for(vk, choice, params.el_id, y) == it->second) {
                        f.attributed = true;
                        f.choice = choice;
                        f.birthyear = y;
                    }
                }
                if (f.attributed) break;
            }
        }
        findings.push_back(std::move(f));
    }
    return findings;
}

// ---- attack 3: SMS token search ----

// Token generator as the original stack had it: a 48-bit LCG seeded with
// the send time in milliseconds, yielding a six-digit token.
struct TokenLcg {
    uint64_t state;
    explicit TokenLcg(uint64_t seed)
        : state((seed ^ 0x5deece66dULL) & ((uint64_t(1) << 48) - 1)) {}

    uint32_t next31() {
        state = (state * 0x5deece66dULL + 0xb) & ((uint64_t(1) << 48) - 1);
        return uint32_t(state >> 17);
    }

    uint32_t next_token() {
        for (;;) {
            uint32_t bits = next31();
            uint32_t val = bits % 1000000;
            if (bits - val + 999999 <= 0x7fffffff) return val;
        }
    }
};

inline uint32_t sms_token(uint64_t send_time_ms) {
    return TokenLcg(send_time_ms).next_token();
}

struct SmsAttackResult {
    bool hit = false;
    uint64_t guesses = 0;
    uint64_t seed = 0;  // the send time that reproduces the token
};

// With the seed known to sit in a small window around the observed send
// time and no limit on tries, the token falls to a linear scan.
inline SmsAttackResult sms_token_attack(uint64_t window_start_ms,
                                        uint64_t window_end_ms,
                                        uint32_t target_token) {
    SmsAttackResult res;
    for (uint64_t s = window_start_ms; s <= window_end_ms; ++s) {
        ++res.guesses;
        if (sms_token(s) == target_token) {
            res.hit = true;
            res.seed = s;
            return res;
        }
    }
    return res;
}

// ---- published artifacts as CSV ----

inline std::string hex16(uint64_t v) {
    char buf[17];
    snprintf(buf, sizeof buf, "%016llx", (unsigned long long)v);
    return buf;
}

inline std::string table_csv(const std::vector<TableRow>& rows) {
    std::string out = "pseudo_identity,rnpid\n";
    for (const auto& r : rows)
        out += hex16(r.pseudo_identity) + "," + hex16(r.rnpid) + "\n";
    return out;
}

inline std::string registry_csv(const std::vector<uint64_t>& registry) {
    std::string out = "pseudo_identity\n";
    for (uint64_t pid : registry) out += hex16(pid) + "\n";
    return out;
}

inline uint64_t parse_hex16(const std::string& s) {
    if (s.size() != 16) throw std::invalid_argument("bad hex id: " + s);
    uint64_t v = 0;
    for (char c : s) {
        v <<= 4;
        if (c >= '0' && c <= '9') v |= uint64_t(c - '0');
        else if (c >= 'a' && c <= 'f') v |= uint64_t(c - 'a' + 10);
        else throw std::invalid_argument("bad hex id: " + s);
    }
    return v;
}

inline std::vector<TableRow> parse_table_csv(const std::string& text) {
    std::vector<TableRow> rows;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("pseudo_identity", 0) == 0) continue;
        }
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("bad table row: " + line);
        rows.push_back(TableRow{parse_hex16(line.substr(0, comma)),
                                parse_hex16(line.substr(comma + 1))});
    }
    return rows;
}

inline std::vector<uint64_t> parse_registry_csv(const std::string& text) {
    std::vector<uint64_t> out;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("pseudo_identity", 0) == 0) continue;
        }
        out.push_back(parse_hex16(line));
    }
    return out;
}

}  // namespace verivote::ries
