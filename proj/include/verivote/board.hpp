#pragma once

#include <optional>
#include <set>

#include "verivote/ballot.hpp"
#include "verivote/trustees.hpp"

namespace verivote::board {

using ballot::CastBallot;
using ballot::Receipt;
using elgamal::Ciphertext;
using shamir::SharingPolicy;
using trustees::DecryptionShare;
using trustees::TrusteeKey;
using trustees::VerificationKey;

// First record of the board file: pins everything a verifier needs to
// check the rest of the log against.
struct BoardHeader {
    std::string election_id;
    GroupParams group;
    GroupElement h;
    std::vector<VerificationKey> verification_keys;
    SharingPolicy policy;
    std::vector<std::string> candidates;
    unsigned max_selections = 1;
    bool pseudonyms = false;
    std::string roster_digest;
    std::string seed;  // recorded when the election runs deterministically
};

struct BoardEntry {
    uint64_t sequence = 0;
    std::string identity;  // display identity
    std::vector<Ciphertext> ciphertexts;
    std::vector<ballot::ZeroOneProof> proofs;
    std::string commitment;
    // Sequence of this voter's previous entry; a revote never deletes,
    // it marks the old entry superseded. Last vote counts.
    std::optional<uint64_t> supersedes;
};

struct Board {
    BoardHeader header;
    std::vector<BoardEntry> entries;
    bool closed = false;
};

// Post-time rejection of a submitted ballot.
struct RejectedBallot : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The published election record: everything public that setup produced.
// The roster lives here (the board header only pins its digest).
struct PublicRecord {
    election::ElectionConfig config;
    GroupParams group;
    GroupElement h;
    std::vector<VerificationKey> verification_keys;
    std::string roster_digest;
};

inline std::set<uint64_t> superseded_sequences(const Board& board) {
    std::set<uint64_t> out;
    for (const auto& e : board.entries)
        if (e.supersedes) out.insert(*e.supersedes);
    return out;
}

inline std::vector<const BoardEntry*> active_entries(const Board& board) {
    auto superseded = superseded_sequences(board);
    std::vector<const BoardEntry*> out;
    for (const auto& e : board.entries)
        if (!superseded.count(e.sequence)) out.push_back(&e);
    return out;
}

inline const BoardEntry& post(const GroupParams& params, Board& board,
                              const CastBallot& cast,
                              const std::vector<election::RosterEntry>& roster) {
    if (board.closed) throw std::logic_error("board is closed");
    if (cast.election_id != board.header.election_id)
        throw RejectedBallot("ballot for a different election");
    if (!election::find_roster(roster, cast.identity))
        throw RejectedBallot("identity not eligible: " + cast.identity);
    if (cast.ciphertexts.size() != board.header.candidates.size() ||
        cast.proofs.size() != cast.ciphertexts.size())
        throw RejectedBallot("ballot shape does not match candidate list");
    for (size_t j = 0; j < cast.ciphertexts.size(); ++j)
        if (!proofs::verify_zero_or_one(params, board.header.h,
                                        cast.ciphertexts[j], cast.proofs[j]))
            throw RejectedBallot("zero-or-one proof " + std::to_string(j) +
                                 " failed");
    if (ballot::ballot_commitment(cast.ciphertexts) != cast.commitment)
        throw RejectedBallot("commitment does not match ciphertexts");

    BoardEntry entry;
    entry.sequence = board.entries.empty() ? 1
                                           : board.entries.back().sequence + 1;
    entry.identity = cast.identity;
    entry.ciphertexts = cast.ciphertexts;
    entry.proofs = cast.proofs;
    entry.commitment = cast.commitment;
    for (const BoardEntry* e : active_entries(board))
        if (e->identity == cast.identity) entry.supersedes = e->sequence;
    board.entries.push_back(std::move(entry));
    return board.entries.back();
}

inline void close(Board& board) {
    if (board.closed) throw std::logic_error("board already closed");
    board.closed = true;
}

struct InclusionResult {
    bool included = false;  // entry exists and matches the receipt
    bool active = false;    // not superseded by a later entry
    std::string reason;
};

inline InclusionResult verify_inclusion(const Board& board,
                                        const Receipt& receipt) {
    InclusionResult out;
    if (receipt.election_id != board.header.election_id) {
        out.reason = "receipt names a different election";
        return out;
    }
    const BoardEntry* found = nullptr;
    for (const auto& e : board.entries)
        if (e.sequence == receipt.sequence) found = &e;
    if (!found) {
        out.reason = "no entry with sequence " +
                     std::to_string(receipt.sequence);
        return out;
    }
    if (found->identity != receipt.identity) {
        out.reason = "entry belongs to a different identity";
        return out;
    }
    if (found->commitment != receipt.commitment) {
        out.reason = "commitment mismatch: board entry differs from receipt";
        return out;
    }
    out.included = true;
    out.active = !superseded_sequences(board).count(receipt.sequence);
    if (!out.active) out.reason = "entry superseded by a later vote";
    return out;
}

struct CandidateResult {
    std::string name;
    Ciphertext product;  // homomorphic sum over active entries
    std::vector<DecryptionShare> shares;
    uint64_t count = 0;
};

struct TallyRecord {
    std::string election_id;
    uint64_t bound = 0;  // active entry count, the decode ceiling
    SharingPolicy policy;
    std::vector<unsigned> trustee_indices;
    std::vector<CandidateResult> results;
};

// Threshold tally: per candidate, multiply the ciphertexts of all active
// entries, let each provided trustee produce a proven decryption share,
// recombine, and decode. Needs at least k trustee keys.
inline TallyRecord tally(const GroupParams& params, const Board& board,
                         const std::vector<TrusteeKey>& trustee_keys,
                         EntropySource& rng) {
    if (!board.closed) throw std::logic_error("tally before close");
    if (trustee_keys.size() < board.header.policy.k)
        throw trustees::InsufficientShares(board.header.policy.k,
                                           unsigned(trustee_keys.size()));

    auto active = active_entries(board);
    TallyRecord record;
    record.election_id = board.header.election_id;
    record.bound = active.size();
    record.policy = board.header.policy;
    for (const auto& key : trustee_keys)
        record.trustee_indices.push_back(key.index);

    for (size_t j = 0; j < board.header.candidates.size(); ++j) {
        CandidateResult res;
        res.name = board.header.candidates[j];
        res.product = elgamal::identity_ciphertext();
        for (const BoardEntry* e : active)
            res.product =
                elgamal::homomorphic_add(params, res.product, e->ciphertexts[j]);
        for (const auto& key : trustee_keys)
            res.shares.push_back(
                trustees::partial_decrypt(params, res.product, key, rng));
        GroupElement gm =
            trustees::combine(params, res.product, res.shares,
                              board.header.verification_keys,
                              board.header.policy);
        res.count = elgamal::decode_dlog(params, gm, record.bound);
        record.results.push_back(std::move(res));
    }
    return record;
}

struct NonVoterFinding {
    std::string identity;
    std::vector<uint64_t> sequences;  // entries found under this identity
};

// For voters who claim they did not vote: list every board entry posted
// under their display identity, superseded ones included.
inline std::vector<NonVoterFinding> non_voter_check(
    const Board& board, const std::vector<std::string>& identities) {
    std::vector<NonVoterFinding> out;
    for (const auto& id : identities) {
        NonVoterFinding f;
        f.identity = id;
        for (const auto& e : board.entries)
            if (e.identity == id) f.sequences.push_back(e.sequence);
        out.push_back(std::move(f));
    }
    return out;
}

}  // namespace verivote::board
