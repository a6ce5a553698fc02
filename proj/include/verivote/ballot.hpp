#pragma once

#include <numeric>
#include <optional>

#include "verivote/election.hpp"
#include "verivote/proofs.hpp"

namespace verivote::ballot {

using elgamal::Ciphertext;
using proofs::ZeroOneProof;

// One 0/1 mark per candidate, in candidate order.
struct BallotPlain {
    std::vector<unsigned> choices;
};

inline void validate_plain(const BallotPlain& plain, size_t candidates,
                           unsigned max_selections) {
    if (plain.choices.size() != candidates)
        throw std::invalid_argument("choice vector length mismatch");
    unsigned total = 0;
    for (unsigned c : plain.choices) {
        if (c > 1) throw std::invalid_argument("choice not 0 or 1");
        total += c;
    }
    if (total > max_selections)
        throw std::invalid_argument("overvote: " + std::to_string(total) +
                                    " selections, limit " +
                                    std::to_string(max_selections));
}

// Hash over the length-prefixed decimal encodings of every ciphertext
// component, in order. This is the voter's receipt value.
inline std::string ballot_commitment(const std::vector<Ciphertext>& cts) {
    Bytes buf;
    append_field(buf, "ballot");
    for (const auto& ct : cts) {
        append_field(buf, to_decimal(ct.a.v));
        append_field(buf, to_decimal(ct.b.v));
    }
    return sha256_hex(buf);
}

enum class BallotState { prepared, audited, sealed };

inline std::string to_string(BallotState s) {
    switch (s) {
        case BallotState::prepared: return "prepared";
        case BallotState::audited: return "audited";
        case BallotState::sealed: return "sealed";
    }
    return "?";
}

// Present only until seal; audit and coercion export need them.
struct BallotSecrets {
    std::vector<unsigned> choices;
    std::vector<Scalar> randomness;
};

struct PreparedBallot {
    std::string election_id;
    BallotState state = BallotState::prepared;
    std::vector<Ciphertext> ciphertexts;
    std::vector<ZeroOneProof> proofs;
    std::string commitment;
    std::optional<BallotSecrets> secrets;
    // Per slot, every randomness value spent by earlier audits in this
    // session. Re-prepared ballots must avoid all of them, or an audited
    // ciphertext could reappear and be cast. Never serialized.
    std::vector<std::vector<Scalar>> spent_randomness;
};

// Everything needed to re-derive the ciphertexts from scratch. Handing
// this out spends the ballot.
struct AuditPackage {
    std::string election_id;
    std::vector<unsigned> choices;
    std::vector<Scalar> randomness;
    std::vector<Ciphertext> ciphertexts;
    std::string commitment;
};

struct Receipt {
    std::string election_id;
    std::string identity;  // display identity as posted
    std::string commitment;
    uint64_t sequence = 0;
};

struct CoercionExport {
    std::string destination;
    AuditPackage package;
};

namespace detail {
// Fresh randomness per slot; when re-preparing after audits, redraw until
// the value differs from everything already spent on this slot, so the
// new ciphertexts (and hence the commitment) are guaranteed to change
// even in the toy group, and no audited ciphertext can ever be cast.
inline Scalar draw_randomness(const GroupParams& params, EntropySource& rng,
                              const std::vector<Scalar>& spent) {
    if (params.q <= mpz_class(static_cast<unsigned long>(spent.size())))
        throw std::runtime_error(
            "audit chain has exhausted the randomness space");
    for (;;) {
        Scalar r = random_scalar(params, rng);
        bool fresh = true;
        for (const auto& s : spent)
            if (r == s) {
                fresh = false;
                break;
            }
        if (fresh) return r;
    }
}

inline PreparedBallot prepare_impl(const GroupParams& params,
                                   const GroupElement& h,
                                   const std::string& election_id,
                                   const BallotPlain& plain,
                                   size_t candidates, unsigned max_selections,
                                   EntropySource& rng,
                                   const std::vector<std::vector<Scalar>>* spent) {
    validate_plain(plain, candidates, max_selections);
    PreparedBallot pb;
    pb.election_id = election_id;
    pb.secrets = BallotSecrets{plain.choices, {}};
    if (spent) pb.spent_randomness = *spent;
    pb.spent_randomness.resize(plain.choices.size());
    for (size_t j = 0; j < plain.choices.size(); ++j) {
        Scalar r = draw_randomness(params, rng, pb.spent_randomness[j]);
        Ciphertext ct = elgamal::encrypt_with(params, h, plain.choices[j], r);
        pb.proofs.push_back(proofs::prove_zero_or_one(
            params, h, ct, plain.choices[j], r, rng));
        pb.ciphertexts.push_back(ct);
        pb.secrets->randomness.push_back(r);
    }
    pb.commitment = ballot_commitment(pb.ciphertexts);
    return pb;
}
}  // namespace detail

inline PreparedBallot prepare(const GroupParams& params, const GroupElement& h,
                              const std::string& election_id,
                              const BallotPlain& plain, size_t candidates,
                              unsigned max_selections, EntropySource& rng) {
    return detail::prepare_impl(params, h, election_id, plain, candidates,
                                max_selections, rng, nullptr);
}

struct AuditOutcome {
    bool verdict = false;      // true: device encrypted what was intended
    std::string detail;        // first failed check, empty when honest
    AuditPackage package;      // the spent ballot, opened
    PreparedBallot next;       // fresh ballot for the same choices
};

// Machine challenge: open the ballot, check the encryptions against the
// intended choices, and hand back a re-prepared ballot. The audited
// ballot is spent; it can never be sealed or cast.
inline AuditOutcome audit(const GroupParams& params, const GroupElement& h,
                          unsigned max_selections, PreparedBallot& pb,
                          const BallotPlain& intended, EntropySource& rng) {
    if (pb.state != BallotState::prepared)
        throw std::logic_error("audit on ballot in state " +
                               to_string(pb.state));
    if (!pb.secrets) throw std::logic_error("ballot secrets unavailable");

    AuditOutcome out;
    out.package.election_id = pb.election_id;
    out.package.choices = pb.secrets->choices;
    out.package.randomness = pb.secrets->randomness;
    out.package.ciphertexts = pb.ciphertexts;
    out.package.commitment = pb.commitment;

    out.verdict = true;
    if (ballot_commitment(pb.ciphertexts) != pb.commitment) {
        out.verdict = false;
        out.detail = "commitment does not match ciphertexts";
    }
    if (out.verdict &&
        (pb.secrets->choices.size() != intended.choices.size() ||
         pb.secrets->choices != intended.choices)) {
        out.verdict = false;
        out.detail = "recorded choices differ from intended choices";
    }
    if (out.verdict) {
        for (size_t j = 0; j < pb.ciphertexts.size(); ++j) {
            Ciphertext expect = elgamal::encrypt_with(
                params, h, pb.secrets->choices[j], pb.secrets->randomness[j]);
            if (!(expect == pb.ciphertexts[j])) {
                out.verdict = false;
                out.detail = "ciphertext " + std::to_string(j) +
                             " does not re-encrypt from opened values";
                break;
            }
        }
    }

    pb.state = BallotState::audited;  // spent either way
    std::vector<std::vector<Scalar>> spent = pb.spent_randomness;
    spent.resize(out.package.randomness.size());
    for (size_t j = 0; j < out.package.randomness.size(); ++j)
        spent[j].push_back(out.package.randomness[j]);
    out.next = detail::prepare_impl(params, h, pb.election_id, intended,
                                    intended.choices.size(), max_selections,
                                    rng, &spent);
    pb.secrets.reset();
    return out;
}

// Erase plaintext and randomness; only ciphertexts, proofs and the
// commitment survive. A sealed ballot cannot be audited or exported.
inline void seal(PreparedBallot& pb) {
    if (pb.state == BallotState::sealed)
        throw std::logic_error("ballot already sealed");
    if (pb.state == BallotState::audited)
        throw std::logic_error("audited ballot is spent; prepare a fresh one");
    if (pb.secrets) {
        for (auto& r : pb.secrets->randomness) r.v = 0;
        pb.secrets.reset();
    }
    pb.state = BallotState::sealed;
}

// The coercion face of the same mechanism that powers auditing: a voter
// who runs this hands the coercer proof of how the ballot votes.
inline CoercionExport coerce_export(const PreparedBallot& pb,
                                    const std::string& destination) {
    if (pb.state != BallotState::prepared || !pb.secrets)
        throw std::logic_error(
            "plaintext and randomness no longer available for export");
    CoercionExport out;
    out.destination = destination;
    out.package.election_id = pb.election_id;
    out.package.choices = pb.secrets->choices;
    out.package.randomness = pb.secrets->randomness;
    out.package.ciphertexts = pb.ciphertexts;
    out.package.commitment = pb.commitment;
    return out;
}

// What actually goes to the board: no secrets, plus the authenticated
// display identity.
struct CastBallot {
    std::string election_id;
    std::string identity;
    std::vector<Ciphertext> ciphertexts;
    std::vector<ZeroOneProof> proofs;
    std::string commitment;
};

struct AuthenticationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline CastBallot authenticate_and_cast(
    const PreparedBallot& pb, const std::string& identity,
    const std::string& credential, bool pseudonyms,
    const std::vector<election::RosterEntry>& roster) {
    if (pb.state != BallotState::sealed)
        throw std::logic_error("only a sealed ballot can be cast");
    std::string display =
        election::display_identity(pseudonyms, pb.election_id, identity);
    const election::RosterEntry* entry = election::find_roster(roster, display);
    if (!entry)
        throw AuthenticationError("identity not on roster: " + display);
    if (election::credential_digest(pb.election_id, display, credential) !=
        entry->credential_digest)
        throw AuthenticationError("credential rejected for " + display);
    return CastBallot{pb.election_id, display, pb.ciphertexts, pb.proofs,
                      pb.commitment};
}

}  // namespace verivote::ballot
