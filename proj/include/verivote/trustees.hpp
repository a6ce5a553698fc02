#pragma once

#include <algorithm>
#include <vector>

#include "verivote/proofs.hpp"
#include "verivote/shamir.hpp"

namespace verivote::trustees {

using elgamal::Ciphertext;
using proofs::DecryptionProof;
using shamir::SharingPolicy;

struct TrusteeKey {
    unsigned index = 0;
    Scalar x;        // Shamir share of the election secret
    GroupElement v;  // verification key g^x
};

struct VerificationKey {
    unsigned index = 0;
    GroupElement v;

    bool operator==(const VerificationKey&) const = default;
};

struct DecryptionShare {
    unsigned index = 0;
    GroupElement share;  // a^{x_i}
    DecryptionProof proof;

    bool operator==(const DecryptionShare&) const = default;
};

struct DealerOutput {
    GroupElement h;  // election public key
    std::vector<TrusteeKey> trustees;
};

struct InsufficientShares : std::runtime_error {
    unsigned needed, got;
    InsufficientShares(unsigned needed_, unsigned got_)
        : std::runtime_error("need " + std::to_string(needed_) +
                             " decryption shares, got " +
                             std::to_string(got_)),
          needed(needed_),
          got(got_) {}
};

struct InvalidShareProof : std::runtime_error {
    unsigned index;
    explicit InvalidShareProof(unsigned index_)
        : std::runtime_error("decryption share proof of trustee " +
                             std::to_string(index_) + " failed"),
          index(index_) {}
};

// Trusted dealer: draws the election secret, splits it k-of-n, and keeps
// nothing. The master exponent is zeroed before it goes out of scope; no
// single party ever holds it afterwards.
inline DealerOutput dealer_keygen(const GroupParams& params,
                                  const SharingPolicy& policy,
                                  EntropySource& rng) {
    shamir::check_policy(policy);
    Scalar x = random_scalar(params, rng);
    while (x.v == 0) x = random_scalar(params, rng);

    DealerOutput out;
    out.h = exp(params, generator(params), x);
    auto shares = shamir::split(params, x, policy, rng);
    x.v = 0;
    for (const auto& s : shares)
        out.trustees.push_back(
            TrusteeKey{s.index, s.value,
                       exp(params, generator(params), s.value)});
    return out;
}

inline std::vector<VerificationKey> verification_keys(
    const DealerOutput& dealt) {
    std::vector<VerificationKey> keys;
    keys.reserve(dealt.trustees.size());
    for (const auto& t : dealt.trustees)
        keys.push_back(VerificationKey{t.index, t.v});
    return keys;
}

inline DecryptionShare partial_decrypt(const GroupParams& params,
                                       const Ciphertext& ct,
                                       const TrusteeKey& key,
                                       EntropySource& rng) {
    DecryptionShare out;
    out.index = key.index;
    out.share = exp(params, ct.a, key.x);
    out.proof = proofs::prove_decryption_share(params, ct, out.share, key.v,
                                               key.x, rng);
    return out;
}

// Fail-closed recombination: every share proof is checked against its
// verification key before any math happens; a bad proof names the trustee.
// With shares from any k-subset the Lagrange combination in the exponent
// gives a^x, so the result is b * (a^x)^{-1} = g^m.
inline GroupElement combine(const GroupParams& params, const Ciphertext& ct,
                            const std::vector<DecryptionShare>& shares,
                            const std::vector<VerificationKey>& vkeys,
                            const SharingPolicy& policy) {
    if (shares.size() < policy.k)
        throw InsufficientShares(policy.k, unsigned(shares.size()));

    std::vector<unsigned> indices;
    for (const auto& s : shares) indices.push_back(s.index);

    for (const auto& s : shares) {
        auto vk = std::find_if(vkeys.begin(), vkeys.end(),
                               [&](const VerificationKey& k) {
                                   return k.index == s.index;
                               });
        if (vk == vkeys.end()) throw InvalidShareProof(s.index);
        if (!proofs::verify_decryption_share(params, ct, s.share, vk->v,
                                             s.proof))
            throw InvalidShareProof(s.index);
    }

    // a^x = prod_i share_i^{lambda_i}
    GroupElement ax{1};
    for (const auto& s : shares) {
        Scalar lambda = shamir::lagrange_at_zero(params, indices, s.index);
        ax = mul(params, ax, exp(params, s.share, lambda));
    }
    return mul(params, ct.b, inv(params, ax));
}

}  // namespace verivote::trustees
