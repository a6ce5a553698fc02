#pragma once

#include <initializer_list>

#include "verivote/elgamal.hpp"
#include "verivote/hash.hpp"

namespace verivote::proofs {

using elgamal::Ciphertext;

// Fiat-Shamir challenge: SHA-256 over length-prefixed decimal encodings,
// reduced mod q. Soundness error is 1/q, which in the toy group is 1/11;
// the real group makes it negligible.
inline Scalar challenge_scalar(const GroupParams& params, std::string_view tag,
                               std::initializer_list<const mpz_class*> items) {
    Bytes buf;
    append_field(buf, tag);
    append_field(buf, to_decimal(params.p));
    append_field(buf, to_decimal(params.q));
    append_field(buf, to_decimal(params.g));
    for (const mpz_class* item : items) append_field(buf, to_decimal(*item));
    Digest d = sha256(buf);
    mpz_class v;
    mpz_import(v.get_mpz_t(), d.size(), 1, 1, 0, 0, d.data());
    return scalar_from(params, v);
}

// Disjunctive Chaum-Pedersen proof that (a, b) encrypts 0 or 1 under h:
// branch 0 claims dlog_g(a) = dlog_h(b), branch 1 the same for b/g.
// The real branch is proven, the other simulated; c0 + c1 = H(statement).
struct ZeroOneProof {
    GroupElement a0, b0, a1, b1;  // per-branch commitments
    Scalar c0, c1;                // per-branch challenges
    Scalar f0, f1;                // per-branch responses

    bool operator==(const ZeroOneProof&) const = default;
};

constexpr std::string_view kZeroOneTag = "zero-or-one";
constexpr std::string_view kShareTag = "decryption-share";

inline ZeroOneProof prove_zero_or_one(const GroupParams& params,
                                      const GroupElement& h,
                                      const Ciphertext& ct, unsigned m,
                                      const Scalar& r, EntropySource& rng) {
    if (m > 1) throw std::invalid_argument("message not 0 or 1");
    GroupElement g = generator(params);
    GroupElement b_over_g = mul(params, ct.b, inv(params, g));

    ZeroOneProof pf;
    Scalar w = random_scalar(params, rng);
    if (m == 0) {
        // simulate branch 1: pick c1, f1, back-solve commitments
        pf.c1 = random_scalar(params, rng);
        pf.f1 = random_scalar(params, rng);
        GroupElement ac = inv(params, exp(params, ct.a, pf.c1));
        GroupElement bc = inv(params, exp(params, b_over_g, pf.c1));
        pf.a1 = mul(params, exp(params, g, pf.f1), ac);
        pf.b1 = mul(params, exp(params, h, pf.f1), bc);
        pf.a0 = exp(params, g, w);
        pf.b0 = exp(params, h, w);
    } else {
        // simulate branch 0
        pf.c0 = random_scalar(params, rng);
        pf.f0 = random_scalar(params, rng);
        GroupElement ac = inv(params, exp(params, ct.a, pf.c0));
        GroupElement bc = inv(params, exp(params, ct.b, pf.c0));
        pf.a0 = mul(params, exp(params, g, pf.f0), ac);
        pf.b0 = mul(params, exp(params, h, pf.f0), bc);
        pf.a1 = exp(params, g, w);
        pf.b1 = exp(params, h, w);
    }

    Scalar c = challenge_scalar(params, kZeroOneTag,
                                {&h.v, &ct.a.v, &ct.b.v, &pf.a0.v, &pf.b0.v,
                                 &pf.a1.v, &pf.b1.v});
    if (m == 0) {
        pf.c0 = scalar_sub(params, c, pf.c1);
        pf.f0 = scalar_add(params, w, scalar_mul(params, pf.c0, r));
    } else {
        pf.c1 = scalar_sub(params, c, pf.c0);
        pf.f1 = scalar_add(params, w, scalar_mul(params, pf.c1, r));
    }
    return pf;
}

inline bool verify_zero_or_one(const GroupParams& params, const GroupElement& h,
                               const Ciphertext& ct, const ZeroOneProof& pf) {
    try {
        if (!in_subgroup(params, ct.a) || !in_subgroup(params, ct.b))
            return false;
        for (const GroupElement* e : {&pf.a0, &pf.b0, &pf.a1, &pf.b1})
            if (!in_subgroup(params, *e)) return false;
        for (const Scalar* s : {&pf.c0, &pf.c1, &pf.f0, &pf.f1})
            if (s->v < 0 || s->v >= params.q) return false;

        GroupElement g = generator(params);
        GroupElement b_over_g = mul(params, ct.b, inv(params, g));
        Scalar c = challenge_scalar(params, kZeroOneTag,
                                    {&h.v, &ct.a.v, &ct.b.v, &pf.a0.v,
                                     &pf.b0.v, &pf.a1.v, &pf.b1.v});
        if (scalar_add(params, pf.c0, pf.c1) != c) return false;

        // g^f0 = a0 * a^c0       h^f0 = b0 * b^c0
        if (exp(params, g, pf.f0) !=
            mul(params, pf.a0, exp(params, ct.a, pf.c0)))
            return false;
        if (exp(params, h, pf.f0) !=
            mul(params, pf.b0, exp(params, ct.b, pf.c0)))
            return false;
        // g^f1 = a1 * a^c1       h^f1 = b1 * (b/g)^c1
        if (exp(params, g, pf.f1) !=
            mul(params, pf.a1, exp(params, ct.a, pf.c1)))
            return false;
        if (exp(params, h, pf.f1) !=
            mul(params, pf.b1, exp(params, b_over_g, pf.c1)))
            return false;
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

// Chaum-Pedersen equality of discrete logs: share = a^x for the x behind
// verification key v = g^x. Binds the whole ciphertext, not just a.
struct DecryptionProof {
    GroupElement t_g;  // g^w
    GroupElement t_a;  // a^w
    Scalar c;
    Scalar f;  // w + c*x

    bool operator==(const DecryptionProof&) const = default;
};

inline DecryptionProof prove_decryption_share(const GroupParams& params,
                                              const Ciphertext& ct,
                                              const GroupElement& share,
                                              const GroupElement& v,
                                              const Scalar& x,
                                              EntropySource& rng) {
    Scalar w = random_scalar(params, rng);
    DecryptionProof pf;
    pf.t_g = exp(params, generator(params), w);
    pf.t_a = exp(params, ct.a, w);
    pf.c = challenge_scalar(params, kShareTag,
                            {&v.v, &ct.a.v, &ct.b.v, &share.v, &pf.t_g.v,
                             &pf.t_a.v});
    pf.f = scalar_add(params, w, scalar_mul(params, pf.c, x));
    return pf;
}

inline bool verify_decryption_share(const GroupParams& params,
                                    const Ciphertext& ct,
                                    const GroupElement& share,
                                    const GroupElement& v,
                                    const DecryptionProof& pf) {
    try {
        if (!in_subgroup(params, share) || !in_subgroup(params, v))
            return false;
        if (!in_subgroup(params, pf.t_g) || !in_subgroup(params, pf.t_a))
            return false;
        if (pf.c.v < 0 || pf.c.v >= params.q) return false;
        if (pf.f.v < 0 || pf.f.v >= params.q) return false;

        Scalar c = challenge_scalar(params, kShareTag,
                                    {&v.v, &ct.a.v, &ct.b.v, &share.v,
                                     &pf.t_g.v, &pf.t_a.v});
        if (c != pf.c) return false;
        // g^f = t_g * v^c       a^f = t_a * share^c
        if (exp(params, generator(params), pf.f) !=
            mul(params, pf.t_g, exp(params, v, pf.c)))
            return false;
        if (exp(params, ct.a, pf.f) !=
            mul(params, pf.t_a, exp(params, share, pf.c)))
            return false;
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace verivote::proofs
