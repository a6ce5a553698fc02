#pragma once

#include <cstdint>
#include <stdexcept>

#include "verivote/group.hpp"

namespace verivote::elgamal {

struct KeyPair {
    Scalar x;        // secret exponent, nonzero
    GroupElement h;  // public key g^x
};

struct Ciphertext {
    GroupElement a;  // g^r
    GroupElement b;  // g^m * h^r

    bool operator==(const Ciphertext&) const = default;
};

// Thrown when decode_dlog scans past its bound.
struct NotInRange : std::runtime_error {
    explicit NotInRange(uint64_t bound)
        : std::runtime_error("decoded exponent exceeds bound " +
                             std::to_string(bound)) {}
};

inline KeyPair keygen(const GroupParams& params, EntropySource& rng) {
    Scalar x = random_scalar(params, rng);
    while (x.v == 0) x = random_scalar(params, rng);  // h = 1 leaks nothing but breaks proofs
    return KeyPair{x, exp(params, generator(params), x)};
}

inline Ciphertext encrypt_with(const GroupParams& params, const GroupElement& h,
                               uint64_t m, const Scalar& r) {
    GroupElement g = generator(params);
    Ciphertext ct;
    ct.a = exp(params, g, r);  // a = g^r
    ct.b = mul(params, exp(params, g, Scalar{mpz_class(m)}),
               exp(params, h, r));  // b = g^m * h^r
    return ct;
}

inline Ciphertext encrypt(const GroupParams& params, const GroupElement& h,
                          uint64_t m, EntropySource& rng) {
    return encrypt_with(params, h, m, random_scalar(params, rng));
}

// Same plaintext under fresh randomness: (a*g^s, b*h^s).
inline Ciphertext reencrypt_with(const GroupParams& params,
                                 const GroupElement& h, const Ciphertext& ct,
                                 const Scalar& s) {
    return Ciphertext{mul(params, ct.a, exp(params, generator(params), s)),
                      mul(params, ct.b, exp(params, h, s))};
}

inline Ciphertext reencrypt(const GroupParams& params, const GroupElement& h,
                            const Ciphertext& ct, EntropySource& rng) {
    return reencrypt_with(params, h, ct, random_scalar(params, rng));
}

// E(m1)*E(m2) = E(m1+m2), componentwise.
inline Ciphertext homomorphic_add(const GroupParams& params,
                                  const Ciphertext& c1, const Ciphertext& c2) {
    return Ciphertext{mul(params, c1.a, c2.a), mul(params, c1.b, c2.b)};
}

// Ciphertext encrypting 0 with randomness 0; identity for homomorphic_add.
inline Ciphertext identity_ciphertext() {
    return Ciphertext{GroupElement{1}, GroupElement{1}};
}

// g^m = b * (a^x)^{-1}; the exponent itself still has to be decoded.
inline GroupElement decrypt_to_group(const GroupParams& params, const Scalar& x,
                                     const Ciphertext& ct) {
    return mul(params, ct.b, inv(params, exp(params, ct.a, x)));
}

// Linear scan for m with g^m = y, m in [0, bound]. Tally counts are small
// (at most the number of cast ballots), so brute force is the whole story.
inline uint64_t decode_dlog(const GroupParams& params, const GroupElement& y,
                            uint64_t bound) {
    GroupElement cur{1};
    GroupElement g = generator(params);
    for (uint64_t m = 0; m <= bound; ++m) {
        if (cur == y) return m;
        cur = mul(params, cur, g);
    }
    throw NotInRange(bound);
}

}  // namespace verivote::elgamal
