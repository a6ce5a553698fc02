#pragma once

#include <stdexcept>
#include <string>

#include <gmpxx.h>

#include "verivote/bytes.hpp"
#include "verivote/entropy.hpp"

namespace verivote {

// Prime-order-q subgroup of Z_p^* with p = 2q + 1 and generator g.
struct GroupParams {
    mpz_class p;
    mpz_class q;
    mpz_class g;

    bool operator==(const GroupParams&) const = default;
};

// Exponent in [0, q).
struct Scalar {
    mpz_class v;

    bool operator==(const Scalar&) const = default;
};

// Subgroup member in [1, p).
struct GroupElement {
    mpz_class v;

    bool operator==(const GroupElement&) const = default;
};

inline std::string to_decimal(const mpz_class& v) { return v.get_str(10); }

inline mpz_class from_decimal(const std::string& s) {
    mpz_class v;
    if (v.set_str(s, 10) != 0)
        throw std::invalid_argument("not a decimal integer: " + s);
    return v;
}

// y = base^e mod p
inline GroupElement exp(const GroupParams& params, const GroupElement& base,
                        const Scalar& e) {
    GroupElement out;
    mpz_powm(out.v.get_mpz_t(), base.v.get_mpz_t(), e.v.get_mpz_t(),
             params.p.get_mpz_t());
    return out;
}

inline GroupElement mul(const GroupParams& params, const GroupElement& a,
                        const GroupElement& b) {
    GroupElement out;
    out.v = a.v * b.v;
    mpz_mod(out.v.get_mpz_t(), out.v.get_mpz_t(), params.p.get_mpz_t());
    return out;
}

inline GroupElement inv(const GroupParams& params, const GroupElement& a) {
    GroupElement out;
    if (mpz_invert(out.v.get_mpz_t(), a.v.get_mpz_t(), params.p.get_mpz_t()) == 0)
        throw std::invalid_argument("element not invertible mod p");
    return out;
}

inline GroupElement generator(const GroupParams& params) {
    return GroupElement{params.g};
}

inline bool in_subgroup(const GroupParams& params, const GroupElement& a) {
    if (a.v <= 0 || a.v >= params.p) return false;
    mpz_class r;
    mpz_powm(r.get_mpz_t(), a.v.get_mpz_t(), params.q.get_mpz_t(),
             params.p.get_mpz_t());
    return r == 1;
}

inline Scalar scalar_from(const GroupParams& params, const mpz_class& v) {
    Scalar out;
    mpz_mod(out.v.get_mpz_t(), v.get_mpz_t(), params.q.get_mpz_t());
    return out;
}

inline Scalar scalar_add(const GroupParams& params, const Scalar& a,
                         const Scalar& b) {
    return scalar_from(params, a.v + b.v);
}

inline Scalar scalar_sub(const GroupParams& params, const Scalar& a,
                         const Scalar& b) {
    return scalar_from(params, a.v - b.v);
}

inline Scalar scalar_mul(const GroupParams& params, const Scalar& a,
                         const Scalar& b) {
    return scalar_from(params, a.v * b.v);
}

inline Scalar scalar_neg(const GroupParams& params, const Scalar& a) {
    return scalar_from(params, -a.v);
}

inline Scalar scalar_inv(const GroupParams& params, const Scalar& a) {
    if (a.v == 0) throw std::invalid_argument("scalar_inv(0)");
    Scalar out;
    if (mpz_invert(out.v.get_mpz_t(), a.v.get_mpz_t(), params.q.get_mpz_t()) == 0)
        throw std::invalid_argument("scalar not invertible mod q");
    return out;
}

// Uniform draw from [0, q) by rejection sampling: sample ceil(bits(q)/8)
// bytes, mask the top byte down to bits(q), retry while >= q.
inline Scalar random_scalar(const GroupParams& params, EntropySource& rng) {
    size_t bits = mpz_sizeinbase(params.q.get_mpz_t(), 2);
    size_t nbytes = (bits + 7) / 8;
    unsigned top_mask = (bits % 8 == 0) ? 0xff : ((1u << (bits % 8)) - 1);
    Bytes buf(nbytes);
    mpz_class v;
    for (;;) {
        rng.fill(buf.data(), buf.size());
        buf[0] &= uint8_t(top_mask);
        mpz_import(v.get_mpz_t(), buf.size(), 1, 1, 0, 0, buf.data());
        if (v < params.q) return Scalar{v};
    }
}

// Probabilistic validation: p and q pass >= 64 Miller-Rabin rounds,
// p = 2q + 1, and g generates the order-q subgroup (g != 1, g^q = 1).
inline bool validate_params(const GroupParams& params) {
    if (params.p <= 3 || params.q <= 1 || params.g <= 1) return false;
    if (params.g >= params.p) return false;
    if (params.p != 2 * params.q + 1) return false;
    if (mpz_probab_prime_p(params.p.get_mpz_t(), 64) == 0) return false;
    if (mpz_probab_prime_p(params.q.get_mpz_t(), 64) == 0) return false;
    return in_subgroup(params, GroupElement{params.g});
}

// p = 23, q = 11, g = 2: every worked example in the tests uses this group.
inline GroupParams toy_group() {
    return GroupParams{23, 11, 2};
}

// RFC 3526 group 14: 2048-bit safe prime, p = 2q + 1. p = 7 mod 8, so
// g = 2 is a quadratic residue and generates the order-q subgroup.
inline GroupParams modp2048_group() {
    static const char* hex =
        "FFFFFFFFFFFFFFFFC90FDAA22168C234C4C6628B80DC1CD1"
        "29024E088A67CC74020BBEA63B139B22514A08798E3404DD"
        "EF9519B3CD3A431B302B0A6DF25F14374FE1356D6D51C245"
        "E485B576625E7EC6F44C42E9A637ED6B0BFF5CB6F406B7ED"
        "EE386BFB5A899FA5AE9F24117C4B1FE649286651ECE45B3D"
        "C2007CB8A163BF0598DA48361C55D39A69163FA8FD24CF5F"
        "83655D23DCA3AD961C62F356208552BB9ED529077096966D"
        "670C354E4ABC9804F1746C08CA18217C32905E462E36CE3B"
        "E39E772C180E86039B2783A2EC07A28FB5C55DF06F4C52C9"
        "DE2BCBF6955817183995497CEA956AE515D2261898FA0510"
        "15728E5A8AACAA68FFFFFFFFFFFFFFFF";
    GroupParams params;
    params.p = mpz_class(hex, 16);
    params.q = (params.p - 1) / 2;
    params.g = 2;
    return params;
}

inline GroupParams group_by_name(const std::string& name) {
    if (name == "toy") return toy_group();
    if (name == "modp2048") return modp2048_group();
    throw std::invalid_argument("unknown group: " + name);
}

}  // namespace verivote
