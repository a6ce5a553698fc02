#pragma once

#include <set>
#include <stdexcept>
#include <vector>

#include "verivote/group.hpp"

namespace verivote::shamir {

struct SharePoint {
    unsigned index = 0;  // evaluation point x, never 0
    Scalar value;        // f(index) mod q

    bool operator==(const SharePoint&) const = default;
};

struct SharingPolicy {
    unsigned k = 0;  // shares needed to reconstruct
    unsigned n = 0;  // shares issued

    bool operator==(const SharingPolicy&) const = default;
};

inline void check_policy(const SharingPolicy& policy) {
    if (policy.k < 1) throw std::invalid_argument("threshold k must be >= 1");
    if (policy.k > policy.n)
        throw std::invalid_argument("threshold k exceeds share count n");
}

// Degree k-1 polynomial f with f(0) = secret and uniform higher
// coefficients; shares are (i, f(i)) for i = 1..n.
inline std::vector<SharePoint> split(const GroupParams& params,
                                     const Scalar& secret,
                                     const SharingPolicy& policy,
                                     EntropySource& rng) {
    check_policy(policy);
    std::vector<Scalar> coeffs;
    coeffs.push_back(scalar_from(params, secret.v));
    for (unsigned j = 1; j < policy.k; ++j)
        coeffs.push_back(random_scalar(params, rng));

    std::vector<SharePoint> shares;
    shares.reserve(policy.n);
    for (unsigned i = 1; i <= policy.n; ++i) {
        // Horner: f(i) = c0 + i*(c1 + i*(c2 + ...))
        Scalar x{mpz_class(i)};
        Scalar y{0};
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
            y = scalar_add(params, scalar_mul(params, y, x), *it);
        shares.push_back(SharePoint{i, y});
    }
    return shares;
}

// Lagrange basis coefficient at x = 0 for the share with index i, over
// the given index set: L_i(0) = prod_{j != i} x_j / (x_j - x_i) mod q.
inline Scalar lagrange_at_zero(const GroupParams& params,
                               const std::vector<unsigned>& indices,
                               unsigned i) {
    bool found = false;
    Scalar num{1}, den{1};
    std::set<unsigned> seen;
    for (unsigned j : indices) {
        if (j == 0) throw std::invalid_argument("share index 0");
        if (!seen.insert(j).second)
            throw std::invalid_argument("duplicate share index");
        if (j == i) {
            found = true;
            continue;
        }
        num = scalar_mul(params, num, Scalar{mpz_class(j)});
        den = scalar_mul(
            params, den,
            scalar_sub(params, Scalar{mpz_class(j)}, Scalar{mpz_class(i)}));
    }
    if (!found) throw std::invalid_argument("index not in set");
    return scalar_mul(params, num, scalar_inv(params, den));
}

// f(0) = sum_i y_i * L_i(0). With fewer than k shares this evaluates a
// different polynomial and yields an unrelated value, never an error.
inline Scalar reconstruct(const GroupParams& params,
                          const std::vector<SharePoint>& shares) {
    if (shares.empty()) throw std::invalid_argument("no shares");
    std::vector<unsigned> indices;
    indices.reserve(shares.size());
    for (const auto& s : shares) indices.push_back(s.index);

    Scalar acc{0};
    for (const auto& s : shares) {
        Scalar lambda = lagrange_at_zero(params, indices, s.index);
        acc = scalar_add(params, acc, scalar_mul(params, s.value, lambda));
    }
    return acc;
}

}  // namespace verivote::shamir
