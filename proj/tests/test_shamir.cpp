#include <catch2/catch_amalgamated.hpp>

#include <functional>

#include <verivote/shamir.hpp>

using namespace verivote;
using namespace verivote::shamir;

// Hand-worked polynomial over q = 11: f(x) = 5 + 3x gives the shares
// (1,8), (2,0), (3,3). Recombining (1,8) and (3,3) at zero uses
// lambda_1 = 3/(3-1) = 3*6 = 7 and lambda_3 = 1/(1-3) = inv(9) = 5,
// so 8*7 + 3*5 = 71 = 5 mod 11.

TEST_CASE("splitting matches the worked polynomial", "[shamir]") {
    GroupParams g = toy_group();
    // one coefficient drawn for k = 2: script it to 3
    ScriptedEntropy rng(Bytes{0x03});
    auto shares = split(g, Scalar{5}, SharingPolicy{2, 3}, rng);
    REQUIRE(shares.size() == 3);
    CHECK(shares[0].index == 1);
    CHECK(shares[0].value.v == 8);
    CHECK(shares[1].index == 2);
    CHECK(shares[1].value.v == 0);
    CHECK(shares[2].index == 3);
    CHECK(shares[2].value.v == 3);
}

TEST_CASE("lagrange coefficients at zero", "[shamir]") {
    GroupParams g = toy_group();
    CHECK(lagrange_at_zero(g, {1, 2}, 1).v == 2);
    CHECK(lagrange_at_zero(g, {1, 2}, 2).v == 10);
    CHECK(lagrange_at_zero(g, {1, 3}, 1).v == 7);
    CHECK(lagrange_at_zero(g, {1, 3}, 3).v == 5);
    CHECK_THROWS(lagrange_at_zero(g, {1, 2}, 5));   // i not in the set
    CHECK_THROWS(lagrange_at_zero(g, {1, 1}, 1));   // duplicate index
    CHECK_THROWS(lagrange_at_zero(g, {0, 1}, 0));   // index zero
}

TEST_CASE("any two of the worked shares reconstruct the secret", "[shamir]") {
    GroupParams g = toy_group();
    std::vector<SharePoint> all = {
        {1, Scalar{8}}, {2, Scalar{0}}, {3, Scalar{3}}};
    CHECK(reconstruct(g, {all[0], all[1]}).v == 5);
    CHECK(reconstruct(g, {all[0], all[2]}).v == 5);
    CHECK(reconstruct(g, {all[1], all[2]}).v == 5);
    CHECK(reconstruct(g, all).v == 5);  // more than k also works
    CHECK_THROWS(reconstruct(g, {}));
}

TEST_CASE("policy sanity", "[shamir]") {
    CHECK_NOTHROW(check_policy(SharingPolicy{1, 1}));
    CHECK_NOTHROW(check_policy(SharingPolicy{3, 5}));
    CHECK_THROWS_AS(check_policy(SharingPolicy{0, 3}), std::invalid_argument);
    CHECK_THROWS_AS(check_policy(SharingPolicy{4, 3}), std::invalid_argument);
}

namespace {
// every k-subset of n share indices
void subsets(unsigned n, unsigned k,
             const std::function<void(const std::vector<unsigned>&)>& fn) {
    std::vector<unsigned> pick(k);
    std::function<void(unsigned, unsigned)> rec = [&](unsigned start,
                                                      unsigned depth) {
        if (depth == k) {
            fn(pick);
            return;
        }
        for (unsigned i = start; i <= n; ++i) {
            pick[depth] = i;
            rec(i + 1, depth + 1);
        }
    };
    rec(1, 0);
}
}  // namespace

TEST_CASE("every qualified subset reconstructs, exhaustively", "[shamir]") {
    GroupParams g = toy_group();
    SystemEntropy rng;
    for (unsigned n = 1; n <= 6; ++n) {
        for (unsigned k = 1; k <= n; ++k) {
            for (int trial = 0; trial < 20; ++trial) {
                Scalar secret = random_scalar(g, rng);
                auto shares = split(g, secret, SharingPolicy{k, n}, rng);
                subsets(n, k, [&](const std::vector<unsigned>& idx) {
                    std::vector<SharePoint> subset;
                    for (unsigned i : idx) subset.push_back(shares[i - 1]);
                    REQUIRE(reconstruct(g, subset).v == secret.v);
                });
            }
        }
    }
}

TEST_CASE("below the threshold every secret stays equally likely",
          "[shamir]") {
    // An attacker holding k-1 shares extends them with a guessed point
    // and interpolates. Over many random sharings the guess lands on the
    // real secret with probability 1/q and no more: at q = 11 that is
    // about 9.1%, which the band below pins well away from both 0% and
    // a materially better-than-chance rate.
    GroupParams g = toy_group();
    SystemEntropy rng;
    const unsigned k = 3, n = 5;
    const int trials = 10000;
    int hits = 0;
    for (int t = 0; t < trials; ++t) {
        Scalar secret = random_scalar(g, rng);
        auto shares = split(g, secret, SharingPolicy{k, n}, rng);
        std::vector<SharePoint> view(shares.begin(), shares.begin() + (k - 1));
        view.push_back(SharePoint{k, Scalar{0}});  // attacker's assumption
        if (reconstruct(g, view).v == secret.v) ++hits;
    }
    // binomial(10000, 1/11): mean 909, sigma about 29; this band is 7 sigma
    CHECK(hits > 700);
    CHECK(hits < 1120);
}
