#include <catch2/catch_amalgamated.hpp>

#include <set>

#include <verivote/ballot.hpp>

using namespace verivote;
using namespace verivote::ballot;

namespace {
const GroupParams g = toy_group();
const Scalar x{3};
const GroupElement h{8};
const std::string eid = "test-election";
const std::vector<std::string> cands = {"alice-list", "bob-list"};

BallotPlain mark(std::vector<unsigned> v) { return BallotPlain{std::move(v)}; }
}  // namespace

TEST_CASE("plaintext validation", "[ballot]") {
    CHECK_NOTHROW(validate_plain(mark({1, 0}), 2, 1));
    CHECK_NOTHROW(validate_plain(mark({0, 0}), 2, 1));  // abstain in place
    CHECK_NOTHROW(validate_plain(mark({1, 1}), 2, 2));
    CHECK_THROWS_WITH(validate_plain(mark({1, 1}), 2, 1),
                      Catch::Matchers::ContainsSubstring("overvote"));
    CHECK_THROWS(validate_plain(mark({1}), 2, 1));     // wrong length
    CHECK_THROWS(validate_plain(mark({2, 0}), 2, 1));  // not 0/1
}

TEST_CASE("prepared ballots encrypt the choices with valid proofs",
          "[ballot]") {
    SeededEntropy rng("prepare");
    PreparedBallot pb = prepare(g, h, eid, mark({1, 0}), 2, 1, rng);

    CHECK(pb.state == BallotState::prepared);
    REQUIRE(pb.ciphertexts.size() == 2);
    REQUIRE(pb.proofs.size() == 2);
    REQUIRE(pb.secrets.has_value());
    CHECK(pb.secrets->choices == std::vector<unsigned>{1, 0});
    CHECK(pb.commitment == ballot_commitment(pb.ciphertexts));

    for (size_t i = 0; i < 2; ++i) {
        // the stored randomness must reproduce the ciphertext exactly
        auto expected = elgamal::encrypt_with(g, h, pb.secrets->choices[i],
                                              pb.secrets->randomness[i]);
        CHECK(pb.ciphertexts[i] == expected);
        CHECK(proofs::verify_zero_or_one(g, h, pb.ciphertexts[i],
                                         pb.proofs[i]));
        uint64_t m = elgamal::decode_dlog(
            g, elgamal::decrypt_to_group(g, x, pb.ciphertexts[i]), 1);
        CHECK(m == pb.secrets->choices[i]);
    }
}

TEST_CASE("an honest device passes audit and hands over a fresh ballot",
          "[ballot]") {
    SeededEntropy rng("honest-audit");
    BallotPlain intended = mark({0, 1});
    PreparedBallot pb = prepare(g, h, eid, intended, 2, 1, rng);
    std::string audited_commitment = pb.commitment;
    auto audited_cts = pb.ciphertexts;

    AuditOutcome out = audit(g, h, 1, pb, intended, rng);
    CHECK(out.verdict);
    CHECK(out.detail.empty());
    CHECK(out.package.commitment == audited_commitment);
    CHECK(out.package.choices == intended.choices);
    CHECK(out.package.ciphertexts == audited_cts);

    // the audited ballot is spent
    CHECK(pb.state == BallotState::audited);
    CHECK_FALSE(pb.secrets.has_value());
    CHECK_THROWS_AS(seal(pb), std::logic_error);
    CHECK_THROWS_AS(audit(g, h, 1, pb, intended, rng), std::logic_error);

    // the fresh ballot reuses the choices under new randomness
    REQUIRE(out.next.state == BallotState::prepared);
    REQUIRE(out.next.secrets.has_value());
    CHECK(out.next.secrets->choices == intended.choices);
    CHECK(out.next.commitment != audited_commitment);
    for (size_t i = 0; i < 2; ++i) {
        CHECK(out.next.secrets->randomness[i].v !=
              out.package.randomness[i].v);
        CHECK(!(out.next.ciphertexts[i] == audited_cts[i]));
    }
}

TEST_CASE("audit catches a device that encrypted something else",
          "[ballot]") {
    SeededEntropy rng("cheating-device");
    BallotPlain intended = mark({1, 0});

    // the device quietly encodes the other candidate
    PreparedBallot pb = prepare(g, h, eid, mark({0, 1}), 2, 1, rng);
    AuditOutcome out = audit(g, h, 1, pb, intended, rng);
    CHECK_FALSE(out.verdict);
    CHECK_FALSE(out.detail.empty());

    // the device swaps in a foreign ciphertext after committing
    PreparedBallot pb2 = prepare(g, h, eid, intended, 2, 1, rng);
    pb2.ciphertexts[0] = elgamal::encrypt(g, h, 0, rng);
    AuditOutcome out2 = audit(g, h, 1, pb2, intended, rng);
    CHECK_FALSE(out2.verdict);
    CHECK_THAT(out2.detail,
               Catch::Matchers::ContainsSubstring("commitment"));
}

TEST_CASE("repeated audits yield distinct ballots, then cast differs from "
          "all of them",
          "[ballot]") {
    SeededEntropy rng("audit-chain");
    BallotPlain intended = mark({1, 0});
    PreparedBallot pb = prepare(g, h, eid, intended, 2, 1, rng);

    std::set<std::string> commitments;
    std::vector<elgamal::Ciphertext> audited_firsts;
    for (int round = 0; round < 5; ++round) {
        commitments.insert(pb.commitment);
        audited_firsts.push_back(pb.ciphertexts[0]);
        AuditOutcome out = audit(g, h, 1, pb, intended, rng);
        REQUIRE(out.verdict);
        pb = std::move(out.next);
    }
    commitments.insert(pb.commitment);
    CHECK(commitments.size() == 6);  // no repeats across the chain

    seal(pb);
    for (const auto& ct : audited_firsts)
        CHECK(!(pb.ciphertexts[0] == ct));  // audited ballots never cast
}

TEST_CASE("sealing erases the secrets and is final", "[ballot]") {
    SeededEntropy rng("seal");
    PreparedBallot pb = prepare(g, h, eid, mark({1, 0}), 2, 1, rng);
    seal(pb);
    CHECK(pb.state == BallotState::sealed);
    CHECK_FALSE(pb.secrets.has_value());
    CHECK_THROWS_AS(seal(pb), std::logic_error);
    CHECK_THROWS_AS(coerce_export(pb, "coercer"), std::logic_error);
    BallotPlain intended = mark({1, 0});
    CHECK_THROWS_AS(audit(g, h, 1, pb, intended, rng), std::logic_error);
}

TEST_CASE("coercion export opens the exact ballot that is then cast",
          "[ballot]") {
    SeededEntropy rng("coerce");
    PreparedBallot pb = prepare(g, h, eid, mark({0, 1}), 2, 1, rng);
    CoercionExport exp = coerce_export(pb, "the-buyer");
    CHECK(exp.destination == "the-buyer");
    CHECK(exp.package.choices == std::vector<unsigned>{0, 1});
    CHECK(exp.package.ciphertexts == pb.ciphertexts);

    // the export's randomness re-derives the ciphertexts: that is the proof
    for (size_t i = 0; i < 2; ++i)
        CHECK(elgamal::encrypt_with(g, h, exp.package.choices[i],
                                    exp.package.randomness[i]) ==
              exp.package.ciphertexts[i]);

    seal(pb);  // same ballot goes to the board unchanged
    CHECK(pb.ciphertexts == exp.package.ciphertexts);
}

TEST_CASE("authentication against the roster", "[ballot]") {
    SeededEntropy rng("auth");
    std::vector<election::RosterEntry> roster = {
        {"ann", election::credential_digest(eid, "ann", "pw-ann")},
        {"bob", election::credential_digest(eid, "bob", "pw-bob")},
    };
    PreparedBallot pb = prepare(g, h, eid, mark({1, 0}), 2, 1, rng);
    CHECK_THROWS_AS(  // not sealed yet
        authenticate_and_cast(pb, "ann", "pw-ann", false, roster),
        std::logic_error);
    seal(pb);

    CastBallot cast = authenticate_and_cast(pb, "ann", "pw-ann", false, roster);
    CHECK(cast.identity == "ann");
    CHECK(cast.ciphertexts == pb.ciphertexts);
    CHECK(cast.commitment == pb.commitment);

    CHECK_THROWS_AS(authenticate_and_cast(pb, "ann", "wrong", false, roster),
                    AuthenticationError);
    CHECK_THROWS_AS(authenticate_and_cast(pb, "zoe", "pw", false, roster),
                    AuthenticationError);
}

TEST_CASE("pseudonymous casting maps the identity before lookup",
          "[ballot]") {
    SeededEntropy rng("pseud");
    std::string display = election::display_identity(true, eid, "ann");
    CHECK(display != "ann");
    CHECK(display.substr(0, 1) == "P");
    std::vector<election::RosterEntry> roster = {
        {display, election::credential_digest(eid, display, "pw-ann")}};

    PreparedBallot pb = prepare(g, h, eid, mark({1, 0}), 2, 1, rng);
    seal(pb);
    CastBallot cast = authenticate_and_cast(pb, "ann", "pw-ann", true, roster);
    CHECK(cast.identity == display);
}
