#include <catch2/catch_amalgamated.hpp>

#include <verivote/serde.hpp>

using namespace verivote;
using nlohmann::json;

namespace {
const GroupParams g = toy_group();
}

TEST_CASE("group and ciphertext round trips", "[serde]") {
    GroupParams back = serde::decode_group(serde::encode(g));
    CHECK(back.p == g.p);
    CHECK(back.q == g.q);
    CHECK(back.g == g.g);

    elgamal::Ciphertext ct{GroupElement{4}, GroupElement{13}};
    CHECK(serde::decode_ciphertext(serde::encode(ct)) == ct);

    // numbers travel as decimal strings, safe for any magnitude
    json j = serde::encode(ct);
    CHECK(j.at("a").is_string());
    CHECK(j.at("a").get<std::string>() == "4");
}

TEST_CASE("proof round trips", "[serde]") {
    SeededEntropy rng("serde-proofs");
    GroupElement h{8};
    Scalar r = random_scalar(g, rng);
    auto ct = elgamal::encrypt_with(g, h, 1, r);
    proofs::ZeroOneProof pf = proofs::prove_zero_or_one(g, h, ct, 1, r, rng);
    proofs::ZeroOneProof back =
        serde::decode_zero_one_proof(serde::encode(pf));
    CHECK(back.a0 == pf.a0);
    CHECK(back.b1 == pf.b1);
    CHECK(back.c0.v == pf.c0.v);
    CHECK(back.f1.v == pf.f1.v);
    CHECK(proofs::verify_zero_or_one(g, h, ct, back));

    GroupElement share = exp(g, ct.a, Scalar{3});
    GroupElement v = exp(g, generator(g), Scalar{3});
    proofs::DecryptionProof dp =
        proofs::prove_decryption_share(g, ct, share, v, Scalar{3}, rng);
    proofs::DecryptionProof dback =
        serde::decode_decryption_proof(serde::encode(dp));
    CHECK(proofs::verify_decryption_share(g, ct, share, v, dback));
}

TEST_CASE("trustee key files round trip", "[serde]") {
    SeededEntropy rng("serde-trustee");
    auto dealt = trustees::dealer_keygen(g, shamir::SharingPolicy{2, 3}, rng);
    json j = serde::encode_trustee_key("eid-1", dealt.trustees[1]);
    CHECK(j.at("election_id") == "eid-1");
    trustees::TrusteeKey back = serde::decode_trustee_key(j);
    CHECK(back.index == 2);
    CHECK(back.x.v == dealt.trustees[1].x.v);
    CHECK(back.v == dealt.trustees[1].v);
}

TEST_CASE("board file round trip preserves every record", "[serde]") {
    SeededEntropy rng("serde-board");
    auto dealt = trustees::dealer_keygen(g, shamir::SharingPolicy{1, 2}, rng);
    std::vector<election::RosterEntry> roster = {
        {"ann", election::credential_digest("e", "ann", "pw")}};

    board::Board b;
    b.header.election_id = "e";
    b.header.group = g;
    b.header.h = dealt.h;
    b.header.verification_keys = trustees::verification_keys(dealt);
    b.header.policy = {1, 2};
    b.header.candidates = {"x", "y"};
    b.header.max_selections = 1;
    b.header.pseudonyms = false;
    b.header.roster_digest = election::roster_digest(roster);
    b.header.seed = "determinism-seed";

    auto cast = [&](std::vector<unsigned> choices) {
        auto pb = ballot::prepare(g, dealt.h, "e",
                                  ballot::BallotPlain{choices}, 2, 1, rng);
        ballot::seal(pb);
        return ballot::authenticate_and_cast(pb, "ann", "pw", false, roster);
    };
    board::post(g, b, cast({1, 0}), roster);
    board::post(g, b, cast({0, 1}), roster);  // supersedes
    board::close(b);

    auto lines = serde::board_to_lines(b);
    REQUIRE(lines.size() == 4);  // header, 2 entries, close marker
    board::Board back = serde::board_from_lines(lines);
    CHECK(back.closed);
    CHECK(back.header.election_id == "e");
    CHECK(back.header.seed == "determinism-seed");
    CHECK(back.header.h == b.header.h);
    REQUIRE(back.entries.size() == 2);
    CHECK(back.entries[0].commitment == b.entries[0].commitment);
    CHECK(back.entries[1].supersedes == b.entries[1].supersedes);
    CHECK(back.entries[0].ciphertexts == b.entries[0].ciphertexts);

    // serialization is canonical: re-encoding gives the same bytes
    CHECK(serde::board_to_lines(back) == lines);
}

TEST_CASE("board files reject structural nonsense", "[serde]") {
    CHECK_THROWS_AS(serde::board_from_lines({}), std::invalid_argument);
    CHECK_THROWS_AS(
        serde::board_from_lines({R"({"type":"entry"})"}),
        std::invalid_argument);  // must start with a header

    json header = json{{"type", "header"},
                       {"election_id", "e"},
                       {"group", serde::encode(g)},
                       {"h", "9"},
                       {"verification_keys", json::array()},
                       {"policy", json{{"k", 1}, {"n", 1}}},
                       {"candidates", json::array({"x"})},
                       {"max_selections", 1},
                       {"pseudonyms", false},
                       {"roster_digest", "d"},
                       {"seed", ""}};
    std::string h = header.dump();

    CHECK_THROWS_AS(
        serde::board_from_lines({h, R"({"type":"mystery"})"}),
        std::invalid_argument);
    CHECK_THROWS_AS(serde::board_from_lines(
                        {h, R"({"type":"close"})", R"({"type":"close"})"}),
                    std::invalid_argument);
}

TEST_CASE("tally, receipt, audit package and export round trips",
          "[serde]") {
    board::TallyRecord t;
    t.election_id = "e";
    t.bound = 3;
    t.policy = {2, 3};
    t.trustee_indices = {1, 3};
    board::CandidateResult res;
    res.name = "x";
    res.product = elgamal::Ciphertext{GroupElement{9}, GroupElement{9}};
    res.count = 1;
    SeededEntropy rng("serde-tally");
    auto ct = res.product;
    GroupElement share = exp(g, ct.a, Scalar{3});
    GroupElement v = exp(g, generator(g), Scalar{3});
    res.shares.push_back(trustees::DecryptionShare{
        1, share, proofs::prove_decryption_share(g, ct, share, v, Scalar{3},
                                                 rng)});
    t.results.push_back(res);

    board::TallyRecord tback = serde::decode_tally(serde::encode(t));
    CHECK(tback.election_id == "e");
    CHECK(tback.bound == 3);
    CHECK(tback.policy.k == 2);
    CHECK(tback.trustee_indices == std::vector<unsigned>{1, 3});
    REQUIRE(tback.results.size() == 1);
    CHECK(tback.results[0].product == res.product);
    CHECK(tback.results[0].count == 1);
    REQUIRE(tback.results[0].shares.size() == 1);
    CHECK(tback.results[0].shares[0].share == share);

    ballot::Receipt r{"e", "ann", "c0ffee", 7};
    ballot::Receipt rback = serde::decode_receipt(serde::encode(r));
    CHECK(rback.identity == "ann");
    CHECK(rback.sequence == 7);

    ballot::AuditPackage pkg;
    pkg.election_id = "e";
    pkg.choices = {1, 0};
    pkg.randomness = {Scalar{2}, Scalar{3}};
    pkg.ciphertexts = {elgamal::Ciphertext{GroupElement{4}, GroupElement{13}},
                       elgamal::Ciphertext{GroupElement{8}, GroupElement{6}}};
    pkg.commitment = ballot::ballot_commitment(pkg.ciphertexts);
    ballot::AuditPackage pback =
        serde::decode_audit_package(serde::encode(pkg));
    CHECK(pback.choices == pkg.choices);
    CHECK(pback.randomness[1].v == 3);
    CHECK(pback.ciphertexts == pkg.ciphertexts);

    ballot::CoercionExport ce{"buyer", pkg};
    ballot::CoercionExport ceback =
        serde::decode_coercion_export(serde::encode(ce));
    CHECK(ceback.destination == "buyer");
    CHECK(ceback.package.commitment == pkg.commitment);
}

TEST_CASE("public record round trip", "[serde]") {
    SeededEntropy rng("serde-record");
    auto dealt = trustees::dealer_keygen(g, shamir::SharingPolicy{2, 3}, rng);
    board::PublicRecord rec;
    rec.config.election_id = "e";
    rec.config.group_name = "toy";
    rec.config.candidates = {"x", "y"};
    rec.config.max_selections = 1;
    rec.config.policy = {2, 3};
    rec.config.pseudonyms = true;
    rec.config.roster = {{"P1234", "digest-1"}};
    rec.group = g;
    rec.h = dealt.h;
    rec.verification_keys = trustees::verification_keys(dealt);
    rec.roster_digest = election::roster_digest(rec.config.roster);

    board::PublicRecord back =
        serde::decode_public_record(serde::encode(rec));
    CHECK(back.config.election_id == "e");
    CHECK(back.config.pseudonyms);
    CHECK(back.config.roster.size() == 1);
    CHECK(back.config.roster[0].credential_digest == "digest-1");
    CHECK(back.h == rec.h);
    CHECK(back.verification_keys.size() == 3);
    CHECK(back.roster_digest == rec.roster_digest);
}
