#include <catch2/catch_amalgamated.hpp>

#include <fstream>

#include <json.hpp>
#include <verivote/ries.hpp>

#include "oracle.hpp"

using namespace verivote;
using namespace verivote::ries;
using nlohmann::json;

namespace {

RiesParams toy_params() {
    RiesParams p;
    p.key_bits = 20;
    p.master_key = from_hex("0123456789abcdef");
    p.el_id = "EL1";
    p.par_gp = "PG1";
    return p;
}

RiesParams des_params() {
    RiesParams p;
    p.key_bits = 112;
    p.master_key = from_hex("000102030405060708090a0b0c0d0e0f");
    p.el_id = "EL1";
    p.par_gp = "PG1";
    return p;
}

json load_golden() {
    std::ifstream in(std::string(TESTS_DATA_DIR) + "/ries_golden.json");
    REQUIRE(in.good());
    json j;
    in >> j;
    return j;
}

}  // namespace

TEST_CASE("parameter widths", "[ries]") {
    CHECK_NOTHROW(validate_params(toy_params()));
    CHECK_NOTHROW(validate_params(des_params()));

    RiesParams p = toy_params();
    p.key_bits = 15;
    CHECK_THROWS_AS(validate_params(p), std::invalid_argument);
    p.key_bits = 29;
    CHECK_THROWS_AS(validate_params(p), std::invalid_argument);
    p.key_bits = 20;
    p.master_key = from_hex("0123");  // wrong length
    CHECK_THROWS_AS(validate_params(p), std::invalid_argument);
    p = des_params();
    p.master_key = from_hex("0123456789abcdef");  // 112 needs 16 bytes
    CHECK_THROWS_AS(validate_params(p), std::invalid_argument);
}

TEST_CASE("voter keys are truncated to the configured width", "[ries]") {
    RiesParams p = toy_params();
    for (int i = 0; i < 200; ++i) {
        VoterKey vk = derive_voter_key(p, std::to_string(100000000 + i));
        CHECK(vk.bits == 20);
        CHECK(vk.key < (uint64_t(1) << 20));
    }
    VoterKey vk56 = derive_voter_key(des_params(), "100000001");
    CHECK(vk56.bits == 56);
}

TEST_CASE("the triple-DES MAC matches an EVP CBC computation", "[ries]") {
    RiesParams p = des_params();
    std::vector<Bytes> messages = {
        Bytes{},
        Bytes{1, 2, 3, 4, 5, 6, 7, 8},
        Bytes{0xde, 0xad, 0xbe, 0xef, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12,
              13, 14, 15, 16, 17, 18, 19, 20},
        from_hex("00"),
    };
    for (const auto& msg : messages) {
        uint64_t lib = detail::mac_master(p, msg);
        auto ora = oracle::des2_cbc_mac(p.master_key, msg);
        CHECK(lib == detail::load_be64(ora.data()));
    }
}

TEST_CASE("the MDC is the leading 8 bytes of a SHA-256", "[ries]") {
    uint64_t m = 0x0123456789abcdefULL;
    Bytes buf(8);
    detail::store_be64(m, buf.data());
    Digest d = sha256(buf);
    CHECK(mdc(m) == detail::load_be64(d.data()));
}

TEST_CASE("golden derivation vectors stay fixed", "[ries]") {
    json g = load_golden();

    {
        const json& t = g.at("toy");
        RiesParams p = toy_params();
        VoterKey vk = derive_voter_key(p, t.at("vnid").get<std::string>());
        CHECK(hex16(vk.key) == t.at("kp").get<std::string>());
        CHECK(hex16(pseudo_identity(p.el_id, vk)) ==
              t.at("pid").get<std::string>());
        CHECK(hex16(rnpid_for(vk, "red", p.el_id, 1980)) ==
              t.at("rnpid_red_1980").get<std::string>());
    }
    {
        const json& t = g.at("des2");
        RiesParams p = des_params();
        VoterKey vk = derive_voter_key(p, t.at("vnid").get<std::string>());
        CHECK(hex16(vk.key) == t.at("kp").get<std::string>());
        CHECK(hex16(pseudo_identity(p.el_id, vk)) ==
              t.at("pid").get<std::string>());
        CHECK(hex16(rnpid_for(vk, "red", p.el_id, 1980)) ==
              t.at("rnpid_red_1980").get<std::string>());
    }
    {
        const json& t = g.at("feistel");
        uint64_t key = parse_hex16(t.at("key").get<std::string>());
        uint64_t block = parse_hex16(t.at("block").get<std::string>());
        CHECK(hex16(detail::feistel_encrypt(key, block)) ==
              t.at("out").get<std::string>());
    }
    CHECK(sms_token(g.at("sms").at("ms").get<uint64_t>()) ==
          g.at("sms").at("token").get<uint32_t>());
}

TEST_CASE("vote codes verify only as issued", "[ries]") {
    RiesParams p = toy_params();
    VoterKey vk = derive_voter_key(p, "100000007");
    VoteCode code = make_vote_code(vk, p.el_id, {"red", "green"}, "red", 1975);
    CHECK(verify_vote_code(p, "100000007", code));

    VoteCode other = code;
    other.birthyear = 1976;
    CHECK_FALSE(verify_vote_code(p, "100000007", other));
    other = code;
    other.choice = "green";
    CHECK_FALSE(verify_vote_code(p, "100000007", other));
    CHECK_FALSE(verify_vote_code(p, "100000008", code));

    CHECK_THROWS_AS(
        make_vote_code(vk, p.el_id, {"red", "green"}, "blue", 1975),
        std::invalid_argument);
}

TEST_CASE("simulation is deterministic under a fixed seed", "[ries]") {
    RiesParams p = toy_params();
    SeededEntropy r1("sim-seed"), r2("sim-seed"), r3("other-seed");
    RiesElection a = simulate(p, {"red", "green"}, 25, r1);
    RiesElection b = simulate(p, {"red", "green"}, 25, r2);
    RiesElection c = simulate(p, {"red", "green"}, 25, r3);

    CHECK(registry_csv(a.published.registry) ==
          registry_csv(b.published.registry));
    CHECK(table_csv(a.published.table) == table_csv(b.published.table));
    CHECK(table_csv(a.published.table) != table_csv(c.published.table));

    CHECK(a.published.registry.size() == 25);
    CHECK(a.published.table.size() < 25);  // some voters abstain
    CHECK(a.published.table.size() > 0);

    // every cast vote's code verifies against the ground truth
    for (const auto& v : a.voters) {
        if (!v.voted) continue;
        VoterKey vk = derive_voter_key(p, v.vnid);
        VoteCode code =
            make_vote_code(vk, p.el_id, {"red", "green"}, v.choice,
                           v.birthyear);
        CHECK(verify_vote_code(p, v.vnid, code));
    }
}

TEST_CASE("csv artifacts round trip", "[ries]") {
    CHECK(hex16(0x00ff00ff00ff00ffULL) == "00ff00ff00ff00ff");
    CHECK(parse_hex16("00ff00ff00ff00ff") == 0x00ff00ff00ff00ffULL);
    CHECK_THROWS(parse_hex16("xyz"));

    std::vector<TableRow> rows = {{0x1122334455667788ULL, 0x99aabbccddeeff00ULL},
                                  {1, 2}};
    auto parsed = parse_table_csv(table_csv(rows));
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[0].pseudo_identity == rows[0].pseudo_identity);
    CHECK(parsed[1].rnpid == 2);

    std::vector<uint64_t> reg = {42, 7};
    CHECK(parse_registry_csv(registry_csv(reg)) == reg);
}

TEST_CASE("forgery finds a registered key from public data alone",
          "[ries][attack]") {
    RiesParams p = toy_params();
    p.key_bits = 16;
    SeededEntropy rng("forge-seed");
    RiesElection e = simulate(p, {"red", "green"}, 40, rng);

    ForgeResult res = forge_vote_code(e.published, 0, 1);
    REQUIRE(res.found);
    CHECK(res.keys_tried <= (uint64_t(1) << 16));
    CHECK(res.keyspace == (uint64_t(1) << 16));

    // oracle 1: the key's pseudo-identity is in the published registry
    VoterKey vk{16, res.kp};
    uint64_t pid = pseudo_identity(p.el_id, vk);
    CHECK(pid == res.pseudo_identity);
    CHECK(std::find(e.published.registry.begin(), e.published.registry.end(),
                    pid) != e.published.registry.end());

    // oracle 2: with the master key, the forged code verifies as some
    // registered voter's vote
    bool attributed = false;
    for (const auto& v : e.voters) {
        if (pseudo_identity(p.el_id, derive_voter_key(p, v.vnid)) != pid)
            continue;
        CHECK(verify_vote_code(p, v.vnid, res.code));
        attributed = true;
    }
    CHECK(attributed);
}

TEST_CASE("forgery respects its budget and is worker-deterministic",
          "[ries][attack]") {
    RiesParams p = toy_params();
    p.key_bits = 16;
    SeededEntropy rng("budget-seed");
    RiesElection e = simulate(p, {"red"}, 1, rng);

    ForgeResult res = forge_vote_code(e.published, 5, 1);
    CHECK_FALSE(res.found);
    CHECK(res.keys_tried == 5);

    ForgeResult w1 = forge_vote_code(e.published, 0, 1);
    ForgeResult w3 = forge_vote_code(e.published, 0, 3);
    REQUIRE(w1.found);
    REQUIRE(w3.found);
    CHECK(w1.kp == w3.kp);  // lowest matching key, regardless of threads

    std::string note = forge_extrapolation(w1);
    CHECK_THAT(note, Catch::Matchers::ContainsSubstring("2008 PC"));
    CHECK_THAT(note, Catch::Matchers::ContainsSubstring("dedicated hardware"));
}

TEST_CASE("the registry attack reads eligibility, turnout and votes",
          "[ries][attack]") {
    RiesParams p = toy_params();
    p.key_bits = 16;
    SeededEntropy rng("registry-seed");
    RiesElection e = simulate(p, {"red", "green", "blue"}, 30, rng);

    std::vector<std::string> probes;
    for (const auto& v : e.voters) probes.push_back(v.vnid);
    probes.push_back("999999999");  // never registered

    auto findings = registry_attack(p, probes, e.published);
    REQUIRE(findings.size() == 31);

    for (size_t i = 0; i < e.voters.size(); ++i) {
        const auto& v = e.voters[i];
        const auto& f = findings[i];
        INFO("voter " << v.vnid);
        CHECK(f.eligible);
        CHECK(f.voted == v.voted);
        if (v.voted) {
            CHECK(f.attributed);
            CHECK(f.choice == v.choice);
            CHECK(f.birthyear == v.birthyear);
        }
    }
    CHECK_FALSE(findings.back().eligible);
    CHECK_FALSE(findings.back().voted);
}

TEST_CASE("six-digit tokens follow the documented generator", "[ries]") {
    for (uint64_t ms = 1200000000000ULL; ms < 1200000000050ULL; ++ms) {
        uint32_t t = sms_token(ms);
        CHECK(t < 1000000);
        CHECK(t == oracle::java_six_digits(ms));
    }
}

TEST_CASE("a timestamp window scan recovers the token", "[ries][attack]") {
    SeededEntropy rng("sms-seed");
    for (int run = 0; run < 50; ++run) {
        uint64_t t_true =
            1200000000000ULL + detail::uniform_below(rng, 1000000000ULL);
        uint32_t target = sms_token(t_true);
        SmsAttackResult res =
            sms_token_attack(t_true - 2000, t_true + 2000, target);
        REQUIRE(res.hit);
        CHECK(res.guesses <= 4001);
        CHECK(sms_token(res.seed) == target);
        CHECK(res.seed <= t_true);  // first seed in the window that works
    }
}
