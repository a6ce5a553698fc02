#pragma once

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include "verivote/ries.hpp"
#include "verivote/serde.hpp"
#include "verivote/verify.hpp"

// The election harness: every subcommand is a function here so tests can
// drive whole elections in-process; the CLI binary is a thin wrapper.
namespace verivote::commands {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitState = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- files ----

namespace detail {

inline std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StateError("missing file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw StateError("cannot write " + path.string());
    out << text;
    out.flush();
    if (!out) throw StateError("write failed: " + path.string());
}

inline void append_line(const fs::path& path, const std::string& line) {
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw StateError("cannot append to " + path.string());
    out << line << "\n";
    out.flush();
    if (!out) throw StateError("append failed: " + path.string());
}

inline std::vector<std::string> read_lines(const fs::path& path) {
    std::istringstream in(read_text(path));
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) lines.push_back(line);
    return lines;
}

inline json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw StateError("corrupt " + what + ": " + e.what());
    }
}

// Exclusive advisory lock on the board file; serializes concurrent vote
// and close commands against one election directory.
class FileLock {
  public:
    explicit FileLock(const fs::path& path) {
        fd_ = ::open(path.c_str(), O_RDWR);
        if (fd_ < 0) throw StateError("cannot open for locking: " + path.string());
        if (::flock(fd_, LOCK_EX) != 0) {
            ::close(fd_);
            fd_ = -1;
            throw StateError("cannot lock " + path.string());
        }
    }
    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;
    ~FileLock() {
        if (fd_ >= 0) {
            ::flock(fd_, LOCK_UN);
            ::close(fd_);
        }
    }

  private:
    int fd_ = -1;
};

inline std::string sanitize(const std::string& name) {
    std::string out;
    for (char c : name)
        out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
    return out.empty() ? "_" : out;
}

}  // namespace detail

inline fs::path board_path(const fs::path& dir) { return dir / "board.jsonl"; }
inline fs::path record_path(const fs::path& dir) {
    return dir / "public_record.json";
}
inline fs::path tally_path(const fs::path& dir) { return dir / "tally.json"; }
inline fs::path trustee_path(const fs::path& dir, unsigned index) {
    return dir / ("trustee-" + std::to_string(index) + ".json");
}

inline board::PublicRecord load_record(const fs::path& dir) {
    return serde::decode_public_record(detail::parse_json(
        detail::read_text(record_path(dir)), "public record"));
}

inline board::Board load_board(const fs::path& dir) {
    try {
        return serde::board_from_lines(detail::read_lines(board_path(dir)));
    } catch (const std::invalid_argument& e) {
        throw StateError("board file: " + std::string(e.what()));
    } catch (const json::exception& e) {
        throw StateError("board file: " + std::string(e.what()));
    }
}

inline board::TallyRecord load_tally(const fs::path& dir) {
    if (!fs::exists(tally_path(dir)))
        throw StateError("no tally record; run tally first");
    return serde::decode_tally(detail::parse_json(
        detail::read_text(tally_path(dir)), "tally record"));
}

// Deterministic elections derive every stream from the recorded seed plus
// a purpose label; without a seed this is the system source.
inline std::unique_ptr<EntropySource> election_entropy(
    const std::string& seed, std::initializer_list<std::string_view> labels) {
    if (seed.empty()) return std::make_unique<SystemEntropy>();
    Bytes key;
    append_field(key, seed);
    for (auto l : labels) append_field(key, l);
    return std::make_unique<SeededEntropy>(key);
}

// ---- setup ----

struct SetupOptions {
    std::string config_path;
    std::string dir;
    std::string group_override;  // --group beats the config value
    bool pseudonyms_override = false;
    std::string seed;
};

// Input config also carries each voter's plaintext credential; only its
// digest is ever written to disk.
struct ParsedConfig {
    election::ElectionConfig config;
};

inline ParsedConfig parse_setup_config(const json& j,
                                       const std::string& group_override,
                                       bool pseudonyms_override) {
    ParsedConfig out;
    auto& cfg = out.config;
    try {
        cfg.election_id = j.at("election_id").get<std::string>();
        cfg.candidates = j.at("candidates").get<std::vector<std::string>>();
        cfg.max_selections = j.value("max_selections", 1u);
        cfg.policy = serde::decode_policy(j.at("policy"));
        cfg.group_name = group_override.empty()
                             ? j.value("group", std::string("toy"))
                             : group_override;
        cfg.pseudonyms = j.value("pseudonyms", false) || pseudonyms_override;
        for (const auto& r : j.at("roster")) {
            std::string identity = r.at("identity").get<std::string>();
            std::string credential = r.at("credential").get<std::string>();
            std::string display = election::display_identity(
                cfg.pseudonyms, cfg.election_id, identity);
            cfg.roster.push_back(election::RosterEntry{
                display, election::credential_digest(cfg.election_id, display,
                                                     credential)});
        }
    } catch (const json::exception& e) {
        throw UsageError("config: " + std::string(e.what()));
    }
    try {
        election::validate_config(cfg);
    } catch (const std::invalid_argument& e) {
        throw UsageError("config: " + std::string(e.what()));
    }
    return out;
}

inline int cmd_setup(const SetupOptions& opts, std::ostream& out) {
    fs::path dir(opts.dir);
    if (fs::exists(dir))
        throw StateError("election directory already exists: " + opts.dir);

    json cfg_json = detail::parse_json(detail::read_text(opts.config_path),
                                       "election config");
    ParsedConfig parsed = parse_setup_config(cfg_json, opts.group_override,
                                             opts.pseudonyms_override);
    const auto& cfg = parsed.config;
    GroupParams group = group_by_name(cfg.group_name);
    if (!validate_params(group))
        throw StateError("group parameters failed validation");

    auto rng = election_entropy(opts.seed, {"setup"});
    trustees::DealerOutput dealt =
        trustees::dealer_keygen(group, cfg.policy, *rng);

    fs::create_directories(dir / "receipts");
    fs::create_directories(dir / "audits");
    fs::create_directories(dir / "exports");

    board::PublicRecord record;
    record.config = cfg;
    record.group = group;
    record.h = dealt.h;
    record.verification_keys = trustees::verification_keys(dealt);
    record.roster_digest = election::roster_digest(cfg.roster);
    detail::write_text(record_path(dir), serde::encode(record).dump(2) + "\n");

    for (const auto& key : dealt.trustees)
        detail::write_text(
            trustee_path(dir, key.index),
            serde::encode_trustee_key(cfg.election_id, key).dump(2) + "\n");

    board::BoardHeader header;
    header.election_id = cfg.election_id;
    header.group = group;
    header.h = dealt.h;
    header.verification_keys = record.verification_keys;
    header.policy = cfg.policy;
    header.candidates = cfg.candidates;
    header.max_selections = cfg.max_selections;
    header.pseudonyms = cfg.pseudonyms;
    header.roster_digest = record.roster_digest;
    header.seed = opts.seed;
    detail::write_text(
        board_path(dir),
        serde::board_line(serde::encode_header_record(header)) + "\n");

    out << "election " << cfg.election_id << " initialized in " << opts.dir
        << "\n";
    out << "  group: " << cfg.group_name << "\n";
    out << "  candidates:";
    for (const auto& c : cfg.candidates) out << " " << c;
    out << "\n  policy: " << cfg.policy.k << " of " << cfg.policy.n
        << " trustees\n";
    out << "  roster: " << cfg.roster.size() << " voters, pseudonyms "
        << (cfg.pseudonyms ? "on" : "off") << "\n";
    out << "  trustee key files:";
    for (const auto& key : dealt.trustees)
        out << " trustee-" << key.index << ".json";
    out << "\n";
    if (!opts.seed.empty())
        out << "  deterministic mode, seed recorded in board header\n";
    return kExitOk;
}

// ---- vote ----

struct VoteOptions {
    std::string dir;
    std::string identity;
    std::string credential;
    std::vector<std::string> choices;  // candidate names to mark 1
    unsigned audit_rounds = 0;
    bool interactive = false;
    std::string coerce_destination;
    std::string seed_override;
};

namespace detail {

inline ballot::BallotPlain plain_from_names(
    const std::vector<std::string>& names,
    const std::vector<std::string>& candidates, unsigned max_selections) {
    ballot::BallotPlain plain;
    plain.choices.assign(candidates.size(), 0);
    for (const auto& name : names) {
        auto it = std::find(candidates.begin(), candidates.end(), name);
        if (it == candidates.end())
            throw UsageError("unknown candidate: " + name);
        size_t idx = size_t(it - candidates.begin());
        if (plain.choices[idx])
            throw UsageError("candidate chosen twice: " + name);
        plain.choices[idx] = 1;
    }
    try {
        ballot::validate_plain(plain, candidates.size(), max_selections);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return plain;
}

inline fs::path audit_package_path(const fs::path& dir,
                                   const std::string& display, size_t prior,
                                   unsigned round) {
    return dir / "audits" /
           (sanitize(display) + "-v" + std::to_string(prior) + "-r" +
            std::to_string(round) + ".json");
}

}  // namespace detail

inline int cmd_vote(const VoteOptions& opts, std::istream& in,
                    std::ostream& out, std::ostream& err,
                    ballot::Receipt* receipt_out = nullptr) {
    fs::path dir(opts.dir);
    board::PublicRecord record = load_record(dir);
    const auto& cfg = record.config;

    detail::FileLock lock(board_path(dir));
    board::Board b = load_board(dir);
    if (b.closed) throw StateError("voting is closed for " + cfg.election_id);

    std::string display = election::display_identity(
        cfg.pseudonyms, cfg.election_id, opts.identity);
    ballot::BallotPlain plain = detail::plain_from_names(
        opts.choices, cfg.candidates, cfg.max_selections);

    size_t prior = 0;
    for (const auto& e : b.entries)
        if (e.identity == display) ++prior;

    std::string seed =
        opts.seed_override.empty() ? b.header.seed : opts.seed_override;
    auto rng = election_entropy(
        seed, {"vote", display, std::to_string(prior)});

    ballot::PreparedBallot pb =
        ballot::prepare(record.group, record.h, cfg.election_id, plain,
                        cfg.candidates.size(), cfg.max_selections, *rng);

    auto run_audit = [&](unsigned round) {
        ballot::AuditOutcome outcome =
            ballot::audit(record.group, record.h, cfg.max_selections, pb,
                          plain, *rng);
        fs::path pkg =
            detail::audit_package_path(dir, display, prior, round);
        detail::write_text(pkg, serde::encode(outcome.package).dump(2) + "\n");
        out << "audit round " << round << ": "
            << (outcome.verdict ? "ballot opens to the intended choices"
                                : "MISMATCH: " + outcome.detail)
            << "\n  spent commitment " << outcome.package.commitment
            << "\n  package " << pkg.string() << "\n";
        if (!outcome.verdict)
            throw board::RejectedBallot("audit failed: " + outcome.detail);
        pb = std::move(outcome.next);
        out << "  fresh ballot prepared, commitment " << pb.commitment << "\n";
    };

    if (opts.interactive) {
        unsigned round = 0;
        for (;;) {
            out << "ballot prepared; commitment " << pb.commitment << "\n";
            out << "[a]udit this ballot or [s]eal and cast? " << std::flush;
            std::string line;
            if (!std::getline(in, line))
                throw UsageError("interactive input ended before seal");
            if (line == "a" || line == "audit") {
                run_audit(++round);
            } else if (line == "s" || line == "seal") {
                break;
            } else {
                out << "please answer 'a' or 's'\n";
            }
        }
    } else {
        for (unsigned round = 1; round <= opts.audit_rounds; ++round)
            run_audit(round);
    }

    if (!opts.coerce_destination.empty()) {
        ballot::CoercionExport exp =
            ballot::coerce_export(pb, opts.coerce_destination);
        fs::path path = dir / "exports" / (detail::sanitize(display) + ".json");
        detail::write_text(path, serde::encode(exp).dump(2) + "\n");
        err << "WARNING: coercion export written to " << path.string()
            << "; whoever holds it can prove how this ballot votes. "
               "Coercion resistance is explicitly not provided.\n";
        out << "coercion export written (see warning)\n";
    }

    ballot::seal(pb);
    ballot::CastBallot cast;
    try {
        cast = ballot::authenticate_and_cast(pb, opts.identity,
                                             opts.credential, cfg.pseudonyms,
                                             cfg.roster);
    } catch (const ballot::AuthenticationError& e) {
        throw board::RejectedBallot(e.what());
    }

    const board::BoardEntry& entry =
        board::post(record.group, b, cast, cfg.roster);
    detail::append_line(board_path(dir),
                        serde::board_line(serde::encode_entry_record(entry)));

    ballot::Receipt receipt{cfg.election_id, display, entry.commitment,
                            entry.sequence};
    fs::path rpath = dir / "receipts" / (detail::sanitize(display) + ".json");
    detail::write_text(rpath, serde::encode(receipt).dump(2) + "\n");

    out << "vote cast for " << display << "\n";
    out << "  sequence " << entry.sequence << "\n";
    out << "  commitment " << entry.commitment << "\n";
    if (entry.supersedes)
        out << "  supersedes entry " << *entry.supersedes
            << " (last vote counts)\n";
    out << "  receipt " << rpath.string() << "\n";
    if (receipt_out) *receipt_out = receipt;
    return kExitOk;
}

// ---- close ----

inline int cmd_close(const std::string& dir_str, std::ostream& out) {
    fs::path dir(dir_str);
    detail::FileLock lock(board_path(dir));
    board::Board b = load_board(dir);
    try {
        board::close(b);
    } catch (const std::logic_error& e) {
        throw StateError(e.what());
    }
    detail::append_line(board_path(dir),
                        serde::board_line(json{{"type", "close"}}));
    out << "board closed: " << b.entries.size() << " entries, "
        << board::active_entries(b).size() << " active\n";
    return kExitOk;
}

// ---- tally ----

inline std::vector<trustees::TrusteeKey> load_trustee_keys(
    const fs::path& dir, const std::vector<std::string>& files,
    const board::PublicRecord& record) {
    std::vector<std::string> paths = files;
    if (paths.empty()) {
        for (const auto& entry : fs::directory_iterator(dir)) {
            std::string name = entry.path().filename().string();
            if (name.rfind("trustee-", 0) == 0 &&
                name.size() > 13 &&
                name.substr(name.size() - 5) == ".json")
                paths.push_back(entry.path().string());
        }
        std::sort(paths.begin(), paths.end());
    }
    std::vector<trustees::TrusteeKey> keys;
    std::set<unsigned> seen;
    for (const auto& p : paths) {
        json j = detail::parse_json(detail::read_text(p), "trustee key file");
        if (j.value("election_id", "") != record.config.election_id)
            throw StateError("trustee file " + p +
                             " belongs to a different election");
        trustees::TrusteeKey key = serde::decode_trustee_key(j);
        if (!seen.insert(key.index).second)
            throw StateError("trustee " + std::to_string(key.index) +
                             " provided twice");
        auto vk = std::find_if(record.verification_keys.begin(),
                               record.verification_keys.end(),
                               [&](const auto& k) {
                                   return k.index == key.index;
                               });
        if (vk == record.verification_keys.end() || !(vk->v == key.v))
            throw StateError("trustee file " + p +
                             " does not match the published verification key");
        keys.push_back(std::move(key));
    }
    return keys;
}

inline int cmd_tally(const std::string& dir_str,
                     const std::vector<std::string>& trustee_files,
                     std::ostream& out,
                     board::TallyRecord* tally_out = nullptr) {
    fs::path dir(dir_str);
    board::PublicRecord record = load_record(dir);
    board::Board b = load_board(dir);
    if (!b.closed) throw StateError("tally before close; run close first");

    std::vector<trustees::TrusteeKey> keys =
        load_trustee_keys(dir, trustee_files, record);
    unsigned k = b.header.policy.k;
    if (keys.size() < k) {
        unsigned missing = k - unsigned(keys.size());
        throw StateError("need " + std::to_string(missing) + " more trustee" +
                         (missing == 1 ? "" : "s") + " (threshold " +
                         std::to_string(k) + ", provided " +
                         std::to_string(keys.size()) + ")");
    }

    auto rng = election_entropy(b.header.seed, {"tally"});
    board::TallyRecord tally;
    try {
        tally = board::tally(record.group, b, keys, *rng);
    } catch (const std::logic_error& e) {
        throw StateError(e.what());
    }
    detail::write_text(tally_path(dir), serde::encode(tally).dump(2) + "\n");

    out << "tally of " << tally.election_id << ": " << tally.bound
        << " active ballots\n";
    for (const auto& res : tally.results)
        out << "  " << res.name << ": " << res.count << "\n";
    out << "trustees used:";
    for (unsigned i : tally.trustee_indices) out << " " << i;
    out << "\nwritten " << tally_path(dir).string() << "\n";
    if (tally_out) *tally_out = tally;
    return kExitOk;
}

// ---- verify ----

struct VerifyOptions {
    std::string dir;
    std::vector<std::string> receipt_paths;
    std::vector<std::string> non_voters;  // real identities claiming abstention
};

inline std::string report_text(const verify::VerificationReport& rep) {
    std::ostringstream out;
    for (const auto& c : rep.checks) {
        out << (c.pass ? "PASS " : "FAIL ") << c.name;
        if (!c.context.empty()) out << " [" << c.context << "]";
        if (!c.detail.empty()) out << ": " << c.detail;
        out << "\n";
    }
    out << "\nrequirements scorecard:\n";
    for (const auto& row : rep.scorecard)
        out << "  " << row.requirement << ": " << row.status
            << (row.note.empty() ? "" : " (" + row.note + ")") << "\n";
    out << "\nOVERALL: " << (rep.overall ? "PASS" : "FAIL") << "\n";
    return out.str();
}

inline json report_json(const verify::VerificationReport& rep) {
    json checks = json::array();
    for (const auto& c : rep.checks)
        checks.push_back(json{{"name", c.name},
                              {"context", c.context},
                              {"pass", c.pass},
                              {"detail", c.detail}});
    json scorecard = json::array();
    for (const auto& row : rep.scorecard)
        scorecard.push_back(json{{"requirement", row.requirement},
                                 {"status", row.status},
                                 {"note", row.note}});
    return json{{"overall", rep.overall},
                {"checks", checks},
                {"scorecard", scorecard}};
}

inline int cmd_verify(const VerifyOptions& opts, std::ostream& out,
                      verify::VerificationReport* report_out = nullptr) {
    fs::path dir(opts.dir);
    board::PublicRecord record = load_record(dir);
    board::Board b = load_board(dir);
    board::TallyRecord tally = load_tally(dir);

    verify::VerificationReport rep =
        verify::universal_verify(b, tally, record);

    for (const auto& rpath : opts.receipt_paths) {
        ballot::Receipt receipt = serde::decode_receipt(
            detail::parse_json(detail::read_text(rpath), "receipt"));
        board::InclusionResult res = board::verify_inclusion(b, receipt);
        rep.checks.push_back(verify::CheckResult{
            "inclusion",
            receipt.identity + " sequence " + std::to_string(receipt.sequence),
            res.included && res.active, res.reason});
    }

    for (const auto& identity : opts.non_voters) {
        std::string display = election::display_identity(
            record.config.pseudonyms, record.config.election_id, identity);
        auto findings = board::non_voter_check(b, {display});
        const auto& f = findings.front();
        std::string detail;
        if (!f.sequences.empty()) {
            detail = "entries found under this identity:";
            for (uint64_t s : f.sequences) detail += " " + std::to_string(s);
        } else {
            detail = "no entries under this identity";
        }
        rep.checks.push_back(verify::CheckResult{
            "non-voter", display, f.sequences.empty(), detail});
    }

    rep.overall = true;
    for (const auto& c : rep.checks) rep.overall = rep.overall && c.pass;

    detail::write_text(dir / "report.json", report_json(rep).dump(2) + "\n");
    std::string text = report_text(rep);
    detail::write_text(dir / "report.txt", text);
    out << text;
    if (report_out) *report_out = rep;
    return rep.overall ? kExitOk : kExitVerificationFailure;
}

// ---- fraud demos ----

namespace detail {

// A stuffed entry is what a malicious server would append: perfectly
// valid cryptography, just nobody behind it.
inline board::BoardEntry forge_entry(const board::PublicRecord& record,
                                     const board::Board& b,
                                     const std::string& display,
                                     EntropySource& rng) {
    ballot::BallotPlain plain;
    plain.choices.assign(record.config.candidates.size(), 0);
    plain.choices[0] = 1;
    ballot::PreparedBallot pb = ballot::prepare(
        record.group, record.h, record.config.election_id, plain,
        record.config.candidates.size(), record.config.max_selections, rng);
    board::BoardEntry entry;
    entry.sequence = b.entries.empty() ? 1 : b.entries.back().sequence + 1;
    entry.identity = display;
    entry.ciphertexts = pb.ciphertexts;
    entry.proofs = pb.proofs;
    entry.commitment = pb.commitment;
    return entry;
}

inline void copy_election(const fs::path& from, const fs::path& to) {
    if (fs::exists(to))
        throw StateError("fraud copy already exists: " + to.string());
    fs::copy(from, to, fs::copy_options::recursive);
}

}  // namespace detail

// Applies the named manipulation to a copy of the election and reruns
// verification, printing which check catches it. The original dir is
// never touched.
inline int cmd_demo_fraud(const std::string& dir_str,
                          const std::string& scenario,
                          const std::string& target, std::ostream& out) {
    if (scenario != "stuff" && scenario != "swap" && scenario != "miscount")
        throw UsageError("unknown scenario: " + scenario +
                         " (expected stuff, swap or miscount)");

    fs::path dir(dir_str);
    board::PublicRecord record = load_record(dir);
    { load_tally(dir); }  // demos require a completed election

    // Validate the target against the original before anything is copied.
    bool expect_universal_failure = true;
    std::string stuffed_display;
    if (scenario == "stuff" && !target.empty()) {
        stuffed_display = election::display_identity(
            record.config.pseudonyms, record.config.election_id, target);
        if (!election::find_roster(record.config.roster, stuffed_display))
            throw UsageError("--target must name a roster identity");
        for (const auto& e : load_board(dir).entries)
            if (e.identity == stuffed_display)
                throw UsageError(
                    "--target must be an eligible voter who did not vote; " +
                    stuffed_display + " has board entries");
        expect_universal_failure = false;
    }

    fs::path fdir(dir_str + "-fraud-" + scenario);
    detail::copy_election(dir, fdir);
    out << "scenario " << scenario << ": tampering with a copy at "
        << fdir.string() << "\n";

    board::Board b = load_board(fdir);
    auto rng = election_entropy(b.header.seed, {"fraud", scenario, target});

    if (scenario == "stuff") {
        if (target.empty()) {
            stuffed_display = "ghost-writer";
            out << "inserting a perfectly-formed ballot for '"
                << stuffed_display << "', who is not on the roster\n";
        } else {
            out << "inserting a ballot under eligible non-voter '"
                << stuffed_display << "'\n";
        }
        // The malicious server re-runs close and tally so the published
        // record looks internally consistent.
        b.closed = false;
        b.entries.push_back(detail::forge_entry(record, b, stuffed_display,
                                                *rng));
        b.closed = true;
        std::string all;
        for (const auto& line : serde::board_to_lines(b)) all += line + "\n";
        detail::write_text(board_path(fdir), all);
        auto keys = load_trustee_keys(fdir, {}, record);
        auto trng = election_entropy(b.header.seed, {"fraud-tally", scenario});
        board::TallyRecord tally = board::tally(record.group, b, keys, *trng);
        detail::write_text(tally_path(fdir),
                           serde::encode(tally).dump(2) + "\n");
    } else if (scenario == "swap") {
        auto active = board::active_entries(b);
        if (active.empty()) throw StateError("no active entries to tamper");
        board::BoardEntry* victim = nullptr;
        for (const board::BoardEntry* e : active) {
            if (e->ciphertexts.size() >= 2 &&
                !(e->ciphertexts[0] == e->ciphertexts[1])) {
                victim = const_cast<board::BoardEntry*>(e);
                break;
            }
        }
        if (victim) {
            out << "swapping the first two candidates inside entry "
                << victim->sequence
                << " and refreshing its commitment, tally left as "
                   "published\n";
            std::swap(victim->ciphertexts[0], victim->ciphertexts[1]);
            std::swap(victim->proofs[0], victim->proofs[1]);
            victim->commitment = ballot::ballot_commitment(victim->ciphertexts);
        } else {
            auto* e = const_cast<board::BoardEntry*>(active.front());
            out << "replacing a ciphertext of entry " << e->sequence
                << " with a re-encryption\n";
            e->ciphertexts[0] = elgamal::reencrypt(record.group, record.h,
                                                   e->ciphertexts[0], *rng);
        }
        std::string all;
        for (const auto& line : serde::board_to_lines(b)) all += line + "\n";
        detail::write_text(board_path(fdir), all);
    } else {  // miscount
        json t = detail::parse_json(detail::read_text(tally_path(fdir)),
                                    "tally record");
        auto& count = t.at("results").at(0).at("count");
        count = count.get<uint64_t>() + 1;
        out << "incrementing the published count of "
            << t.at("results").at(0).at("name").get<std::string>() << "\n";
        detail::write_text(tally_path(fdir), t.dump(2) + "\n");
    }

    // Re-run verification on the tampered copy.
    board::Board tampered = load_board(fdir);
    board::TallyRecord tampered_tally = load_tally(fdir);
    verify::VerificationReport rep =
        verify::universal_verify(tampered, tampered_tally, record);

    std::vector<std::string> failures;
    for (const auto& c : rep.checks)
        if (!c.pass)
            failures.push_back(c.name +
                               (c.context.empty() ? "" : " [" + c.context + "]") +
                               (c.detail.empty() ? "" : ": " + c.detail));

    if (expect_universal_failure) {
        if (failures.empty()) {
            out << "UNEXPECTED: tampering was not caught by any check\n";
            return kExitVerificationFailure;
        }
        out << "verification of the tampered copy fails at:\n";
        for (const auto& f : failures) out << "  " << f << "\n";
        out << "caught.\n";
        return kExitOk;
    }

    // Eligible non-voter stuffing: universal verification cannot see it.
    if (!failures.empty()) {
        out << "note: universal verification also failed at:\n";
        for (const auto& f : failures) out << "  " << f << "\n";
    } else {
        out << "universal verification PASSES on the tampered copy: the "
               "stuffed ballot is indistinguishable from a real one\n";
    }
    auto findings = board::non_voter_check(tampered, {stuffed_display});
    out << "detection gap: only the named voter can catch this, by checking "
           "that no vote is registered under their name\n";
    out << "non-voter check for " << stuffed_display << ":";
    for (uint64_t s : findings.front().sequences) out << " entry " << s;
    out << (findings.front().sequences.empty() ? " no entries (?!)" : "")
        << "\n";
    bool caught = !findings.front().sequences.empty();
    out << (caught ? "caught by the non-voter check.\n"
                   : "UNEXPECTED: stuffed entry vanished\n");
    return caught ? kExitOk : kExitVerificationFailure;
}

// ---- ries ----

inline fs::path ries_params_path(const fs::path& d) { return d / "ries_params.json"; }
inline fs::path ries_truth_path(const fs::path& d) { return d / "ries_truth.json"; }
inline fs::path ries_public_path(const fs::path& d) { return d / "ries_public.json"; }
inline fs::path ries_registry_path(const fs::path& d) { return d / "registry.csv"; }
inline fs::path ries_table_path(const fs::path& d) { return d / "table.csv"; }

struct RiesSimulateOptions {
    std::string dir;
    unsigned voters = 10;
    unsigned key_bits = 20;
    std::vector<std::string> candidates = {"red", "green", "blue"};
    std::string el_id = "EL2026";
    std::string par_gp = "PG1";
    std::string seed;
};

inline int ries_simulate(const RiesSimulateOptions& opts, std::ostream& out) {
    fs::path dir(opts.dir);
    if (fs::exists(dir))
        throw StateError("output directory already exists: " + opts.dir);
    auto rng = election_entropy(opts.seed, {"ries-sim"});

    ries::RiesParams params;
    ries::RiesElection e;
    try {
        params = ries::random_params(opts.key_bits, opts.el_id, opts.par_gp,
                                     *rng);
        e = ries::simulate(params, opts.candidates, opts.voters, *rng);
    } catch (const std::invalid_argument& err) {
        throw UsageError(err.what());
    }

    fs::create_directories(dir);
    detail::write_text(
        ries_params_path(dir),
        json{{"key_bits", params.key_bits},
             {"master_key", to_hex(params.master_key)},
             {"el_id", params.el_id},
             {"par_gp", params.par_gp}}
                .dump(2) +
            "\n");
    json voters = json::array();
    for (const auto& v : e.voters)
        voters.push_back(json{{"vnid", v.vnid},
                              {"birthyear", v.birthyear},
                              {"voted", v.voted},
                              {"choice", v.choice}});
    detail::write_text(ries_truth_path(dir),
                       json{{"voters", voters}}.dump(2) + "\n");
    detail::write_text(ries_public_path(dir),
                       json{{"el_id", e.published.el_id},
                            {"par_gp", e.published.par_gp},
                            {"key_bits", e.published.key_bits},
                            {"candidates", e.published.candidates}}
                               .dump(2) +
                           "\n");
    detail::write_text(ries_registry_path(dir),
                       ries::registry_csv(e.published.registry));
    detail::write_text(ries_table_path(dir),
                       ries::table_csv(e.published.table));

    out << "simulated vote-code election in " << opts.dir << "\n";
    out << "  key width " << params.key_bits << " bits, " << opts.voters
        << " registered voters, " << e.published.table.size()
        << " votes cast\n";
    out << "  published: registry.csv (pre-election), table.csv "
           "(post-election)\n";
    out << "  secret: ries_params.json (master key), ries_truth.json "
           "(ground truth)\n";
    return kExitOk;
}

inline ries::PublishedElection load_ries_public(const fs::path& dir) {
    json pj = detail::parse_json(detail::read_text(ries_public_path(dir)),
                                 "published election");
    ries::PublishedElection pub;
    pub.el_id = pj.at("el_id").get<std::string>();
    pub.par_gp = pj.at("par_gp").get<std::string>();
    pub.key_bits = pj.at("key_bits").get<unsigned>();
    pub.candidates = pj.at("candidates").get<std::vector<std::string>>();
    pub.registry = ries::parse_registry_csv(
        detail::read_text(ries_registry_path(dir)));
    pub.table =
        ries::parse_table_csv(detail::read_text(ries_table_path(dir)));
    return pub;
}

inline ries::RiesParams load_ries_params(const fs::path& dir) {
    json j = detail::parse_json(detail::read_text(ries_params_path(dir)),
                                "ries params");
    ries::RiesParams params;
    params.key_bits = j.at("key_bits").get<unsigned>();
    params.master_key = from_hex(j.at("master_key").get<std::string>());
    params.el_id = j.at("el_id").get<std::string>();
    params.par_gp = j.at("par_gp").get<std::string>();
    ries::validate_params(params);
    return params;
}

inline int ries_forge(const std::string& dir_str, unsigned key_bits_flag,
                      uint64_t budget, unsigned workers, std::ostream& out) {
    fs::path dir(dir_str);
    ries::PublishedElection pub = load_ries_public(dir);
    if (key_bits_flag != 0 && key_bits_flag != pub.key_bits)
        throw UsageError("--key-bits " + std::to_string(key_bits_flag) +
                         " does not match the published width " +
                         std::to_string(pub.key_bits));

    ries::ForgeResult res;
    try {
        res = ries::forge_vote_code(pub, budget, workers);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    out << "forgery search over " << pub.key_bits << "-bit key space, "
        << pub.registry.size() << " registered pseudo-identities\n";
    if (res.found) {
        out << "FOUND voter key " << ries::hex16(res.kp)
            << " matching registry pseudo-identity "
            << ries::hex16(res.pseudo_identity) << "\n";
        out << "forged vote code: choice '" << res.code.choice
            << "', birthyear " << res.code.birthyear << ", RnPID "
            << ries::hex16(res.code.rnpid) << "\n";
    } else {
        out << "budget exhausted: no key found; covered " << res.keys_tried
            << " of " << res.keyspace << " keys ("
            << 100.0 * double(res.keys_tried) / double(res.keyspace)
            << "%)\n";
    }
    out << ries::forge_extrapolation(res);

    // With the simulation's secret side available, prove the forged code
    // is indistinguishable from a real voter's code.
    if (res.found && fs::exists(ries_params_path(dir)) &&
        fs::exists(ries_truth_path(dir))) {
        ries::RiesParams params = load_ries_params(dir);
        json tj = detail::parse_json(detail::read_text(ries_truth_path(dir)),
                                     "ground truth");
        for (const auto& v : tj.at("voters")) {
            std::string vnid = v.at("vnid").get<std::string>();
            ries::VoterKey vk = ries::derive_voter_key(params, vnid);
            if (ries::pseudo_identity(params.el_id, vk) ==
                res.pseudo_identity) {
                bool ok = ries::verify_vote_code(params, vnid, res.code);
                out << "cross-check against the master key: forged code "
                    << (ok ? "VERIFIES" : "does not verify")
                    << " as a vote by voter " << vnid << "\n";
                break;
            }
        }
    }
    return res.found ? kExitOk : kExitVerificationFailure;
}

inline int ries_registry_attack(const std::string& dir_str,
                                const std::vector<std::string>& extra_probes,
                                std::ostream& out) {
    fs::path dir(dir_str);
    ries::RiesParams params = load_ries_params(dir);
    ries::PublishedElection pub = load_ries_public(dir);
    json tj = detail::parse_json(detail::read_text(ries_truth_path(dir)),
                                 "ground truth");

    std::vector<std::string> probes;
    std::map<std::string, const json*> truth;
    for (const auto& v : tj.at("voters")) {
        probes.push_back(v.at("vnid").get<std::string>());
        truth[probes.back()] = &v;
    }
    probes.push_back("999999998");  // outsiders: never registered
    probes.push_back("999999999");
    for (const auto& p : extra_probes) probes.push_back(p);

    auto findings = ries::registry_attack(params, probes, pub);

    out << "registry attack with the compromised master key ("
        << params.key_bits << " bits):\n";
    unsigned errors = 0;
    for (const auto& f : findings) {
        out << "  " << f.vnid << ": ";
        if (!f.eligible) {
            out << "not eligible\n";
        } else if (!f.voted) {
            out << "eligible, did not vote\n";
        } else if (f.attributed) {
            out << "voted for '" << f.choice << "' (birthyear " << f.birthyear
                << ")\n";
        } else {
            out << "voted, but code not attributed in the search range\n";
        }
        auto it = truth.find(f.vnid);
        if (it != truth.end()) {
            const json& v = *it->second;
            bool ok = f.eligible && f.voted == v.at("voted").get<bool>() &&
                      (!f.voted ||
                       (f.attributed &&
                        f.choice == v.at("choice").get<std::string>() &&
                        f.birthyear == v.at("birthyear").get<unsigned>()));
            if (!ok) ++errors;
        } else if (f.eligible) {
            ++errors;  // an outsider must never look eligible
        }
    }
    out << "ground truth comparison: " << errors << " discrepancies over "
        << findings.size() << " probes\n";
    return errors == 0 ? kExitOk : kExitVerificationFailure;
}

struct SmsAttackOptions {
    uint64_t window_ms = 2000;
    unsigned runs = 100;
    std::string seed;
};

inline int ries_sms_attack(const SmsAttackOptions& opts, std::ostream& out) {
    auto rng = election_entropy(opts.seed, {"ries-sms"});
    uint64_t base = 1200000000000ULL;  // a plausible ms epoch
    unsigned hits = 0;
    uint64_t min_g = UINT64_MAX, max_g = 0, total_g = 0;
    for (unsigned run = 0; run < opts.runs; ++run) {
        uint64_t t_true =
            base + ries::detail::uniform_below(*rng, 1000000000ULL);
        uint32_t token = ries::sms_token(t_true);
        // The attacker observes the arrival time, which sits within half
        // a window of the true send time.
        uint64_t jitter = ries::detail::uniform_below(*rng, opts.window_ms + 1);
        uint64_t observed = t_true - opts.window_ms / 2 + jitter;
        ries::SmsAttackResult res = ries::sms_token_attack(
            observed - opts.window_ms, observed + opts.window_ms, token);
        if (res.hit) {
            ++hits;
            min_g = std::min(min_g, res.guesses);
            max_g = std::max(max_g, res.guesses);
            total_g += res.guesses;
        }
    }
    out << "sms token attack: " << hits << "/" << opts.runs
        << " tokens recovered, window +-" << opts.window_ms << " ms\n";
    if (hits > 0)
        out << "  guesses per hit: min " << min_g << ", mean "
            << total_g / hits << ", max " << max_g << " (cap "
            << 2 * opts.window_ms + 1 << ")\n";
    out << "  the generator has no try limit, so a window scan always "
           "lands\n";
    return hits == opts.runs ? kExitOk : kExitVerificationFailure;
}

}  // namespace verivote::commands
