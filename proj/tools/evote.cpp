// evote: election harness CLI. All logic lives in the headers; this file
// only parses flags and maps exceptions to exit codes.

#include <CLI11.hpp>
#include <iostream>

#include "verivote/commands.hpp"

namespace cmd = verivote::commands;

int main(int argc, char** argv) {
    CLI::App app{"verifiable electronic voting harness"};
    app.require_subcommand(1);

    // setup
    cmd::SetupOptions setup_opts;
    auto* setup = app.add_subcommand("setup", "initialize an election directory");
    setup->add_option("--config", setup_opts.config_path,
                      "election config JSON")->required();
    setup->add_option("--election-dir", setup_opts.dir,
                      "directory to create")->required();
    setup->add_option("--group", setup_opts.group_override,
                      "group name (toy or modp2048), overrides the config");
    setup->add_flag("--pseudonyms", setup_opts.pseudonyms_override,
                    "publish pseudonyms instead of identities");
    setup->add_option("--seed", setup_opts.seed,
                      "deterministic seed (recorded on the board)");

    // vote
    cmd::VoteOptions vote_opts;
    auto* vote = app.add_subcommand("vote", "prepare, audit and cast a ballot");
    vote->add_option("--election-dir", vote_opts.dir)->required();
    vote->add_option("--identity", vote_opts.identity)->required();
    vote->add_option("--credential", vote_opts.credential)->required();
    vote->add_option("--choose", vote_opts.choices,
                     "candidate name to select (repeatable)");
    vote->add_option("--audit", vote_opts.audit_rounds,
                     "audit this many ballots before casting");
    vote->add_flag("--interactive", vote_opts.interactive,
                   "ask audit-or-seal for each prepared ballot");
    vote->add_option("--coerce-me", vote_opts.coerce_destination,
                     "write a vote-proving export for the named recipient");
    vote->add_option("--seed", vote_opts.seed_override,
                     "override the recorded entropy seed for this ballot");

    // close
    std::string close_dir;
    auto* close = app.add_subcommand("close", "close the board for voting");
    close->add_option("--election-dir", close_dir)->required();

    // tally
    std::string tally_dir;
    std::vector<std::string> trustee_files;
    auto* tally = app.add_subcommand("tally", "threshold-decrypt the totals");
    tally->add_option("--election-dir", tally_dir)->required();
    tally->add_option("--trustee-file", trustee_files,
                      "trustee key file (repeatable; default: all in the "
                      "election directory)");

    // verify
    cmd::VerifyOptions verify_opts;
    auto* verify = app.add_subcommand(
        "verify", "recheck the whole election from the public record");
    verify->add_option("--election-dir", verify_opts.dir)->required();
    verify->add_option("--receipt", verify_opts.receipt_paths,
                       "receipt file to check for inclusion (repeatable)");
    verify->add_option("--non-voter", verify_opts.non_voters,
                       "identity that claims to have abstained (repeatable)");

    // demo-fraud
    std::string fraud_dir, fraud_scenario, fraud_target;
    auto* fraud = app.add_subcommand(
        "demo-fraud", "tamper with a copy of an election and show what "
                      "catches it");
    fraud->add_option("--election-dir", fraud_dir)->required();
    fraud->add_option("--scenario", fraud_scenario,
                      "stuff, swap or miscount")->required();
    fraud->add_option("--target", fraud_target,
                      "stuff only: eligible non-voter to impersonate");

    // ries
    auto* ries = app.add_subcommand(
        "ries", "legacy vote-code scheme and its published attacks");
    ries->require_subcommand(1);

    cmd::RiesSimulateOptions sim_opts;
    auto* sim = ries->add_subcommand("simulate",
                                     "run a small vote-code election");
    sim->add_option("--election-dir", sim_opts.dir)->required();
    sim->add_option("--voters", sim_opts.voters);
    sim->add_option("--key-bits", sim_opts.key_bits,
                    "voter key width: 16..28 (toy) or 112");
    sim->add_option("--candidates", sim_opts.candidates);
    sim->add_option("--el-id", sim_opts.el_id);
    sim->add_option("--par-gp", sim_opts.par_gp);
    sim->add_option("--seed", sim_opts.seed);

    std::string forge_dir;
    unsigned forge_bits = 0, forge_workers = 0;
    uint64_t forge_budget = 0;
    auto* forge = ries->add_subcommand(
        "forge", "brute-force a voter key from the published files alone");
    forge->add_option("--election-dir", forge_dir)->required();
    forge->add_option("--key-bits", forge_bits,
                      "expected key width (checked against the election)");
    forge->add_option("--budget", forge_budget,
                      "max keys to try (0 = the whole space)");
    forge->add_option("--workers", forge_workers,
                      "threads (0 = hardware default)");

    std::string reg_dir;
    std::vector<std::string> reg_probes;
    auto* reg = ries->add_subcommand(
        "registry-attack",
        "with the master key, identify voters and how they voted");
    reg->add_option("--election-dir", reg_dir)->required();
    reg->add_option("--probe", reg_probes,
                    "extra voter number to probe (repeatable)");

    cmd::SmsAttackOptions sms_opts;
    auto* sms = ries->add_subcommand(
        "sms-attack", "recover time-seeded auth tokens by window scan");
    sms->add_option("--window-ms", sms_opts.window_ms,
                    "timestamp uncertainty in milliseconds");
    sms->add_option("--runs", sms_opts.runs);
    sms->add_option("--seed", sms_opts.seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? cmd::kExitOk : cmd::kExitUsage;
    }

    try {
        if (*setup) return cmd::cmd_setup(setup_opts, std::cout);
        if (*vote)
            return cmd::cmd_vote(vote_opts, std::cin, std::cout, std::cerr);
        if (*close) return cmd::cmd_close(close_dir, std::cout);
        if (*tally) return cmd::cmd_tally(tally_dir, trustee_files, std::cout);
        if (*verify) return cmd::cmd_verify(verify_opts, std::cout);
        if (*fraud)
            return cmd::cmd_demo_fraud(fraud_dir, fraud_scenario, fraud_target,
                                       std::cout);
        if (*ries) {
            if (*sim) return cmd::ries_simulate(sim_opts, std::cout);
            if (*forge)
                return cmd::ries_forge(forge_dir, forge_bits, forge_budget,
                                       forge_workers, std::cout);
            if (*reg)
                return cmd::ries_registry_attack(reg_dir, reg_probes,
                                                 std::cout);
            if (*sms) return cmd::ries_sms_attack(sms_opts, std::cout);
        }
    } catch (const cmd::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cmd::kExitUsage;
    } catch (const cmd::StateError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cmd::kExitState;
    } catch (const verivote::board::RejectedBallot& e) {
        std::cerr << "rejected: " << e.what() << "\n";
        return cmd::kExitVerificationFailure;
    } catch (const verivote::trustees::InvalidShareProof& e) {
        std::cerr << "rejected: " << e.what() << "\n";
        return cmd::kExitVerificationFailure;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cmd::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cmd::kExitState;
    }
    return cmd::kExitUsage;
}
