#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "qrom/bounds.hpp"
#include "qrom/errors.hpp"
#include "qrom/version.hpp"
#include "qrom_cli/commands.hpp"
#include "qrom_cli/common.hpp"

namespace qrom::cli {

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Desk-scale experiments for adaptive reprogramming in the QROM", "qrom"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1, 1);

    std::string out_path = "-";
    unsigned threads = 0;
    auto common = [&](CLI::App *sub) {
        sub->add_option("--out", out_path, "Output CSV path, - for stdout");
        sub->add_option("--threads", threads, "Worker threads, 0 for all cores");
    };

    AttackOptions ao;
    std::string n_list = "10", q_list = "8";
    auto *attack = app.add_subcommand("attack", "Single-point reprogramming distinguisher");
    attack->add_option("--n", n_list, "Domain bits: list or range (10,12 or 10..16)");
    attack->add_option("--m", ao.m, "Range bits")->check(CLI::Range(1u, 24u));
    attack->add_option("--q", q_list, "Queries per phase: list or range (8,32 or 2^3..2^9)");
    attack->add_option("--trials", ao.trials, "Monte-Carlo trials per row, 0 to skip");
    attack->add_option("--seed", ao.seed, "Seed");
    common(attack);

    SupoOptions so;
    auto *supo = app.add_subcommand("supo-verify", "Superposition-oracle equivalence checks");
    supo->add_option("--n", so.n, "Domain bits (<= 4)");
    supo->add_option("--m", so.m, "Range bits (= 1)");
    supo->add_option("--depth", so.depth, "Steps per random adversary circuit");
    supo->add_option("--episodes", so.episodes, "Number of random circuits");
    supo->add_option("--work", so.work, "Extra adversary work qubits");
    supo->add_option("--seed", so.seed, "Seed");
    common(supo);

    BoundsOptions bo;
    auto *bnd = app.add_subcommand("bounds", "Evaluate concrete security bounds");
    bnd->add_option("--bound", bo.bound, "Bound id");
    bnd->add_option("--params", bo.params_file, "key=value parameter file");
    bnd->add_option("--set", bo.params_inline, "Inline parameters k=v;k=v");
    bnd->add_option("--sweep", bo.sweep, "Sweep key=list or key=a..b or key=2^a..2^b[:step]");
    bnd->add_option("--preset", bo.preset, "Preset (dilithium-footnote)");
    bnd->add_option("--mode", bo.mode, "Arithmetic: log, linear or exact");
    bnd->add_flag_callback(
        "--list",
        [&] {
            for (const auto &s : bounds::registry()) {
                out << s.id << ":";
                for (const auto &p : s.params)
                    out << " " << p.name;
                out << "  # " << s.doc << "\n";
            }
            throw CLI::Success();
        },
        "List bound ids and their parameters");
    common(bnd);

    GamesOptions go;
    auto *games = app.add_subcommand("games", "Signature security games and reductions");
    games->add_option("--game", go.game,
                      "uf-cma, uf-cma0, uf-rma, uf-f-cma, uf-n-f-cma, sim-equality, reduction");
    games->add_option("--scheme", go.scheme, "schnorr17, subset2 or schnorr-<bits>");
    games->add_option("--params", go.params_file, "Adversary script file");
    games->add_option("--script", go.script_inline, "Inline adversary script, ';' separated");
    games->add_option("--episodes", go.episodes, "Episodes");
    games->add_option("--rma-count", go.rma_count, "Random-message signatures in uf-rma");
    games->add_option("--seed", go.seed, "Seed");
    common(games);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    // Buffered so that a failed run leaves no partial CSV behind.
    std::ostringstream buf;
    int code = kOk;
    try {
        if (attack->parsed()) {
            ao.n = parse_uint_list(n_list);
            ao.q = parse_uint_list(q_list);
            ao.threads = threads;
            code = cmd_attack(ao, buf);
        } else if (supo->parsed()) {
            so.threads = threads;
            code = cmd_supo_verify(so, buf);
        } else if (bnd->parsed()) {
            bo.threads = threads;
            code = cmd_bounds(bo, buf);
        } else {
            go.threads = threads;
            code = cmd_games(go, buf);
        }
    } catch (const InvariantViolation &e) {
        err << "invariant violation: " << e.what() << "\n";
        return kInvariant;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    if (out_path == "-") {
        out << buf.str();
    } else {
        std::ofstream file(out_path);
        if (!(file << buf.str())) {
            err << "error: cannot write '" << out_path << "'\n";
            return kUsage;
        }
    }
    if (code == kInvariant)
        err << "invariant check failed; see the CSV comments\n";
    return code;
}

} // namespace qrom::cli
