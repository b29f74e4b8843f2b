#include <algorithm>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qrom/faultlab.hpp"
#include "qrom_cli/commands.hpp"
#include "qrom_cli/common.hpp"

namespace qrom::cli {

namespace {

using namespace qrom::faultlab;

AdversaryScript load_script(const GamesOptions &o) {
    if (!o.params_file.empty()) {
        std::ifstream in(o.params_file);
        if (!in)
            throw std::invalid_argument("cannot open adversary script '" + o.params_file + "'");
        return AdversaryScript::parse(in);
    }
    std::string text = o.script_inline.empty() ? "output none" : o.script_inline;
    std::replace(text.begin(), text.end(), ';', '\n');
    return AdversaryScript::parse_string(text);
}

Bits fixed_message(std::uint64_t seed, std::size_t bits) {
    Rng rng = make_rng(derive_seed(seed, 0x4d));
    return Bits::from_uint(rng() & ((std::uint64_t{1} << bits) - 1), bits);
}

int sim_equality(const GamesOptions &o, const sigcore::IdScheme &id, std::ostream &out) {
    Rng krng = make_rng(derive_seed(o.seed, 0x4b));
    const auto keys = id.keygen(krng);
    const Bits m = fixed_message(o.seed, 8);
    Header h("games");
    h.add("game", o.game).add("scheme", o.scheme).add("seed", o.seed);
    h.add("pk", keys.pk.hex()).add("message", m.hex()).add("indices", "4,5,6,7,9");
    h.write(out);

    const std::vector<int> indices{4, 5, 6, 7, 9};
    std::vector<std::vector<SimEqualityRow>> rows(indices.size());
    parallel_for(indices.size(), o.threads, [&](std::size_t i) {
        rows[i] = simulation_equality(id, keys, m, {indices[i]});
    });

    out << "scheme,index,target,phi,events,tv_distance,tv_zero\n";
    bool ok = true;
    std::size_t count = 0;
    for (const auto &group : rows)
        for (const auto &r : group) {
            const bool zero = r.tv == 0;
            ok = ok && zero;
            ++count;
            out << id.name() << "," << r.index << "," << r.target << "," << r.phi << ","
                << r.support << "," << r.tv.str() << "," << (zero ? 1 : 0) << "\n";
        }
    out << "# aggregate rows=" << count << " all_zero=" << (ok ? 1 : 0) << "\n";
    return ok ? kOk : kInvariant;
}

std::string script_faults(const AdversaryScript &s, bool descriptors) {
    std::vector<std::string> items;
    for (const auto &op : s.ops) {
        if (op.kind != "faultsign" && op.kind != "nfsign")
            continue;
        items.push_back(descriptors ? op.fn.describe() : std::to_string(op.index));
    }
    return items.empty() ? "-" : join(items, ";");
}

} // namespace

int cmd_games(const GamesOptions &o, std::ostream &out) {
    const auto id = make_scheme(o.scheme);
    if (o.game == "sim-equality")
        return sim_equality(o, *id, out);

    const auto script = load_script(o);
    const auto adversary = script.compile();
    const std::string fidx = script_faults(script, false), fphi = script_faults(script, true);

    Header h("games");
    h.add("game", o.game).add("scheme", o.scheme).add("episodes", o.episodes).add("seed", o.seed);
    if (!o.params_file.empty())
        h.add("script", o.params_file);
    else
        h.add("script_inline", o.script_inline.empty() ? "output none" : o.script_inline);

    if (o.game == "reduction") {
        h.write(out);
        std::vector<ReductionOutcome> res(o.episodes);
        parallel_for(res.size(), o.threads, [&](std::size_t e) {
            res[e] = reduction_episode(*id, adversary, derive_seed(o.seed, e));
        });
        out << "episode,seed,a_wins_simulated,aborted,b_wins\n";
        std::uint64_t a = 0, both = 0;
        for (std::size_t e = 0; e < res.size(); ++e) {
            const auto &r = res[e];
            a += r.a_wins_simulated;
            both += r.a_wins_simulated && r.b_wins;
            out << e << "," << derive_seed(o.seed, e) << "," << r.a_wins_simulated << ","
                << r.aborted << "," << r.b_wins << "\n";
        }
        out << "# aggregate episodes=" << res.size() << " a_wins=" << a << " b_wins_given_a=" << both
            << " soundness=" << (a ? fmt(static_cast<double>(both) / static_cast<double>(a)) : "n/a")
            << "\n";
        return both == a ? kOk : kInvariant;
    }

    GameSpec spec;
    spec.kind = parse_game(o.game);
    spec.rma_count = o.rma_count;
    spec.phi = default_phi(spec.kind, *id);
    std::vector<std::string> phi;
    for (int i : spec.phi)
        phi.push_back(std::to_string(i));
    h.add("phi", join(phi, ";"));
    if (spec.kind == GameKind::UfRma)
        h.add("rma_count", o.rma_count);
    h.write(out);

    std::vector<GameTranscript> res(o.episodes);
    parallel_for(res.size(), o.threads, [&](std::size_t e) {
        res[e] = run_game(spec, *id, adversary, derive_seed(o.seed, e));
    });

    const std::vector<int> cols{0, 1, 4, 5, 6, 7, 9};
    out << "game,scheme,seed,fault_index,phi,outcome,q_s";
    for (int c : cols)
        out << ",q_s_" << c;
    out << ",q_h,fresh,verified\n";
    std::uint64_t wins = 0;
    for (const auto &t : res) {
        wins += t.outcome;
        out << o.game << "," << o.scheme << "," << t.seed << "," << fidx << "," << fphi << ","
            << t.outcome << "," << t.q_s;
        for (int c : cols) {
            auto it = t.q_s_index.find(c);
            out << "," << (it == t.q_s_index.end() ? 0 : it->second);
        }
        out << "," << t.q_h << "," << t.fresh << "," << t.verified << "\n";
    }
    out << "# aggregate episodes=" << res.size() << " wins=" << wins << " win_rate="
        << (res.empty() ? "n/a" : fmt(static_cast<double>(wins) / static_cast<double>(res.size())))
        << "\n";
    return kOk;
}

} // namespace qrom::cli
