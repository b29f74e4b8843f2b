#include <cmath>
#include <ostream>
#include <stdexcept>

#include "qrom/purified.hpp"
#include "qrom_cli/commands.hpp"
#include "qrom_cli/common.hpp"

namespace qrom::cli {

int cmd_supo_verify(const SupoOptions &o, std::ostream &out) {
    if (o.n < 1 || o.n > 4)
        throw std::invalid_argument("supo-verify needs 1 <= n <= 4");
    if (o.m != 1)
        throw std::invalid_argument("supo-verify needs m = 1");
    const std::uint64_t cells = std::uint64_t{1} << o.n;

    struct Row {
        unsigned queries = 0;
        double distance = 0;
        std::vector<double> eps;
        unsigned support = 0;
        double seconds = 0;
    };
    std::vector<Row> rows(o.episodes);

    Header h("supo-verify");
    h.add("n", o.n).add("m", o.m).add("depth", o.depth).add("episodes", o.episodes);
    h.add("work", o.work).add("seed", o.seed);
    h.write(out);

    parallel_for(rows.size(), o.threads, [&](std::size_t i) {
        Stopwatch sw;
        Rng rng = make_rng(derive_seed(o.seed, i));
        const auto c = oracle::random_circuit(rng, o.n, o.m, o.work, o.depth);
        const auto po = oracle::run_purified(c, o.n, o.m);
        Row &r = rows[i];
        r.queries = c.query_count();
        r.distance = oracle::trace_distance(po.adversary_density(),
                                            oracle::classical_average(c, o.n, o.m));
        for (std::uint64_t x = 0; x < cells; ++x)
            r.eps.push_back(po.epsilon_x(x));
        r.support = po.max_non_phi0_cells();
        r.seconds = sw.seconds();
    });

    out << "episode,queries,trace_distance";
    for (std::uint64_t x = 0; x < cells; ++x)
        out << ",eps_" << x;
    out << ",overlap_mean,overlap_rhs,overlap_slack,non_phi0_cells,support_check\n";
    bool ok = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Row &r = rows[i];
        double mean = 0;
        for (double e : r.eps)
            mean += 1.0 - e;
        mean /= static_cast<double>(cells);
        const double rhs = 1.0 - static_cast<double>(r.queries) / static_cast<double>(cells);
        const double slack = mean - rhs;
        const bool lemma = r.support <= r.queries;
        ok = ok && r.distance <= 1e-9 && slack >= -1e-12 && lemma;
        out << i << "," << r.queries << "," << fmt(r.distance);
        for (double e : r.eps)
            out << "," << fmt(e);
        out << "," << fmt(mean) << "," << fmt(rhs) << "," << fmt(slack) << "," << r.support << ","
            << (lemma ? "ok" : "violated") << "\n";
    }
    double total = 0;
    for (const auto &r : rows)
        total += r.seconds;
    out << "# wall_time_s " << fmt(total) << "\n";
    return ok ? kOk : kInvariant;
}

} // namespace qrom::cli
