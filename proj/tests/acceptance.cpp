// Acceptance checks; one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qrom/attack.hpp"
#include "qrom/bounds.hpp"
#include "qrom/faultlab.hpp"
#include "qrom/purified.hpp"
#include "qrom/schnorr.hpp"

using namespace qrom;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
    bool pass;
    std::string detail;
};

int failures = 0;

void report(int n, const std::function<Verdict()> &check) {
    Verdict v;
    try {
        v = check();
    } catch (const std::exception &e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d: %s %s\n", n, v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
    failures += v.pass ? 0 : 1;
}

std::string fmt(const char *f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char *f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// Test-side formulas, written independently of the library.
double p_same_formula(unsigned n, unsigned q) {
    const double N = std::exp2(n);
    const double a = std::sqrt(q / (2 * N)) + (N - q) / std::sqrt(2 * N * N - 2 * N * q);
    return a * a;
}
double lower_formula(unsigned n, unsigned m, unsigned q) {
    return (1 - std::exp2(-static_cast<double>(m))) * std::sqrt(static_cast<double>(q)) /
           (4 * std::sqrt(std::exp2(n)));
}
double upper_formula(unsigned n, unsigned q) { return 1.5 * std::sqrt(2.0 * q / std::exp2(n)); }

const std::vector<std::pair<unsigned, unsigned>> kGrid{{10, 8}, {12, 32}, {14, 128}, {16, 512}};

struct GridRow {
    unsigned n, q;
    double exact;
};
std::vector<GridRow> grid_rows;
double grid_seconds = 0;

void compute_grid() {
    const auto t0 = Clock::now();
    for (auto [n, q] : kGrid)
        grid_rows.push_back({n, q, reprogame::attack_exact_advantage(n, 1, q, 1000 + n).advantage});
    grid_seconds = seconds_since(t0);
}

Verdict criterion1() {
    compute_grid();
    std::string d;
    bool ok = grid_seconds < 60;
    for (auto &r : grid_rows) {
        const double lo = lower_formula(r.n, 1, r.q);
        ok &= r.exact >= lo;
        d += fmt("(%u,%u) exact=%.6g lower=%.6g; ", r.n, r.q, r.exact, lo);
    }
    return {ok, d + fmt("runtime=%.2fs", grid_seconds)};
}

Verdict criterion2() {
    int violations = 0;
    std::string d;
    for (auto &r : grid_rows) {
        const double up = upper_formula(r.n, r.q);
        violations += r.exact > up;
        d += fmt("(%u,%u) upper=%.6g; ", r.n, r.q, up);
    }
    return {violations == 0 && grid_rows.size() == kGrid.size(), d + fmt("violations=%d", violations)};
}

Verdict criterion3() {
    Rng rng(33);
    double worst = 0;
    for (int k = 0; k < 50; ++k) {
        const unsigned n = 3 + static_cast<unsigned>(uniform_below(rng, 10));
        const unsigned m = 1 + static_cast<unsigned>(uniform_below(rng, 3));
        const unsigned q = 1 + static_cast<unsigned>(uniform_below(rng, std::min<std::uint64_t>((1u << n) - 1, 64)));
        const std::uint64_t xs = uniform_below(rng, std::uint64_t{1} << n);
        auto cfg = reprogame::AttackConfig::make(n, m, q, xs);
        auto O = oracle::sample_oracle(n, m, rng());
        // O' is O reprogrammed at x*; the new value may coincide with the old one.
        auto Op = oracle::reprogram(O, xs, uniform_below(rng, 1u << m));
        auto st = reprogame::attack_final_state(cfg, O, Op);
        const double amp = 1 / std::sqrt(std::exp2(n));
        for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
            std::uint64_t y = 0, p = x;
            for (unsigned j = 0; j < q; ++j) {
                y ^= O(p) ^ Op(p);
                p = (p + 1) & ((std::uint64_t{1} << n) - 1);
            }
            for (std::uint64_t yy = 0; yy < (1u << m); ++yy) {
                const double expect = yy == y ? amp : 0.0;
                worst = std::max(worst, std::abs(st[(x << m) | yy] - expect));
            }
        }
    }
    return {worst <= 1e-10, fmt("instances=50 max_inf_norm=%.3g", worst)};
}

Verdict criterion4() {
    double worst_same = 0, worst_diff = 0;
    Rng rng(44);
    for (unsigned n = 3; n <= 12; ++n)
        for (unsigned q : {1u, 2u, 3u, 7u}) {
            if (q >= (1u << n)) continue;
            const std::uint64_t xs = uniform_below(rng, std::uint64_t{1} << n);
            auto cfg = reprogame::AttackConfig::make(n, 1, q, xs);
            auto O = oracle::sample_oracle(n, 1, rng());
            worst_same = std::max(worst_same, std::abs(reprogame::attack_run(cfg, O, O) - p_same_formula(n, q)));
            auto Op = oracle::reprogram(O, xs, O(xs) ^ 1);
            worst_diff = std::max(worst_diff, std::abs(reprogame::attack_run(cfg, O, Op) - 0.5));
        }
    return {worst_same <= 1e-10 && worst_diff <= 1e-10,
            fmt("n=3..12 max|same-formula|=%.3g max|diff-1/2|=%.3g p_same(3,1)=%.6f", worst_same, worst_diff,
                p_same_formula(3, 1))};
}

Verdict criterion5() {
    const auto t0 = Clock::now();
    Rng rng(55);
    double worst = 0;
    for (int k = 0; k < 20; ++k) {
        const unsigned steps = 1 + static_cast<unsigned>(uniform_below(rng, 4));
        auto c = oracle::random_circuit(rng, 3, 1, static_cast<unsigned>(k % 2), steps);
        auto po = oracle::run_purified(c, 3, 1);
        worst = std::max(worst, oracle::trace_distance(po.adversary_density(), oracle::classical_average(c, 3, 1)));
    }
    const double secs = seconds_since(t0);
    return {worst <= 1e-9 && secs < 120, fmt("circuits=20 max_trace_distance=%.3g runtime=%.2fs", worst, secs)};
}

Verdict criterion6() {
    Rng rng(66);
    int circuits = 0, overlap_fail = 0, lemma_fail = 0;
    double min_slack = 1e300;
    for (unsigned q = 1; q <= 3; ++q)
        for (int k = 0; k < 10; ++k) {
            auto c = oracle::random_query_circuit(rng, 3, 1, static_cast<unsigned>(k % 2), q, 3);
            auto po = oracle::run_purified(c, 3, 1);
            double mean = 0;
            for (std::uint64_t x = 0; x < 8; ++x) mean += 1 - po.epsilon_x(x);
            mean /= 8;
            const double slack = mean - (1 - q / 8.0);
            min_slack = std::min(min_slack, slack);
            overlap_fail += slack < -1e-12;
            lemma_fail += po.max_non_phi0_cells() > q;
            ++circuits;
        }
    return {overlap_fail == 0 && lemma_fail == 0,
            fmt("circuits=%d min_slack=%.3g overlap_failures=%d support_failures=%d", circuits, min_slack,
                overlap_fail, lemma_fail)};
}

const sigcore::SchnorrId &schnorr17() {
    static const sigcore::SchnorrId id(sigcore::SchnorrGroup::toy17());
    return id;
}

Verdict criterion7() {
    const auto &id = schnorr17();
    std::size_t rows = 0, nonzero = 0;
    std::map<std::string, std::size_t> per_target;
    const auto m = sigcore::Bits::from_uint(0xA5C3, 16);
    for (std::uint64_t kc = 0; kc < id.keygen_coin_count(); ++kc) {
        auto keys = id.keygen(kc);
        for (const auto &r : faultlab::simulation_equality(id, keys, m, {5, 6, 9})) {
            ++rows;
            nonzero += r.tv != 0;
            ++per_target[std::to_string(r.index) + r.target];
        }
    }
    // Expected coverage: identity plus three faults per bit of each index's tuple.
    const auto wd = id.widths();
    const std::size_t per_key = (1 + 3 * (wd.w + 16 + wd.pk)) + (1 + 3 * wd.c) + (1 + 3 * (wd.w + wd.z));
    std::string d = fmt("keys=%llu rows=%zu expected=%zu nonzero_tv=%zu targets:",
                        static_cast<unsigned long long>(id.keygen_coin_count()), rows,
                        per_key * id.keygen_coin_count(), nonzero);
    for (auto &[k, v] : per_target) d += " " + k + "=" + std::to_string(v);
    return {nonzero == 0 && rows == per_key * id.keygen_coin_count(), d};
}

Verdict criterion8() {
    const auto &id = schnorr17();
    auto A = faultlab::AdversaryScript::parse_string("sign rand\nsign rand\nsign rand\noutput forge-keyrecovery rand\n")
                 .compile();
    int wins = 0, b_wins = 0, aborted = 0;
    for (std::uint64_t s = 0; s < 1000; ++s) {
        auto r = faultlab::reduction_episode(id, A, s);
        aborted += r.aborted;
        if (r.a_wins_simulated) {
            ++wins;
            b_wins += r.b_wins;
        }
    }
    return {wins > 0 && b_wins == wins,
            fmt("episodes=1000 a_wins=%d b_wins_given_a=%d aborted=%d soundness=%.4f", wins, b_wins, aborted,
                wins ? static_cast<double>(b_wins) / wins : 0.0)};
}

Verdict criterion9() {
    std::uint64_t checked = 0, missing = 0;
    std::size_t max_size = 0;
    for (std::size_t w = 1; w <= 16; ++w) {
        const std::uint64_t N = std::uint64_t{1} << w;
        std::vector<std::vector<std::uint64_t>> cands(N);
        for (std::uint64_t v = 0; v < N; ++v) {
            for (const auto &b : faultlab::candidate_keys(sigcore::Bits::from_uint(v, w))) cands[v].push_back(b.to_uint());
            max_size = std::max(max_size, cands[v].size());
            if (cands[v].size() > 3 * w + 1) ++missing;
            std::sort(cands[v].begin(), cands[v].end());
        }
        for (std::uint64_t sk = 0; sk < N; ++sk)
            for (std::size_t j = 0; j < w; ++j)
                for (std::uint64_t faulted : {sk ^ (1ull << j), sk | (1ull << j), sk & ~(1ull << j)}) {
                    ++checked;
                    if (!std::binary_search(cands[faulted].begin(), cands[faulted].end(), sk)) ++missing;
                }
    }
    // Key search over every Schnorr key and every one-bit fault of it.
    const auto &id = schnorr17();
    sigcore::HashOracle H(16, id.challenge_bits(), 99);
    Rng rng(9);
    int searches = 0, recovered = 0;
    for (std::uint64_t kc = 0; kc < id.keygen_coin_count(); ++kc) {
        auto keys = id.keygen(kc);
        for (const auto &spec : faultlab::one_bit_faults(1, id.widths(), 16)) {
            auto measured = faultlab::fault_apply(spec.fn, keys.sk);
            auto res = faultlab::reduction_b2_keysearch(id, H, keys.pk, faultlab::candidate_keys(measured),
                                                       sigcore::Bits::from_uint(0xF00D, 16), rng);
            ++searches;
            recovered += res.forgery && sigcore::fs_verify(id, H, keys.pk, res.forgery->m, res.forgery->sig,
                                                           sigcore::FsVariant::PkInHash);
        }
    }
    return {missing == 0 && recovered == searches,
            fmt("widths=1..16 fault_checks=%llu missing=%llu max_candidates=%zu keysearch=%d/%d",
                static_cast<unsigned long long>(checked), static_cast<unsigned long long>(missing), max_size,
                recovered, searches)};
}

Verdict criterion10() {
    auto f = bounds::dilithium_footnote(2044);
    // Independent solve: (3 q_s/2) sqrt((q_H+q_s+1) alpha) = 1.
    const double qs = std::exp2(64.0), qh = std::exp2(128.0);
    const double log2_alpha = -2 * std::log2(1.5 * qs) - std::log2(qh + qs + 1);
    const double pct = 100.0 * 32 / 2044;
    const bool ok = std::abs(f.log2_alpha - log2_alpha) < 1e-9 && std::abs(f.log2_alpha + 257.2) < 0.05 &&
                    std::abs(f.extra_bytes - 32.1) < 0.05 && f.rounded_bytes == 32 &&
                    std::abs(f.percent - pct) < 1e-9 && std::abs(f.percent - 1.6) < 0.05 &&
                    std::abs(f.check_term - 1) < 1e-9;
    return {ok, fmt("log2_alpha=%.4f extra_bytes=%.3f rounded=%u percent=%.4f%% check_term=%.12f", f.log2_alpha,
                    f.extra_bytes, f.rounded_bytes, f.percent, f.check_term)};
}

bounds::Param random_param(Rng &rng, const bounds::ParamSpec &p, const std::string &id) {
    using bounds::ParamKind;
    using bounds::Rational;
    switch (p.kind) {
    case ParamKind::Count:
        return bounds::Param::rational(Rational(uniform_below(rng, (std::uint64_t{1} << 40) + 1)));
    case ParamKind::Size:
        if (rng() & 1) return bounds::Param::pow2(static_cast<double>(uniform_below(rng, 41)));
        return bounds::Param::rational(Rational(1 + uniform_below(rng, std::uint64_t{1} << 40)));
    case ParamKind::Probability: {
        const std::uint64_t den = std::uint64_t{1} << uniform_below(rng, 41);
        return bounds::Param::rational(Rational(uniform_below(rng, den + 1), den));
    }
    case ParamKind::Exponent:
        if (id == "attack" && p.name == "m") return bounds::Param::rational(Rational(1 + uniform_below(rng, 20)));
        return bounds::Param::rational(Rational(1 + uniform_below(rng, 40)));
    }
    return bounds::Param::zero();
}

bounds::ParamMap random_params(Rng &rng, const bounds::BoundSpec &b) {
    bounds::ParamMap pm;
    for (const auto &p : b.params) pm[p.name] = random_param(rng, p, b.id);
    return pm;
}

Verdict criterion11() {
    Rng rng(111);
    const auto &reg = bounds::registry();
    double worst = 0;
    int points = 0;
    for (int k = 0; k < 200; ++k) {
        const auto &b = reg[static_cast<std::size_t>(k) % reg.size()];
        auto pm = random_params(rng, b);
        const double lg = bounds::evaluate(b.id, pm, bounds::Mode::Log).raw;
        const double ex = bounds::evaluate(b.id, pm, bounds::Mode::Exact).raw;
        double rel;
        if (ex == 0 || lg == 0)
            rel = (ex == lg) ? 0 : 1;
        else
            rel = std::abs(lg - ex) / std::abs(ex);
        worst = std::max(worst, rel);
        ++points;
    }

    int perturbations = 0, violations = 0;
    while (perturbations < 1000) {
        const auto &b = reg[uniform_below(rng, reg.size())];
        std::vector<const bounds::ParamSpec *> mono;
        for (const auto &p : b.params)
            if (p.direction != 0) mono.push_back(&p);
        if (mono.empty()) continue;
        auto pm = random_params(rng, b);
        const auto &p = *mono[uniform_below(rng, mono.size())];
        auto up = pm;
        const auto &cur = pm.at(p.name);
        if (p.kind == bounds::ParamKind::Probability) {
            up[p.name] = bounds::Param::rational(*cur.exact + (1 - *cur.exact) * bounds::Rational(1 + uniform_below(rng, 100), 100));
        } else if (p.kind == bounds::ParamKind::Size && !cur.exact) {
            up[p.name] = bounds::Param::pow2(cur.log2 + 1 + static_cast<double>(uniform_below(rng, 8)));
        } else {
            up[p.name] = bounds::Param::rational(*cur.exact + 1 + uniform_below(rng, 1000));
        }
        const double before = bounds::evaluate(b.id, pm, bounds::Mode::Log).raw;
        const double after = bounds::evaluate(b.id, up, bounds::Mode::Log).raw;
        const double tol = 1e-12 * std::max(std::abs(before), std::abs(after));
        if (p.direction > 0 ? after < before - tol : after > before + tol) ++violations;
        ++perturbations;
    }
    return {worst <= 1e-9 && violations == 0,
            fmt("grid=%d max_rel_log_vs_exact=%.3g perturbations=%d monotone_violations=%d", points, worst,
                perturbations, violations)};
}

} // namespace

int main() {
    report(1, criterion1);
    report(2, criterion2);
    report(3, criterion3);
    report(4, criterion4);
    report(5, criterion5);
    report(6, criterion6);
    report(7, criterion7);
    report(8, criterion8);
    report(9, criterion9);
    report(10, criterion10);
    report(11, criterion11);
    std::printf("summary: %d of 11 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
