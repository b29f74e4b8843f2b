#include <doctest.h>

#include <cmath>

#include "qrom/attack.hpp"

using namespace qrom;
using namespace qrom::reprogame;

namespace {

double closed_form_same(unsigned n, unsigned q) {
    const double N = std::exp2(n);
    const double a = std::sqrt(q / (2 * N)) + (N - q) / std::sqrt(2 * N * N - 2 * N * q);
    return a * a;
}

// 1/sqrt(N) sum_x |x>|xor_j O(s^j x) ^ O'(s^j x)>.
std::vector<qsim::cplx> closed_form_state(const AttackConfig &cfg, const oracle::OracleTable &O,
                                          const oracle::OracleTable &Op) {
    const std::uint64_t N = std::uint64_t{1} << cfg.n;
    std::vector<qsim::cplx> amps(N << cfg.m, 0.0);
    for (std::uint64_t x = 0; x < N; ++x) {
        std::uint64_t y = 0, p = x;
        for (unsigned j = 0; j < cfg.q; ++j) {
            y ^= O(p) ^ Op(p);
            p = cfg.sigma(p);
        }
        amps[(x << cfg.m) | y] = 1 / std::sqrt(static_cast<double>(N));
    }
    return amps;
}

} // namespace

TEST_CASE("S membership") {
    auto cfg = AttackConfig::make(4, 1, 3, 5);
    auto S = cfg.S();
    int count = 0;
    for (std::uint64_t x = 0; x < 16; ++x) count += S[x];
    CHECK(count == 3);
    CHECK(S[5]);
    CHECK(S[4]);
    CHECK(S[3]);
    CHECK_THROWS(AttackConfig::make(3, 1, 8, 0).validate());
    CHECK(AttackConfig::make(6, 1, 7, 0).hypothesis_holds());
    CHECK_FALSE(AttackConfig::make(6, 1, 8, 0).hypothesis_holds());
}

TEST_CASE("final state equals the closed form") {
    for (unsigned n = 3; n <= 6; ++n)
        for (unsigned m = 1; m <= 2; ++m)
            for (unsigned q = 1; q < 4; ++q) {
                const std::uint64_t xs = (n * 5 + q) % (1u << n);
                auto cfg = AttackConfig::make(n, m, q, xs);
                auto O = oracle::sample_oracle(n, m, n * 100 + m * 10 + q);
                auto Op = oracle::reprogram(O, xs, (O(xs) + 1) % (1u << m));
                auto st = attack_final_state(cfg, O, Op);
                auto expect = closed_form_state(cfg, O, Op);
                double diff = 0;
                for (std::size_t i = 0; i < expect.size(); ++i) diff = std::max(diff, std::abs(st[i] - expect[i]));
                CHECK(diff < 1e-12);
            }
}

TEST_CASE("distinguishing probabilities") {
    auto cfg = AttackConfig::make(3, 1, 1, 2);
    auto O = oracle::sample_oracle(3, 1, 4);
    CHECK(attack_run(cfg, O, O) == doctest::Approx(0.830719).epsilon(1e-6));
    CHECK(attack_run(cfg, O, O) == doctest::Approx(closed_form_same(3, 1)).epsilon(1e-12));
    auto Op = oracle::reprogram(O, 2, O(2) ^ 1);
    CHECK(std::abs(attack_run(cfg, O, Op) - 0.5) < 1e-10);

    for (unsigned n = 4; n <= 8; ++n)
        for (unsigned q : {1u, 2u, 5u}) {
            auto e = attack_exact_advantage(n, 1, q, 17);
            CHECK(e.p_same == doctest::Approx(closed_form_same(n, q)).epsilon(1e-10));
            CHECK(std::abs(e.p_diff - 0.5) < 1e-10);
            CHECK(e.advantage == doctest::Approx(0.5 * (e.p_same - 0.5)).epsilon(1e-12));
        }
}

TEST_CASE("pi0 on eigenvectors and the mixed state") {
    const unsigned n = 4, q = 3;
    auto cfg = AttackConfig::make(n, 1, q, 7);
    auto S = cfg.S();
    auto L = qsim::RegisterLayout::standard(n, 1);
    const double nS = std::sqrt(3.0), nC = std::sqrt(13.0);
    std::vector<qsim::cplx> plus(32, 0.0), minus(32, 0.0), s(32, 0.0), c(32, 0.0);
    for (std::uint64_t x = 0; x < 16; ++x) {
        const double a = S[x] ? 1 / nS : 1 / nC;
        plus[x << 1] = a / std::sqrt(2.0);
        minus[x << 1] = (S[x] ? a : -a) / std::sqrt(2.0);
        (S[x] ? s : c)[x << 1] = a;
    }
    CHECK(attack_pi0_prob(qsim::StateVector::from_amplitudes(plus), L, S) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(attack_pi0_prob(qsim::StateVector::from_amplitudes(minus), L, S) < 1e-12);
    qsim::Mixture rho{{{3.0 / 16, qsim::StateVector::from_amplitudes(s)},
                       {13.0 / 16, qsim::StateVector::from_amplitudes(c)}}};
    CHECK(attack_pi0_prob(rho, L, S) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("advantage bounds") {
    auto b = attack_advantage_bound(10, 1, 8);
    CHECK(b.lower == doctest::Approx(0.5 * std::sqrt(8.0) / (4 * 32)).epsilon(1e-12));
    CHECK(b.lower == doctest::Approx(0.01105).epsilon(1e-3));
    CHECK(b.upper == doctest::Approx(0.1875).epsilon(1e-12));
    auto b4 = attack_advantage_bound(10, 1, 32);
    CHECK(b4.lower == doctest::Approx(2 * b.lower));
    CHECK(b4.upper == doctest::Approx(2 * b.upper));
    CHECK_THROWS(attack_advantage_bound(10, 1, 128));
    CHECK_THROWS(attack_advantage_bound(10, 1, 0));
}

TEST_CASE("attack as a reprogramming distinguisher") {
    ReproConfig cfg;
    cfg.n1 = 10;
    cfg.n2 = 0;
    cfg.m = 1;
    cfg.R = 1;
    cfg.seed = 3;
    auto e = estimate_advantage(cfg, attack_distinguisher(10, 1, 8), 10000);
    auto b = attack_advantage_bound(10, 1, 8);
    CHECK(e.advantage >= b.lower - e.half_width);
}
