#include "qrom/attack.hpp"

#include <cmath>
#include <stdexcept>

namespace qrom::reprogame {

AttackConfig AttackConfig::make(unsigned n, unsigned m, unsigned q, std::uint64_t x_star) {
    AttackConfig c;
    c.n = n;
    c.m = m;
    c.q = q;
    c.sigma = qsim::Permutation::add_constant(n, 1);
    c.x_star = x_star;
    c.validate();
    return c;
}

void AttackConfig::validate() const {
    if (n == 0 || n > 24)
        throw std::invalid_argument("attack needs 1 <= n <= 24");
    if (m == 0 || m > 24)
        throw std::invalid_argument("attack needs 1 <= m <= 24");
    if (q < 1 || static_cast<std::uint64_t>(q) >= (std::uint64_t{1} << n))
        throw std::invalid_argument("attack needs 1 <= q < 2^n");
    if (sigma.n() != n || !sigma.is_cyclic())
        throw std::invalid_argument("sigma must be a cyclic permutation on n bits");
    if (x_star >= (std::uint64_t{1} << n))
        throw std::invalid_argument("x* out of range");
}

bool AttackConfig::hypothesis_holds() const {
    return n >= 3 && q >= 1 && static_cast<std::uint64_t>(q) < (std::uint64_t{1} << (n - 3));
}

std::vector<bool> AttackConfig::S() const {
    std::vector<bool> in(std::uint64_t{1} << n, false);
    const auto inv = sigma.inverse();
    std::uint64_t x = x_star;
    for (unsigned j = 0; j < q; ++j) {
        in[x] = true;
        x = inv(x);
    }
    return in;
}

qsim::StateVector attack_final_state(const AttackConfig &cfg, const oracle::OracleTable &O,
                                     const oracle::OracleTable &O_prime) {
    cfg.validate();
    if (O.n() != cfg.n || O.m() != cfg.m || O_prime.n() != cfg.n || O_prime.m() != cfg.m)
        throw std::invalid_argument("oracle sizes do not match the attack config");
    for (std::uint64_t x = 0; x < O.size(); ++x)
        if (x != cfg.x_star && O(x) != O_prime(x))
            throw std::invalid_argument("oracles differ outside x*");

    const auto layout = qsim::RegisterLayout::standard(cfg.n, cfg.m);
    const auto inv = cfg.sigma.inverse();
    auto psi = qsim::prepare_uniform(cfg.n, cfg.m);
    qsim::apply_oracle_inplace(psi, layout, O);
    for (unsigned i = 1; i < cfg.q; ++i) {
        qsim::apply_permutation_inplace(psi, layout, cfg.sigma);
        qsim::apply_oracle_inplace(psi, layout, O);
    }
    qsim::apply_oracle_inplace(psi, layout, O_prime);
    for (unsigned i = 1; i < cfg.q; ++i) {
        qsim::apply_permutation_inplace(psi, layout, inv);
        qsim::apply_oracle_inplace(psi, layout, O_prime);
    }
    return psi;
}

double attack_run(const AttackConfig &cfg, const oracle::OracleTable &O,
                  const oracle::OracleTable &O_prime) {
    auto psi = attack_final_state(cfg, O, O_prime);
    return attack_pi0_prob(psi, qsim::RegisterLayout::standard(cfg.n, cfg.m), cfg.S());
}

double attack_pi0_prob(const qsim::StateVector &state, const qsim::RegisterLayout &layout,
                       const std::vector<bool> &S) {
    return qsim::project_prob(state, qsim::Projector::set_balanced(layout, S));
}

double attack_pi0_prob(const qsim::Mixture &rho, const qsim::RegisterLayout &layout,
                       const std::vector<bool> &S) {
    return qsim::project_prob(rho, qsim::Projector::set_balanced(layout, S));
}

AttackBounds attack_advantage_bound(unsigned n, unsigned m, unsigned q) {
    if (n < 3 || q < 1 || static_cast<std::uint64_t>(q) >= (std::uint64_t{1} << (n - 3)))
        throw std::invalid_argument("attack bound needs 1 <= q < 2^(n-3)");
    if (m == 0)
        throw std::invalid_argument("attack bound needs m >= 1");
    const double N = std::ldexp(1.0, static_cast<int>(n));
    const double collision = 1.0 - std::ldexp(1.0, -static_cast<int>(std::min(m, 1000u)));
    AttackBounds b;
    b.lower = collision * std::sqrt(static_cast<double>(q)) / (4.0 * std::sqrt(N));
    b.upper = 1.5 * std::sqrt(2.0 * static_cast<double>(q) / N);
    return b;
}

ExactAdvantage attack_exact_advantage(unsigned n, unsigned m, unsigned q, std::uint64_t seed) {
    const auto O = oracle::sample_oracle(n, m, derive_seed(seed, 1));
    Rng rng = make_rng(derive_seed(seed, 2));
    const std::uint64_t x_star = uniform_below(rng, std::uint64_t{1} << n);
    const std::uint64_t delta = 1 + uniform_below(rng, (std::uint64_t{1} << m) - 1);
    const auto cfg = AttackConfig::make(n, m, q, x_star);
    const auto O_prime = oracle::reprogram(O, x_star, O(x_star) ^ delta);

    ExactAdvantage e;
    e.p_same = attack_run(cfg, O, O);
    e.p_diff = attack_run(cfg, O, O_prime);
    // With probability 2^-m the fresh value equals the old one and the states coincide.
    const double collide = std::ldexp(1.0, -static_cast<int>(m));
    const double p_reprogrammed = collide * e.p_same + (1.0 - collide) * e.p_diff;
    e.advantage = std::abs(e.p_same - p_reprogrammed);
    return e;
}

Distinguisher attack_distinguisher(unsigned n, unsigned m, unsigned q) {
    return [n, m, q](GameHandle &g) {
        if (g.n1() != n || g.n2() != 0 || g.m() != m)
            throw GameProtocolError("attack distinguisher needs n1 = n, n2 = 0");
        const auto layout = qsim::RegisterLayout::standard(n, m);
        const auto sigma = qsim::Permutation::add_constant(n, 1);
        const auto inv = sigma.inverse();
        auto psi = qsim::prepare_uniform(n, m);
        g.query(psi, layout);
        for (unsigned i = 1; i < q; ++i) {
            qsim::apply_permutation_inplace(psi, layout, sigma);
            g.query(psi, layout);
        }
        const std::uint64_t x_star = g.reprogram(0);
        g.query(psi, layout);
        for (unsigned i = 1; i < q; ++i) {
            qsim::apply_permutation_inplace(psi, layout, inv);
            g.query(psi, layout);
        }
        const auto cfg = AttackConfig::make(n, m, q, x_star);
        const double p0 = attack_pi0_prob(psi, layout, cfg.S());
        return uniform01(g.coins()) < p0 ? 0 : 1;
    };
}

} // namespace qrom::reprogame
