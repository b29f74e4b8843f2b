#pragma once

#include <cstdint>
#include <vector>

#include "qrom/oracle.hpp"
#include "qrom/qsim.hpp"
#include "qrom/reprogame.hpp"

namespace qrom::reprogame {

struct AttackConfig {
    unsigned n = 0;
    unsigned m = 1;
    unsigned q = 1;
    qsim::Permutation sigma = qsim::Permutation::identity(0);
    std::uint64_t x_star = 0;

    // Default sigma: x -> x + 1 mod 2^n.
    static AttackConfig make(unsigned n, unsigned m, unsigned q, std::uint64_t x_star);

    // Requires 1 <= q < 2^n, sigma cyclic on n bits, x_star in range.
    void validate() const;
    // Range 1 <= q < 2^(n-3) in which the advantage bounds hold.
    bool hypothesis_holds() const;
    // S = {x*, sigma^-1(x*), ..., sigma^-(q-1)(x*)} as a membership vector.
    std::vector<bool> S() const;
};

// Final pre-measurement state: q queries to O interleaved with sigma, then
// q queries to O' interleaved with sigma^-1.
qsim::StateVector attack_final_state(const AttackConfig &cfg, const oracle::OracleTable &O,
                                     const oracle::OracleTable &O_prime);

// Pr[output 0] = <Psi|Pi_0|Psi>, exact.
double attack_run(const AttackConfig &cfg, const oracle::OracleTable &O,
                  const oracle::OracleTable &O_prime);

double attack_pi0_prob(const qsim::StateVector &state, const qsim::RegisterLayout &layout,
                       const std::vector<bool> &S);
double attack_pi0_prob(const qsim::Mixture &rho, const qsim::RegisterLayout &layout,
                       const std::vector<bool> &S);

struct AttackBounds {
    double lower;
    double upper;
};
// Throws when q is outside 1 <= q < 2^(n-3).
AttackBounds attack_advantage_bound(unsigned n, unsigned m, unsigned q);

struct ExactAdvantage {
    double p_same; // Pr[0] with O' = O
    double p_diff; // Pr[0] with O'(x*) != O(x*)
    double advantage;
};
// Combines both conditional cases with weight 2^-m on O'(x*) = O(x*).
ExactAdvantage attack_exact_advantage(unsigned n, unsigned m, unsigned q, std::uint64_t seed);

// The attack as a basic-form Repro distinguisher (n1 = n, n2 = 0, R = 1);
// the measurement outcome is sampled from the distinguisher's coins.
Distinguisher attack_distinguisher(unsigned n, unsigned m, unsigned q);

} // namespace qrom::reprogame
