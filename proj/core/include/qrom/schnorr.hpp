#pragma once

#include <cstdint>

#include "qrom/sigcore.hpp"

namespace qrom::sigcore {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t mod);
std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod);
// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(std::uint64_t n);
unsigned bit_length(std::uint64_t v);

// Order-q subgroup of Z_P^* generated by g.
struct SchnorrGroup {
    std::uint64_t P;
    std::uint64_t q;
    std::uint64_t g;

    // Throws on composite P, non-prime order, q not dividing P-1, or g of wrong order.
    static SchnorrGroup make(std::uint64_t P, std::uint64_t q, std::uint64_t g);
    // P = 103, q = 17.
    static SchnorrGroup toy17();
    // Largest safe prime P = 2q + 1 below 2^bits, 8 <= bits <= 62.
    static SchnorrGroup safe_prime(unsigned bits);
};

// Schnorr identification: w = g^a, z = a + c sk mod q, accept iff g^z = w pk^c.
// C = {1, ..., 2^cbits} carried in a (cbits + 1)-bit field; respond rejects
// anything else.
class SchnorrId : public IdScheme {
  public:
    using IdScheme::commit;
    using IdScheme::keygen;

    explicit SchnorrId(SchnorrGroup group);

    const SchnorrGroup &group() const { return G_; }

    std::string name() const override;
    Widths widths() const override { return widths_; }
    SchemeMetadata metadata() const override;

    std::uint64_t keygen_coin_count() const override { return G_.q - 1; }
    KeyPair keygen(std::uint64_t coin) const override;
    std::uint64_t commit_coin_count() const override { return G_.q; }
    Commitment commit(const Bits &sk, std::uint64_t coin) const override;
    std::optional<Bits> respond(const Bits &sk, const Bits &w, const Bits &c,
                                const Bits &st) const override;
    bool verify(const Bits &pk, const Bits &w, const Bits &c, const Bits &z) const override;

    unsigned challenge_bits() const override { return cbits_; }
    Bits challenge(std::uint64_t k) const override;
    bool in_challenge_space(const Bits &c) const override;

    std::uint64_t sim_coin_count() const override { return G_.q; }
    std::pair<Bits, Bits> special_sim(const Bits &pk, const Bits &c,
                                      std::uint64_t coin) const override;

    // Brute-force discrete log; toy groups only.
    std::optional<std::uint64_t> dlog(std::uint64_t y) const;

  private:
    SchnorrGroup G_;
    unsigned cbits_;
    Widths widths_;
};

} // namespace qrom::sigcore
